#include "shl/experiments.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "json.hpp"

#include "shl/control.hpp"
#include "shl/errors.hpp"
#include "shl/hardy.hpp"
#include "shl/kernels.hpp"
#include "shl/parabolic.hpp"
#include "shl/report.hpp"
#include "shl/spectral.hpp"

namespace shl {

namespace {

using nlohmann::json;

PotentialVariant variant_from_string(const std::string& s) {
  if (s == "exact") return PotentialVariant::Exact;
  if (s == "as-printed") return PotentialVariant::AsPrinted;
  if (s == "truncated") return PotentialVariant::Truncated;
  if (s == "regularized") return PotentialVariant::Regularized;
  if (s == "classical") return PotentialVariant::ClassicalInverseSquare;
  throw ConfigError("unknown potential variant '" + s + "'");
}

PotentialSpec potential_from_config(const ExperimentConfig& c) {
  PotentialSpec p;
  p.variant = variant_from_string(c.variant);
  p.mu = c.mu;
  p.trunc_N = c.trunc_N;
  p.eps = c.eps;
  validate(p);
  return p;
}

RadialGrid grid_from_config(const ExperimentConfig& c, const DomainSpec& d) {
  const Grading g = (c.grading == "uniform")
                        ? Grading::uniform()
                        : Grading::geometric(c.grid_q, c.grid_first, c.grid_last);
  return build_grid(d.n, d.gauge.radius, c.grid_M, g);
}

std::vector<double> initial_data(const ExperimentConfig& c, const RadialGrid& g,
                                 const DomainSpec& d, const PotentialSpec& p) {
  if (c.u0 == "ones") return std::vector<double>(g.size(), 1.0);
  const DiscreteOperator op = assemble(g, d, p);
  return principal_eigenpair(op, {c.tol, c.max_iter, {}}).vector;
}

std::string sidecar_text(const ExperimentConfig& c, const json& result, double elapsed_s) {
  json j;
  j["experiment"] = c.experiment;
  j["config"] = json::parse(config_to_json(c));
  j["meta"] = {{"version", kVersion},
               {"threads", max_threads()},
               {"elapsed_seconds", elapsed_s}};
  if (c.experiment == "heat" || c.experiment == "blowup-scan") {
    // the subcritical threshold used everywhere, next to the constant the
    // existence theorem's hypothesis prints
    j["meta"]["subcritical_threshold"] = critical_mu(c.n);
    const double hyp = static_cast<double>(c.n - 2) / c.n;
    j["meta"]["stated_hypothesis_constant"] = hyp * hyp;
  }
  if (c.experiment == "cost-sweep")
    j["meta"]["cost_functional_note"] =
        "J integrates the H^-1 norm of the control unsquared in time";
  j["result"] = result;
  return j.dump(2);
}

} // namespace

RunOutcome run_experiment(const ExperimentConfig& cfg_in) {
  ExperimentConfig c = cfg_in;
  // experiment-specific default variants
  if (c.variant.empty()) {
    if (c.experiment == "potential-profile") c.variant = "exact";
    if (c.experiment == "eigen") c.variant = "regularized";
    if (c.experiment == "heat") c.variant = "truncated";
    if (c.experiment == "hardy") c.variant = "double-singular";
  }
  validate_config(c);
  if (c.threads > 0) set_threads(c.threads);

  const DomainSpec dom{c.n, c.gauge};
  namespace fs = std::filesystem;
  fs::create_directories(c.out);
  RunOutcome out;
  out.csv_path = (fs::path(c.out) / (c.experiment + ".csv")).string();
  out.sidecar_path = (fs::path(c.out) / (c.experiment + ".json")).string();

  const auto t0 = std::chrono::steady_clock::now();
  json result;

  if (c.experiment == "potential-profile") {
    const PotentialSpec p = potential_from_config(c);
    const double R = c.gauge.max_radius();
    const std::vector<std::string> cols = {"r", "psi"};
    CsvWriter csv(out.csv_path, cols);
    for (int k = 1; k <= c.samples; ++k) {
      const double r = R * static_cast<double>(k) / c.samples;
      double psi;
      try {
        psi = c.gauge.is_ball() ? eval_potential(dom, p, r)
                                : eval_potential_radial(dom, p, r, R);
      } catch (const SingularityError&) {
        psi = std::numeric_limits<double>::infinity();
      }
      const double row[] = {r, psi};
      csv.row(row);
    }
    result["rows"] = c.samples;
  } else if (c.experiment == "hardy") {
    const HardyVariant hv =
        (c.variant == "classical") ? HardyVariant::Classical : HardyVariant::DoubleSingular;
    auto levels = c.hardy_levels.empty() ? default_hardy_levels() : c.hardy_levels;
    const HardyReport rep = hardy_refinement(dom, hv, levels);
    const std::vector<std::string> cols = {"M", "discrete_constant", "target", "gap"};
    CsvWriter csv(out.csv_path, cols);
    for (const HardyLevel& lv : rep.levels) {
      const double row[] = {static_cast<double>(lv.M), lv.discrete_constant, rep.target,
                            lv.discrete_constant - rep.target};
      csv.row(row);
    }
    result["target"] = rep.target;
    result["finest_constant"] = rep.levels.back().discrete_constant;
    // seeded random smooth test functions never undercut the discrete
    // constant; recorded with the seed so the check is reproducible
    {
      const auto& [M, cut] = levels.back();
      const double last = (hv == HardyVariant::DoubleSingular) ? cut : 1e-6;
      const RadialGrid g =
          build_grid(dom.n, dom.gauge.radius, M, Grading::geometric(0.85, cut, last));
      const double best = rep.levels.back().discrete_constant;
      int checked = 0, violations = 0;
      for (int k = 0; k < 100; ++k) {
        const auto u = random_smooth_function(g, static_cast<std::uint64_t>(c.seed) + k);
        const double q = hardy_rayleigh_quotient(g, dom, hv, u);
        ++checked;
        if (q < best * (1.0 - 1e-12)) ++violations;
      }
      result["inequality_check"] = {
          {"seed", c.seed}, {"functions", checked}, {"violations", violations}};
    }
  } else if (c.experiment == "eigen") {
    const PotentialSpec p = potential_from_config(c);
    const RadialGrid g = grid_from_config(c, dom);
    const DiscreteOperator op = assemble(g, dom, p);
    const EigenPair pair = principal_eigenpair(op, {c.tol, c.max_iter, {}});
    const std::vector<std::string> cols = {"lambda1", "residual", "iterations"};
    CsvWriter csv(out.csv_path, cols);
    const double row[] = {pair.lambda, pair.residual, static_cast<double>(pair.iterations)};
    csv.row(row);
    result["lambda1"] = pair.lambda;
    if (c.dump_grid) {
      const std::string gpath = (fs::path(c.out) / "grid.csv").string();
      write_grid_csv(gpath, g, op.potential_diag);
      result["grid_csv"] = gpath;
    }
  } else if (c.experiment == "eps-sweep") {
    SweepGridParams gp;
    gp.M = c.grid_M;
    gp.q = c.grid_q;
    gp.first_rel_cap = c.grid_first;
    const EigenSweepReport rep =
        epsilon_sweep(dom, c.mu, c.eps_list, {c.rho, c.delta}, gp, {c.tol, c.max_iter, {}});
    const std::vector<std::string> cols = {"eps", "lambda1", "h1_window_norm", "iterations",
                                           "residual"};
    CsvWriter csv(out.csv_path, cols);
    json entries = json::array();
    for (const EigenSweepEntry& e : rep.entries) {
      const double row[] = {e.eps, e.lambda1, e.h1_window_norm,
                            static_cast<double>(e.iterations), e.residual};
      csv.row(row);
      entries.push_back({{"eps", e.eps},
                         {"lambda1", e.lambda1},
                         {"h1_window_norm", e.h1_window_norm},
                         {"iterations", e.iterations},
                         {"residual", e.residual},
                         {"identity_rel_error", e.identity_rel_error},
                         {"solver_failed", e.solver_failed}});
    }
    result["entries"] = entries;
    result["grid_size"] = rep.grid_size;
    result["grid_first_node"] = rep.grid_first_node;
  } else if (c.experiment == "heat") {
    const PotentialSpec p = potential_from_config(c);
    const RadialGrid g = grid_from_config(c, dom);
    HeatRunConfig hc;
    hc.domain = dom;
    hc.potential = p;
    hc.T = c.T;
    hc.dt = c.dt;
    hc.u0 = initial_data(c, g, dom, p);
    if (c.forcing_value != 0.0) {
      hc.forcing.space_profile.resize(g.size());
      for (std::size_t i = 0; i < g.size(); ++i)
        hc.forcing.space_profile[i] =
            c.forcing_value * cutoff_bump(g.nodes[i], c.rho, c.delta, g.R).eta;
    }
    const HeatResult res = run_heat(g, hc);
    const std::vector<std::string> cols = {"t", "l2_sq", "dissipation", "potential_work",
                                           "forcing_work"};
    CsvWriter csv(out.csv_path, cols);
    const EnergyTrace& tr = res.trace;
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
      const double row[] = {tr.times[k], tr.l2_norm_sq[k], tr.dissipation[k],
                            tr.potential_work[k], tr.forcing_work[k]};
      csv.row(row);
    }
    result["dt_used"] = res.dt_used;
    result["dt_halvings"] = res.dt_halvings;
    result["blowup_suspected"] = res.blowup_suspected;
    result["final_l2_sq"] = format_double(res.trace.l2_norm_sq.back());
  } else if (c.experiment == "blowup-scan") {
    const RadialGrid g = grid_from_config(c, dom);
    const std::vector<double> u0 =
        initial_data(c, g, dom, PotentialSpec::truncated(c.mu, c.N_list.back()));
    const BlowupScan scan = blowup_scan(g, dom, c.mu, u0, c.N_list, c.T, c.dt);
    const std::vector<std::string> cols = {"N", "final_l2_sq", "blowup_suspected"};
    CsvWriter csv(out.csv_path, cols);
    json entries = json::array();
    for (const BlowupEntry& e : scan.entries) {
      const double row[] = {e.trunc_N, e.final_l2_sq, e.blowup_suspected ? 1.0 : 0.0};
      csv.row(row);
      entries.push_back({{"N", e.trunc_N},
                         {"final_l2_sq", format_double(e.final_l2_sq)},
                         {"blowup_suspected", e.blowup_suspected}});
    }
    result["entries"] = entries;
    result["monotone_in_N"] = scan.monotone_in_N;
    result["growth_ratio"] = format_double(scan.growth_ratio);
    result["growth_factor"] = scan.growth_factor;
    result["growth_confirmed"] = scan.growth_confirmed;
  } else if (c.experiment == "cost-sweep") {
    SweepGridParams gp;
    gp.M = c.grid_M;
    gp.q = c.grid_q;
    gp.first_rel_cap = c.grid_first;
    const CostReport rep = divergence_sweep(dom, c.mu, c.eps_list, {c.rho, c.delta}, c.T, gp,
                                            {c.tol, c.max_iter, {}});
    const std::vector<std::string> cols = {"eps",    "lambda1", "phi_h1_omega",
                                           "term_A", "term_B",  "j_lower"};
    CsvWriter csv(out.csv_path, cols);
    json entries = json::array();
    for (const CostEntry& e : rep.entries) {
      const double row[] = {e.eps, e.lambda1, e.phi_h1_omega, e.term_A, e.term_B, e.j_lower};
      csv.row(row);
      entries.push_back({{"eps", e.eps},
                         {"lambda1", e.lambda1},
                         {"phi_h1_omega", e.phi_h1_omega},
                         {"term_A", format_double(e.term_A)},
                         {"term_B", format_double(e.term_B)},
                         {"j_lower", format_double(e.j_lower)}});
    }
    result["entries"] = entries;
    result["notes"] = rep.notes;
    result["j_monotone_increasing"] = rep.j_monotone_increasing;
    result["retained_entries"] = rep.entries.size();
  } else {
    throw ConfigError("unknown experiment '" + c.experiment + "'");
  }

  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::ofstream side(out.sidecar_path, std::ios::binary);
  if (!side) throw Error("io", "cannot write " + out.sidecar_path);
  side << sidecar_text(c, result, elapsed) << "\n";
  return out;
}

} // namespace shl

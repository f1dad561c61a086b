// shl: radial singular-potential laboratory.
//
// Subcommands run one experiment each and write <out>/<experiment>.csv plus a
// JSON sidecar with the fully resolved configuration. A sidecar can be fed
// back through --config to reproduce the run.

#include <clocale>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "shl/errors.hpp"
#include "shl/experiments.hpp"

namespace {

struct SubArgs {
  CLI::App* app = nullptr;
  std::string config_path;
  shl::ExperimentConfig flags; // values staged from flags
};

void add_common(SubArgs& s) {
  s.app->add_option("--config", s.config_path, "JSON config file (flags override it)");
  s.app->add_option("--out", s.flags.out, "output directory");
  s.app->add_option("--seed", s.flags.seed, "seed for randomized test functions");
  s.app->add_option("--threads", s.flags.threads, "worker threads (0: library default)");
  s.app->add_option("--n", s.flags.n, "space dimension (>= 3)");
  s.app->add_option("--radius", s.flags.gauge.radius, "ball radius");
  s.app->add_option("--grid", s.flags.grid_M, "number of mesh nodes");
  s.app->add_option("--grading", s.flags.grading, "mesh grading: geometric | uniform");
  s.app->add_option("--grid-q", s.flags.grid_q, "geometric grading ratio in (0,1)");
  s.app->add_option("--grid-first", s.flags.grid_first, "first gap relative to R");
  s.app->add_option("--grid-last", s.flags.grid_last, "last gap relative to R");
}

// copy a staged flag into the config when the user actually passed it
template <typename T>
void apply(const CLI::App* app, const std::string& name, T& dst, const T& src) {
  if (app->count(name) > 0) dst = src;
}

void apply_common(const SubArgs& s, shl::ExperimentConfig& c) {
  apply(s.app, "--out", c.out, s.flags.out);
  apply(s.app, "--seed", c.seed, s.flags.seed);
  apply(s.app, "--threads", c.threads, s.flags.threads);
  apply(s.app, "--n", c.n, s.flags.n);
  if (s.app->count("--radius") > 0) c.gauge = shl::Gauge::ball(s.flags.gauge.radius);
  apply(s.app, "--grid", c.grid_M, s.flags.grid_M);
  apply(s.app, "--grading", c.grading, s.flags.grading);
  apply(s.app, "--grid-q", c.grid_q, s.flags.grid_q);
  apply(s.app, "--grid-first", c.grid_first, s.flags.grid_first);
  apply(s.app, "--grid-last", c.grid_last, s.flags.grid_last);
}

} // namespace

int main(int argc, char** argv) {
  std::setlocale(LC_NUMERIC, "C"); // '.' decimal in every artifact

  CLI::App app{"radial laboratory for heat flow with singular potentials"};
  app.require_subcommand(1);

  std::vector<SubArgs> subs(7);
  const char* names[7] = {"potential-profile", "hardy",       "eigen",     "eps-sweep",
                          "heat",              "blowup-scan", "cost-sweep"};
  const char* descs[7] = {"sample a potential variant along the radius",
                          "discrete Hardy constant refinement ladder",
                          "principal eigenpair of -Laplace - mu Psi",
                          "eigenvalue sweep over decreasing regularization eps",
                          "implicit heat run with energy bookkeeping",
                          "truncation sweep of the supercritical problem",
                          "noncontrollability cost lower-bound sweep"};
  for (int i = 0; i < 7; ++i) {
    subs[i].app = app.add_subcommand(names[i], descs[i]);
    subs[i].flags.experiment = names[i];
    add_common(subs[i]);
  }

  auto& profile = subs[0];
  profile.app->add_option("--variant", profile.flags.variant,
                          "exact | as-printed | truncated | regularized | classical");
  profile.app->add_option("--mu", profile.flags.mu, "unused by profiles, recorded");
  profile.app->add_option("--N", profile.flags.trunc_N, "truncation level");
  profile.app->add_option("--eps", profile.flags.eps, "regularization parameter");
  profile.app->add_option("--samples", profile.flags.samples, "number of radial samples");

  auto& hardy = subs[1];
  hardy.app->add_option("--variant", hardy.flags.variant, "double-singular | classical");

  auto& eigen = subs[2];
  eigen.app->add_option("--variant", eigen.flags.variant, "potential variant");
  eigen.app->add_option("--mu", eigen.flags.mu, "coupling");
  eigen.app->add_option("--N", eigen.flags.trunc_N, "truncation level");
  eigen.app->add_option("--eps", eigen.flags.eps, "regularization parameter");
  eigen.app->add_option("--tol", eigen.flags.tol, "eigensolver tolerance");
  eigen.app->add_option("--max-iter", eigen.flags.max_iter, "iteration cap");
  eigen.app->add_flag("--dump-grid", eigen.flags.dump_grid,
                      "also write grid.csv (r, psi, mass_weight)");

  auto& sweep = subs[3];
  sweep.app->add_option("--mu", sweep.flags.mu, "supercritical coupling");
  sweep.app->add_option("--eps-list", sweep.flags.eps_list, "decreasing eps values");
  sweep.app->add_option("--rho", sweep.flags.rho, "window inner radius");
  sweep.app->add_option("--delta", sweep.flags.delta, "window outer margin");
  sweep.app->add_option("--tol", sweep.flags.tol, "eigensolver tolerance");
  sweep.app->add_option("--max-iter", sweep.flags.max_iter, "iteration cap");

  auto& heat = subs[4];
  heat.app->add_option("--variant", heat.flags.variant, "potential variant");
  heat.app->add_option("--mu", heat.flags.mu, "coupling");
  heat.app->add_option("--N", heat.flags.trunc_N, "truncation level");
  heat.app->add_option("--eps", heat.flags.eps, "regularization parameter");
  heat.app->add_option("--T", heat.flags.T, "final time");
  heat.app->add_option("--dt", heat.flags.dt, "time step (0: T/1000)");
  heat.app->add_option("--u0", heat.flags.u0, "ones | eigenfunction");
  heat.app->add_option("--forcing-value", heat.flags.forcing_value,
                       "constant forcing amplitude on the window bump");
  heat.app->add_option("--rho", heat.flags.rho, "forcing window inner radius");
  heat.app->add_option("--delta", heat.flags.delta, "forcing window outer margin");

  auto& blowup = subs[5];
  blowup.app->add_option("--mu", blowup.flags.mu, "supercritical coupling");
  blowup.app->add_option("--N-list", blowup.flags.N_list, "increasing truncation levels");
  blowup.app->add_option("--T", blowup.flags.T, "final time");
  blowup.app->add_option("--dt", blowup.flags.dt, "time step (0: T/1000)");
  blowup.app->add_option("--u0", blowup.flags.u0, "ones | eigenfunction");

  auto& cost = subs[6];
  cost.app->add_option("--mu", cost.flags.mu, "supercritical coupling");
  cost.app->add_option("--eps-list", cost.flags.eps_list, "decreasing eps values");
  cost.app->add_option("--rho", cost.flags.rho, "control window inner radius");
  cost.app->add_option("--delta", cost.flags.delta, "control window outer margin");
  cost.app->add_option("--T", cost.flags.T, "time horizon");
  cost.app->add_option("--tol", cost.flags.tol, "eigensolver tolerance");
  cost.app->add_option("--max-iter", cost.flags.max_iter, "iteration cap");

  CLI11_PARSE(app, argc, argv);

  SubArgs* active = nullptr;
  for (auto& s : subs)
    if (s.app->parsed()) active = &s;
  if (!active) return 2;

  try {
    shl::ExperimentConfig cfg;
    if (!active->config_path.empty()) {
      cfg = shl::load_config(active->config_path);
      if (cfg.experiment != active->flags.experiment)
        throw shl::ConfigError("config file is for experiment '" + cfg.experiment +
                               "', not '" + active->flags.experiment + "'");
    } else {
      cfg.experiment = active->flags.experiment;
    }
    apply_common(*active, cfg);
    const CLI::App* a = active->app;
    auto apply_if = [&](const char* flag, auto& dst, const auto& src) {
      if (a->get_option_no_throw(flag) && a->count(flag) > 0) dst = src;
    };
    apply_if("--variant", cfg.variant, active->flags.variant);
    apply_if("--mu", cfg.mu, active->flags.mu);
    apply_if("--N", cfg.trunc_N, active->flags.trunc_N);
    apply_if("--eps", cfg.eps, active->flags.eps);
    apply_if("--tol", cfg.tol, active->flags.tol);
    apply_if("--max-iter", cfg.max_iter, active->flags.max_iter);
    apply_if("--samples", cfg.samples, active->flags.samples);
    apply_if("--eps-list", cfg.eps_list, active->flags.eps_list);
    apply_if("--N-list", cfg.N_list, active->flags.N_list);
    apply_if("--rho", cfg.rho, active->flags.rho);
    apply_if("--delta", cfg.delta, active->flags.delta);
    apply_if("--T", cfg.T, active->flags.T);
    apply_if("--dt", cfg.dt, active->flags.dt);
    apply_if("--u0", cfg.u0, active->flags.u0);
    apply_if("--forcing-value", cfg.forcing_value, active->flags.forcing_value);
    apply_if("--dump-grid", cfg.dump_grid, active->flags.dump_grid);

    if (const char* env_out = std::getenv("SHL_OUT"); env_out && *env_out) cfg.out = env_out;

    const shl::RunOutcome res = shl::run_experiment(cfg);
    std::printf("wrote %s\n", res.csv_path.c_str());
    return 0;
  } catch (const shl::Error& e) {
    nlohmann::json err = {{"error", e.kind()}, {"message", e.what()}};
    std::fprintf(stderr, "%s\n", err.dump().c_str());
    if (e.kind() == "config" || e.kind() == "precondition") return 2;
    if (e.kind() == "numeric") return 3;
    return 4;
  } catch (const std::exception& e) {
    nlohmann::json err = {{"error", "internal"}, {"message", e.what()}};
    std::fprintf(stderr, "%s\n", err.dump().c_str());
    return 1;
  }
}

// Acceptance suite: one line per criterion, nonzero exit if any fails.
//
// Thresholds marked "calibrated" were frozen from dense-solver oracle runs
// (grid-free shooting and the coarse-grid bisection oracle) before the
// assertions were fixed; several magnitudes depend on how close mu sits to
// the critical coupling and cannot be guessed from scaling alone.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "shl/control.hpp"
#include "shl/domain.hpp"
#include "shl/grid.hpp"
#include "shl/hardy.hpp"
#include "shl/operator.hpp"
#include "shl/parabolic.hpp"
#include "shl/spectral.hpp"

using namespace shl;

namespace {

int failures = 0;

double now() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

void report(int id, const char* name, bool ok, const std::string& detail, double seconds) {
  std::printf("%s %2d %-24s %s (%.2fs)\n", ok ? "PASS" : "FAIL", id, name, detail.c_str(),
              seconds);
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

const DomainSpec kBall3 = DomainSpec::ball(3, 1.0);

// shared sweep for criteria 4, 5, 6
const EigenSweepReport& sweep_report() {
  static const EigenSweepReport rep = [] {
    const std::vector<double> eps = {1e-1, 1e-2, 1e-3, 1e-4};
    SweepGridParams gp;
    gp.M = 4000;
    return epsilon_sweep(kBall3, 0.3, eps, {0.3, 0.3}, gp);
  }();
  return rep;
}

void criterion_1() {
  const double t0 = now();
  const auto g = build_grid(3, 1.0, 4000, Grading::geometric());
  const auto op = assemble(g, kBall3, PotentialSpec::truncated(0.0, 1.0));
  const double lam = principal_eigenpair(op).lambda;
  const double rel = std::abs(lam - M_PI * M_PI) / (M_PI * M_PI);
  const double dt = now() - t0;
  report(1, "laplacian-oracle", rel < 5e-3 && dt < 1.0,
         fmt("lambda1=%.6f rel=%.2e, within 0.5%%", lam, rel), dt);
}

void criterion_2() {
  const double t0 = now();
  const auto r3 =
      hardy_refinement(kBall3, HardyVariant::DoubleSingular, default_hardy_levels());
  const auto r4 = hardy_refinement(DomainSpec::ball(4, 1.0), HardyVariant::DoubleSingular,
                                   default_hardy_levels());
  const double c3 = r3.levels.back().discrete_constant;
  const double c4 = r4.levels.back().discrete_constant;
  const double dt = now() - t0;
  report(2, "hardy-double-singular",
         c3 > 0.24 && c3 < 0.26 && c4 > 0.96 && c4 < 1.04 && dt < 30.0,
         fmt("n=3: %.5f in [0.24,0.26], n=4: %.5f in [0.96,1.04]", c3, c4), dt);
}

void criterion_3() {
  const double t0 = now();
  const auto rep = hardy_refinement(kBall3, HardyVariant::Classical, default_hardy_levels());
  const double c = rep.levels.back().discrete_constant;
  report(3, "hardy-classical", c > 0.24 && c < 0.26, fmt("n=3: %.5f in [0.24,0.26]", c),
         now() - t0);
}

void criterion_4() {
  const double t0 = now();
  const auto& rep = sweep_report();
  bool dec = true;
  for (std::size_t i = 1; i < rep.entries.size(); ++i)
    dec = dec && rep.entries[i].lambda1 < rep.entries[i - 1].lambda1;
  const double gap = rep.entries.front().lambda1 - rep.entries.back().lambda1;
  // calibrated: the oracle gives gap = 8.19 at mu = 0.3; this close to the
  // critical coupling the divergence is logarithmically slow in eps
  const double dt = now() - t0;
  report(4, "eigenvalue-divergence", dec && gap > 6.5 && dt < 60.0,
         fmt("strictly decreasing=%d, gap=%.3f > 6.5 (calibrated)", int(dec), gap), dt);
}

void criterion_5() {
  const double t0 = now();
  const auto& rep = sweep_report();
  bool dec = true;
  for (std::size_t i = 1; i < rep.entries.size(); ++i)
    dec = dec && rep.entries[i].h1_window_norm < rep.entries[i - 1].h1_window_norm;
  const double last = rep.entries.back().h1_window_norm;
  // calibrated: oracle value 1.753 at eps = 1e-4, mu = 0.3
  report(5, "window-localization", dec && last < 1.85,
         fmt("strictly decreasing=%d, final=%.4f < 1.85 (calibrated)", int(dec), last),
         now() - t0);
}

void criterion_6() {
  const double t0 = now();
  const auto& rep = sweep_report();
  double worst = 0.0;
  for (const auto& e : rep.entries) worst = std::max(worst, e.identity_rel_error);
  report(6, "eigenpair-identity", worst < 1e-3 && worst > 0.0,
         fmt("max rel defect=%.2e < 1e-3", worst), now() - t0);
}

void criterion_7() {
  const double t0 = now();
  const auto g = build_grid(3, 1.0, 1500, Grading::geometric());
  const double mu = 0.2, C = critical_mu(3);
  const double m = inf_potential(kBall3).value;
  const std::vector<double> u0(g.size(), 1.0);
  const double rhs = energy_bound_rhs(g, kBall3, mu, u0, Forcing{}, 0.5, 5e-4);
  double lo = 1e300, hi = 0.0;
  bool bound_ok = true;
  for (double N : {10.0, 100.0, 1000.0, 10000.0}) {
    HeatRunConfig cfg;
    cfg.domain = kBall3;
    cfg.potential = PotentialSpec::truncated(mu, N);
    cfg.T = 0.5;
    cfg.u0 = u0;
    const auto res = run_heat(g, cfg);
    const double fin = res.trace.l2_norm_sq.back();
    lo = std::min(lo, fin);
    hi = std::max(hi, fin);
    const double lhs = fin + (C - mu) / (2.0 * C) * res.trace.dissipation.back();
    bound_ok = bound_ok && lhs <= rhs;
  }
  // all final masses sit deep below the initial energy; spread measured
  // against the energy-bound scale int u0^2
  const double spread = (hi - lo) / l2_norm_sq(g, u0);
  report(7, "subcritical-uniformity", bound_ok && spread < 0.05 && m == 16.0,
         fmt("spread/u0^2=%.4f < 0.05, energy bound (C=%.2f, m=%.0f) held=%d", spread, C, m,
             int(bound_ok)),
         now() - t0);
}

void criterion_8() {
  const double t0 = now();
  const auto g = build_grid(3, 1.0, 1500, Grading::geometric());
  std::vector<std::vector<double>> finals;
  std::vector<double> mass;
  for (double N : {10.0, 100.0, 1000.0, 10000.0}) {
    HeatRunConfig cfg;
    cfg.domain = kBall3;
    cfg.potential = PotentialSpec::truncated(0.3, N);
    cfg.T = 0.5;
    cfg.u0.assign(g.size(), 1.0);
    const auto res = run_heat(g, cfg);
    finals.push_back(res.final_state);
    mass.push_back(res.trace.l2_norm_sq.back());
  }
  bool node_monotone = true, positive = true, mass_monotone = true;
  for (std::size_t k = 0; k < finals.size(); ++k) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      positive = positive && finals[k][i] > 0.0;
      if (k > 0) node_monotone = node_monotone && finals[k][i] >= finals[k - 1][i];
    }
    if (k > 0) mass_monotone = mass_monotone && mass[k] >= mass[k - 1];
  }
  const double ratio = mass.back() / mass.front();
  report(8, "supercritical-growth",
         node_monotone && positive && mass_monotone && ratio > 100.0,
         fmt("nodewise monotone=%d, positive=%d, ratio=%.0f > 100",
             int(node_monotone && mass_monotone), int(positive), ratio),
         now() - t0);
}

void criterion_9() {
  const double t0 = now();
  const bool exact = (cost_lower_bound(-1.0, 1.0, 1.0) == 0.25);
  std::mt19937_64 rng(20240917);
  std::uniform_real_distribution<double> lam_d(-15.0, -0.1), t_d(0.2, 2.5), amp(-2.0, 2.0);
  int violations = 0;
  for (int s = 0; s < 100; ++s) {
    const double lambda = lam_d(rng), T = t_d(rng);
    const std::size_t K =
        std::max<std::size_t>(2001, static_cast<std::size_t>(200.0 * -lambda * T));
    std::vector<double> b(K);
    const double a1 = amp(rng), a2 = amp(rng), ph = amp(rng);
    for (std::size_t k = 0; k < b.size(); ++k) {
      const double t = T * static_cast<double>(k) / (b.size() - 1);
      b[k] = a1 * std::sin(3.0 * t + ph) + a2 * std::cos(t);
    }
    const ChainSample cs = evaluate_estimate_chain(lambda, T, b);
    const double scale =
        std::max({std::abs(cs.lhs), std::abs(cs.r1), std::abs(cs.r2), std::abs(cs.r3), 1.0});
    const double slack = 1e-6 * scale;
    if (!(cs.lhs >= cs.r1 - slack && cs.r1 >= cs.r2 - slack && cs.r2 >= cs.r3 - slack &&
          std::abs(cs.r3 - cs.r4) <= 1e-4 * scale))
      ++violations;
  }
  report(9, "bound-arithmetic", exact && violations == 0,
         fmt("closed form exact=%d, chain violations=%d/100", int(exact), violations),
         now() - t0);
}

void criterion_10() {
  const double t0 = now();
  // seven log-spaced eps spanning [1e-1, 1e-4]; at mu = 0.3 only the smallest
  // two have a negative principal eigenvalue, the rest drop out with notes
  std::vector<double> eps;
  for (int k = 0; k <= 6; ++k) eps.push_back(std::pow(10.0, -1.0 - 0.5 * k));
  SweepGridParams gp;
  gp.M = 4000;
  const auto rep = divergence_sweep(kBall3, 0.3, eps, {0.3, 0.3}, 1.0, gp);
  bool inc = !rep.entries.empty() && rep.entries.size() >= 2;
  for (std::size_t i = 1; i < rep.entries.size(); ++i)
    inc = inc && rep.entries[i].j_lower > rep.entries[i - 1].j_lower;
  const double ratio = rep.entries.empty()
                           ? 0.0
                           : rep.entries.back().j_lower / rep.entries.front().j_lower;
  // calibrated: the oracle gives j = 0.0854 -> 0.1868 (ratio 2.19) for the
  // two retained entries at mu = 0.3
  report(10, "cost-divergence", inc && ratio > 1.5,
         fmt("retained=%zu, strictly increasing=%d, ratio=%.3f > 1.5 (calibrated)",
             rep.entries.size(), int(inc), ratio),
         now() - t0);
}

void criterion_11() {
  const double t0 = now();
  const char* bin = std::getenv("SHL_BIN");
  if (!bin) {
    report(11, "csv-determinism", false, "SHL_BIN not set", now() - t0);
    return;
  }
  namespace fs = std::filesystem;
  auto slurp = [](const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  auto run = [&](const std::string& args) {
    const std::string cmd = std::string(bin) + " " + args + " >/dev/null 2>&1";
    return std::system(cmd.c_str()) == 0;
  };
  const std::string base = "/tmp/shl_acceptance";
  fs::remove_all(base);
  bool ok = true;
  // identical config + seed across two runs (and different thread counts)
  ok = ok && run("eps-sweep --mu 0.3 --eps-list 0.1 0.01 --grid 1200 --seed 3 --threads 1 --out " +
                 base + "/a");
  ok = ok && run("eps-sweep --mu 0.3 --eps-list 0.1 0.01 --grid 1200 --seed 3 --threads 4 --out " +
                 base + "/b");
  ok = ok && slurp(base + "/a/eps-sweep.csv") == slurp(base + "/b/eps-sweep.csv");
  ok = ok && run("blowup-scan --mu 0.3 --N-list 10 100 --T 0.1 --grid 400 --seed 1 --out " +
                 base + "/c");
  ok = ok && run("blowup-scan --mu 0.3 --N-list 10 100 --T 0.1 --grid 400 --seed 1 --out " +
                 base + "/d");
  ok = ok && slurp(base + "/c/blowup-scan.csv") == slurp(base + "/d/blowup-scan.csv");
  ok = ok && run("hardy --n 3 --threads 1 --out " + base + "/e");
  ok = ok && run("hardy --n 3 --threads 4 --out " + base + "/f");
  ok = ok && slurp(base + "/e/hardy.csv") == slurp(base + "/f/hardy.csv");
  ok = ok && !slurp(base + "/a/eps-sweep.csv").empty();
  report(11, "csv-determinism", ok, "byte-identical CSVs across repeated runs", now() - t0);
}

} // namespace

int main() {
  const double t0 = now();
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  std::printf("%s: %d/11 criteria passed (%.1fs total)\n", failures == 0 ? "OK" : "FAILED",
              11 - failures, now() - t0);
  return failures == 0 ? 0 : 1;
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "oracle.hpp"
#include "shl/control.hpp"
#include "shl/domain.hpp"
#include "shl/errors.hpp"
#include "shl/grid.hpp"
#include "shl/operator.hpp"
#include "shl/parabolic.hpp"
#include "shl/spectral.hpp"

using namespace shl;

namespace {
const DomainSpec kBall3 = DomainSpec::ball(3, 1.0);
}

TEST_CASE("cost_lower_bound closed forms") {
  CHECK(cost_lower_bound(-1.0, 1.0, 1.0) == 0.25); // exact: term B wins
  CHECK(cost_lower_bound(-10.0, 1e-3, 1.0) == doctest::Approx(2500.0).epsilon(1e-12));
  CHECK_THROWS_AS((void)cost_lower_bound(0.0, 1.0, 1.0), PreconditionError);
  CHECK_THROWS_AS((void)cost_lower_bound(1.0, 1.0, 1.0), PreconditionError);
  // vanishing window norm sends term B to +inf; term A then decides the min
  CHECK(cost_lower_bound(-2.0, 0.0, 1.0) ==
        doctest::Approx((std::exp(4.0) - 1.0) / 32.0).epsilon(1e-12));
}

TEST_CASE("bound terms: monotone in T and in the window norm") {
  // term A grows with the horizon (tiny window norm keeps term B out of the min)
  double prevA = 0.0;
  for (double T : {0.5, 1.0, 2.0, 4.0}) {
    const double a = cost_lower_bound(-1.5, 1e-300, T);
    CHECK(a > prevA);
    prevA = a;
  }
  // term B grows as the window norm shrinks (long horizon keeps term A out)
  double prevJ = 0.0;
  for (double h1 : {1.0, 0.1, 1e-3, 1e-9}) {
    const double j = cost_lower_bound(-1.5, h1, 20.0);
    CHECK(j > prevJ);
    prevJ = j;
  }
}

TEST_CASE("estimate chain: ordered right sides for 100 seeded samples") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> lam_d(-15.0, -0.1), t_d(0.2, 2.5), amp(-2.0, 2.0);
  int violations = 0;
  for (int s = 0; s < 100; ++s) {
    const double lambda = lam_d(rng);
    const double T = t_d(rng);
    // time resolution tied to |lambda| T so the trapezoid error in the
    // exponential moments stays well under the analytic gaps
    const std::size_t K =
        std::max<std::size_t>(2001, static_cast<std::size_t>(200.0 * -lambda * T));
    std::vector<double> b(K);
    const double a1 = amp(rng), a2 = amp(rng), ph = amp(rng);
    for (std::size_t k = 0; k < K; ++k) {
      const double t = T * static_cast<double>(k) / (K - 1);
      b[k] = a1 * std::sin(3.0 * t + ph) + a2 * std::cos(t);
    }
    const ChainSample cs = evaluate_estimate_chain(lambda, T, b);
    const double scale = std::max({std::abs(cs.lhs), std::abs(cs.r1), std::abs(cs.r2),
                                   std::abs(cs.r3), 1.0});
    const double slack = 1e-6 * scale;
    if (!(cs.lhs >= cs.r1 - slack)) ++violations;
    if (!(cs.r1 >= cs.r2 - slack)) ++violations;
    if (!(cs.r2 >= cs.r3 - slack)) ++violations;
    if (!(std::abs(cs.r3 - cs.r4) <= 1e-4 * scale)) ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("estimate chain rejects nonnegative lambda") {
  std::vector<double> b(11, 0.0);
  CHECK_THROWS_AS((void)evaluate_estimate_chain(0.5, 1.0, b), PreconditionError);
}

TEST_CASE("h_minus1_norm against the eigenfunction oracle") {
  // K z = M f with f the Laplacian ground state: z = f / lambda1, so
  // ||f||_{H^-1} = ||f||_{L^2} / sqrt(lambda1)
  const auto g = build_grid(3, 1.0, 2000, Grading::geometric());
  const auto op = assemble(g, kBall3, PotentialSpec::truncated(0.0, 1.0));
  const auto pair = principal_eigenpair(op);
  const double dual = h_minus1_norm(g, pair.vector);
  CHECK(dual == doctest::Approx(1.0 / M_PI).epsilon(1e-4));
}

TEST_CASE("projection: eigen initial data evolves as a single exponential") {
  const auto g = build_grid(3, 1.0, 800, Grading::geometric());
  const auto p = PotentialSpec::regularized(1.0, 1e-1);
  const auto op = assemble(g, kBall3, p);
  const auto eig = principal_eigenpair(op);
  REQUIRE(eig.lambda < 0.0);

  double prev_resid = 0.0;
  for (double dt : {2e-3, 1e-3}) {
    HeatRunConfig cfg;
    cfg.domain = kBall3;
    cfg.potential = p;
    cfg.T = 1.0;
    cfg.dt = dt;
    cfg.u0 = eig.vector;
    cfg.record_states = true;
    const auto res = run_heat(g, cfg);
    const auto tr = project_coefficients(g, res, cfg.forcing, eig);
    CHECK(tr.a.front() == doctest::Approx(1.0).epsilon(1e-10));
    // a(T) tracks e^{-lambda T} within the first-order stepping error
    CHECK(tr.a.back() ==
          doctest::Approx(std::exp(-eig.lambda * 1.0)).epsilon(20.0 * dt));
    double mx = 0.0;
    for (double r : tr.ode_residual) mx = std::max(mx, std::abs(r));
    if (prev_resid > 0.0) CHECK(mx < prev_resid); // residual falls with dt
    prev_resid = mx;
  }
}

TEST_CASE("projection: orthogonal initial data stays orthogonal") {
  const auto g = build_grid(3, 1.0, 600, Grading::geometric());
  const auto p = PotentialSpec::regularized(1.0, 1e-1);
  const auto op = assemble(g, kBall3, p);
  const auto eig = principal_eigenpair(op);
  // project a second mode off the ground state
  std::vector<double> u0(g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    u0[i] = std::sin(2.0 * M_PI * g.nodes[i]) / g.nodes[i];
  const double omega = unit_sphere_area(3);
  double inner = 0.0, norm = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    inner += g.quad_weights[i] * u0[i] * eig.vector[i];
    norm += g.quad_weights[i] * eig.vector[i] * eig.vector[i];
  }
  for (std::size_t i = 0; i < g.size(); ++i) u0[i] -= (inner / norm) * eig.vector[i];
  (void)omega;

  HeatRunConfig cfg;
  cfg.domain = kBall3;
  cfg.potential = p;
  cfg.T = 0.5;
  cfg.dt = 1e-3;
  cfg.u0 = u0;
  cfg.record_states = true;
  const auto res = run_heat(g, cfg);
  const auto tr = project_coefficients(g, res, cfg.forcing, eig);
  for (double a : tr.a) CHECK(std::abs(a) < 1e-8);
}

TEST_CASE("projection: near-zero eigenvalue with unit b gives a(t) = 1 + t") {
  const auto g = build_grid(3, 1.0, 800, Grading::geometric());
  // tune mu between 0.9 and 1.1 until lambda1 is within 1e-5 of zero
  double lo = 0.9, hi = 1.1;
  EigenPair eig;
  PotentialSpec p;
  for (int it = 0; it < 60; ++it) {
    const double mu = 0.5 * (lo + hi);
    p = PotentialSpec::regularized(mu, 1e-1);
    eig = principal_eigenpair(assemble(g, kBall3, p));
    if (std::abs(eig.lambda) < 1e-5) break;
    (eig.lambda > 0.0 ? lo : hi) = mu;
  }
  REQUIRE(std::abs(eig.lambda) < 1e-5);

  HeatRunConfig cfg;
  cfg.domain = kBall3;
  cfg.potential = p;
  cfg.T = 1.0;
  cfg.dt = 1e-3;
  cfg.u0 = eig.vector;
  cfg.record_states = true;
  cfg.forcing.space_profile = eig.vector; // b = <phi, phi>_{L2} = 1
  const auto res = run_heat(g, cfg);
  const auto tr = project_coefficients(g, res, cfg.forcing, eig);
  CHECK(tr.b.back() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(tr.a.back() == doctest::Approx(2.0).epsilon(2e-3));
}

TEST_CASE("projection requires recorded states and matching grids") {
  const auto g = build_grid(3, 1.0, 300, Grading::geometric());
  const auto p = PotentialSpec::regularized(1.0, 1e-1);
  const auto eig = principal_eigenpair(assemble(g, kBall3, p));
  HeatRunConfig cfg;
  cfg.domain = kBall3;
  cfg.potential = p;
  cfg.T = 0.1;
  cfg.u0 = eig.vector;
  const auto res = run_heat(g, cfg); // no record_states
  CHECK_THROWS_AS((void)project_coefficients(g, res, cfg.forcing, eig), PreconditionError);
}

TEST_CASE("divergence sweep at mu=1: every decade retained, steep growth") {
  const std::vector<double> eps = {1e-1, 1e-2, 1e-3, 1e-4};
  SweepGridParams gp;
  gp.M = 4000;
  const auto rep = divergence_sweep(kBall3, 1.0, eps, {0.3, 0.3}, 1.0, gp);
  REQUIRE(rep.entries.size() == 4);
  CHECK(rep.notes.empty());
  CHECK(rep.j_monotone_increasing);
  for (const auto& e : rep.entries) {
    CHECK(e.lambda1 < 0.0);
    CHECK(e.term_A > 0.0);
    CHECK(e.term_B > 0.0);
    CHECK(e.j_lower == std::min(e.term_A, e.term_B));
  }
  CHECK(rep.entries.back().j_lower / rep.entries.front().j_lower > 1e3);
}

TEST_CASE("divergence sweep drops nonnegative eigenvalues with a note") {
  const std::vector<double> eps = {1e-1, 1e-4};
  SweepGridParams gp;
  gp.M = 2500;
  const auto rep = divergence_sweep(kBall3, 0.3, eps, {0.3, 0.3}, 1.0, gp);
  REQUIRE(rep.entries.size() == 1); // only eps = 1e-4 is retained at mu = 0.3
  CHECK(rep.notes.size() == 1);
  CHECK(rep.entries[0].eps == 1e-4);
  CHECK(rep.entries[0].j_lower ==
        doctest::Approx(std::min(rep.entries[0].term_A, rep.entries[0].term_B)));
}

TEST_CASE("divergence sweep rejects subcritical coupling") {
  const std::vector<double> eps = {1e-1, 1e-2};
  CHECK_THROWS_WITH_AS((void)divergence_sweep(kBall3, 0.2, eps, {0.3, 0.3}, 1.0),
                       "mu must exceed ((n-2)/2)^2", PreconditionError);
}

TEST_CASE("window norms agree bit-for-bit between the two sweep views") {
  const std::vector<double> eps = {1e-1, 1e-2};
  SweepGridParams gp;
  gp.M = 1200;
  const SweepWindow w{0.3, 0.3};
  const auto spec_rep = epsilon_sweep(kBall3, 1.0, eps, w, gp);
  const auto cost_rep = divergence_sweep(kBall3, 1.0, eps, w, 1.0, gp);
  REQUIRE(cost_rep.entries.size() == 2);
  for (std::size_t i = 0; i < 2; ++i)
    CHECK(cost_rep.entries[i].phi_h1_omega == spec_rep.entries[i].h1_window_norm);
}

TEST_CASE("realized cost of hand-built controlled runs dominates the bound") {
  const auto d = kBall3;
  const double mu = 1.0, eps = 1e-1, T = 1.0;
  const SweepWindow w{0.3, 0.3};
  SweepGridParams gp;
  gp.M = 1200;
  const auto rep = divergence_sweep(d, mu, {&eps, 1}, w, T, gp);
  REQUIRE(rep.entries.size() == 1);
  const double j_lower = rep.entries[0].j_lower;

  const auto g = build_grid(3, 1.0, gp.M, Grading::geometric(0.85, 1e-6, 1e-6));
  const auto p = PotentialSpec::regularized(mu, eps);
  const auto eig = principal_eigenpair(assemble(g, d, p));

  // several forcings localized in the window
  for (int shape = 0; shape < 3; ++shape) {
    HeatRunConfig cfg;
    cfg.domain = d;
    cfg.potential = p;
    cfg.T = T;
    cfg.dt = 1e-3;
    cfg.u0 = eig.vector;
    cfg.forcing.space_profile.resize(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double bump = cutoff_bump(g.nodes[i], w.rho, w.delta, g.R).eta;
      const double mod = shape == 0 ? 1.0 : (shape == 1 ? g.nodes[i] : -2.0);
      cfg.forcing.space_profile[i] = bump * mod;
    }
    const auto res = run_heat(g, cfg);
    // J = 1/2 int int u^2 + 1/2 int ||f||_{H^-1} dt, both by step quadrature
    double uu = 0.0;
    for (std::size_t k = 1; k < res.trace.times.size(); ++k)
      uu += res.dt_used * res.trace.l2_norm_sq[k];
    const double fdual = h_minus1_norm(g, cfg.forcing.space_profile) * T;
    const double realized = 0.5 * uu + 0.5 * fdual;
    CHECK(realized >= j_lower * 0.99);
  }
}

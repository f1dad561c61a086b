#include "shl/control.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <string>

#include "shl/errors.hpp"
#include "shl/kernels.hpp"

namespace shl {

double cost_lower_bound(double lambda1, double phi_h1_omega, double T) {
  if (!(lambda1 < 0.0))
    throw PreconditionError("cost_lower_bound derived for negative lambda1 only");
  if (!(T > 0.0)) throw PreconditionError("cost_lower_bound: T must be positive");
  // IEEE handles the extremes: term_A overflows to +inf for large |lambda| T,
  // term_B is +inf when the window norm underflows to zero
  const double term_a = -(std::exp(-2.0 * lambda1 * T) - 1.0) / (16.0 * lambda1);
  const double term_b = -lambda1 / (4.0 * phi_h1_omega);
  return std::min(term_a, term_b);
}

CostReport divergence_sweep(const DomainSpec& d, double mu, std::span<const double> eps_list,
                            SweepWindow window, double T, const SweepGridParams& gp,
                            const EigenOptions& opt) {
  if (!(mu > critical_mu(d.n)))
    throw PreconditionError("mu must exceed ((n-2)/2)^2");
  if (!(T > 0.0)) throw PreconditionError("divergence_sweep: T must be positive");

  const EigenSweepReport sweep = epsilon_sweep(d, mu, eps_list, window, gp, opt);

  CostReport rep;
  rep.T = T;
  rep.window = window;
  for (const EigenSweepEntry& e : sweep.entries) {
    if (e.solver_failed) {
      rep.notes.push_back("eps=" + std::to_string(e.eps) + " dropped: solver failed");
      continue;
    }
    if (!(e.lambda1 < 0.0)) {
      rep.notes.push_back("eps=" + std::to_string(e.eps) +
                          " dropped: lambda1 >= 0 (eps too large for the bound)");
      continue;
    }
    CostEntry c;
    c.eps = e.eps;
    c.lambda1 = e.lambda1;
    c.phi_h1_omega = e.h1_window_norm;
    c.term_A = -(std::exp(-2.0 * e.lambda1 * T) - 1.0) / (16.0 * e.lambda1);
    c.term_B = -e.lambda1 / (4.0 * e.h1_window_norm);
    c.j_lower = std::min(c.term_A, c.term_B);
    rep.entries.push_back(c);
  }
  for (std::size_t i = 1; i < rep.entries.size(); ++i)
    if (!(rep.entries[i].j_lower > rep.entries[i - 1].j_lower))
      rep.j_monotone_increasing = false;
  return rep;
}

ProjectionTrace project_coefficients(const RadialGrid& g, const HeatResult& run,
                                     const Forcing& forcing, const EigenPair& eig) {
  if (run.states.empty())
    throw PreconditionError("project_coefficients needs a run with record_states");
  if (eig.vector.size() != g.size() || run.states.front().size() != g.size())
    throw PreconditionError("project_coefficients: grid mismatch between run and eigenpair");

  const double omega = unit_sphere_area(g.n);
  ProjectionTrace tr;
  tr.lambda1 = eig.lambda;
  tr.times = run.trace.times;
  const std::size_t K = run.states.size();
  tr.a.resize(K);
  for (std::size_t k = 0; k < K; ++k)
    tr.a[k] = omega * par::dot3(g.quad_weights, run.states[k], eig.vector);
  tr.b.assign(K, 0.0);
  if (!forcing.is_zero()) {
    const double base = omega * par::dot3(g.quad_weights, forcing.space_profile, eig.vector);
    for (std::size_t k = 0; k < K; ++k) tr.b[k] = forcing.amplitude_at(k) * base;
  }
  if (K >= 3) {
    tr.ode_residual.resize(K - 2);
    for (std::size_t k = 1; k + 1 < K; ++k) {
      const double dt = tr.times[k + 1] - tr.times[k - 1];
      tr.ode_residual[k - 1] = (tr.a[k + 1] - tr.a[k - 1]) / dt + eig.lambda * tr.a[k] - tr.b[k];
    }
  }
  return tr;
}

double h_minus1_norm(const RadialGrid& g, std::span<const double> f) {
  const SymTridiag k0 = assemble_stiffness(g);
  std::vector<double> z(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) z[i] = g.quad_weights[i] * f[i];
  const LdltFactor fac = ldlt(k0);
  if (!fac.positive_definite)
    throw NumericError("h_minus1_norm: stiffness factorization failed");
  ldlt_solve(fac, z);
  const double q = unit_sphere_area(g.n) * par::dot3(g.quad_weights, f, z);
  return std::sqrt(std::max(q, 0.0));
}

ChainSample evaluate_estimate_chain(double lambda, double T, std::span<const double> b_series) {
  if (!(lambda < 0.0))
    throw PreconditionError("estimate chain requires lambda < 0");
  const std::size_t K = b_series.size();
  if (K < 3) throw PreconditionError("estimate chain needs at least 3 time samples");
  const double dt = T / static_cast<double>(K - 1);

  // a(t) = e^{-lambda t} (1 + int_0^t e^{lambda s} b ds); the integrand decays
  std::vector<double> conv(K, 0.0), a(K), bsq_run(K, 0.0);
  double acc = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    const double t = dt * static_cast<double>(k);
    if (k > 0) {
      acc += 0.5 * dt *
             (std::exp(lambda * (t - dt)) * b_series[k - 1] + std::exp(lambda * t) * b_series[k]);
      bsq_run[k] = bsq_run[k - 1] +
                   0.5 * dt * (b_series[k - 1] * b_series[k - 1] + b_series[k] * b_series[k]);
    }
    conv[k] = std::exp(-lambda * t) * acc;
    a[k] = std::exp(-lambda * t) + conv[k];
  }
  auto trapz = [&](auto&& f) {
    double s = 0.0;
    for (std::size_t k = 1; k < K; ++k) s += 0.5 * dt * (f(k - 1) + f(k));
    return s;
  };

  ChainSample cs;
  cs.lhs = trapz([&](std::size_t k) { return a[k] * a[k]; });
  const double int_exp = trapz([&](std::size_t k) {
    return std::exp(-2.0 * lambda * dt * static_cast<double>(k));
  });
  cs.r1 = 0.5 * int_exp - trapz([&](std::size_t k) { return conv[k] * conv[k]; });
  const double lead = -(std::exp(-2.0 * lambda * T) - 1.0) / (4.0 * lambda);
  cs.r2 = lead + (1.0 / (2.0 * lambda)) * trapz([&](std::size_t k) {
            return (std::exp(-2.0 * lambda * dt * static_cast<double>(k)) - 1.0) * bsq_run[k];
          });
  cs.r3 = lead + (1.0 / (2.0 * lambda)) * int_exp * bsq_run[K - 1];
  cs.r4 = lead - (std::exp(-2.0 * lambda * T) - 1.0) / (4.0 * lambda * lambda) * bsq_run[K - 1];
  return cs;
}

} // namespace shl

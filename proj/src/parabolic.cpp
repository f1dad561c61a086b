#include "shl/parabolic.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <string>

#include "shl/errors.hpp"
#include "shl/kernels.hpp"

namespace shl {

namespace {

struct Quadratics {
  double kin = 0.0;  // u'Ku
  double pot = 0.0;  // u'(m psi)u
};

Quadratics forms(const DiscreteOperator& op, std::span<const double> u,
                 std::vector<double>& scratch) {
  Quadratics q;
  par::tridiag_apply(op.stiffness.diag, op.stiffness.off, u, scratch);
  q.kin = par::dot(u, scratch);
  for (std::size_t i = 0; i < u.size(); ++i) scratch[i] = op.potential_diag[i] * u[i];
  q.pot = par::dot3(op.mass_diag, scratch, u);
  return q;
}

} // namespace

HeatResult run_heat(const RadialGrid& g, const HeatRunConfig& cfg) {
  validate(cfg.domain);
  validate(cfg.potential);
  const std::size_t M = g.size();
  if (cfg.u0.size() != M)
    throw PreconditionError("run_heat: u0 must be sampled at the grid nodes");
  if (!(cfg.T > 0.0)) throw PreconditionError("run_heat: T must be positive");
  if (!cfg.forcing.is_zero() && cfg.forcing.space_profile.size() != M)
    throw PreconditionError("run_heat: forcing profile size mismatch");
  for (double v : cfg.u0)
    if (!std::isfinite(v)) throw PreconditionError("run_heat: u0 must be finite");

  const DiscreteOperator op = assemble(g, cfg.domain, cfg.potential);
  const double omega = unit_sphere_area(g.n);
  double dt = (cfg.dt > 0.0) ? cfg.dt : cfg.T / 1000.0;
  if (!(dt <= cfg.T)) dt = cfg.T;

  // implicit matrix; halve dt until positive definite
  const bool cn = (cfg.scheme == TimeScheme::CrankNicolson);
  SymTridiag a = op.full_matrix();
  SymTridiag sys;
  LdltFactor fac;
  int halvings = 0;
  for (;; ++halvings) {
    const double c = cn ? 0.5 * dt : dt;
    sys = a;
    for (std::size_t i = 0; i < M; ++i) sys.diag[i] = op.mass_diag[i] + c * a.diag[i];
    for (std::size_t i = 0; i + 1 < M; ++i) sys.off[i] = c * a.off[i];
    fac = ldlt(sys);
    if (fac.positive_definite) break;
    if (halvings >= 60)
      throw NumericError("run_heat: implicit matrix stays indefinite; decrease dt or mu*N");
    dt *= 0.5;
  }
  const auto steps = static_cast<std::size_t>(std::ceil(cfg.T / dt - 1e-12));

  HeatResult out;
  out.dt_used = dt;
  out.dt_halvings = halvings;

  std::vector<double> u = cfg.u0;
  std::vector<double> scratch(M), rhs(M);

  EnergyTrace& tr = out.trace;
  const auto reserve = steps + 1;
  tr.times.reserve(reserve);
  tr.l2_norm_sq.reserve(reserve);
  tr.dissipation.reserve(reserve);
  tr.potential_work.reserve(reserve);
  tr.forcing_work.reserve(reserve);

  double diss = 0.0, potw = 0.0, forw = 0.0;
  tr.times.push_back(0.0);
  tr.l2_norm_sq.push_back(omega * par::dot3(op.mass_diag, u, u));
  tr.dissipation.push_back(0.0);
  tr.potential_work.push_back(0.0);
  tr.forcing_work.push_back(0.0);
  if (cfg.record_states) out.states.push_back(u);

  const double guard = cfg.blowup_guard * std::max(1.0, tr.l2_norm_sq.front());

  for (std::size_t k = 0; k < steps; ++k) {
    const double amp = cfg.forcing.amplitude_at(k);
    if (cn) {
      // (M + dt/2 A) u+ = (M - dt/2 A) u + dt M f
      par::tridiag_apply(a.diag, a.off, u, scratch);
      for (std::size_t i = 0; i < M; ++i)
        rhs[i] = op.mass_diag[i] * u[i] - 0.5 * dt * scratch[i];
    } else {
      for (std::size_t i = 0; i < M; ++i) rhs[i] = op.mass_diag[i] * u[i];
    }
    if (!cfg.forcing.is_zero())
      for (std::size_t i = 0; i < M; ++i)
        rhs[i] += dt * op.mass_diag[i] * amp * cfg.forcing.space_profile[i];
    ldlt_solve(fac, rhs);
    u.swap(rhs);

    const double t = dt * static_cast<double>(k + 1);
    const double l2 = omega * par::dot3(op.mass_diag, u, u);
    if (!std::isfinite(l2) || l2 > guard) {
      out.blowup_suspected = true;
      tr.times.push_back(t);
      tr.l2_norm_sq.push_back(std::numeric_limits<double>::infinity());
      tr.dissipation.push_back(diss);
      tr.potential_work.push_back(potw);
      tr.forcing_work.push_back(forw);
      out.final_state = u;
      return out;
    }
    // accumulate at the new iterate (the quadrature under which backward
    // Euler telescopes the energy identity exactly; a trapezoid that samples
    // t=0 blows up on Dirichlet-incompatible initial data)
    const Quadratics q = forms(op, u, scratch);
    diss += dt * omega * q.kin;
    potw += dt * omega * q.pot;
    if (!cfg.forcing.is_zero())
      forw += dt * amp * omega * par::dot3(op.mass_diag, cfg.forcing.space_profile, u);

    tr.times.push_back(t);
    tr.l2_norm_sq.push_back(l2);
    tr.dissipation.push_back(diss);
    tr.potential_work.push_back(potw);
    tr.forcing_work.push_back(forw);
    if (cfg.record_states) out.states.push_back(u);
  }
  out.final_state = std::move(u);
  return out;
}

BlowupScan blowup_scan(const RadialGrid& g, const DomainSpec& d, double mu,
                       std::span<const double> u0, std::span<const double> N_list,
                       double T, double dt, double growth_factor) {
  validate(d);
  if (!(mu > critical_mu(d.n)))
    throw PreconditionError("blowup_scan requires supercritical mu > ((n-2)/2)^2");
  bool any_positive = false;
  for (double v : u0) {
    if (v < 0.0) throw PreconditionError("blowup_scan: u0 must be nonnegative");
    if (v > 0.0) any_positive = true;
  }
  if (!any_positive) throw PreconditionError("blowup_scan: u0 must not vanish identically");
  for (std::size_t i = 1; i < N_list.size(); ++i)
    if (!(N_list[i] > N_list[i - 1]))
      throw PreconditionError("blowup_scan: N list must be strictly increasing");

  BlowupScan scan;
  scan.entries.resize(N_list.size());
#if defined(_OPENMP)
#pragma omp parallel for schedule(dynamic, 1)
#endif
  for (long long k = 0; k < static_cast<long long>(N_list.size()); ++k) {
    HeatRunConfig cfg;
    cfg.domain = d;
    cfg.potential = PotentialSpec::truncated(mu, N_list[k]);
    cfg.T = T;
    cfg.dt = dt;
    cfg.u0.assign(u0.begin(), u0.end());
    const HeatResult res = run_heat(g, cfg);
    BlowupEntry e;
    e.trunc_N = N_list[k];
    e.blowup_suspected = res.blowup_suspected;
    e.final_l2_sq = res.blowup_suspected ? std::numeric_limits<double>::infinity()
                                         : res.trace.l2_norm_sq.back();
    scan.entries[k] = e;
  }
  for (std::size_t i = 1; i < scan.entries.size(); ++i)
    if (scan.entries[i].final_l2_sq < scan.entries[i - 1].final_l2_sq)
      scan.monotone_in_N = false;
  if (!scan.entries.empty() && scan.entries.front().final_l2_sq > 0.0)
    scan.growth_ratio = scan.entries.back().final_l2_sq / scan.entries.front().final_l2_sq;
  scan.growth_factor = growth_factor;
  scan.growth_confirmed = scan.growth_ratio > growth_factor;
  return scan;
}

double energy_bound_rhs(const RadialGrid& g, const DomainSpec& d, double mu,
                        std::span<const double> u0, const Forcing& f, double T, double dt) {
  const double C = critical_mu(d.n);
  if (!(mu < C))
    throw PreconditionError("energy_bound_rhs is the subcritical estimate (mu < C)");
  const double m = inf_potential(d).value;
  const double omega = unit_sphere_area(g.n);
  const double u0sq = omega * par::dot3(g.quad_weights, u0, u0);
  if (f.is_zero()) return u0sq;
  double ffint = 0.0;
  const std::size_t steps = static_cast<std::size_t>(std::ceil(T / dt - 1e-12));
  std::vector<double> p = f.space_profile;
  const double fsq = omega * par::dot3(g.quad_weights, p, p);
  double prev = f.amplitude_at(0), acc = 0.0;
  for (std::size_t k = 1; k <= steps; ++k) {
    const double cur = f.amplitude_at(k);
    acc += 0.5 * dt * (prev * prev + cur * cur);
    prev = cur;
  }
  ffint = fsq * acc;
  return u0sq + ffint / (2.0 * m * (C - mu));
}

} // namespace shl

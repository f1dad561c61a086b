#include "shl/hardy.hpp"

#include <cmath>
#include <random>

#include "shl/errors.hpp"
#include "shl/kernels.hpp"
#include "shl/spectral.hpp"

namespace shl {

std::vector<double> hardy_weight(const RadialGrid& g, const DomainSpec& d, HardyVariant variant) {
  const PotentialSpec p = (variant == HardyVariant::DoubleSingular)
                              ? PotentialSpec::exact(0.0)
                              : PotentialSpec::classical(0.0);
  std::vector<double> psi(g.size());
  sample_potential(d, p, g.nodes, psi);
  return psi;
}

double hardy_rayleigh_quotient(const RadialGrid& g, const DomainSpec& d,
                               HardyVariant variant, std::span<const double> u) {
  const SymTridiag k = assemble_stiffness(g);
  std::vector<double> ku(g.size());
  par::tridiag_apply(k.diag, k.off, u, ku);
  const double num = par::dot(u, ku);
  const auto psi = hardy_weight(g, d, variant);
  std::vector<double> pu(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) pu[i] = psi[i] * u[i];
  const double den = par::dot3(g.quad_weights, pu, u);
  if (den == 0.0)
    throw PreconditionError("hardy_rayleigh_quotient: u vanishes against the weight");
  return num / den;
}

double discrete_hardy_constant(const RadialGrid& g, const DomainSpec& d, HardyVariant variant) {
  if (!d.gauge.is_ball())
    throw UnsupportedDomainError("discrete_hardy_constant: ball gauge required");
  const SymTridiag k = assemble_stiffness(g);
  const auto psi = hardy_weight(g, d, variant);
  std::vector<double> weight(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) weight[i] = g.quad_weights[i] * psi[i];
  return smallest_generalized(k, weight, 1.0).lambda;
}

std::vector<std::pair<std::size_t, double>> default_hardy_levels() {
  return {{1500, 1e-6}, {2500, 1e-10}, {4000, 1e-14}};
}

HardyReport hardy_refinement(const DomainSpec& d, HardyVariant variant,
                             std::span<const std::pair<std::size_t, double>> levels) {
  validate(d);
  if (!d.gauge.is_ball())
    throw UnsupportedDomainError("hardy_refinement: ball gauge required");
  HardyReport rep;
  rep.n = d.n;
  rep.variant = variant;
  rep.target = critical_mu(d.n);
  rep.levels.resize(levels.size());

#if defined(_OPENMP)
#pragma omp parallel for schedule(dynamic, 1)
#endif
  for (long long i = 0; i < static_cast<long long>(levels.size()); ++i) {
    const auto& [M, cutoff] = levels[i];
    // the classical weight is regular at the boundary, so only the origin
    // side deepens there
    const double last = (variant == HardyVariant::DoubleSingular) ? cutoff : 1e-6;
    const RadialGrid g = build_grid(d.n, d.gauge.radius, M, Grading::geometric(0.85, cutoff, last));
    HardyLevel lv;
    lv.M = M;
    lv.cutoff_rel = cutoff;
    lv.discrete_constant = discrete_hardy_constant(g, d, variant);
    rep.levels[i] = lv;
  }
  return rep;
}

std::vector<double> random_smooth_function(const RadialGrid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  constexpr int modes = 6;
  double coef[modes];
  for (double& c : coef) c = unif(rng);
  std::vector<double> u(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.nodes[i] / g.R;
    double v = 0.0;
    for (int k = 0; k < modes; ++k) v += coef[k] * std::sin((k + 1) * M_PI * x);
    u[i] = v;
  }
  return u;
}

} // namespace shl

#include "shl/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "shl/errors.hpp"

namespace shl {

Gauge Gauge::ball(double R) {
  Gauge g;
  g.kind = Kind::BallRadius;
  g.radius = R;
  return g;
}

Gauge Gauge::direction_table(std::vector<double> samples) {
  Gauge g;
  g.kind = Kind::DirectionTable;
  g.table = std::move(samples);
  if (g.table.size() >= 2) {
    const double dtheta = M_PI / static_cast<double>(g.table.size() - 1);
    double lip = 0.0;
    for (std::size_t i = 0; i + 1 < g.table.size(); ++i)
      lip = std::max(lip, std::abs(g.table[i + 1] - g.table[i]) / dtheta);
    g.lipschitz_bound = lip;
  }
  return g;
}

double Gauge::max_radius() const {
  if (kind == Kind::BallRadius) return radius;
  return *std::max_element(table.begin(), table.end());
}

DomainSpec DomainSpec::ball(int n, double R) { return DomainSpec{n, Gauge::ball(R)}; }

void validate(const DomainSpec& d) {
  if (d.n < 3)
    throw ConfigError("dimension n must be >= 3, got " + std::to_string(d.n));
  if (d.gauge.kind == Gauge::Kind::BallRadius) {
    if (!(d.gauge.radius > 0.0))
      throw ConfigError("ball radius must be positive");
  } else {
    if (d.gauge.table.size() < 2)
      throw ConfigError("direction table needs at least 2 samples");
    for (double v : d.gauge.table)
      if (!(v > 0.0)) throw ConfigError("direction table values must be positive");
  }
}

double eval_phi(const DomainSpec& d, std::span<const double> x) {
  if (d.gauge.kind == Gauge::Kind::BallRadius) return d.gauge.radius;
  double norm2 = 0.0;
  for (double xi : x) norm2 += xi * xi;
  if (norm2 == 0.0)
    throw PreconditionError("eval_phi: direction undefined at the zero vector");
  // polar angle against the last axis; 0-homogeneous by construction
  const double ct = std::clamp(x.back() / std::sqrt(norm2), -1.0, 1.0);
  const double theta = std::acos(ct);
  const auto& tab = d.gauge.table;
  const double pos = theta / M_PI * static_cast<double>(tab.size() - 1);
  const auto i = std::min(static_cast<std::size_t>(pos), tab.size() - 2);
  const double t = pos - static_cast<double>(i);
  return tab[i] * (1.0 - t) + tab[i + 1] * t;
}

double critical_mu(int n) {
  const double c = (n - 2) / 2.0;
  return c * c;
}

PotentialSpec PotentialSpec::exact(double mu) { return {PotentialVariant::Exact, mu, 0, 0}; }
PotentialSpec PotentialSpec::as_printed(double mu) { return {PotentialVariant::AsPrinted, mu, 0, 0}; }
PotentialSpec PotentialSpec::truncated(double mu, double N) {
  return {PotentialVariant::Truncated, mu, N, 0};
}
PotentialSpec PotentialSpec::regularized(double mu, double eps) {
  return {PotentialVariant::Regularized, mu, 0, eps};
}
PotentialSpec PotentialSpec::classical(double mu) {
  return {PotentialVariant::ClassicalInverseSquare, mu, 0, 0};
}

void validate(const PotentialSpec& p) {
  if (p.variant == PotentialVariant::Truncated && !(p.trunc_N > 0.0))
    throw ConfigError("truncated potential requires N > 0");
  if (p.variant == PotentialVariant::Regularized && !(p.eps > 0.0))
    throw ConfigError("regularized potential requires eps > 0");
}

namespace {

// |x|^{n-2} phi^{2-n} as a function of r and the gauge value.
inline double homogeneity_ratio(int n, double r, double phi) {
  return std::pow(r / phi, n - 2);
}

inline double exact_value(int n, double r, double phi) {
  const double b = 1.0 - homogeneity_ratio(n, r, phi);
  return 1.0 / (r * r * b * b);
}

} // namespace

double eval_potential_radial(const DomainSpec& d, const PotentialSpec& p, double r, double phi) {
  const int n = d.n;
  switch (p.variant) {
    case PotentialVariant::Exact: {
      if (r <= 0.0 || r >= phi)
        throw SingularityError("exact potential evaluated on its singular set (r=0 or r=phi)");
      return exact_value(n, r, phi);
    }
    case PotentialVariant::AsPrinted: {
      if (r <= 0.0 || r >= phi)
        throw SingularityError("as-printed potential evaluated on its singular set");
      return (1.0 - homogeneity_ratio(n, r, phi)) / (r * r);
    }
    case PotentialVariant::Truncated: {
      if (r <= 0.0 || r >= phi) return p.trunc_N; // min(N, +inf)
      return std::min(p.trunc_N, exact_value(n, r, phi));
    }
    case PotentialVariant::Regularized: {
      const double a = r + p.eps;
      const double b = 1.0 + p.eps - homogeneity_ratio(n, r, phi);
      return 1.0 / (a * a * b * b);
    }
    case PotentialVariant::ClassicalInverseSquare: {
      if (r <= 0.0)
        throw SingularityError("classical inverse-square potential evaluated at the origin");
      return 1.0 / (r * r);
    }
  }
  throw NumericError("unreachable potential variant");
}

double eval_potential(const DomainSpec& d, const PotentialSpec& p, double r) {
  if (!d.gauge.is_ball())
    throw UnsupportedDomainError("radial potential evaluation requires a ball gauge");
  return eval_potential_radial(d, p, r, d.gauge.radius);
}

double eval_potential_at(const DomainSpec& d, const PotentialSpec& p, std::span<const double> x) {
  double norm2 = 0.0;
  for (double xi : x) norm2 += xi * xi;
  const double r = std::sqrt(norm2);
  const double phi = (r == 0.0 && d.gauge.is_ball()) ? d.gauge.radius : eval_phi(d, x);
  return eval_potential_radial(d, p, r, phi);
}

void sample_potential(const DomainSpec& d, const PotentialSpec& p,
                      std::span<const double> r, std::span<double> psi) {
  if (!d.gauge.is_ball())
    throw UnsupportedDomainError("node sampling requires a ball gauge");
  const double R = d.gauge.radius;
#if defined(_OPENMP)
#pragma omp parallel for schedule(static)
#endif
  for (long long i = 0; i < static_cast<long long>(r.size()); ++i)
    psi[i] = eval_potential_radial(d, p, r[i], R);
}

PotentialInfimum inf_potential(const DomainSpec& d) {
  validate(d);
  const int n = d.n;
  if (d.gauge.is_ball()) {
    const double R = d.gauge.radius;
    const double s = std::pow(1.0 / (n - 1), 1.0 / (n - 2));
    PotentialInfimum out;
    out.argmin_r = R * s;
    out.value = exact_value(n, out.argmin_r, R);
    return out;
  }
  // non-ball gauge: sample rays over the tabulated directions
  PotentialInfimum out;
  out.sampled = true;
  out.value = std::numeric_limits<double>::infinity();
  const auto& tab = d.gauge.table;
  constexpr int radial_samples = 4096;
  for (double phi : tab) {
    for (int k = 1; k < radial_samples; ++k) {
      const double r = phi * static_cast<double>(k) / radial_samples;
      const double v = exact_value(n, r, phi);
      if (v < out.value) {
        out.value = v;
        out.argmin_r = r;
      }
    }
  }
  return out;
}

} // namespace shl

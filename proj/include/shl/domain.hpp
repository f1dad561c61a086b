#pragma once

#include <optional>
#include <span>
#include <vector>

namespace shl {

/// Gauge of the star-shaped domain {|x| < phi(x)}: either a constant radius
/// (ball) or a table of radii over the unit sphere, interpolated piecewise
/// linearly in the polar angle. Tables exist for potential evaluation and
/// profiles only; the solvers require a ball.
struct Gauge {
  enum class Kind { BallRadius, DirectionTable };

  Kind kind = Kind::BallRadius;
  double radius = 1.0;              // BallRadius
  std::vector<double> table;        // DirectionTable: phi at equispaced polar angles in [0, pi]
  double lipschitz_bound = 0.0;     // max |dphi/dtheta| of the table

  static Gauge ball(double R);
  static Gauge direction_table(std::vector<double> samples);

  bool is_ball() const { return kind == Kind::BallRadius; }
  /// Largest tabulated radius (== radius for a ball).
  double max_radius() const;
};

struct DomainSpec {
  int n = 3;     // dimension, >= 3
  Gauge gauge;

  static DomainSpec ball(int n, double R);
};

/// Throws ConfigError unless n >= 3 and the gauge values are positive.
void validate(const DomainSpec& d);

/// phi(x/|x|). For a ball gauge any x (including 0) returns R; a direction
/// table needs a nonzero x.
double eval_phi(const DomainSpec& d, std::span<const double> x);

/// Hardy coupling threshold ((n-2)/2)^2.
double critical_mu(int n);

enum class PotentialVariant {
  Exact,                  // |x|^-2 (1 - |x|^{n-2} phi^{2-n})^-2
  AsPrinted,              // |x|^-2 [1 - |x|^{n-2} phi^{2-n}]   (kept for documentation parity)
  Truncated,              // min(N, Exact)
  Regularized,            // (|x|+eps)^-2 (1+eps - |x|^{n-2} phi^{2-n})^-2
  ClassicalInverseSquare, // |x|^-2
};

struct PotentialSpec {
  PotentialVariant variant = PotentialVariant::Exact;
  double mu = 0.0;
  double trunc_N = 0.0;   // Truncated
  double eps = 0.0;       // Regularized

  static PotentialSpec exact(double mu);
  static PotentialSpec as_printed(double mu);
  static PotentialSpec truncated(double mu, double N);
  static PotentialSpec regularized(double mu, double eps);
  static PotentialSpec classical(double mu);
};

void validate(const PotentialSpec& p);

/// Radial evaluation against gauge value phi (phi = R on a ball).
/// Throws SingularityError at r = 0 or r = phi for the Exact/AsPrinted variants.
double eval_potential_radial(const DomainSpec& d, const PotentialSpec& p, double r, double phi);

/// Radial evaluation on a ball gauge.
double eval_potential(const DomainSpec& d, const PotentialSpec& p, double r);

/// Point evaluation (any gauge).
double eval_potential_at(const DomainSpec& d, const PotentialSpec& p, std::span<const double> x);

/// Fill psi[i] = eval_potential(d, p, r[i]); the node-sampling kernel.
void sample_potential(const DomainSpec& d, const PotentialSpec& p,
                      std::span<const double> r, std::span<double> psi);

struct PotentialInfimum {
  double value = 0.0;
  double argmin_r = 0.0;
  bool sampled = false;   // true when found by sampling (non-ball gauge)
};

/// m = inf over the domain of the Exact potential. Closed form on a ball,
/// attained at r* = R (n-1)^{-1/(n-2)}; sampled with a flag otherwise.
PotentialInfimum inf_potential(const DomainSpec& d);

} // namespace shl

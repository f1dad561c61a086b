#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace shl {

/// Mesh grading on (0, R). Geometric grading clusters nodes at both ends:
/// gaps start at first_rel*R (resp. last_rel*R) and grow by 1/q toward a
/// uniform middle. first_rel/last_rel control how deep the mesh reaches into
/// the two singular layers.
struct Grading {
  enum class Kind { Uniform, Geometric };
  Kind kind = Kind::Geometric;
  double q = 0.85;
  double first_rel = 1e-6;
  double last_rel = 1e-6;

  static Grading uniform();
  static Grading geometric(double q = 0.85, double first_rel = 1e-6, double last_rel = 1e-6);
};

/// 1-D radial mesh with quadrature for the measure r^{n-1} dr. Nodes live
/// strictly inside (0, R): the Dirichlet boundary r = R and the regular
/// point r = 0 carry no unknowns.
struct RadialGrid {
  int n = 3;
  double R = 1.0;
  Grading grading;
  std::vector<double> nodes;        // strictly increasing, in (0, R)
  std::vector<double> quad_weights; // sum w_i f(r_i) ~ integral_0^R f r^{n-1} dr

  std::size_t size() const { return nodes.size(); }
};

/// Throws ConfigError for M < 8 or a geometric ratio outside (0,1).
RadialGrid build_grid(int n, double R, std::size_t M, const Grading& grading);

/// Surface area of the unit (n-1)-sphere; converts radial integrals to
/// integrals over the n-dimensional ball.
double unit_sphere_area(int n);

/// sum w_i f_i (radial integral, no angular factor).
double quadrature(const RadialGrid& g, std::span<const double> f);

/// integral over the ball of u^2, i.e. unit_sphere_area * sum w u^2.
double l2_norm_sq(const RadialGrid& g, std::span<const double> u);

/// Centered difference quotients on the nonuniform mesh (one-sided at the ends).
std::vector<double> difference_quotient(const RadialGrid& g, std::span<const double> u);

struct AnnulusNorm {
  double value = 0.0;
  bool empty = false;   // set when rho >= (1-delta)R
};

/// H^1 norm of u over the annulus {rho < r < (1-delta) R}:
/// sqrt(omega_{n-1} * sum_{nodes inside} w (u^2 + u'^2)), with the
/// difference-quotient gradient. Accumulation is scaled by max|u|,|u'| on the
/// window so values far below 1e-154 do not underflow when squared.
AnnulusNorm h1_norm_annulus(const RadialGrid& g, std::span<const double> u,
                            double rho, double delta);

/// Diagnostic dump (columns r, psi, mass_weight).
void write_grid_csv(const std::string& path, const RadialGrid& g, std::span<const double> psi);

} // namespace shl

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "shl/domain.hpp"
#include "shl/grid.hpp"
#include "shl/operator.hpp"

namespace shl {

/// Principal eigenpair of the generalized problem
///   (K - mu diag(m psi)) v = lambda diag(m) v.
/// vector is normalized to unit L^2 norm over the ball (angular factor
/// included) and sign-normalized positive. residual is the scaled residual of
/// the mass-reduced symmetric form: ||B y - lambda y|| measured against the
/// solver tolerance plus the rounding floor of the matvec, so residual <= tol
/// certifies convergence on any mesh, however deeply graded.
struct EigenPair {
  double lambda = 0.0;
  std::vector<double> vector;
  double residual = 0.0;
  int iterations = 0;
};

struct EigenOptions {
  double tol = 1e-10;
  int max_iter = 200;
  std::vector<double> start; // optional start vector (nodal); empty: all-ones
};

/// Shifted inverse iteration on the mass-reduced symmetric tridiagonal form.
/// Deterministic all-ones start; the shift begins below the spectrum
/// (Gershgorin) and switches to Rayleigh updates, with a Sturm-count
/// verification that the converged value is the smallest eigenvalue (falls
/// back to bisection refinement if not). Throws NumericError on
/// non-convergence, carrying the last residual in the message.
EigenPair principal_eigenpair(const DiscreteOperator& op, const EigenOptions& opt = {});

/// Generalized smallest eigenpair for arbitrary diagonal weight (the Hardy
/// module reuses this with weight = mass .* psi).
EigenPair smallest_generalized(const SymTridiag& K, std::span<const double> weight,
                               double l2_normalization, const EigenOptions& opt = {});

struct SweepWindow {
  double rho = 0.3;
  double delta = 0.3;
};

struct EigenSweepEntry {
  double eps = 0.0;
  double lambda1 = 0.0;
  double h1_window_norm = 0.0;
  int iterations = 0;
  double residual = 0.0;
  double identity_rel_error = 0.0; // integrated identity with the fixed bump
  bool solver_failed = false;
};

struct EigenSweepReport {
  std::vector<EigenSweepEntry> entries; // sorted by decreasing eps
  SweepWindow window;
  std::size_t grid_size = 0;
  double grid_first_node = 0.0;
};

struct SweepGridParams {
  std::size_t M = 4000;
  double q = 0.85;
  double first_rel_cap = 1e-6; // deepened automatically to min(eps)/100/R
};

/// Regularized-potential sweep for supercritical mu. All entries share one
/// grid fine enough for the smallest eps (first node <= min(eps)/100), so the
/// pointwise monotonicity of Psi_eps carries over to the discrete lambda1.
/// Entries fan out across threads and are merged in input order.
EigenSweepReport epsilon_sweep(const DomainSpec& d, double mu,
                               std::span<const double> eps_list, SweepWindow window,
                               const SweepGridParams& gp = {},
                               const EigenOptions& opt = {});

/// C^2 bump: 1 on [rho, (1-delta)R], 0 below rho/2 and above (1-delta/2)R,
/// quintic transitions. Value, first and second radial derivative.
struct BumpValue {
  double eta = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};
BumpValue cutoff_bump(double r, double rho, double delta, double R);

/// Relative defect of the integrated identity
///   int eta |grad phi|^2 - lambda int eta phi^2
///     = mu int eta Psi phi^2 + 1/2 int phi^2 Lap(eta),
/// each term computed by independent quadrature (the Laplacian of the bump
/// analytically). Normalized by the largest term magnitude.
double localization_identity_error(const RadialGrid& g, const DiscreteOperator& op,
                                   const EigenPair& pair, SweepWindow window);

} // namespace shl

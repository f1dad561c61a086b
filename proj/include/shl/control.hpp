#pragma once

#include <span>
#include <string>
#include <vector>

#include "shl/grid.hpp"
#include "shl/parabolic.hpp"
#include "shl/spectral.hpp"

namespace shl {

/// One retained entry of the noncontrollability cost sweep. For lambda1 < 0
/// both bound terms are positive; term_A overflows to +inf for strongly
/// negative lambda1*T, which is the honest IEEE reading of the bound.
struct CostEntry {
  double eps = 0.0;
  double lambda1 = 0.0;
  double phi_h1_omega = 0.0; // ||phi_1^eps||_{H^1(omega)}
  double term_A = 0.0;       // -(e^{-2 lambda T} - 1) / (16 lambda)
  double term_B = 0.0;       // -lambda / (4 ||phi||_{H^1(omega)})
  double j_lower = 0.0;      // min(term_A, term_B)
};

struct CostReport {
  std::vector<CostEntry> entries;   // decreasing eps, entries with lambda1 >= 0 dropped
  std::vector<std::string> notes;   // one per dropped eps
  double T = 0.0;
  SweepWindow window;
  bool j_monotone_increasing = true;
};

/// min of the two closed-form terms of the cost bound. Requires lambda1 < 0.
double cost_lower_bound(double lambda1, double phi_h1_omega, double T);

/// Cost sweep over decreasing eps: principal eigenpair per eps (on the shared
/// sweep grid), window H^1 norm, bound with u0 = phi_1^eps. Entries with
/// lambda1 >= 0 are dropped with a note (eps too large for the bound).
CostReport divergence_sweep(const DomainSpec& d, double mu, std::span<const double> eps_list,
                            SweepWindow window, double T, const SweepGridParams& gp = {},
                            const EigenOptions& opt = {});

/// Projections of a recorded heat run onto the principal eigenfunction:
/// a(t) = <u(t), phi>, b(t) = <f(t), phi>, plus the centered-difference
/// residual of a' + lambda a = b.
struct ProjectionTrace {
  std::vector<double> times;
  std::vector<double> a;
  std::vector<double> b;
  std::vector<double> ode_residual; // at interior times
  double lambda1 = 0.0;
};

/// Requires run.states recorded on the same grid the eigenpair was computed on.
ProjectionTrace project_coefficients(const RadialGrid& g, const HeatResult& run,
                                     const Forcing& forcing, const EigenPair& eig);

/// Discrete H^{-1}(Omega) norm: sqrt(<f, z>_{L^2}) with K0 z = M f and K0 the
/// mu = 0 stiffness.
double h_minus1_norm(const RadialGrid& g, std::span<const double> f);

/// The four right-hand sides of the lower-bound estimate chain, evaluated for
/// a given (lambda < 0, T, b series on a uniform time mesh). Each successive
/// value can only decrease; the last two agree analytically.
struct ChainSample {
  double lhs = 0.0;  // int a^2
  double r1 = 0.0;   // 1/2 int e^{-2 lambda t} - int (conv b)^2
  double r2 = 0.0;   // ... with Cauchy-Schwarz applied to the convolution
  double r3 = 0.0;   // ... with the time integrals decoupled
  double r4 = 0.0;   // closed form of r3
};

ChainSample evaluate_estimate_chain(double lambda, double T, std::span<const double> b_series);

} // namespace shl

#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace shl {

/// Symmetric tridiagonal matrix: diag[i] on the diagonal, off[i] coupling
/// rows i and i+1.
struct SymTridiag {
  std::vector<double> diag;
  std::vector<double> off;

  std::size_t size() const { return diag.size(); }
};

/// LDL^T factorization of (T - shift I). Solves are forward/back sweeps,
/// inherently sequential, so there is no parallel variant.
struct LdltFactor {
  std::vector<double> d;   // pivots
  std::vector<double> l;   // subdiagonal multipliers
  bool positive_definite = false;
  int first_nonpositive_pivot = -1; // -1 when SPD

  std::size_t size() const { return d.size(); }
};

LdltFactor ldlt(const SymTridiag& t, double shift = 0.0);

/// Solve (T - shift I) x = b using a previously computed factor, in place.
void ldlt_solve(const LdltFactor& f, std::span<double> x);

/// Number of eigenvalues of T strictly below x (Sturm count on the LDL^T
/// pivot signs, with the standard guard against zero pivots).
int sturm_count_below(const SymTridiag& t, double x);

/// Gershgorin bounds [lo, hi] containing the whole spectrum.
std::pair<double, double> gershgorin(const SymTridiag& t);

/// Bracket [lo, hi] around the k-th smallest eigenvalue (k = 0 for the
/// smallest) by Sturm bisection: count(lo) <= k < count(hi). Relative width
/// tol_rel. Sturm counting stays accurate even when the matrix carries the
/// huge near-corner entries of deeply graded meshes, unlike anything scaled
/// by the matrix norm.
std::pair<double, double> eigenvalue_bracket(const SymTridiag& t, int k, double tol_rel);

/// Midpoint of eigenvalue_bracket; used by the test oracles.
double eigenvalue_bisect(const SymTridiag& t, int k, double tol_rel = 1e-14);

} // namespace shl

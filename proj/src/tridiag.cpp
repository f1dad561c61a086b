#include "shl/tridiag.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

namespace shl {

LdltFactor ldlt(const SymTridiag& t, double shift) {
  const std::size_t m = t.size();
  LdltFactor f;
  f.d.resize(m);
  f.l.assign(m > 0 ? m - 1 : 0, 0.0);
  f.positive_definite = true;
  if (m == 0) return f;
  f.d[0] = t.diag[0] - shift;
  if (!(f.d[0] > 0.0) && f.first_nonpositive_pivot < 0) {
    f.positive_definite = false;
    f.first_nonpositive_pivot = 0;
  }
  for (std::size_t i = 1; i < m; ++i) {
    const double li = t.off[i - 1] / f.d[i - 1];
    f.l[i - 1] = li;
    f.d[i] = (t.diag[i] - shift) - t.off[i - 1] * li;
    if (!(f.d[i] > 0.0) && f.first_nonpositive_pivot < 0) {
      f.positive_definite = false;
      f.first_nonpositive_pivot = static_cast<int>(i);
    }
  }
  return f;
}

void ldlt_solve(const LdltFactor& f, std::span<double> x) {
  const std::size_t m = f.size();
  assert(x.size() == m);
  for (std::size_t i = 1; i < m; ++i) x[i] -= f.l[i - 1] * x[i - 1];
  for (std::size_t i = 0; i < m; ++i) x[i] /= f.d[i];
  for (std::size_t i = m - 1; i-- > 0;) x[i] -= f.l[i] * x[i + 1];
}

int sturm_count_below(const SymTridiag& t, double x) {
  const std::size_t m = t.size();
  int count = 0;
  double d = 1.0;
  const double tiny = std::numeric_limits<double>::min();
  for (std::size_t i = 0; i < m; ++i) {
    const double offsq = (i == 0) ? 0.0 : t.off[i - 1] * t.off[i - 1];
    d = (t.diag[i] - x) - offsq / d;
    if (d == 0.0) d = -tiny; // treat an exact zero pivot as a sign change
    if (d < 0.0) ++count;
  }
  return count;
}

std::pair<double, double> gershgorin(const SymTridiag& t) {
  const std::size_t m = t.size();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(t.off[i - 1]);
    if (i + 1 < m) r += std::abs(t.off[i]);
    lo = std::min(lo, t.diag[i] - r);
    hi = std::max(hi, t.diag[i] + r);
  }
  return {lo, hi};
}

std::pair<double, double> eigenvalue_bracket(const SymTridiag& t, int k, double tol_rel) {
  auto [lo, hi] = gershgorin(t);
  const double span = std::max(hi - lo, 1.0);
  // bisection invariant: count(lo) <= k < count(hi)
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (sturm_count_below(t, mid) > k)
      hi = mid;
    else
      lo = mid;
    const double scale = std::max({std::abs(lo), std::abs(hi), 1.0});
    if (hi - lo <= tol_rel * scale || hi - lo <= 1e-300 * span) break;
  }
  return {lo, hi};
}

double eigenvalue_bisect(const SymTridiag& t, int k, double tol_rel) {
  auto [lo, hi] = eigenvalue_bracket(t, k, tol_rel);
  return 0.5 * (lo + hi);
}

} // namespace shl

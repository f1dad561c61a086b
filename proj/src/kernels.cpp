#include "shl/kernels.hpp"

#include <algorithm>
#include <cassert>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace shl {

namespace serial {

double sum(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += v;
  return s;
}

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double dot3(std::span<const double> w, std::span<const double> a, std::span<const double> b) {
  assert(w.size() == a.size() && a.size() == b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += w[i] * a[i] * b[i];
  return s;
}

void tridiag_apply(std::span<const double> diag, std::span<const double> off,
                   std::span<const double> x, std::span<double> y) {
  const std::size_t m = diag.size();
  assert(off.size() + 1 == m && x.size() == m && y.size() == m);
  for (std::size_t i = 0; i < m; ++i) {
    double v = diag[i] * x[i];
    if (i > 0) v += off[i - 1] * x[i - 1];
    if (i + 1 < m) v += off[i] * x[i + 1];
    y[i] = v;
  }
}

} // namespace serial

namespace {

inline std::size_t block_count(std::size_t n) {
  return (n + kernel_block - 1) / kernel_block;
}

// Runs fn(block_index) over all blocks, in parallel when worthwhile.
template <typename Fn>
void for_blocks(std::size_t nblocks, Fn&& fn) {
#if defined(_OPENMP)
  if (nblocks > 1) {
#pragma omp parallel for schedule(static)
    for (long long b = 0; b < static_cast<long long>(nblocks); ++b)
      fn(static_cast<std::size_t>(b));
    return;
  }
#endif
  for (std::size_t b = 0; b < nblocks; ++b) fn(b);
}

template <typename BlockSum>
double blocked_reduce(std::size_t n, BlockSum&& block_sum) {
  if (n == 0) return 0.0;
  const std::size_t nb = block_count(n);
  std::vector<double> partial(nb);
  for_blocks(nb, [&](std::size_t b) {
    const std::size_t lo = b * kernel_block;
    const std::size_t hi = std::min(n, lo + kernel_block);
    partial[b] = block_sum(lo, hi);
  });
  // partials summed in block order: result independent of thread count
  double s = 0.0;
  for (double v : partial) s += v;
  return s;
}

} // namespace

namespace par {

double sum(std::span<const double> a) {
  return blocked_reduce(a.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += a[i];
    return s;
  });
}

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  return blocked_reduce(a.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += a[i] * b[i];
    return s;
  });
}

double dot3(std::span<const double> w, std::span<const double> a, std::span<const double> b) {
  assert(w.size() == a.size() && a.size() == b.size());
  return blocked_reduce(a.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += w[i] * a[i] * b[i];
    return s;
  });
}

void tridiag_apply(std::span<const double> diag, std::span<const double> off,
                   std::span<const double> x, std::span<double> y) {
  const std::size_t m = diag.size();
  assert(off.size() + 1 == m && x.size() == m && y.size() == m);
  const std::size_t nb = block_count(m);
  for_blocks(nb, [&](std::size_t b) {
    const std::size_t lo = b * kernel_block;
    const std::size_t hi = std::min(m, lo + kernel_block);
    for (std::size_t i = lo; i < hi; ++i) {
      double v = diag[i] * x[i];
      if (i > 0) v += off[i - 1] * x[i - 1];
      if (i + 1 < m) v += off[i] * x[i + 1];
      y[i] = v;
    }
  });
}

} // namespace par

int max_threads() {
#if defined(_OPENMP)
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_threads(int n) {
#if defined(_OPENMP)
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

} // namespace shl

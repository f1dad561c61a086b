#pragma once

#include <cstddef>
#include <span>
#include <vector>

// Data-parallel inner loops used throughout the solvers.
//
// Two implementations share each signature:
//   shl::serial  - plain loops, the reference the tests compare against
//   shl::par     - OpenMP over fixed-size blocks
//
// par:: reductions accumulate one partial per block and sum the partials in
// block order, so the result is bit-identical for any thread count (including
// the no-OpenMP build). That keeps every CSV reproducible no matter how the
// host schedules threads. Benchmarks comparing the two live in tools/bench.

namespace shl {

inline constexpr std::size_t kernel_block = 2048;

namespace serial {

double sum(std::span<const double> a);
double dot(std::span<const double> a, std::span<const double> b);
/// Triple product sum(w[i]*a[i]*b[i]); the weighted inner products everywhere.
double dot3(std::span<const double> w, std::span<const double> a, std::span<const double> b);

/// y = diag.x + off-coupled neighbors (symmetric tridiagonal matvec).
void tridiag_apply(std::span<const double> diag, std::span<const double> off,
                   std::span<const double> x, std::span<double> y);

} // namespace serial

namespace par {

double sum(std::span<const double> a);
double dot(std::span<const double> a, std::span<const double> b);
double dot3(std::span<const double> w, std::span<const double> a, std::span<const double> b);
void tridiag_apply(std::span<const double> diag, std::span<const double> off,
                   std::span<const double> x, std::span<double> y);

} // namespace par

/// Threads used by par:: kernels and sweep fan-out (1 when OpenMP is absent).
int max_threads();
void set_threads(int n);

} // namespace shl

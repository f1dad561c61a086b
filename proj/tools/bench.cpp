// Timing harness comparing the serial reference kernels with the OpenMP
// blocked kernels, plus one sweep-level fan-out case. Results print as a
// small table; wall time via omp_get_wtime when available.

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "shl/domain.hpp"
#include "shl/grid.hpp"
#include "shl/kernels.hpp"
#include "shl/operator.hpp"
#include "shl/spectral.hpp"

namespace {

double now() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

template <typename Fn>
double time_best(int reps, Fn&& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const double t0 = now();
    fn();
    best = std::min(best, now() - t0);
  }
  return best;
}

volatile double sink; // keep the optimizer honest

} // namespace

int main() {
  const std::size_t n = 1 << 22;
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> unif(0.1, 1.0);
  std::vector<double> a(n), b(n), w(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = unif(rng);
    b[i] = unif(rng);
    w[i] = unif(rng);
  }
  std::vector<double> diag(n, 2.0), off(n - 1, -1.0);

  std::printf("threads: %d, vector length: %zu\n\n", shl::max_threads(), n);
  std::printf("%-22s %12s %12s %8s\n", "kernel", "serial [s]", "parallel [s]", "speedup");

  auto report = [&](const char* name, double ts, double tp) {
    std::printf("%-22s %12.6f %12.6f %8.2f\n", name, ts, tp, ts / tp);
  };

  report("dot",
         time_best(5, [&] { sink = shl::serial::dot(a, b); }),
         time_best(5, [&] { sink = shl::par::dot(a, b); }));
  report("dot3",
         time_best(5, [&] { sink = shl::serial::dot3(w, a, b); }),
         time_best(5, [&] { sink = shl::par::dot3(w, a, b); }));
  report("tridiag_apply",
         time_best(5, [&] { shl::serial::tridiag_apply(diag, off, a, y); }),
         time_best(5, [&] { shl::par::tridiag_apply(diag, off, a, y); }));

  // sweep fan-out: independent eigenvalue solves per eps
  const shl::DomainSpec dom = shl::DomainSpec::ball(3, 1.0);
  const std::vector<double> eps = {1e-1, 3e-2, 1e-2, 3e-3, 1e-3, 3e-4, 1e-4};
  shl::SweepGridParams gp;
  gp.M = 2000;
  const double t_sweep = time_best(2, [&] {
    const auto rep = shl::epsilon_sweep(dom, 1.0, eps, {0.3, 0.3}, gp);
    sink = rep.entries.back().lambda1;
  });
  std::printf("\neps-sweep (7 solves, M=2000): %.4f s with %d threads\n", t_sweep,
              shl::max_threads());
  return 0;
}

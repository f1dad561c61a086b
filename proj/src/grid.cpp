#include "shl/grid.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdio>
#include <string>

#include "shl/errors.hpp"
#include "shl/kernels.hpp"

namespace shl {

Grading Grading::uniform() {
  Grading g;
  g.kind = Kind::Uniform;
  return g;
}

Grading Grading::geometric(double q, double first_rel, double last_rel) {
  Grading g;
  g.kind = Kind::Geometric;
  g.q = q;
  g.first_rel = first_rel;
  g.last_rel = last_rel;
  return g;
}

namespace {

struct GapPlan {
  std::size_t k_left = 0, k_right = 0;
  double h_mid = 0.0;
};

// Choose the uniform middle gap so the geometric blocks (growing by 1/q from
// each end) plus the middle fill (0, R) with exactly M+1 gaps.
GapPlan plan_geometric(std::size_t M, double R, double q, double h0, double hL) {
  const double logq = std::log(1.0 / q);
  auto count_side = [&](double h_end, double h_mid) -> std::size_t {
    if (h_mid <= h_end) return 0;
    return static_cast<std::size_t>(std::floor(std::log(h_mid / h_end) / logq)) + 1;
  };
  auto side_sum = [&](double h_end, std::size_t k) {
    double s = 0.0, g = h_end;
    for (std::size_t j = 0; j < k; ++j, g /= q) s += g;
    return s;
  };
  auto total = [&](double h_mid, GapPlan& p) -> double {
    p.k_left = count_side(h0, h_mid);
    p.k_right = count_side(hL, h_mid);
    const std::size_t geo = p.k_left + p.k_right;
    if (geo + 1 > M + 1) return -1.0; // no room for a middle block
    const std::size_t m_mid = M + 1 - geo;
    return side_sum(h0, p.k_left) + side_sum(hL, p.k_right) +
           static_cast<double>(m_mid) * h_mid;
  };
  double lo = std::min(h0, hL), hi = R;
  GapPlan p;
  for (int it = 0; it < 400; ++it) {
    const double mid = std::sqrt(lo * hi); // h spans many decades; bisect in log
    const double t = total(mid, p);
    if (t < 0.0 || t > R)
      hi = mid;
    else
      lo = mid;
  }
  const double t = total(lo, p);
  if (t < 0.0)
    throw ConfigError("geometric grading infeasible for the requested M and end gaps");
  const std::size_t m_mid = M + 1 - p.k_left - p.k_right;
  p.h_mid = (R - side_sum(h0, p.k_left) - side_sum(hL, p.k_right)) / static_cast<double>(m_mid);
  if (!(p.h_mid > 0.0))
    throw ConfigError("geometric grading collapsed: increase M or the end gaps");
  return p;
}

} // namespace

RadialGrid build_grid(int n, double R, std::size_t M, const Grading& grading) {
  if (n < 3) throw ConfigError("build_grid: n must be >= 3");
  if (!(R > 0.0)) throw ConfigError("build_grid: R must be positive");
  // uniform partitions make sense from 3 nodes; the two-sided geometric
  // construction needs room for its end blocks
  const std::size_t min_nodes = (grading.kind == Grading::Kind::Uniform) ? 3 : 8;
  if (M < min_nodes) throw ConfigError("build_grid: too few nodes");

  RadialGrid g;
  g.n = n;
  g.R = R;
  g.grading = grading;
  g.nodes.resize(M);

  if (grading.kind == Grading::Kind::Uniform) {
    const double h = R / static_cast<double>(M + 1);
    for (std::size_t i = 0; i < M; ++i) g.nodes[i] = h * static_cast<double>(i + 1);
  } else {
    if (!(grading.q > 0.0 && grading.q < 1.0))
      throw ConfigError("build_grid: geometric ratio q must lie in (0,1)");
    if (!(grading.first_rel > 0.0 && grading.last_rel > 0.0))
      throw ConfigError("build_grid: end gaps must be positive");
    const double h0 = grading.first_rel * R;
    const double hL = grading.last_rel * R;
    const GapPlan p = plan_geometric(M, R, grading.q, h0, hL);
    // left block accumulates from 0, right block from R; this keeps the nodes
    // near R accurate even when the end gaps are ~1e-14 R
    double acc = 0.0, gap = h0;
    for (std::size_t j = 0; j < p.k_left; ++j, gap /= grading.q) {
      acc += gap;
      g.nodes[j] = acc;
    }
    const double left_anchor = acc;
    acc = 0.0;
    gap = hL;
    for (std::size_t j = 0; j < p.k_right; ++j, gap /= grading.q) {
      acc += gap;
      g.nodes[M - 1 - j] = R - acc;
    }
    for (std::size_t i = p.k_left; i < M - p.k_right; ++i)
      g.nodes[i] = left_anchor + p.h_mid * static_cast<double>(i - p.k_left + 1);
  }

  for (std::size_t i = 0; i + 1 < M; ++i)
    if (!(g.nodes[i] < g.nodes[i + 1]))
      throw NumericError("build_grid produced non-monotone nodes");
  if (!(g.nodes.front() > 0.0 && g.nodes.back() < R))
    throw NumericError("build_grid produced nodes outside (0,R)");

  // trapezoid against r^{n-1} dr between nodes; the end strips [0,r_1] and
  // [r_M,R] are integrated exactly against the node value
  g.quad_weights.assign(M, 0.0);
  const auto& r = g.nodes;
  for (std::size_t i = 0; i < M; ++i) {
    double w = 0.0;
    if (i > 0) w += 0.5 * (r[i] - r[i - 1]) * std::pow(r[i], n - 1);
    if (i + 1 < M) w += 0.5 * (r[i + 1] - r[i]) * std::pow(r[i], n - 1);
    g.quad_weights[i] = w;
  }
  g.quad_weights.front() += std::pow(r.front(), n) / n;
  g.quad_weights.back() += (std::pow(R, n) - std::pow(r.back(), n)) / n;
  return g;
}

double unit_sphere_area(int n) {
  return 2.0 * std::pow(M_PI, n / 2.0) / std::tgamma(n / 2.0);
}

double quadrature(const RadialGrid& g, std::span<const double> f) {
  return par::dot(g.quad_weights, f);
}

double l2_norm_sq(const RadialGrid& g, std::span<const double> u) {
  return unit_sphere_area(g.n) * par::dot3(g.quad_weights, u, u);
}

std::vector<double> difference_quotient(const RadialGrid& g, std::span<const double> u) {
  const std::size_t M = g.size();
  assert(u.size() == M);
  const auto& r = g.nodes;
  std::vector<double> du(M);
  for (std::size_t i = 0; i < M; ++i) {
    if (i == 0) {
      du[i] = (u[1] - u[0]) / (r[1] - r[0]);
    } else if (i + 1 == M) {
      du[i] = (u[M - 1] - u[M - 2]) / (r[M - 1] - r[M - 2]);
    } else {
      const double hm = r[i] - r[i - 1];
      const double hp = r[i + 1] - r[i];
      du[i] = (hm / (hp + hm)) * (u[i + 1] - u[i]) / hp +
              (hp / (hp + hm)) * (u[i] - u[i - 1]) / hm;
    }
  }
  return du;
}

AnnulusNorm h1_norm_annulus(const RadialGrid& g, std::span<const double> u,
                            double rho, double delta) {
  AnnulusNorm out;
  const double hi = (1.0 - delta) * g.R;
  if (rho >= hi) {
    out.empty = true;
    return out;
  }
  const auto du = difference_quotient(g, u);
  const auto& r = g.nodes;
  double scale = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (r[i] <= rho || r[i] >= hi) continue;
    scale = std::max({scale, std::abs(u[i]), std::abs(du[i])});
  }
  if (scale == 0.0) return out;
  double acc = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (r[i] <= rho || r[i] >= hi) continue;
    const double a = u[i] / scale;
    const double b = du[i] / scale;
    acc += g.quad_weights[i] * (a * a + b * b);
  }
  out.value = scale * std::sqrt(unit_sphere_area(g.n) * acc);
  return out;
}

void write_grid_csv(const std::string& path, const RadialGrid& g, std::span<const double> psi) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw Error("io", "cannot open " + path);
  std::fputs("r,psi,mass_weight\n", f);
  for (std::size_t i = 0; i < g.size(); ++i)
    std::fprintf(f, "%.17g,%.17g,%.17g\n", g.nodes[i], psi.empty() ? 0.0 : psi[i],
                 g.quad_weights[i]);
  std::fclose(f);
}

} // namespace shl

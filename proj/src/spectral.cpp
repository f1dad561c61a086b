#include "shl/spectral.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <string>

#include "shl/errors.hpp"
#include "shl/kernels.hpp"

namespace shl {

namespace {

// LDL^T of (B - shift I) with a per-row pivot floor so inverse iteration
// survives shifts that land exactly on an eigenvalue.
LdltFactor guarded_factor(const SymTridiag& b, double shift) {
  LdltFactor f = ldlt(b, shift);
  const std::size_t m = b.size();
  for (std::size_t i = 0; i < m; ++i) {
    double row = std::abs(b.diag[i] - shift);
    if (i > 0) row += std::abs(b.off[i - 1]);
    if (i + 1 < m) row += std::abs(b.off[i]);
    const double floor_ = 1e-300 + 1e-20 * row;
    if (std::abs(f.d[i]) < floor_) f.d[i] = (f.d[i] < 0.0 ? -floor_ : floor_);
  }
  return f;
}

double norm2(std::span<const double> y) { return std::sqrt(par::dot(y, y)); }

struct ReducedProblem {
  SymTridiag b;          // D^{-1} A D^{-1}, D = sqrt(weight)
  std::vector<double> d; // sqrt(weight)
};

ReducedProblem reduce(const SymTridiag& a, std::span<const double> weight) {
  const std::size_t m = a.size();
  ReducedProblem rp;
  rp.d.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (!(weight[i] > 0.0))
      throw PreconditionError("generalized eigenproblem weight must be positive");
    rp.d[i] = std::sqrt(weight[i]);
  }
  rp.b.diag.resize(m);
  rp.b.off.resize(m - 1);
  for (std::size_t i = 0; i < m; ++i) rp.b.diag[i] = a.diag[i] / weight[i];
  for (std::size_t i = 0; i + 1 < m; ++i) rp.b.off[i] = a.off[i] / (rp.d[i] * rp.d[i + 1]);
  return rp;
}

} // namespace

EigenPair smallest_generalized(const SymTridiag& a, std::span<const double> weight,
                               double l2_normalization, const EigenOptions& opt) {
  const std::size_t m = a.size();
  if (m == 0) throw PreconditionError("empty operator");
  if (!(opt.tol > 0.0)) throw PreconditionError("eigensolver tolerance must be positive");

  ReducedProblem rp = reduce(a, weight);

  // Sturm bisection brackets the smallest eigenvalue first: it is accurate
  // relative to the eigenvalue even when deeply graded meshes push matrix
  // entries to 1e14, where anything scaled by the matrix norm goes blind.
  const auto [blo, bhi] = eigenvalue_bracket(rp.b, 0, 1e-4);

  // deterministic start: all-ones in the original variables unless a start
  // vector was supplied
  std::vector<double> y(m);
  if (opt.start.empty()) {
    y.assign(rp.d.begin(), rp.d.end());
  } else {
    if (opt.start.size() != m)
      throw PreconditionError("eigensolver start vector has the wrong size");
    for (std::size_t i = 0; i < m; ++i) y[i] = rp.d[i] * opt.start[i];
  }
  {
    const double nrm = norm2(y);
    if (!(nrm > 0.0)) throw PreconditionError("eigensolver start vector is zero");
    for (double& v : y) v /= nrm;
  }

  std::vector<double> by(m);
  const double width = std::max(bhi - blo, 1e-30);
  double shift = blo - 0.5 * width; // strictly below lambda_1
  double rho = 0.0, resid_abs = 0.0, threshold = 0.0;
  int it = 0;
  bool converged = false;
  for (it = 1; it <= opt.max_iter; ++it) {
    LdltFactor f = guarded_factor(rp.b, shift);
    ldlt_solve(f, y);
    const double nrm = norm2(y);
    if (!(nrm > 0.0) || !std::isfinite(nrm))
      throw NumericError("inverse iteration produced a non-finite iterate");
    for (double& v : y) v /= nrm;

    par::tridiag_apply(rp.b.diag, rp.b.off, y, by);
    rho = par::dot(y, by);
    double rr = 0.0, noise = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double e = by[i] - rho * y[i];
      rr += e * e;
      double row = std::abs(rp.b.diag[i]) + std::abs(rho);
      if (i > 0) row += std::abs(rp.b.off[i - 1]);
      if (i + 1 < m) row += std::abs(rp.b.off[i]);
      const double ni = row * std::abs(y[i]);
      noise += ni * ni;
    }
    resid_abs = std::sqrt(rr);
    // the residual cannot drop below the rounding noise of the matvec itself;
    // deeply graded meshes push near-origin row scales to 1e13 and beyond
    const double floor_ = 4.0 * std::numeric_limits<double>::epsilon() * std::sqrt(noise);
    threshold = opt.tol * std::max(1.0, std::abs(rho)) + floor_;
    if (resid_abs <= threshold) {
      converged = true;
      break;
    }
    // Rayleigh update kept strictly below the current estimate so the shifted
    // matrix stays an SPD M-matrix (iterates of positive vectors stay positive)
    shift = rho - 2.0 * resid_abs - 1e-12 * std::max(1.0, std::abs(rho));
  }
  if (!converged)
    throw NumericError("principal eigenpair did not converge in " +
                       std::to_string(opt.max_iter) + " iterations (last lambda " +
                       std::to_string(rho) + ", residual " + std::to_string(resid_abs) +
                       ", threshold " + std::to_string(threshold) + ")");

  // verify we converged to the smallest eigenvalue, not an interior one
  const double guard = std::max(10.0 * resid_abs, 1e-10 * std::max(1.0, std::abs(rho)));
  if (rho > bhi + guard || sturm_count_below(rp.b, rho - guard) > 0) {
    shift = blo - std::max(1e-8 * std::max(1.0, std::abs(blo)), width);
    y.assign(rp.d.begin(), rp.d.end());
    double nrm = norm2(y);
    for (double& v : y) v /= nrm;
    for (int k = 0; k < 6; ++k) {
      LdltFactor f = guarded_factor(rp.b, shift);
      ldlt_solve(f, y);
      nrm = norm2(y);
      for (double& v : y) v /= nrm;
      ++it;
    }
    par::tridiag_apply(rp.b.diag, rp.b.off, y, by);
    rho = par::dot(y, by);
    double rr = 0.0, noise = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double e = by[i] - rho * y[i];
      rr += e * e;
      double row = std::abs(rp.b.diag[i]) + std::abs(rho);
      if (i > 0) row += std::abs(rp.b.off[i - 1]);
      if (i + 1 < m) row += std::abs(rp.b.off[i]);
      noise += row * row * y[i] * y[i];
    }
    resid_abs = std::sqrt(rr);
    threshold = opt.tol * std::max(1.0, std::abs(rho)) +
                4.0 * std::numeric_limits<double>::epsilon() * std::sqrt(noise);
  }

  EigenPair out;
  out.lambda = rho;
  out.iterations = it;
  // scaled so that values <= tol certify convergence against the combined
  // tolerance-plus-rounding-floor threshold
  out.residual = opt.tol * resid_abs / threshold;
  out.vector.resize(m);
  for (std::size_t i = 0; i < m; ++i) out.vector[i] = y[i] / rp.d[i];
  // normalize sum(l2_normalization * weight * v^2) = 1, sign positive
  double q = 0.0;
  for (std::size_t i = 0; i < m; ++i) q += weight[i] * out.vector[i] * out.vector[i];
  q *= l2_normalization;
  double s = 1.0 / std::sqrt(q);
  double mean = 0.0;
  for (std::size_t i = 0; i < m; ++i) mean += weight[i] * out.vector[i];
  if (mean < 0.0) s = -s;
  for (double& v : out.vector) v *= s;
  return out;
}

EigenPair principal_eigenpair(const DiscreteOperator& op, const EigenOptions& opt) {
  const SymTridiag a = op.full_matrix();
  return smallest_generalized(a, op.mass_diag, unit_sphere_area(op.n), opt);
}

BumpValue cutoff_bump(double r, double rho, double delta, double R) {
  const double a0 = 0.5 * rho, a1 = rho;
  const double b0 = (1.0 - delta) * R, b1 = (1.0 - 0.5 * delta) * R;
  BumpValue v;
  auto smooth = [](double t, double& s, double& s1, double& s2) {
    s = ((6.0 * t - 15.0) * t + 10.0) * t * t * t;
    s1 = ((30.0 * t - 60.0) * t + 30.0) * t * t;
    s2 = ((120.0 * t - 180.0) * t + 60.0) * t;
  };
  if (r <= a0 || r >= b1) return v;
  if (r < a1) {
    double s, s1, s2;
    const double w = a1 - a0;
    smooth((r - a0) / w, s, s1, s2);
    v.eta = s;
    v.d1 = s1 / w;
    v.d2 = s2 / (w * w);
  } else if (r <= b0) {
    v.eta = 1.0;
  } else {
    double s, s1, s2;
    const double w = b1 - b0;
    smooth((r - b0) / w, s, s1, s2);
    v.eta = 1.0 - s;
    v.d1 = -s1 / w;
    v.d2 = -s2 / (w * w);
  }
  return v;
}

double localization_identity_error(const RadialGrid& g, const DiscreteOperator& op,
                                   const EigenPair& pair, SweepWindow window) {
  const std::size_t M = g.size();
  const auto& r = g.nodes;
  const auto& v = pair.vector;
  const int n = g.n;
  const double omega = unit_sphere_area(n);

  // gradient term with eta at the flux midpoints
  double grad = 0.0;
  for (std::size_t i = 0; i + 1 < M; ++i) {
    const double rm = 0.5 * (r[i] + r[i + 1]);
    const double c = std::pow(rm, n - 1) / (r[i + 1] - r[i]);
    const double eta = cutoff_bump(rm, window.rho, window.delta, g.R).eta;
    const double dv = v[i + 1] - v[i];
    grad += c * eta * dv * dv;
  }
  {
    const double rm = 0.5 * (r.back() + g.R);
    const double c = std::pow(rm, n - 1) / (g.R - r.back());
    grad += c * cutoff_bump(rm, window.rho, window.delta, g.R).eta * v.back() * v.back();
  }
  grad *= omega;

  double i_l2 = 0.0, i_pot = 0.0, i_lap = 0.0;
  for (std::size_t i = 0; i < M; ++i) {
    const BumpValue b = cutoff_bump(r[i], window.rho, window.delta, g.R);
    const double vv = v[i] * v[i];
    const double w = g.quad_weights[i];
    i_l2 += w * b.eta * vv;
    i_pot += w * b.eta * op.potential_diag[i] * vv;
    i_lap += w * (b.d2 + (n - 1) * b.d1 / r[i]) * vv;
  }
  i_l2 *= omega;
  i_pot *= omega;
  i_lap *= omega;

  const double t1 = grad;
  const double t2 = pair.lambda * i_l2;
  const double t3 = op.mu * i_pot;
  const double t4 = 0.5 * i_lap;
  const double defect = std::abs(t1 - t2 - t3 - t4);
  const double scale =
      std::max({std::abs(t1), std::abs(t2), std::abs(t3), std::abs(t4), 1e-300});
  return defect / scale;
}

EigenSweepReport epsilon_sweep(const DomainSpec& d, double mu,
                               std::span<const double> eps_list, SweepWindow window,
                               const SweepGridParams& gp, const EigenOptions& opt) {
  validate(d);
  if (!d.gauge.is_ball())
    throw UnsupportedDomainError("epsilon_sweep: ball gauge required");
  if (!(mu > critical_mu(d.n)))
    throw PreconditionError("epsilon_sweep requires mu > ((n-2)/2)^2 = " +
                            std::to_string(critical_mu(d.n)));
  if (eps_list.empty()) throw PreconditionError("epsilon_sweep: empty eps list");
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0)) throw PreconditionError("epsilon_sweep: eps must be positive");
    if (i > 0 && !(eps_list[i] < eps_list[i - 1]))
      throw PreconditionError("epsilon_sweep: eps list must be strictly decreasing");
  }
  const double R = d.gauge.radius;
  if (!(window.rho < (1.0 - window.delta) * R))
    throw PreconditionError("epsilon_sweep: empty localization window");

  // one shared grid, fine enough for the smallest eps in the sweep
  const double eps_min = eps_list.back();
  const double first_rel = std::min(gp.first_rel_cap, eps_min / 100.0 / R);
  const RadialGrid grid = build_grid(d.n, R, gp.M, Grading::geometric(gp.q, first_rel, first_rel));

  EigenSweepReport rep;
  rep.window = window;
  rep.grid_size = grid.size();
  rep.grid_first_node = grid.nodes.front();
  rep.entries.resize(eps_list.size());

#if defined(_OPENMP)
#pragma omp parallel for schedule(dynamic, 1)
#endif
  for (long long k = 0; k < static_cast<long long>(eps_list.size()); ++k) {
    EigenSweepEntry& e = rep.entries[k];
    e.eps = eps_list[k];
    try {
      const DiscreteOperator op = assemble(grid, d, PotentialSpec::regularized(mu, e.eps));
      const EigenPair pair = principal_eigenpair(op, opt);
      e.lambda1 = pair.lambda;
      e.iterations = pair.iterations;
      e.residual = pair.residual;
      e.h1_window_norm = h1_norm_annulus(grid, pair.vector, window.rho, window.delta).value;
      e.identity_rel_error = localization_identity_error(grid, op, pair, window);
    } catch (const Error&) {
      e.solver_failed = true;
    }
  }
  return rep;
}

} // namespace shl

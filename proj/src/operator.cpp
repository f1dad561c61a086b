#include "shl/operator.hpp"

#include <cassert>
#include <cmath>

#include "shl/errors.hpp"
#include "shl/kernels.hpp"

namespace shl {

SymTridiag DiscreteOperator::full_matrix() const {
  SymTridiag a = stiffness;
  for (std::size_t i = 0; i < a.size(); ++i)
    a.diag[i] -= mu * mass_diag[i] * potential_diag[i];
  return a;
}

SymTridiag assemble_stiffness(const RadialGrid& g) {
  const std::size_t M = g.size();
  const auto& r = g.nodes;
  const int n = g.n;
  SymTridiag k;
  k.diag.assign(M, 0.0);
  k.off.assign(M - 1, 0.0);
  for (std::size_t i = 0; i + 1 < M; ++i) {
    const double rm = 0.5 * (r[i] + r[i + 1]);
    const double c = std::pow(rm, n - 1) / (r[i + 1] - r[i]);
    k.diag[i] += c;
    k.diag[i + 1] += c;
    k.off[i] = -c;
  }
  // Dirichlet value 0 at r = R through the last flux interval; no flux
  // through r = 0 (regularity of radial functions)
  const double rm = 0.5 * (r.back() + g.R);
  k.diag.back() += std::pow(rm, n - 1) / (g.R - r.back());
  return k;
}

DiscreteOperator assemble(const RadialGrid& g, const DomainSpec& d, const PotentialSpec& p) {
  validate(d);
  validate(p);
  if (!d.gauge.is_ball())
    throw UnsupportedDomainError("assemble: solvers support the ball gauge only");
  if (d.n != g.n)
    throw PreconditionError("assemble: grid and domain dimensions differ");

  DiscreteOperator op;
  op.n = g.n;
  op.R = g.R;
  op.mu = p.mu;
  op.stiffness = assemble_stiffness(g);
  op.mass_diag = g.quad_weights;
  op.potential_diag.resize(g.size());
  sample_potential(d, p, g.nodes, op.potential_diag);
  return op;
}

std::vector<double> apply_operator(const DiscreteOperator& op, std::span<const double> u) {
  const std::size_t M = op.size();
  assert(u.size() == M);
  std::vector<double> y(M);
  par::tridiag_apply(op.stiffness.diag, op.stiffness.off, u, y);
  for (std::size_t i = 0; i < M; ++i)
    y[i] = y[i] / op.mass_diag[i] - op.mu * op.potential_diag[i] * u[i];
  return y;
}

double rayleigh_quotient(const DiscreteOperator& op, std::span<const double> u) {
  const std::size_t M = op.size();
  assert(u.size() == M);
  std::vector<double> ku(M);
  par::tridiag_apply(op.stiffness.diag, op.stiffness.off, u, ku);
  const double kq = par::dot(u, ku);
  std::vector<double> wu(M);
  for (std::size_t i = 0; i < M; ++i) wu[i] = op.potential_diag[i] * u[i];
  const double wq = par::dot3(op.mass_diag, wu, u);
  const double mq = par::dot3(op.mass_diag, u, u);
  if (mq == 0.0) throw PreconditionError("rayleigh_quotient: u is identically zero");
  return (kq - op.mu * wq) / mq;
}

} // namespace shl

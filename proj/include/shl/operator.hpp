#pragma once

#include <span>
#include <vector>

#include "shl/domain.hpp"
#include "shl/grid.hpp"
#include "shl/tridiag.hpp"

namespace shl {

/// Discrete form of -Delta - mu Psi on the radial grid, in the r^{n-1}-weighted
/// inner product. stiffness is the Dirichlet flux form (zero flux through r=0,
/// value 0 at r=R); the full matrix is stiffness - mu diag(mass .* psi).
struct DiscreteOperator {
  SymTridiag stiffness;
  std::vector<double> potential_diag; // Psi at the nodes
  std::vector<double> mass_diag;      // lumped r^{n-1} quadrature weights
  double mu = 0.0;
  int n = 3;
  double R = 1.0;

  std::size_t size() const { return stiffness.size(); }

  /// A = K - mu diag(mass .* psi) as a symmetric tridiagonal.
  SymTridiag full_matrix() const;
};

/// Conservative flux stiffness for the radial Laplacian alone (mu = 0 part).
SymTridiag assemble_stiffness(const RadialGrid& g);

/// Ball gauge only; potential sampled at the nodes.
DiscreteOperator assemble(const RadialGrid& g, const DomainSpec& d, const PotentialSpec& p);

/// Pointwise operator action (K u - mu W u) / mass: approximates
/// (-Delta - mu Psi) u at the nodes.
std::vector<double> apply_operator(const DiscreteOperator& op, std::span<const double> u);

/// (u'Ku - mu u'Wu) / u'Mu.
double rayleigh_quotient(const DiscreteOperator& op, std::span<const double> u);

} // namespace shl

#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "shl/domain.hpp"
#include "shl/grid.hpp"
#include "shl/operator.hpp"

namespace shl {

enum class HardyVariant { DoubleSingular, Classical };

struct HardyLevel {
  std::size_t M = 0;
  double cutoff_rel = 0.0;    // end-gap depth of the level's mesh
  double discrete_constant = 0.0;
};

struct HardyReport {
  int n = 3;
  HardyVariant variant = HardyVariant::DoubleSingular;
  double target = 0.0;        // ((n-2)/2)^2
  std::vector<HardyLevel> levels;
};

/// u'Ku / u'(w psi)u: discrete Dirichlet energy against the singular weight.
/// The same forms define discrete_hardy_constant, so the quotient of any
/// nodal vector is >= the constant exactly.
double hardy_rayleigh_quotient(const RadialGrid& g, const DomainSpec& d,
                               HardyVariant variant, std::span<const double> u);

/// Smallest eigenvalue of K v = sigma diag(w psi) v: the discrete best
/// constant of the inequality on this mesh.
double discrete_hardy_constant(const RadialGrid& g, const DomainSpec& d, HardyVariant variant);

/// Refinement ladder. Each level deepens the end gaps toward the singular
/// set and adds nodes; at a fixed cutoff the discrete constant stalls at
/// target + O(1/log^2(cutoff)), so refinement must deepen the mesh, not just
/// add nodes. Ball gauge only.
HardyReport hardy_refinement(const DomainSpec& d, HardyVariant variant,
                             std::span<const std::pair<std::size_t, double>> levels);

/// Default three-level ladder used by the CLI and the acceptance suite.
std::vector<std::pair<std::size_t, double>> default_hardy_levels();

/// Random low-frequency test function: sum of the first six Dirichlet sine
/// modes with uniform coefficients from the seeded generator, sampled at the
/// nodes. Used by the inequality property checks.
std::vector<double> random_smooth_function(const RadialGrid& g, std::uint64_t seed);

/// Weight values for the variant (Exact potential or |x|^-2) at the nodes.
std::vector<double> hardy_weight(const RadialGrid& g, const DomainSpec& d, HardyVariant variant);

} // namespace shl

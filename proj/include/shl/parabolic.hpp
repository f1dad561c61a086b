#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shl/domain.hpp"
#include "shl/grid.hpp"
#include "shl/operator.hpp"

namespace shl {

enum class TimeScheme {
  BackwardEuler,  // positivity and comparison preserving; the default
  CrankNicolson,  // second order in dt, for accuracy studies only
};

/// Separable forcing f(t, r) = time_table(t) * space_profile(r), tabulated at
/// step times and held constant per step.
struct Forcing {
  std::vector<double> space_profile; // nodal; empty means f = 0
  std::vector<double> time_table;    // values at t_k; last value held beyond the table

  bool is_zero() const { return space_profile.empty(); }
  double amplitude_at(std::size_t step) const {
    if (time_table.empty()) return 1.0;
    return time_table[std::min(step, time_table.size() - 1)];
  }
};

struct HeatRunConfig {
  DomainSpec domain;
  PotentialSpec potential;
  double T = 1.0;
  double dt = 0.0;               // 0 means T/1000
  std::vector<double> u0;        // nodal initial data
  Forcing forcing;
  TimeScheme scheme = TimeScheme::BackwardEuler;
  bool record_states = false;    // keep u^k for projections
  double blowup_guard = 1e150;   // halt when int u^2 exceeds guard * max(1, int u0^2)
};

/// Time series of the energy bookkeeping: l2_norm_sq(t) = int u^2 and the
/// running time integrals of dissipation int |grad u|^2, potential work
/// int Psi u^2 and forcing work int f u (trapezoid in time).
struct EnergyTrace {
  std::vector<double> times;
  std::vector<double> l2_norm_sq;
  std::vector<double> dissipation;
  std::vector<double> potential_work;
  std::vector<double> forcing_work;
};

struct HeatResult {
  EnergyTrace trace;
  std::vector<double> final_state;
  double dt_used = 0.0;          // after automatic halving
  int dt_halvings = 0;
  bool blowup_suspected = false; // run halted on the norm guard
  std::vector<std::vector<double>> states; // filled when record_states
};

/// Implicit stepping of u_t - Delta u = mu Psi u + f with Dirichlet data 0.
/// Backward Euler solves (M + dt K - dt mu W) u+ = M u + dt M f; the dt is
/// halved until that matrix is positive definite. Throws NumericError when
/// halving cannot restore definiteness.
HeatResult run_heat(const RadialGrid& g, const HeatRunConfig& cfg);

struct BlowupEntry {
  double trunc_N = 0.0;
  double final_l2_sq = 0.0;      // +inf when the run halted on the guard
  bool blowup_suspected = false;
};

struct BlowupScan {
  std::vector<BlowupEntry> entries;   // in input (increasing N) order
  bool monotone_in_N = true;          // final norms nondecreasing
  double growth_ratio = 0.0;          // last/first final norm
  double growth_factor = 0.0;         // the configured detection factor
  bool growth_confirmed = false;      // growth_ratio exceeds growth_factor
};

/// Truncation sweep of the supercritical problem: run_heat per N, final mass
/// recorded; a run halted on the norm guard counts as +inf and toward the
/// growth assertion. u0 must be nonnegative and not identically zero, mu
/// supercritical.
BlowupScan blowup_scan(const RadialGrid& g, const DomainSpec& d, double mu,
                       std::span<const double> u0, std::span<const double> N_list,
                       double T, double dt, double growth_factor = 100.0);

/// Right side of the subcritical energy estimate:
/// int u0^2 + (2 m (C - mu))^{-1} int int f^2, with C = ((n-2)/2)^2 and
/// m = inf Psi. Valid for mu < C.
double energy_bound_rhs(const RadialGrid& g, const DomainSpec& d, double mu,
                        std::span<const double> u0, const Forcing& f, double T, double dt);

} // namespace shl

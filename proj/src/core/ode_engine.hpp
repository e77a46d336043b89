#pragma once

// Numerical machinery for the singular radial mode ODEs.
//
// Integration runs in t = log r on the state (w, dw/dt) with psi = r^beta w.
// For the solution that is regular at the origin beta = beta_plus, which
// turns the Euler-type singularity at r = 0 into a coefficient that decays
// like rho = e^{q t}; second solutions use beta = 0. The stepper is the
// Dormand-Prince 5(4) pair with dense output, carried in long double.

#include <optional>
#include <string>
#include <vector>

#include "core/bubble.hpp"
#include "core/modes.hpp"

namespace nlk::ode {

using bubble::Dimension;

inline constexpr int kMaxMode = 64;

enum class LaunchType {
  regular_at_zero,
  prescribed_at_r,
  reduction_of_order,
  closed_form,
};

std::string_view launch_name(LaunchType t);

struct Sample {
  double r = 0.0;
  double psi = 0.0;
  double dpsi = 0.0;
};

struct SolutionTrajectory {
  int k = 0;
  int n = 2;
  LaunchType launch = LaunchType::regular_at_zero;
  /// Log-uniform output grid, r strictly increasing.
  std::vector<Sample> samples;
  /// End points of accepted integrator steps (empty for non-integrated
  /// trajectories), r strictly increasing.
  std::vector<Sample> steps;

  double r_min() const { return samples.front().r; }
  double r_max() const { return samples.back().r; }
};

struct IntegrationOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  /// Output density; 0 picks one from the mode's growth rates.
  int points_per_decade = 0;
};

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

/// Output points per decade used when IntegrationOptions leaves it at 0.
int default_points_per_decade(int k, Dimension n);

/// The regular solution, psi ~ r^{beta_plus} (1 + c_1 rho + O(rho^2)) at 0,
/// launched from the two-term series at r_start.
SolutionTrajectory integrate_regular(int k, Dimension n, double r_start,
                                     double r_end,
                                     const IntegrationOptions& opts = {});

/// c_1 of the launch series (coefficient of rho in psi / r^{beta_plus}).
double frobenius_c1(int k, Dimension n);

enum class SecondMethod { reduction, wronskian_launch };

/// Radius where the Wronskian launch starts: r* + 1 with r* the zero of
/// psi_0 (the same point is used for k = 1).
double second_solution_launch_radius(Dimension n);
/// Neighbourhood of the zero of the base solution that the reduction
/// formula cannot cross; empty for k = 1.
std::optional<Range> reduction_excluded(int k, Dimension n);

/// A second solution of mode k in {0, 1}, independent from psi_k, normalized
/// so that the divergence-form Wronskian P (psi2' psi_k - psi_k' psi2) = 1.
/// Both methods vanish at the launch radius when it lies inside `range`.
SolutionTrajectory second_solution(int k, Dimension n, SecondMethod method,
                                   Range range,
                                   const IntegrationOptions& opts = {});

/// psi_0 (k = 0) or psi_1 (k = 1) sampled on the log grid of [lo, hi].
SolutionTrajectory sample_closed_form(int k, Dimension n, Range range,
                                      int points_per_decade);

/// P(r) (b.dpsi a.psi - a.dpsi b.psi) for two samples at the same radius.
double divergence_wronskian(Dimension n, const Sample& a, const Sample& b);

/// Cubic Hermite interpolation of (psi, dpsi) at r.
Sample interpolate(const SolutionTrajectory& traj, double r);

enum class GrowthKind { power, logarithmic, bounded, inconclusive };
std::string_view growth_kind_name(GrowthKind k);

struct GrowthOptions {
  double bounded_exponent = 0.05;
  double log_fit_tol = 0.02;
  double power_fit_tol = 0.05;
};

struct GrowthEstimate {
  GrowthKind kind = GrowthKind::inconclusive;
  /// Asymptotic power: the fitted slope for power laws, 0 for logarithmic
  /// or bounded behaviour.
  double exponent = 0.0;
  /// Raw least-squares slope of log|psi| against log r.
  double power_slope = 0.0;
  /// max |log|psi| - fit| over the window.
  double power_residual = 0.0;
  /// psi ~ A log r + B fit.
  double log_coefficient = 0.0;
  double log_offset = 0.0;
  /// max |psi - (A log r + B)| / max |psi| over the window.
  double log_residual = 0.0;
  Range fit_window;
  /// Residual of the model that was selected.
  double residual = 0.0;
  bool conclusive = false;
  int points = 0;
};

GrowthEstimate growth_exponent(const SolutionTrajectory& traj, Range window,
                               const GrowthOptions& opts = {});

struct LagrangeIdentity {
  double boundary = 0.0;        // [P (psi_k' psi_j - psi_j' psi_k)]_lo^hi
  double integral_side = 0.0;   // (lambda_k - lambda_j)/(N-1) * integral
  double residual = 0.0;        // |boundary - integral_side|
  double scale = 0.0;           // |boundary at lo| + |boundary at hi|
  /// Smallest cumulative integral side over all grid radii R in (lo, hi].
  double min_partial_integral = 0.0;
  Range window;                 // snapped to grid nodes
};

/// Both sides of the integrated cross-multiplication of modes k and j over
/// [lo, hi]. traj_j is interpolated onto traj_k's grid where they differ.
LagrangeIdentity lagrange_identity(int k, int j, Dimension n,
                                   const SolutionTrajectory& traj_k,
                                   const SolutionTrajectory& traj_j,
                                   double r_lo, double r_hi);

double lagrange_identity_residual(int k, int j, Dimension n,
                                  const SolutionTrajectory& traj_k,
                                  const SolutionTrajectory& traj_j,
                                  double r_lo, double r_hi);

/// `r,psi,dpsi` with 17 significant digits, LF line endings.
std::string to_csv(const SolutionTrajectory& traj);

}  // namespace nlk::ode

#pragma once

// Per-mode evidence for the bounded kernel of the linearized operator, and
// the multiplicity-weighted count that should come out as N + 1.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/ode_engine.hpp"

namespace nlk::verify {

using bubble::Dimension;

struct Tolerances {
  double residual = 1e-8;      // closed-form psi_0 / psi_1 residuals
  double exponent = 0.01;      // relative, on every fitted exponent
  double log_fit = 0.02;       // A log r + B fit of the k = 0 second solution
  double power_fit = 0.05;     // max |log|psi| - power law| for a conclusive fit
  double bounded_exponent = 0.05;
  double lagrange = 1e-6;      // relative residual of the Lagrange identity
  double match = 1e-8;         // regular solution vs closed form
  double wronskian = 1e-8;     // drift of the divergence-form Wronskian
  double ode_rtol = 1e-10;
  double ode_atol = 1e-12;
  // Dimension-level checks of the bubble and the operator.
  double pde = 1e-10;          // |Delta_N U + e^U| / e^U
  double mass = 1e-9;          // relative
  double operator_equivalence = 1e-9;
  double kernel_element = 1e-8;

  void validate() const;
};

enum class Verdict { pass, fail, inconclusive };
std::string_view verdict_name(Verdict v);

/// One named measurement with the threshold it was held to. Names prefixed
/// `min_` must exceed the threshold; all others must not exceed it.
struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

Check at_most(std::string name, double value, double threshold);
Check above(std::string name, double value, double threshold);

struct ModeReport {
  int k = 0;
  double lambda = 0.0;
  std::int64_t multiplicity = 1;
  bool bounded_solution_found = false;
  std::string bounded_solution_matches = "none";  // psi0 | psi1 | none
  /// Second solution (k = 0, 1) or the regular solution (k >= 2): the
  /// growth that rules out a further bounded solution.
  ode::GrowthEstimate second_solution_growth;
  std::vector<Check> checks;
  Verdict verdict = Verdict::inconclusive;
  std::string diagnostic;
};

struct VerificationReport {
  int dimension = 2;
  int k_max = 10;
  std::uint64_t seed = 0;
  Tolerances tolerances;
  /// Bubble and operator checks that do not belong to a single mode.
  std::vector<Check> checks;
  std::vector<ModeReport> modes;
  std::optional<std::int64_t> kernel_dimension;
  Verdict verdict = Verdict::inconclusive;
  double wall_seconds = 0.0;
};

/// Radii used by every mode check.
struct Grid {
  static constexpr double r_start = 1e-5;
  static constexpr double r_end = 1e4;
  static constexpr double tail_lo = 1e2;
  static constexpr double tail_mid = 1e3;
  static constexpr double second_lo = 1e-3;
  static constexpr double lagrange_lo = 1e-3;
  static constexpr double lagrange_hi = 1e2;
};

ModeReport verify_mode0(Dimension n, const Tolerances& tol);
ModeReport verify_mode1(Dimension n, const Tolerances& tol);
ModeReport verify_higher_mode(int k, Dimension n, const Tolerances& tol);

/// Bubble/operator checks (PDE residual, mass, operator equivalence on
/// seeded random test functions, kernel elements on seeded random points).
std::vector<Check> dimension_checks(Dimension n, const Tolerances& tol,
                                    std::uint64_t seed);

/// Modes 0..k_max, evaluated on up to `threads` workers (0: hardware
/// concurrency). Output ordering and content do not depend on `threads`.
VerificationReport full_report(Dimension n, int k_max, const Tolerances& tol,
                               std::uint64_t seed = 0, int threads = 1);

}  // namespace nlk::verify

#pragma once

// Spherical-harmonic bookkeeping and the radial ODE of each mode k,
//
//   psi'' + p(r) psi'/r - (lambda_k/(N-1)) psi/r^2
//         + (N^3/(N-1)^2) rho/(1+rho)^2 psi/r^2 = 0,
//   p(r) = 1 + N(N-2) / ((N-1)(1+rho)),
//
// together with its divergence form (P psi')' - ... with
// P(r) = r^{N-1} |U'(r)|^{N-2}, and the explicit bounded solutions psi_0, psi_1.

#include <cstdint>

#include "core/bubble.hpp"

namespace nlk::modes {

using bubble::Dimension;

struct ModeSpec {
  int k = 0;
  double lambda = 0.0;
  std::int64_t multiplicity = 1;
  /// Roots of beta^2 + beta N(N-2)/(N-1) - lambda/(N-1) = 0 (behaviour at 0).
  double beta_minus = 0.0;
  double beta_plus = 0.0;
  /// +-sqrt(lambda/(N-1)): the power laws of the limiting ODE at infinity.
  double gamma = 0.0;
};

double eigenvalue(int k, Dimension n);
/// (2k+N-2)(N+k-3)! / (k!(N-2)!); 1 for k = 0.
std::int64_t multiplicity(int k, Dimension n);
ModeSpec mode_spec(int k, Dimension n);

struct OdeCoefficients {
  double p = 0.0;              // multiplies psi'/r
  double q_centrifugal = 0.0;  // -lambda_k/(N-1), multiplies psi/r^2
  double q_potential = 0.0;    // (N^3/(N-1)^2) rho/(1+rho)^2, multiplies psi/r^2
};

OdeCoefficients ode_coefficients(int k, Dimension n, double r);

/// A radial function with its first two derivatives at one radius.
struct RadialJet {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

/// psi_0 = ((N-1) - rho)/(1+rho); bounded k = 0 solution (from Z_0).
RadialJet psi0(Dimension n, double r);
/// psi_1 = r^{1/(N-1)}/(1+rho); bounded k = 1 solution (from Z_i).
/// At r = 0 the derivatives are reported as +-inf when they blow up.
RadialJet psi1(Dimension n, double r);

double mode_residual(int k, Dimension n, double r, double psi, double dpsi,
                     double d2psi);
inline double mode_residual(int k, Dimension n, double r, const RadialJet& j) {
  return mode_residual(k, n, r, j.value, j.d1, j.d2);
}

/// P(r) = r^{N-1} |U'(r)|^{N-2}, the factor relating the two forms:
/// divergence_residual = P * mode_residual.
double divergence_factor(Dimension n, double r);
double divergence_factor_derivative(Dimension n, double r);

double divergence_residual(int k, Dimension n, double r, double psi,
                           double dpsi, double d2psi);
inline double divergence_residual(int k, Dimension n, double r,
                                  const RadialJet& j) {
  return divergence_residual(k, n, r, j.value, j.d1, j.d2);
}

}  // namespace nlk::modes

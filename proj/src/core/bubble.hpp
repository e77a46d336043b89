#pragma once

// Closed-form quantities of the N-Laplace Liouville bubble
//
//   U(x) = log( C_N / (1 + |x|^{N/(N-1)})^N ),   C_N = N (N^2/(N-1))^{N-1},
//
// its scaling/translation family U_{lam,a}(x) = U(lam (x - a)) + N log lam,
// and the two parameter derivatives Z_0 (scaling) and Z_i (translations).
//
// Most radial formulas are written in rho = r^{N/(N-1)} so that the shared
// factor (1 + rho) is formed exactly once.

#include <Eigen/Dense>

#include "core/errors.hpp"

namespace nlk::bubble {

class Dimension {
 public:
  explicit Dimension(int n) : n_(n) {
    require(n >= 2, ErrorCode::invalid_argument,
            "dimension must be an integer >= 2, got " + std::to_string(n));
  }

  int value() const noexcept { return n_; }
  double real() const noexcept { return static_cast<double>(n_); }

  /// N/(N-1), the exponent that turns r into rho.
  double q() const noexcept { return real() / (real() - 1.0); }
  /// N^2/(N-1), the prefactor of |grad U|.
  double a() const noexcept { return real() * real() / (real() - 1.0); }

  friend bool operator==(Dimension, Dimension) = default;

 private:
  int n_;
};

class SpacePoint {
 public:
  explicit SpacePoint(Eigen::VectorXd coords)
      : coords_(std::move(coords)), r_(coords_.norm()) {}

  const Eigen::VectorXd& coords() const noexcept { return coords_; }
  double r() const noexcept { return r_; }
  int dim() const noexcept { return static_cast<int>(coords_.size()); }

 private:
  Eigen::VectorXd coords_;
  double r_;
};

struct BubbleParams {
  double lam = 1.0;
  Eigen::VectorXd a;  // empty means the origin

  void validate(Dimension n) const;
};

/// Value with an explicit marker for quantities evaluated at r = 0, where the
/// closed form is replaced by its limit.
struct RadialValue {
  double value = 0.0;
  bool at_origin = false;
};

double c_constant(Dimension n);
double sphere_area(Dimension n);
/// Closed-form total mass (omega_{N-1}/N) C_N, shared by every U_{lam,a}.
double mass_target(Dimension n);

double rho(Dimension n, double r);

/// U(r) at lam = 1, a = 0.
double u_radial(Dimension n, double r);
double exp_u(Dimension n, double r);
double u_value(Dimension n, const BubbleParams& p, const SpacePoint& x);

RadialValue u_radial_derivative(Dimension n, double r);
/// U''(r); singular at the origin for N > 2.
double u_second_derivative(Dimension n, double r);
double laplacian_u(Dimension n, double r);

/// |grad U|^k at radius r. Throws singular_input for r = 0 with k < 0.
double grad_norm_power(Dimension n, double r, int k);
/// d/dr |grad U|^k, the radial component of grad(|grad U|^k).
double grad_norm_power_derivative(Dimension n, double r, int k);

Eigen::VectorXd grad_u(Dimension n, const SpacePoint& x);
/// D^2 U at x; requires x != 0 unless N = 2.
Eigen::MatrixXd hessian_u(Dimension n, const SpacePoint& x);

/// (r^{N-1} |U'|^{N-2} U')' / r^{N-1} + e^{U(r)}, differentiated analytically.
double n_laplace_residual(Dimension n, double r);

struct MassResult {
  double value = 0.0;
  double error_estimate = 0.0;
  double target = 0.0;
};

/// Mass of U over R^N by adaptive Gauss-Kronrod on s = rho/(1+rho).
/// `tol` is relative; throws not_converged if the estimate misses it.
MassResult mass_integral(Dimension n, double tol);
/// Mass of U_{lam,a}. For a != 0 this is a two-dimensional (radius, polar
/// angle) integral around the origin, so the translation is actually felt.
MassResult mass_integral(Dimension n, const BubbleParams& p, double tol);

double z0(Dimension n, const SpacePoint& x);
/// i is 1-based, 1 <= i <= N. Returns 0 at the origin.
double zi(Dimension n, const SpacePoint& x, int i);
/// The unique zero of Z_0 along a ray, r* = (N-1)^{(N-1)/N}.
double z0_zero_radius(Dimension n);

}  // namespace nlk::bubble

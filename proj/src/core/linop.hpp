#pragma once

// The linearized N-Laplace operator around the bubble,
//
//   L(phi) = div(|grad U|^{N-2} grad phi)
//          + (N-2) div(|grad U|^{N-4} (grad U . grad phi) grad U) + e^U phi,
//
// evaluated term by term (A..G), its regular non-divergence form, and a
// central-difference check against the nonlinear map g -> Delta_N g + e^g.

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "core/bubble.hpp"

namespace nlk::linop {

using bubble::Dimension;
using bubble::SpacePoint;

/// A smooth function on R^N with closed-form first and second derivatives.
/// Implementations must be immutable after construction.
class TestFunction {
 public:
  virtual ~TestFunction() = default;

  virtual int dim() const = 0;
  virtual double value(const SpacePoint& x) const = 0;
  virtual Eigen::VectorXd gradient(const SpacePoint& x) const = 0;
  virtual Eigen::MatrixXd hessian(const SpacePoint& x) const = 0;
};

using TestFunctionPtr = std::shared_ptr<const TestFunction>;

/// phi = c.
TestFunctionPtr make_constant(Dimension n, double c);
/// phi = Z_0 = x . grad U + N.
TestFunctionPtr make_z0(Dimension n);
/// phi = Z_i = dU/dx_i, i in 1..N.
TestFunctionPtr make_zi(Dimension n, int i);

struct Monomial {
  double coeff = 1.0;
  std::vector<int> powers;  // one non-negative exponent per coordinate
};

/// phi = (sum_m c_m x^{alpha_m}) exp(-|x|^2 / sigma^2).
TestFunctionPtr make_poly_gaussian(Dimension n, std::vector<Monomial> terms,
                                   double sigma);

/// Seeded draw from the randomized family: 1..4 monomials of total degree
/// <= 3, coefficients uniform in [-1, 1], sigma in {1, 3}.
TestFunctionPtr random_poly_gaussian(Dimension n, std::mt19937_64& rng);

/// phi(x) = psi(r) Y(omega) for the degree-k harmonic polynomial
/// P_0 = 1, P_1 = x_1, P_2 = x_1 x_2, written as psi(r) r^{-k} P_k(x).
/// Undefined at the origin for k > 0.
TestFunctionPtr make_radial_harmonic(Dimension n, int k,
                                     std::function<double(double)> psi,
                                     std::function<double(double)> dpsi,
                                     std::function<double(double)> d2psi);

/// Y_k(omega) = P_k(omega) for the harmonics above.
double harmonic_on_sphere(int k, const SpacePoint& x);

enum class Term { A, B, C, D, E, F, G };
inline constexpr std::array<Term, 7> kAllTerms{Term::A, Term::B, Term::C,
                                               Term::D, Term::E, Term::F,
                                               Term::G};
std::string_view term_name(Term t);

/// One of the seven pieces of L(phi) in closed form. Requires |x| > 0; for
/// N = 2 the (N-2)-weighted pieces C, D, E, F are exactly zero.
double term(Dimension n, const TestFunction& f, const SpacePoint& x, Term t);

double apply_linearized(Dimension n, const TestFunction& f,
                        const SpacePoint& x);

/// |x|^2 Delta phi + N(N-2)(x.grad phi)/(1+rho) + (N-2) x^T D^2phi x
///   + (N^3/(N-1)) rho/(1+rho)^2 phi.  Regular everywhere, including x = 0.
double radial_form(Dimension n, const TestFunction& f, const SpacePoint& x);

/// L(phi) = weight(r) * radial_form(phi) pointwise.
double weight(Dimension n, double r);

/// Delta_N g + e^g from the value, gradient and Hessian of g at one point.
/// Throws singular_input when grad g = 0 and N > 2.
double nonlinear_map(Dimension n, double g, const Eigen::VectorXd& grad,
                     const Eigen::MatrixXd& hess);

/// |(N(U + t f) - N(U - t f)) / (2t) - L(f)| at x.
double directional_derivative_check(Dimension n, const TestFunction& f,
                                    const SpacePoint& x, double t_step);

}  // namespace nlk::linop

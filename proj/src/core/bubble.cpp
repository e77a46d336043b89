#include "core/bubble.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <sstream>

namespace nlk::bubble {

namespace {

constexpr unsigned kMaxDepth = 18;
constexpr double kAbsoluteFallback = 1e-12;

double area_of_unit_sphere_in(int ambient) {
  const double half = 0.5 * ambient;
  return 2.0 * std::pow(boost::math::constants::pi<double>(), half) /
         std::tgamma(half);
}

void check_radius(double r, const char* what) {
  require(std::isfinite(r) && r >= 0.0, ErrorCode::invalid_argument,
          std::string(what) + ": radius must be finite and >= 0");
}

void check_tolerance(double tol) {
  require(std::isfinite(tol) && tol > 0.0, ErrorCode::invalid_argument,
          "mass_integral: tol must be > 0");
}

[[noreturn]] void throw_not_converged(double value, double err, double tol) {
  std::ostringstream os;
  os.precision(17);
  os << "mass_integral: quadrature did not reach relative tolerance " << tol
     << " (estimate " << value << ", error estimate " << err << ")";
  fail(ErrorCode::not_converged, os.str());
}

// Radius and r^{N-1} dr/ds for the substitution s = rho/(1+rho), where
// rho = (lam r)^{N/(N-1)}. The Jacobian collapses to rho^{N-2}/(lam^N q (1-s)^2).
struct Compactified {
  double r;
  double jacobian;
};

Compactified compactify(Dimension n, double lam, double s) {
  const double rho = s / (1.0 - s);
  const double r = std::pow(rho, 1.0 / n.q()) / lam;
  const double jac = std::pow(rho, n.real() - 2.0) /
                     (std::pow(lam, n.real()) * n.q() * (1.0 - s) * (1.0 - s));
  return {r, jac};
}

}  // namespace

void BubbleParams::validate(Dimension n) const {
  require(std::isfinite(lam) && lam > 0.0, ErrorCode::invalid_argument,
          "bubble parameter lam must be > 0");
  require(a.size() == 0 || a.size() == n.value(), ErrorCode::invalid_argument,
          "translation a must be empty or have N components");
}

double c_constant(Dimension n) {
  return n.real() * std::pow(n.a(), n.real() - 1.0);
}

double sphere_area(Dimension n) { return area_of_unit_sphere_in(n.value()); }

double mass_target(Dimension n) {
  return sphere_area(n) / n.real() * c_constant(n);
}

double rho(Dimension n, double r) {
  check_radius(r, "rho");
  return std::pow(r, n.q());
}

double u_radial(Dimension n, double r) {
  return std::log(c_constant(n)) - n.real() * std::log1p(rho(n, r));
}

double exp_u(Dimension n, double r) {
  return c_constant(n) / std::pow(1.0 + rho(n, r), n.real());
}

double u_value(Dimension n, const BubbleParams& p, const SpacePoint& x) {
  p.validate(n);
  require(x.dim() == n.value(), ErrorCode::invalid_argument,
          "u_value: point has the wrong dimension");
  const double r = p.a.size() == 0 ? p.lam * x.r()
                                   : p.lam * (x.coords() - p.a).norm();
  return u_radial(n, r) + n.real() * std::log(p.lam);
}

RadialValue u_radial_derivative(Dimension n, double r) {
  check_radius(r, "u_radial_derivative");
  if (r == 0.0) return {0.0, true};
  const double N = n.real();
  return {-n.a() * std::pow(r, 1.0 / (N - 1.0)) / (1.0 + rho(n, r)), false};
}

double u_second_derivative(Dimension n, double r) {
  check_radius(r, "u_second_derivative");
  const double N = n.real();
  if (r == 0.0) {
    require(n.value() == 2, ErrorCode::singular_input,
            "u_second_derivative: U'' is unbounded at r = 0 for N > 2");
    return -n.a();
  }
  const double p = rho(n, r);
  return -(n.a() / (N - 1.0)) * std::pow(r, 1.0 / (N - 1.0) - 1.0) *
         (1.0 + (1.0 - N) * p) / ((1.0 + p) * (1.0 + p));
}

double laplacian_u(Dimension n, double r) {
  check_radius(r, "laplacian_u");
  const double N = n.real();
  const double p = rho(n, r);
  const double bracket = (N - 1.0 + 1.0 / (N - 1.0)) + (N - 2.0) * p;
  if (r == 0.0) {
    require(n.value() == 2, ErrorCode::singular_input,
            "laplacian_u: Delta U is unbounded at r = 0 for N > 2");
    return -n.a() * bracket;
  }
  return -n.a() * std::pow(r, 1.0 / (N - 1.0) - 1.0) * bracket /
         ((1.0 + p) * (1.0 + p));
}

double grad_norm_power(Dimension n, double r, int k) {
  check_radius(r, "grad_norm_power");
  if (r == 0.0) {
    require(k >= 0, ErrorCode::singular_input,
            "grad_norm_power: |grad U|^k with k < 0 is singular at r = 0");
    return k == 0 ? 1.0 : 0.0;
  }
  const double N = n.real();
  const double kk = k;
  return std::pow(n.a(), kk) * std::pow(r, kk / (N - 1.0)) /
         std::pow(1.0 + rho(n, r), kk);
}

double grad_norm_power_derivative(Dimension n, double r, int k) {
  check_radius(r, "grad_norm_power_derivative");
  require(r > 0.0, ErrorCode::singular_input,
          "grad_norm_power_derivative: requires r > 0");
  const double N = n.real();
  const double kk = k;
  const double p = rho(n, r);
  return std::pow(n.a(), kk) * (kk / (N - 1.0)) *
         std::pow(r, kk / (N - 1.0) - 1.0) * (1.0 + (1.0 - N) * p) /
         std::pow(1.0 + p, kk + 1.0);
}

Eigen::VectorXd grad_u(Dimension n, const SpacePoint& x) {
  require(x.dim() == n.value(), ErrorCode::invalid_argument,
          "grad_u: point has the wrong dimension");
  if (x.r() == 0.0) return Eigen::VectorXd::Zero(n.value());
  return u_radial_derivative(n, x.r()).value / x.r() * x.coords();
}

Eigen::MatrixXd hessian_u(Dimension n, const SpacePoint& x) {
  require(x.dim() == n.value(), ErrorCode::invalid_argument,
          "hessian_u: point has the wrong dimension");
  const int dim = n.value();
  if (x.r() == 0.0) {
    // Only reachable for N = 2, where U is smooth at the origin.
    return u_second_derivative(n, 0.0) * Eigen::MatrixXd::Identity(dim, dim);
  }
  const double r = x.r();
  const Eigen::VectorXd w = x.coords() / r;
  const Eigen::MatrixXd radial = w * w.transpose();
  const double d1 = u_radial_derivative(n, r).value;
  const double d2 = u_second_derivative(n, r);
  return d2 * radial +
         (d1 / r) * (Eigen::MatrixXd::Identity(dim, dim) - radial);
}

double n_laplace_residual(Dimension n, double r) {
  check_radius(r, "n_laplace_residual");
  require(r > 0.0, ErrorCode::singular_input,
          "n_laplace_residual: requires r > 0");
  // U' < 0, so |U'|^{N-2} U' = -|U'|^{N-1}; expand (r^{N-1} g)' / r^{N-1}.
  // Accumulated in extended precision: the two sides cancel exactly.
  using LD = long double;
  const LD N = n.real(), R = r, a = N * N / (N - 1);
  const LD rho = std::pow(R, N / (N - 1)), h = 1 + rho;
  const LD g = std::pow(a * std::pow(R, 1 / (N - 1)) / h, N - 1);
  const LD dg = g / R * (1 + (1 - N) * rho) / h;
  const LD divergence = -((N - 1) * g / R + dg);
  return static_cast<double>(divergence + N * std::pow(a, N - 1) / std::pow(h, N));
}

MassResult mass_integral(Dimension n, double tol) {
  return mass_integral(n, BubbleParams{}, tol);
}

MassResult mass_integral(Dimension n, const BubbleParams& p, double tol) {
  p.validate(n);
  check_tolerance(tol);
  using boost::math::quadrature::gauss_kronrod;
  const int dim = n.value();
  const bool centred = p.a.size() == 0 || p.a.norm() == 0.0;

  MassResult out;
  out.target = mass_target(n);
  double err = 0.0;

  if (centred) {
    auto integrand = [&](double s) {
      const auto c = compactify(n, p.lam, s);
      Eigen::VectorXd x = Eigen::VectorXd::Zero(dim);
      x[0] = c.r;
      return std::exp(u_value(n, p, SpacePoint(std::move(x)))) * c.jacobian;
    };
    out.value = sphere_area(n) *
                gauss_kronrod<double, 15>::integrate(integrand, 0.0, 1.0,
                                                     kMaxDepth, tol, &err);
    err *= sphere_area(n);
  } else {
    // Rotate so that a lies on the first axis; the integrand then depends on
    // the radius and on the polar angle theta to e_1 only.
    const double dist = p.a.norm();
    BubbleParams aligned{p.lam, Eigen::VectorXd::Zero(dim)};
    aligned.a[0] = dist;
    const double ring = area_of_unit_sphere_in(dim - 1);
    const double inner_tol = tol * 0.1;
    const double pi = boost::math::constants::pi<double>();

    auto radial = [&](double s) {
      const auto c = compactify(n, 1.0, s);
      auto angular = [&](double theta) {
        Eigen::VectorXd x = Eigen::VectorXd::Zero(dim);
        x[0] = c.r * std::cos(theta);
        x[1] = c.r * std::sin(theta);
        return std::exp(u_value(n, aligned, SpacePoint(std::move(x)))) *
               std::pow(std::sin(theta), dim - 2);
      };
      return ring * c.jacobian *
             gauss_kronrod<double, 15>::integrate(angular, 0.0, pi, kMaxDepth,
                                                  inner_tol);
    };
    out.value = gauss_kronrod<double, 15>::integrate(radial, 0.0, 1.0,
                                                     kMaxDepth, tol, &err);
  }

  out.error_estimate = err;
  if (!(err <= tol * std::abs(out.value) || err <= kAbsoluteFallback)) {
    throw_not_converged(out.value, err, tol);
  }
  return out;
}

double z0(Dimension n, const SpacePoint& x) {
  require(x.dim() == n.value(), ErrorCode::invalid_argument,
          "z0: point has the wrong dimension");
  const double N = n.real();
  const double p = rho(n, x.r());
  return n.q() * ((N - 1.0) - p) / (1.0 + p);
}

double zi(Dimension n, const SpacePoint& x, int i) {
  require(x.dim() == n.value(), ErrorCode::invalid_argument,
          "zi: point has the wrong dimension");
  require(i >= 1 && i <= n.value(), ErrorCode::invalid_argument,
          "zi: axis index must satisfy 1 <= i <= N");
  if (x.r() == 0.0) return 0.0;
  const double N = n.real();
  const double psi1 = std::pow(x.r(), 1.0 / (N - 1.0)) / (1.0 + rho(n, x.r()));
  return -n.a() * psi1 * x.coords()[i - 1] / x.r();
}

double z0_zero_radius(Dimension n) {
  const double N = n.real();
  return std::pow(N - 1.0, (N - 1.0) / N);
}

}  // namespace nlk::bubble

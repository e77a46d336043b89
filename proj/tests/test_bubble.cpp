#include "doctest.h"

#include <cmath>
#include <numbers>

#include "core/bubble.hpp"

using namespace nlk;
using bubble::Dimension;
using bubble::SpacePoint;

namespace {

constexpr double kPi = std::numbers::pi;

SpacePoint pt(std::initializer_list<double> xs) {
  Eigen::VectorXd v(xs.size());
  int i = 0;
  for (double x : xs) v[i++] = x;
  return SpacePoint(v);
}

SpacePoint along_axis(int n, double r) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  v[0] = r;
  return SpacePoint(v);
}

// A generic off-axis point of norm r.
SpacePoint generic(int n, double r) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = 1.0 + 0.37 * i - 0.11 * i * i;
  return SpacePoint(v * (r / v.norm()));
}

double central(auto f, double x, double h) { return (f(x + h) - f(x - h)) / (2 * h); }

}  // namespace

TEST_SUITE("bubble") {

TEST_CASE("normalizing constant") {
  CHECK(bubble::c_constant(Dimension(2)) == doctest::Approx(8.0).epsilon(1e-15));
  CHECK(bubble::c_constant(Dimension(3)) == doctest::Approx(60.75).epsilon(1e-15));
  CHECK(bubble::c_constant(Dimension(4)) ==
        doctest::Approx(16384.0 / 27.0).epsilon(1e-15));
}

TEST_CASE("sphere area against the two-step recursion") {
  CHECK(bubble::sphere_area(Dimension(2)) == doctest::Approx(2 * kPi).epsilon(1e-15));
  CHECK(bubble::sphere_area(Dimension(3)) == doctest::Approx(4 * kPi).epsilon(1e-15));
  CHECK(bubble::sphere_area(Dimension(4)) ==
        doctest::Approx(2 * kPi * kPi).epsilon(1e-15));
  // |S^{n+1}| = 2 pi |S^{n-1}| / n
  for (int n = 2; n <= 10; ++n) {
    CHECK(bubble::sphere_area(Dimension(n + 2)) ==
          doctest::Approx(2 * kPi * bubble::sphere_area(Dimension(n)) / n)
              .epsilon(1e-14));
  }
}

TEST_CASE("dimension below two is rejected") {
  CHECK_THROWS_AS(Dimension(1), Error);
  try {
    Dimension bad(0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::invalid_argument);
  }
}

TEST_CASE("bubble value and scaling family") {
  const Dimension n2(2);
  CHECK(bubble::u_value(n2, {}, pt({0.0, 0.0})) ==
        doctest::Approx(std::log(8.0)).epsilon(1e-15));

  for (int N = 2; N <= 6; ++N) {
    const Dimension n(N);
    bubble::BubbleParams p;
    p.lam = 1.7;
    p.a = Eigen::VectorXd::LinSpaced(N, -0.3, 0.4);
    const SpacePoint x = generic(N, 0.8);
    const SpacePoint y(p.lam * (x.coords() - p.a));
    const double expect = std::log(bubble::c_constant(n)) -
                          N * std::log1p(std::pow(y.r(), n.q())) + N * std::log(p.lam);
    CHECK(bubble::u_value(n, p, x) == doctest::Approx(expect).epsilon(1e-13));
  }

  bubble::BubbleParams bad;
  bad.lam = -1.0;
  CHECK_THROWS_AS(bubble::u_value(n2, bad, pt({1.0, 0.0})), Error);
}

TEST_CASE("radial derivatives match finite differences") {
  for (int N = 2; N <= 6; ++N) {
    const Dimension n(N);
    for (double r : {0.05, 0.7, 1.0, 3.0, 40.0}) {
      const double h = 1e-5 * r;
      const double d1 = central([&](double s) { return bubble::u_radial(n, s); }, r, h);
      CHECK(bubble::u_radial_derivative(n, r).value == doctest::Approx(d1).epsilon(1e-8));
      const double d2 = central(
          [&](double s) { return bubble::u_radial_derivative(n, s).value; }, r, h);
      CHECK(bubble::u_second_derivative(n, r) == doctest::Approx(d2).epsilon(1e-8));
      for (int k : {-1, 0, 1, 2, N - 2}) {
        const double g = central(
            [&](double s) { return bubble::grad_norm_power(n, s, k); }, r, h);
        CHECK(bubble::grad_norm_power_derivative(n, r, k) ==
              doctest::Approx(g).epsilon(1e-7));
      }
    }
  }
}

TEST_CASE("origin is handled explicitly") {
  const Dimension n3(3);
  const auto d = bubble::u_radial_derivative(n3, 0.0);
  CHECK(d.at_origin);
  CHECK(d.value == 0.0);
  CHECK_FALSE(bubble::u_radial_derivative(n3, 0.5).at_origin);
  try {
    bubble::grad_norm_power(n3, 0.0, -1);
    FAIL("expected singular_input");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::singular_input);
  }
  CHECK(bubble::u_second_derivative(Dimension(2), 0.0) == doctest::Approx(-4.0));
  CHECK(bubble::zi(n3, pt({0.0, 0.0, 0.0}), 2) == 0.0);
}

TEST_CASE("gradient and Hessian match finite differences of the value") {
  for (int N = 2; N <= 5; ++N) {
    const Dimension n(N);
    const SpacePoint x = generic(N, 1.3);
    const Eigen::VectorXd g = bubble::grad_u(n, x);
    const Eigen::MatrixXd H = bubble::hessian_u(n, x);
    const double h = 1e-5;
    for (int i = 0; i < N; ++i) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(N);
      e[i] = h;
      const double fd = (bubble::u_value(n, {}, SpacePoint(x.coords() + e)) -
                         bubble::u_value(n, {}, SpacePoint(x.coords() - e))) /
                        (2 * h);
      CHECK(g[i] == doctest::Approx(fd).epsilon(1e-8));
      const Eigen::VectorXd gd = (bubble::grad_u(n, SpacePoint(x.coords() + e)) -
                                  bubble::grad_u(n, SpacePoint(x.coords() - e))) /
                                 (2 * h);
      for (int j = 0; j < N; ++j) CHECK(H(j, i) == doctest::Approx(gd[j]).epsilon(1e-7));
    }
    CHECK(H.trace() == doctest::Approx(bubble::laplacian_u(n, x.r())).epsilon(1e-12));
  }
}

TEST_CASE("N-Laplace residual: closed form against a flux finite difference") {
  for (int N = 2; N <= 6; ++N) {
    const Dimension n(N);
    // Delta_N U = r^{1-N} (r^{N-1} |U'|^{N-2} U')', differentiated numerically.
    auto flux = [&](double s) {
      const double du = central([&](double t) { return bubble::u_radial(n, t); }, s,
                                1e-4 * s);
      return std::pow(s, N - 1.0) * std::pow(std::abs(du), N - 2.0) * du;
    };
    for (double r : {0.01, 0.3, 1.0, 5.0, 100.0}) {
      const double lap = central(flux, r, 1e-3 * r) / std::pow(r, N - 1.0);
      const double eu = bubble::exp_u(n, r);
      CHECK(std::abs(lap + eu) / eu < 1e-5);
    }
    for (int i = 0; i < 200; ++i) {
      const double r = std::pow(10.0, -3.0 + 6.0 * i / 199.0);
      CHECK(std::abs(bubble::n_laplace_residual(n, r)) <= 1e-10 * bubble::exp_u(n, r));
    }
  }
}

TEST_CASE("mass against the Beta-function integral") {
  // With s = r^{N/(N-1)}: int_0^inf r^{N-1} e^U dr = (C_N/q) B(N-1, 1).
  for (int N = 2; N <= 6; ++N) {
    const Dimension n(N);
    const double oracle = bubble::sphere_area(n) * bubble::c_constant(n) / n.q() *
                          std::beta(N - 1.0, 1.0);
    CHECK(bubble::mass_target(n) == doctest::Approx(oracle).epsilon(1e-14));
    const auto m = bubble::mass_integral(n, 1e-12);
    CHECK(std::abs(m.value / oracle - 1.0) <= 1e-9);
    CHECK(m.error_estimate >= 0.0);
  }
  CHECK(bubble::mass_target(Dimension(2)) == doctest::Approx(8 * kPi).epsilon(1e-15));
  CHECK(bubble::mass_target(Dimension(3)) == doctest::Approx(81 * kPi).epsilon(1e-15));
  CHECK(bubble::mass_integral(Dimension(3), 1e-12).value ==
        doctest::Approx(254.46900494077323).epsilon(1e-12));
}

TEST_CASE("mass is invariant along the scaling family") {
  for (int N : {2, 3, 4}) {
    const Dimension n(N);
    bubble::BubbleParams p;
    p.lam = 2.5;
    p.a = Eigen::VectorXd::Constant(N, 0.3);
    const auto m = bubble::mass_integral(n, p, 1e-10);
    CHECK(std::abs(m.value / bubble::mass_target(n) - 1.0) <= 1e-8);
  }
}

TEST_CASE("kernel elements are parameter derivatives of the family") {
  for (int N = 2; N <= 5; ++N) {
    const Dimension n(N);
    const SpacePoint x = generic(N, 1.1);
    const double h = 1e-6;
    auto at_lam = [&](double lam) {
      bubble::BubbleParams p;
      p.lam = lam;
      return bubble::u_value(n, p, x);
    };
    CHECK(bubble::z0(n, x) == doctest::Approx(central(at_lam, 1.0, h)).epsilon(1e-7));
    for (int i = 1; i <= N; ++i) {
      auto at_a = [&](double a) {
        bubble::BubbleParams p;
        p.a = Eigen::VectorXd::Zero(N);
        p.a[i - 1] = a;
        return bubble::u_value(n, p, x);
      };
      CHECK(bubble::zi(n, x, i) == doctest::Approx(-central(at_a, 0.0, h)).epsilon(1e-7));
    }
    CHECK_THROWS_AS(bubble::zi(n, x, 0), Error);
    CHECK_THROWS_AS(bubble::zi(n, x, N + 1), Error);
    CHECK(std::abs(bubble::z0(n, along_axis(N, bubble::z0_zero_radius(n)))) < 1e-13);
  }
}

}  // TEST_SUITE

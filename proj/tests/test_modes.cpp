#include "doctest.h"

#include <cmath>
#include <cstdint>

#include "core/modes.hpp"

using namespace nlk;
using bubble::Dimension;

namespace {

std::int64_t choose(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) return 0;
  std::int64_t out = 1;
  for (std::int64_t i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

// Harmonic polynomials of degree k = homogeneous of degree k modulo |x|^2 times
// homogeneous of degree k - 2.
std::int64_t harmonic_dimension(int N, int k) {
  return choose(N + k - 1, k) - choose(N + k - 3, k - 2);
}

double grid_r(int i, int count = 200) { return std::pow(10.0, -3.0 + 6.0 * i / (count - 1)); }

double abs_du(Dimension n, double r) {
  const double N = n.real();
  return N * N / (N - 1.0) * std::pow(r, 1.0 / (N - 1.0)) / (1.0 + std::pow(r, n.q()));
}

}  // namespace

TEST_SUITE("modes") {

TEST_CASE("eigenvalues") {
  for (int N = 2; N <= 6; ++N)
    for (int k = 0; k <= 12; ++k)
      CHECK(modes::eigenvalue(k, Dimension(N)) == k * (k + N - 2.0));
  CHECK_THROWS_AS(modes::eigenvalue(-1, Dimension(3)), Error);
}

TEST_CASE("multiplicity equals the dimension of harmonic polynomials") {
  for (int N = 2; N <= 9; ++N) {
    for (int k = 0; k <= 25; ++k) {
      CHECK(modes::multiplicity(k, Dimension(N)) == harmonic_dimension(N, k));
    }
  }
  CHECK(modes::multiplicity(1, Dimension(5)) == 5);
  CHECK(modes::multiplicity(4, Dimension(3)) == 9);
}

TEST_CASE("indicial roots and exponents at infinity") {
  for (int N = 2; N <= 6; ++N) {
    const Dimension n(N);
    const double b = N * (N - 2.0) / (N - 1.0);
    for (int k = 0; k <= 20; ++k) {
      const auto s = modes::mode_spec(k, n);
      const double c = s.lambda / (N - 1.0);
      for (double beta : {s.beta_plus, s.beta_minus})
        CHECK(beta * beta + b * beta - c == doctest::Approx(0.0).scale(1.0 + c));
      CHECK(s.beta_plus >= 0.0);
      CHECK(s.beta_minus <= s.beta_plus);
      CHECK(s.gamma * s.gamma == doctest::Approx(c));
    }
    CHECK(modes::mode_spec(0, n).beta_plus == 0.0);
    CHECK(modes::mode_spec(1, n).beta_plus == doctest::Approx(1.0 / (N - 1.0)).epsilon(1e-14));
  }
  CHECK(modes::mode_spec(2, Dimension(3)).gamma == doctest::Approx(std::sqrt(3.0)));
  CHECK(modes::mode_spec(2, Dimension(2)).gamma == doctest::Approx(2.0));
  CHECK(modes::mode_spec(10, Dimension(4)).gamma == doctest::Approx(std::sqrt(40.0)));
}

TEST_CASE("coefficients") {
  const Dimension n(3);
  const auto c = modes::ode_coefficients(2, n, 1.0);
  CHECK(c.p == doctest::Approx(1.0 + 3.0 / 4.0));
  CHECK(c.q_centrifugal == doctest::Approx(-3.0));
  CHECK(c.q_potential == doctest::Approx(27.0 / 4.0 / 4.0));
  CHECK(modes::ode_coefficients(0, n, 0.0).p == doctest::Approx(2.5));
}

TEST_CASE("closed-form derivatives match finite differences") {
  for (int N = 2; N <= 6; ++N) {
    const Dimension n(N);
    for (double r : {0.02, 0.5, 1.0, 2.0, 30.0}) {
      const double h = 1e-5 * r;
      for (int which = 0; which < 2; ++which) {
        auto f = [&](double s) { return which == 0 ? modes::psi0(n, s) : modes::psi1(n, s); };
        const auto j = f(r);
        CHECK(j.d1 == doctest::Approx((f(r + h).value - f(r - h).value) / (2 * h)).epsilon(1e-7));
        CHECK(j.d2 == doctest::Approx((f(r + h).d1 - f(r - h).d1) / (2 * h)).epsilon(1e-6));
      }
    }
    CHECK(modes::psi0(n, 0.0).value == doctest::Approx(N - 1.0));
    CHECK(modes::psi1(n, 0.0).value == 0.0);
  }
}

TEST_CASE("closed forms solve their mode equations") {
  for (int N = 2; N <= 6; ++N) {
    const Dimension n(N);
    for (int i = 0; i < 200; ++i) {
      const double r = grid_r(i);
      CHECK(std::abs(modes::mode_residual(0, n, r, modes::psi0(n, r))) <= 1e-10);
      CHECK(std::abs(modes::mode_residual(1, n, r, modes::psi1(n, r))) <= 1e-10);
    }
  }
}

TEST_CASE("residuals of different modes differ by the centrifugal term") {
  const Dimension n(3);
  CHECK(modes::mode_residual(1, n, 1.0, modes::psi0(n, 1.0)) ==
        doctest::Approx(-0.5).epsilon(1e-12));
  for (int N = 2; N <= 6; ++N) {
    const Dimension d(N);
    for (double r : {0.1, 1.0, 7.0}) {
      const auto j = modes::psi1(d, r);
      for (int k = 2; k <= 5; ++k) {
        const double diff = modes::mode_residual(k, d, r, j) - modes::mode_residual(1, d, r, j);
        const double expect =
            -(modes::eigenvalue(k, d) - modes::eigenvalue(1, d)) / (N - 1.0) * j.value / (r * r);
        CHECK(diff == doctest::Approx(expect).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("divergence form is the expanded form times r^{N-1}|U'|^{N-2}") {
  const Dimension n3(3);
  const double r = 2.0;
  const auto j = modes::psi0(n3, r);
  const double ratio =
      modes::divergence_residual(2, n3, r, j) / modes::mode_residual(2, n3, r, j);
  CHECK(ratio == doctest::Approx(r * r * abs_du(n3, r)).epsilon(1e-12));

  for (int N = 2; N <= 6; ++N) {
    const Dimension n(N);
    for (int i = 0; i < 200; i += 7) {
      const double rr = grid_r(i);
      const double P = std::pow(rr, N - 1.0) * std::pow(abs_du(n, rr), N - 2.0);
      CHECK(modes::divergence_factor(n, rr) == doctest::Approx(P).epsilon(1e-13));
      for (int k = 0; k <= 4; ++k) {
        const double psi = std::sin(rr) + 2.0, d1 = std::cos(rr), d2 = -std::sin(rr);
        const double div = modes::divergence_residual(k, n, rr, psi, d1, d2);
        const double mode = modes::mode_residual(k, n, rr, psi, d1, d2);
        CHECK(std::abs(div - P * mode) <= 1e-10 * std::abs(div));
      }
      const double h = 1e-5 * rr;
      CHECK(modes::divergence_factor_derivative(n, rr) ==
            doctest::Approx((modes::divergence_factor(n, rr + h) -
                             modes::divergence_factor(n, rr - h)) /
                            (2 * h))
                .epsilon(1e-7));
    }
  }
}

TEST_CASE("radius must be positive for residuals") {
  CHECK_THROWS_AS(modes::mode_residual(0, Dimension(3), 0.0, 1, 0, 0), Error);
  CHECK_THROWS_AS(modes::divergence_residual(0, Dimension(3), -1.0, 1, 0, 0), Error);
  CHECK_THROWS_AS(modes::psi0(Dimension(3), -0.5), Error);
}

}  // TEST_SUITE

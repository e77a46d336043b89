#include "core/modes.hpp"

#include <cmath>
#include <limits>

namespace nlk::modes {

namespace {

void check_k(int k) {
  require(k >= 0, ErrorCode::invalid_argument, "mode index k must be >= 0");
}

void check_positive_radius(double r, const char* what) {
  require(std::isfinite(r) && r > 0.0, ErrorCode::invalid_argument,
          std::string(what) + ": requires finite r > 0");
}

std::int64_t binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 acc = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    acc = acc * static_cast<unsigned __int128>(n - k + i) / i;
    require(acc <= static_cast<unsigned __int128>(
                       std::numeric_limits<std::int64_t>::max()),
            ErrorCode::invalid_argument, "multiplicity overflows int64");
  }
  return static_cast<std::int64_t>(acc);
}

// Both residuals are small differences of large terms near the origin, so
// they are accumulated in extended precision from the same coefficients.
using LD = long double;

struct Coeffs {
  LD N, rho, lambda;
};

Coeffs coeffs(int k, Dimension n, double r) {
  const LD N = n.real();
  const LD lambda = static_cast<LD>(k) * (static_cast<LD>(k) + N - 2);
  return {N, std::pow(static_cast<LD>(r), N / (N - 1)), lambda};
}

// rho, rho', rho'' at r (rho = r^q).
struct RhoJet {
  double v, d1, d2;
};

RhoJet rho_jet(Dimension n, double r) {
  const double q = n.q();
  if (r == 0.0) {
    const double d2 = n.value() == 2 ? 2.0 : HUGE_VAL;
    return {0.0, 0.0, d2};
  }
  const double v = std::pow(r, q);
  return {v, q * v / r, q * (q - 1.0) * v / (r * r)};
}

}  // namespace

double eigenvalue(int k, Dimension n) {
  check_k(k);
  return static_cast<double>(k) * (k + n.real() - 2.0);
}

std::int64_t multiplicity(int k, Dimension n) {
  check_k(k);
  const std::int64_t N = n.value();
  if (k == 0) return 1;
  if (N == 2) return 2;
  // (N+k-3)!/(k!(N-2)!) = C(N+k-3, k) / (N-2); the product below is an exact
  // multiple of (N-2).
  const unsigned __int128 num =
      static_cast<unsigned __int128>(2 * k + N - 2) * binomial(N + k - 3, k);
  const unsigned __int128 out = num / static_cast<unsigned __int128>(N - 2);
  require(out <= static_cast<unsigned __int128>(
                     std::numeric_limits<std::int64_t>::max()),
          ErrorCode::invalid_argument, "multiplicity overflows int64");
  return static_cast<std::int64_t>(out);
}

ModeSpec mode_spec(int k, Dimension n) {
  ModeSpec s;
  s.k = k;
  s.lambda = eigenvalue(k, n);
  s.multiplicity = multiplicity(k, n);
  const double N = n.real();
  const double b = N * (N - 2.0) / (N - 1.0);
  const double c = s.lambda / (N - 1.0);
  const double root = std::sqrt(b * b + 4.0 * c);
  s.beta_minus = -0.5 * (b + root);
  // Cancellation-free form of (-b + root)/2; exactly 0 for k = 0.
  s.beta_plus = (b + root) > 0.0 ? 2.0 * c / (b + root) : 0.0;
  s.gamma = std::sqrt(c);
  return s;
}

OdeCoefficients ode_coefficients(int k, Dimension n, double r) {
  check_k(k);
  require(r >= 0.0, ErrorCode::invalid_argument,
          "ode_coefficients: requires r >= 0");
  const double N = n.real();
  const double rho = bubble::rho(n, r);
  OdeCoefficients c;
  c.p = 1.0 + N * (N - 2.0) / ((N - 1.0) * (1.0 + rho));
  c.q_centrifugal = -eigenvalue(k, n) / (N - 1.0);
  c.q_potential =
      N * N * N / ((N - 1.0) * (N - 1.0)) * rho / ((1.0 + rho) * (1.0 + rho));
  return c;
}

RadialJet psi0(Dimension n, double r) {
  require(r >= 0.0, ErrorCode::invalid_argument, "psi0: requires r >= 0");
  const double N = n.real();
  const RhoJet p = rho_jet(n, r);
  const double h = 1.0 + p.v;
  RadialJet j;
  j.value = ((N - 1.0) - p.v) / h;
  // psi_0 = N/(1+rho) - 1
  j.d1 = -N * p.d1 / (h * h);
  j.d2 = -N * (p.d2 * h - 2.0 * p.d1 * p.d1) / (h * h * h);
  return j;
}

RadialJet psi1(Dimension n, double r) {
  require(r >= 0.0, ErrorCode::invalid_argument, "psi1: requires r >= 0");
  const double m = 1.0 / (n.real() - 1.0);
  if (r == 0.0) {
    if (n.value() == 2) return {0.0, 1.0, 0.0};
    return {0.0, HUGE_VAL, -HUGE_VAL};
  }
  const RhoJet p = rho_jet(n, r);
  const double h = 1.0 + p.v;
  const double f = std::pow(r, m);
  const double f1 = m * f / r;
  const double f2 = m * (m - 1.0) * f / (r * r);
  RadialJet j;
  j.value = f / h;
  j.d1 = f1 / h - f * p.d1 / (h * h);
  j.d2 = f2 / h - 2.0 * f1 * p.d1 / (h * h) - f * p.d2 / (h * h) +
         2.0 * f * p.d1 * p.d1 / (h * h * h);
  return j;
}

double mode_residual(int k, Dimension n, double r, double psi, double dpsi,
                     double d2psi) {
  check_positive_radius(r, "mode_residual");
  check_k(k);
  const auto [N, rho, lambda] = coeffs(k, n, r);
  const LD R = r, h = 1 + rho;
  const LD p = 1 + N * (N - 2) / ((N - 1) * h);
  const LD q = -lambda / (N - 1) + N * N * N / ((N - 1) * (N - 1)) * rho / (h * h);
  return static_cast<double>(static_cast<LD>(d2psi) + p * dpsi / R + q * psi / (R * R));
}

double divergence_factor(Dimension n, double r) {
  check_positive_radius(r, "divergence_factor");
  return std::pow(r, n.real() - 1.0) *
         bubble::grad_norm_power(n, r, n.value() - 2);
}

double divergence_factor_derivative(Dimension n, double r) {
  check_positive_radius(r, "divergence_factor_derivative");
  const double N = n.real();
  const int k = n.value() - 2;
  return (N - 1.0) * std::pow(r, N - 2.0) * bubble::grad_norm_power(n, r, k) +
         std::pow(r, N - 1.0) * bubble::grad_norm_power_derivative(n, r, k);
}

double divergence_residual(int k, Dimension n, double r, double psi,
                           double dpsi, double d2psi) {
  check_positive_radius(r, "divergence_residual");
  check_k(k);
  const auto [N, rho, lambda] = coeffs(k, n, r);
  const LD R = r, h = 1 + rho;
  // P = r^{N-1} |U'|^{N-2} with |U'| = a r^{1/(N-1)} / (1 + rho).
  const LD a = N * N / (N - 1);
  const LD g = std::pow(a * std::pow(R, 1 / (N - 1)) / h, N - 2);
  const LD P = std::pow(R, N - 1) * g;
  const LD dP = P / R * ((N - 1) + (N - 2) / (N - 1) * (1 + (1 - N) * rho) / h);
  const LD e = N * std::pow(a, N - 1) / std::pow(h, N);
  return static_cast<double>(dP * dpsi + P * d2psi -
                             lambda * std::pow(R, N - 3) * g * psi / (N - 1) +
                             e * std::pow(R, N - 1) * psi / (N - 1));
}

}  // namespace nlk::modes

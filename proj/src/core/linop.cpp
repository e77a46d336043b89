#include "core/linop.hpp"

#include <cmath>

namespace nlk::linop {

namespace {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

void check_point(Dimension n, const SpacePoint& x, const char* what) {
  require(x.dim() == n.value(), ErrorCode::invalid_argument,
          std::string(what) + ": point has the wrong dimension");
}

void check_off_origin(const SpacePoint& x, const char* what) {
  require(x.r() > 0.0, ErrorCode::singular_input,
          std::string(what) +
              ": term formulas need |x| > 0; evaluate radial_form at the origin");
}

// phi(x) = G(|x|) P(x), where P is 1, x_i or x_i x_j (0-based indices).
class RadialTimesPolynomial final : public TestFunction {
 public:
  RadialTimesPolynomial(int dim, std::function<double(double)> g,
                        std::function<double(double)> dg,
                        std::function<double(double)> d2g,
                        std::vector<int> factors)
      : dim_(dim),
        g_(std::move(g)),
        dg_(std::move(dg)),
        d2g_(std::move(d2g)),
        factors_(std::move(factors)) {}

  int dim() const override { return dim_; }

  double value(const SpacePoint& x) const override {
    return g_(x.r()) * poly(x.coords());
  }

  Vec gradient(const SpacePoint& x) const override {
    const double r = x.r();
    Vec out = g_(r) * poly_gradient(x.coords());
    if (r > 0.0) out += poly(x.coords()) * dg_(r) / r * x.coords();
    return out;
  }

  Mat hessian(const SpacePoint& x) const override {
    const double r = x.r();
    const Vec& c = x.coords();
    const double p = poly(c);
    const Vec dp = poly_gradient(c);
    Mat out = g_(r) * poly_hessian();
    if (r == 0.0) {
      out += p * d2g_(0.0) * Mat::Identity(dim_, dim_);
      return out;
    }
    const Vec w = c / r;
    const Mat ww = w * w.transpose();
    const double d1 = dg_(r);
    out += p * (d2g_(r) * ww + (d1 / r) * (Mat::Identity(dim_, dim_) - ww));
    out += d1 * (w * dp.transpose() + dp * w.transpose());
    return out;
  }

 private:
  double poly(const Vec& c) const {
    double v = 1.0;
    for (int i : factors_) v *= c[i];
    return v;
  }

  Vec poly_gradient(const Vec& c) const {
    Vec out = Vec::Zero(dim_);
    if (factors_.size() == 1) {
      out[factors_[0]] = 1.0;
    } else if (factors_.size() == 2) {
      out[factors_[0]] += c[factors_[1]];
      out[factors_[1]] += c[factors_[0]];
    }
    return out;
  }

  Mat poly_hessian() const {
    Mat out = Mat::Zero(dim_, dim_);
    if (factors_.size() == 2) {
      out(factors_[0], factors_[1]) += 1.0;
      out(factors_[1], factors_[0]) += 1.0;
    }
    return out;
  }

  int dim_;
  std::function<double(double)> g_, dg_, d2g_;
  std::vector<int> factors_;
};

class PolyGaussian final : public TestFunction {
 public:
  PolyGaussian(int dim, std::vector<Monomial> terms, double sigma)
      : dim_(dim), terms_(std::move(terms)), inv_s2_(1.0 / (sigma * sigma)) {}

  int dim() const override { return dim_; }

  double value(const SpacePoint& x) const override {
    return poly(x.coords()) * gauss(x);
  }

  Vec gradient(const SpacePoint& x) const override {
    const Vec& c = x.coords();
    const double g = gauss(x);
    return g * (poly_gradient(c) - 2.0 * inv_s2_ * poly(c) * c);
  }

  Mat hessian(const SpacePoint& x) const override {
    const Vec& c = x.coords();
    const double g = gauss(x);
    const double p = poly(c);
    const Vec dp = poly_gradient(c);
    const Vec dg = -2.0 * inv_s2_ * c;  // grad(gauss) / gauss
    const Mat d2g = -2.0 * inv_s2_ * Mat::Identity(dim_, dim_) +
                    4.0 * inv_s2_ * inv_s2_ * c * c.transpose();
    return g * (poly_hessian(c) + dp * dg.transpose() + dg * dp.transpose() +
                p * d2g);
  }

 private:
  double gauss(const SpacePoint& x) const {
    return std::exp(-x.r() * x.r() * inv_s2_);
  }

  // d^order/dx^order of x^p
  static double dpow(double x, int p, int order) {
    double factor = 1.0;
    for (int j = 0; j < order; ++j) {
      if (p - j <= 0) return 0.0;
      factor *= p - j;
    }
    double v = factor;
    for (int j = 0; j < p - order; ++j) v *= x;
    return v;
  }

  double monomial(const Monomial& m, const Vec& c, int di, int dj) const {
    double v = m.coeff;
    for (int i = 0; i < dim_; ++i) {
      const int order = (i == di) + (i == dj);
      v *= dpow(c[i], m.powers[i], order);
    }
    return v;
  }

  double poly(const Vec& c) const {
    double v = 0.0;
    for (const auto& m : terms_) v += monomial(m, c, -1, -1);
    return v;
  }

  Vec poly_gradient(const Vec& c) const {
    Vec out = Vec::Zero(dim_);
    for (const auto& m : terms_)
      for (int i = 0; i < dim_; ++i) out[i] += monomial(m, c, i, -1);
    return out;
  }

  Mat poly_hessian(const Vec& c) const {
    Mat out = Mat::Zero(dim_, dim_);
    for (const auto& m : terms_)
      for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) out(i, j) += monomial(m, c, i, j);
    return out;
  }

  int dim_;
  std::vector<Monomial> terms_;
  double inv_s2_;
};

// Derivatives of phi needed by every form of the operator.
struct Jet {
  double value;
  Vec grad;
  Mat hess;
  double x_dot_grad;   // x . grad phi
  double hess_xx;      // x^T D^2 phi x
  double laplacian;
};

Jet jet(const TestFunction& f, const SpacePoint& x) {
  Jet j{f.value(x), f.gradient(x), f.hessian(x), 0.0, 0.0, 0.0};
  j.x_dot_grad = x.coords().dot(j.grad);
  j.hess_xx = x.coords().dot(j.hess * x.coords());
  j.laplacian = j.hess.trace();
  return j;
}

double term_from_jet(Dimension n, const Jet& j, double r, Term t) {
  const double N = n.real();
  if (n.value() == 2 &&
      (t == Term::C || t == Term::D || t == Term::E || t == Term::F)) {
    return 0.0;
  }
  const double rho = bubble::rho(n, r);
  const double one_p = 1.0 + rho;
  const double pref = std::pow(n.a(), N - 2.0);
  const double r_neg = std::pow(r, -N / (N - 1.0));  // r^{-N/(N-1)}
  const double b1 = 1.0 + (1.0 - N) * rho;
  const double b2 = (N - 1.0 + 1.0 / (N - 1.0)) + (N - 2.0) * rho;
  const double pow_nm1 = std::pow(one_p, N - 1.0);
  const double pow_nm2 = std::pow(one_p, N - 2.0);

  switch (t) {
    case Term::A:
      return pref * std::pow(r, (N - 2.0) / (N - 1.0)) / pow_nm2 * j.laplacian;
    case Term::B:
      return pref * ((N - 2.0) / (N - 1.0)) * r_neg / pow_nm1 * b1 *
             j.x_dot_grad;
    case Term::C:
      return (N - 2.0) * pref * r_neg / pow_nm1 * b2 * j.x_dot_grad;
    case Term::D:
      return (N - 2.0) * pref * ((N - 4.0) / (N - 1.0)) * r_neg / pow_nm1 *
             b1 * j.x_dot_grad;
    case Term::E:
      return pref * ((N - 2.0) / (N - 1.0)) * r_neg / pow_nm1 * b1 *
             j.x_dot_grad;
    case Term::F:
      return (N - 2.0) * pref * r_neg / pow_nm2 * j.hess_xx;
    case Term::G:
      return bubble::c_constant(n) / std::pow(one_p, N) * j.value;
  }
  fail(ErrorCode::internal, "unknown term tag");
}

}  // namespace

TestFunctionPtr make_constant(Dimension n, double c) {
  return std::make_shared<RadialTimesPolynomial>(
      n.value(), [c](double) { return c; }, [](double) { return 0.0; },
      [](double) { return 0.0; }, std::vector<int>{});
}

TestFunctionPtr make_z0(Dimension n) {
  // Z_0 = q (N/(1+rho) - 1), with rho' = q rho / r, rho'' = q(q-1) rho / r^2.
  const double q = n.q();
  const double N = n.real();
  auto g = [n, q, N](double r) { return q * (N / (1.0 + bubble::rho(n, r)) - 1.0); };
  auto dg = [n, q, N](double r) {
    if (r == 0.0) return 0.0;
    const double p = bubble::rho(n, r);
    return -q * N * (q * p / r) / ((1.0 + p) * (1.0 + p));
  };
  auto d2g = [n, q, N](double r) {
    if (r == 0.0) {
      // Finite only for N = 2 (rho = r^2).
      return n.value() == 2 ? -q * N * 2.0 : -HUGE_VAL;
    }
    const double p = bubble::rho(n, r);
    const double d1 = q * p / r;
    const double d2 = q * (q - 1.0) * p / (r * r);
    return -q * N * (d2 * (1.0 + p) - 2.0 * d1 * d1) / std::pow(1.0 + p, 3);
  };
  return std::make_shared<RadialTimesPolynomial>(n.value(), g, dg, d2g,
                                                 std::vector<int>{});
}

TestFunctionPtr make_zi(Dimension n, int i) {
  require(i >= 1 && i <= n.value(), ErrorCode::invalid_argument,
          "make_zi: axis index must satisfy 1 <= i <= N");
  // Z_i = G(r) x_i with G = U'/r = -a r^s / (1+rho), s = -(N-2)/(N-1).
  const double N = n.real();
  const double s = -(N - 2.0) / (N - 1.0);
  const double q = n.q();
  const double a = n.a();
  auto g = [n, s, a](double r) {
    return -a * std::pow(r, s) / (1.0 + bubble::rho(n, r));
  };
  // G'/G = s/r - h,  h = q rho / (r (1+rho)),  h' = q rho ((q-1) - rho) / (r (1+rho))^2
  auto log_d = [n, s, q](double r) {
    const double p = bubble::rho(n, r);
    return s / r - q * p / (r * (1.0 + p));
  };
  auto dg = [g, log_d](double r) { return g(r) * log_d(r); };
  auto d2g = [n, s, q, g, log_d](double r) {
    const double p = bubble::rho(n, r);
    const double dh = q * p * ((q - 1.0) - p) / (r * r * (1.0 + p) * (1.0 + p));
    const double l = log_d(r);
    return g(r) * (l * l - s / (r * r) - dh);
  };
  return std::make_shared<RadialTimesPolynomial>(n.value(), g, dg, d2g,
                                                 std::vector<int>{i - 1});
}

TestFunctionPtr make_poly_gaussian(Dimension n, std::vector<Monomial> terms,
                                   double sigma) {
  require(sigma > 0.0, ErrorCode::invalid_argument,
          "make_poly_gaussian: sigma must be > 0");
  for (const auto& m : terms) {
    require(static_cast<int>(m.powers.size()) == n.value(),
            ErrorCode::invalid_argument,
            "make_poly_gaussian: monomial needs one exponent per coordinate");
    for (int p : m.powers)
      require(p >= 0, ErrorCode::invalid_argument,
              "make_poly_gaussian: negative exponent");
  }
  return std::make_shared<PolyGaussian>(n.value(), std::move(terms), sigma);
}

TestFunctionPtr random_poly_gaussian(Dimension n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(1, 4);
  std::uniform_int_distribution<int> degree(0, 3);
  std::uniform_int_distribution<int> axis(0, n.value() - 1);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  std::bernoulli_distribution wide(0.5);

  std::vector<Monomial> terms(count(rng));
  for (auto& m : terms) {
    m.coeff = coeff(rng);
    m.powers.assign(n.value(), 0);
    const int deg = degree(rng);
    for (int d = 0; d < deg; ++d) ++m.powers[axis(rng)];
  }
  const double sigma = wide(rng) ? 3.0 : 1.0;
  return make_poly_gaussian(n, std::move(terms), sigma);
}

TestFunctionPtr make_radial_harmonic(Dimension n, int k,
                                     std::function<double(double)> psi,
                                     std::function<double(double)> dpsi,
                                     std::function<double(double)> d2psi) {
  require(k >= 0 && k <= 2, ErrorCode::invalid_argument,
          "make_radial_harmonic: only degrees 0, 1, 2 are available");
  const double kk = k;
  // G = psi r^{-k}
  auto g = [psi, kk](double r) { return psi(r) * std::pow(r, -kk); };
  auto dg = [psi, dpsi, kk](double r) {
    return dpsi(r) * std::pow(r, -kk) - kk * psi(r) * std::pow(r, -kk - 1.0);
  };
  auto d2g = [psi, dpsi, d2psi, kk](double r) {
    return d2psi(r) * std::pow(r, -kk) -
           2.0 * kk * dpsi(r) * std::pow(r, -kk - 1.0) +
           kk * (kk + 1.0) * psi(r) * std::pow(r, -kk - 2.0);
  };
  std::vector<int> factors;
  if (k >= 1) factors.push_back(0);
  if (k == 2) factors.push_back(1);
  return std::make_shared<RadialTimesPolynomial>(n.value(), g, dg, d2g,
                                                 std::move(factors));
}

double harmonic_on_sphere(int k, const SpacePoint& x) {
  require(k >= 0 && k <= 2, ErrorCode::invalid_argument,
          "harmonic_on_sphere: only degrees 0, 1, 2 are available");
  if (k == 0) return 1.0;
  require(x.r() > 0.0, ErrorCode::singular_input,
          "harmonic_on_sphere: direction undefined at the origin");
  const auto& c = x.coords();
  return k == 1 ? c[0] / x.r() : c[0] * c[1] / (x.r() * x.r());
}

std::string_view term_name(Term t) {
  static constexpr std::array<std::string_view, 7> names{"A", "B", "C", "D",
                                                         "E", "F", "G"};
  return names[static_cast<int>(t)];
}

double term(Dimension n, const TestFunction& f, const SpacePoint& x, Term t) {
  check_point(n, x, "term");
  check_off_origin(x, "term");
  return term_from_jet(n, jet(f, x), x.r(), t);
}

double apply_linearized(Dimension n, const TestFunction& f,
                        const SpacePoint& x) {
  check_point(n, x, "apply_linearized");
  check_off_origin(x, "apply_linearized");
  const Jet j = jet(f, x);
  double sum = 0.0;
  for (Term t : kAllTerms) sum += term_from_jet(n, j, x.r(), t);
  return sum;
}

double radial_form(Dimension n, const TestFunction& f, const SpacePoint& x) {
  check_point(n, x, "radial_form");
  const double r = x.r();
  // Every term carries |x|^2, x-contractions or rho, all zero at the origin.
  if (r == 0.0) return 0.0;
  const double N = n.real();
  const Jet j = jet(f, x);
  const double rho = bubble::rho(n, r);
  return r * r * j.laplacian + N * (N - 2.0) * j.x_dot_grad / (1.0 + rho) +
         (N - 2.0) * j.hess_xx +
         (N * N * N / (N - 1.0)) * rho / ((1.0 + rho) * (1.0 + rho)) * j.value;
}

double weight(Dimension n, double r) {
  require(r > 0.0, ErrorCode::singular_input, "weight: requires r > 0");
  const double N = n.real();
  return std::pow(n.a(), N - 2.0) * std::pow(r, -N / (N - 1.0)) /
         std::pow(1.0 + bubble::rho(n, r), N - 2.0);
}

double nonlinear_map(Dimension n, double g, const Vec& grad, const Mat& hess) {
  const double N = n.real();
  const double lap = hess.trace();
  if (n.value() == 2) return lap + std::exp(g);
  const double norm = grad.norm();
  require(norm > 0.0, ErrorCode::singular_input,
          "nonlinear_map: Delta_N g is undefined where grad g = 0 (N > 2)");
  const double delta_n = std::pow(norm, N - 2.0) * lap +
                         (N - 2.0) * std::pow(norm, N - 4.0) *
                             grad.dot(hess * grad);
  return delta_n + std::exp(g);
}

double directional_derivative_check(Dimension n, const TestFunction& f,
                                    const SpacePoint& x, double t_step) {
  check_point(n, x, "directional_derivative_check");
  check_off_origin(x, "directional_derivative_check");
  require(t_step > 0.0, ErrorCode::invalid_argument,
          "directional_derivative_check: t_step must be > 0");
  const double u = bubble::u_radial(n, x.r());
  const Vec du = bubble::grad_u(n, x);
  const Mat d2u = bubble::hessian_u(n, x);
  const Jet j = jet(f, x);

  // The two map values nearly cancel, so they are formed in extended
  // precision; otherwise rounding swamps the O(t^2) truncation at small t.
  using LVec = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
  using LMat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  const long double N = n.real();
  const LVec lg = du.cast<long double>(), lgj = j.grad.cast<long double>();
  const LMat lh = d2u.cast<long double>(), lhj = j.hess.cast<long double>();
  auto map_at = [&](long double t) {
    const long double g = u + t * static_cast<long double>(j.value);
    const LVec grad = lg + t * lgj;
    const LMat hess = lh + t * lhj;
    const long double lap = hess.trace();
    if (n.value() == 2) return lap + std::exp(g);
    const long double norm = grad.norm();
    require(norm > 0.0L, ErrorCode::singular_input,
            "directional_derivative_check: grad vanishes along the path");
    return std::pow(norm, N - 2) * lap +
           (N - 2) * std::pow(norm, N - 4) * grad.dot(hess * grad) + std::exp(g);
  };
  const long double t = t_step;
  const double central = static_cast<double>((map_at(t) - map_at(-t)) / (2 * t));
  return std::abs(central - apply_linearized(n, f, x));
}

}  // namespace nlk::linop

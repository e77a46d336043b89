#include "core/ode_engine.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>

namespace nlk::ode {

namespace {

using Real = long double;
using State = std::array<Real, 2>;

constexpr double kMaxStepInT = 0.5;

void check_mode(int k) {
  require(k >= 0 && k <= kMaxMode, ErrorCode::invalid_argument,
          "mode index k must satisfy 0 <= k <= " + std::to_string(kMaxMode));
}

void check_options(const IntegrationOptions& o) {
  require(o.rtol > 0.0 && o.atol > 0.0, ErrorCode::invalid_argument,
          "integration tolerances must be > 0");
  require(o.points_per_decade >= 0, ErrorCode::invalid_argument,
          "points_per_decade must be >= 0");
}

// Mode ODE for w(t) = e^{-beta t} psi(e^t):
//   w'' + (2 beta + p - 1) w' + (defect - beta B rho/(1+rho) + Q) w = 0,
// where defect = beta^2 + B beta - lambda/(N-1) vanishes for beta = beta_plus.
struct ModeSystem {
  Real beta = 0;
  Real defect = 0;
  Real b = 0;       // N(N-2)/(N-1)
  Real qpot = 0;    // N^3/(N-1)^2
  Real q = 0;       // N/(N-1)
  Real sign = 1;    // +1: tau = t, -1: tau = -t

  void operator()(const State& y, State& dy, Real tau) const {
    const Real t = sign * tau;
    const Real rho = std::exp(q * t);
    const Real s = 1 / (1 + rho);
    const Real pm1 = b * s;
    const Real c = defect - beta * b * rho * s + qpot * rho * s * s;
    dy[0] = sign * y[1];
    dy[1] = sign * (-(2 * beta + pm1) * y[1] - c * y[0]);
  }
};

ModeSystem make_system(int k, Dimension n, Real beta, bool regular) {
  const Real N = n.value();
  ModeSystem sys;
  sys.beta = beta;
  sys.b = N * (N - 2) / (N - 1);
  sys.qpot = N * N * N / ((N - 1) * (N - 1));
  sys.q = N / (N - 1);
  const Real lam = static_cast<Real>(k) * (k + N - 2) / (N - 1);
  sys.defect = regular ? Real(0) : beta * beta + sys.b * beta - lam;
  return sys;
}

struct Node {
  Real t;
  State y;
};

struct Path {
  std::vector<Node> grid;
  std::vector<Node> steps;
};

// Integrates from t_from towards t_to (either direction), reporting the state
// at each entry of grid_t (ordered in the direction of travel).
Path run(ModeSystem sys, Real t_from, Real t_to, const State& y0,
         const std::vector<Real>& grid_t, const IntegrationOptions& opts) {
  namespace odeint = boost::numeric::odeint;
  const Real sign = t_to >= t_from ? 1 : -1;
  sys.sign = sign;
  const Real tau0 = sign * t_from;
  const Real tau1 = sign * t_to;

  auto stepper = odeint::make_dense_output(
      static_cast<Real>(opts.atol), static_cast<Real>(opts.rtol),
      static_cast<Real>(kMaxStepInT),
      odeint::runge_kutta_dopri5<State, Real>());
  stepper.initialize(y0, tau0, static_cast<Real>(1e-3));

  Path out;
  out.grid.reserve(grid_t.size());
  std::size_t next = 0;
  State y;
  auto flush_grid = [&](Real upto) {
    while (next < grid_t.size() && sign * grid_t[next] <= upto) {
      const Real tau = sign * grid_t[next];
      if (tau <= tau0) {
        out.grid.push_back({grid_t[next], y0});
      } else {
        stepper.calc_state(tau, y);
        out.grid.push_back({grid_t[next], y});
      }
      ++next;
    }
  };
  flush_grid(tau0);

  Real last_good = t_from;
  try {
    while (stepper.current_time() < tau1) {
      stepper.do_step(sys);
      const State& cur = stepper.current_state();
      if (!std::isfinite(cur[0]) || !std::isfinite(cur[1])) {
        fail(ErrorCode::not_converged,
             "mode integration overflowed past r = " +
                 std::to_string(static_cast<double>(std::exp(last_good))));
      }
      const Real now = std::min(stepper.current_time(), tau1);
      flush_grid(now);
      if (stepper.current_time() <= tau1) {
        out.steps.push_back({sign * stepper.current_time(), cur});
      } else {
        stepper.calc_state(tau1, y);
        out.steps.push_back({t_to, y});
      }
      last_good = sign * now;
    }
  } catch (const odeint::odeint_error& e) {
    fail(ErrorCode::not_converged,
         std::string("step size underflow in mode integration (") + e.what() +
             "); last good r = " +
             std::to_string(static_cast<double>(std::exp(last_good))));
  }
  flush_grid(tau1);
  return out;
}

Sample to_sample(const Node& node, Real beta) {
  const Real r = std::exp(node.t);
  const Real scale = std::exp(beta * node.t);
  Sample s;
  s.r = static_cast<double>(r);
  s.psi = static_cast<double>(scale * node.y[0]);
  s.dpsi = static_cast<double>(scale / r * (node.y[1] + beta * node.y[0]));
  return s;
}

std::vector<Real> log_grid(double lo, double hi, int per_decade) {
  require(lo > 0.0 && hi > lo, ErrorCode::invalid_argument,
          "radial range must satisfy 0 < lo < hi");
  const Real h = std::log(Real(10)) / per_decade;
  const Real t_lo = std::log(static_cast<Real>(lo));
  const Real span = std::log(static_cast<Real>(hi)) - t_lo;
  const auto m = static_cast<std::size_t>(std::ceil(span / h - 1e-9L));
  std::vector<Real> ts(m + 1);
  for (std::size_t i = 0; i <= m; ++i) ts[i] = t_lo + static_cast<Real>(i) * h;
  return ts;
}

modes::RadialJet base_jet(int k, Dimension n, double r) {
  return k == 0 ? modes::psi0(n, r) : modes::psi1(n, r);
}

// Least squares y = slope x + intercept.
std::pair<double, double> fit_line(const std::vector<double>& x,
                                   const std::vector<double>& y) {
  const double m = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

// Composite Simpson on uniformly spaced samples, with a 3/8 panel when the
// interval count is odd.
double uniform_quadrature(const std::vector<double>& f, double h) {
  const std::size_t m = f.size() - 1;
  if (m == 1) return 0.5 * h * (f[0] + f[1]);
  if (m == 2) return h / 3.0 * (f[0] + 4.0 * f[1] + f[2]);
  std::size_t simpson_end = m % 2 == 0 ? m : m - 3;
  double sum = 0.0;
  for (std::size_t i = 0; i + 2 <= simpson_end; i += 2)
    sum += h / 3.0 * (f[i] + 4.0 * f[i + 1] + f[i + 2]);
  if (simpson_end != m) {
    const std::size_t i = simpson_end;
    sum += 3.0 * h / 8.0 * (f[i] + 3.0 * f[i + 1] + 3.0 * f[i + 2] + f[i + 3]);
  }
  return sum;
}

}  // namespace

std::string_view launch_name(LaunchType t) {
  switch (t) {
    case LaunchType::regular_at_zero: return "regular-at-zero";
    case LaunchType::prescribed_at_r: return "prescribed-at-R";
    case LaunchType::reduction_of_order: return "reduction-of-order";
    case LaunchType::closed_form: return "closed-form";
  }
  return "unknown";
}

std::string_view growth_kind_name(GrowthKind k) {
  switch (k) {
    case GrowthKind::power: return "power";
    case GrowthKind::logarithmic: return "logarithmic";
    case GrowthKind::bounded: return "bounded";
    case GrowthKind::inconclusive: return "inconclusive";
  }
  return "unknown";
}

int default_points_per_decade(int k, Dimension n) {
  check_mode(k);
  const auto spec = modes::mode_spec(k, n);
  const double rate = std::max({spec.gamma, spec.beta_plus, -spec.beta_minus});
  return 250 + 100 * static_cast<int>(std::ceil(rate));
}

double frobenius_c1(int k, Dimension n) {
  check_mode(k);
  const auto spec = modes::mode_spec(k, n);
  const double N = n.real();
  const double b = N * (N - 2.0) / (N - 1.0);
  const double beta = spec.beta_plus;
  const double q = n.q();
  return -(N * N * N / ((N - 1.0) * (N - 1.0)) - beta * b) /
         (q * (q + 2.0 * beta + b));
}

SolutionTrajectory integrate_regular(int k, Dimension n, double r_start,
                                     double r_end,
                                     const IntegrationOptions& opts) {
  check_mode(k);
  check_options(opts);
  require(r_start > 0.0 && r_end > r_start, ErrorCode::invalid_argument,
          "integrate_regular: requires 0 < r_start < r_end");
  const auto spec = modes::mode_spec(k, n);
  const int per_decade =
      opts.points_per_decade > 0 ? opts.points_per_decade
                                 : default_points_per_decade(k, n);
  const auto grid = log_grid(r_start, r_end, per_decade);
  const Real beta = spec.beta_plus;
  const ModeSystem sys = make_system(k, n, beta, true);

  const Real t0 = grid.front();
  const Real rho0 = std::exp(sys.q * t0);
  const Real c1 = frobenius_c1(k, n);
  const State y0{1 + c1 * rho0, c1 * sys.q * rho0};

  const Path path = run(sys, t0, grid.back(), y0, grid, opts);

  SolutionTrajectory traj;
  traj.k = k;
  traj.n = n.value();
  traj.launch = LaunchType::regular_at_zero;
  traj.samples.reserve(path.grid.size());
  for (const auto& node : path.grid) traj.samples.push_back(to_sample(node, beta));
  traj.steps.reserve(path.steps.size());
  for (const auto& node : path.steps) traj.steps.push_back(to_sample(node, beta));
  return traj;
}

double second_solution_launch_radius(Dimension n) {
  return bubble::z0_zero_radius(n) + 1.0;
}

std::optional<Range> reduction_excluded(int k, Dimension n) {
  if (k != 0) return std::nullopt;
  const double r_star = bubble::z0_zero_radius(n);
  return Range{0.9 * r_star, 1.1 * r_star};
}

SolutionTrajectory second_solution(int k, Dimension n, SecondMethod method,
                                   Range range,
                                   const IntegrationOptions& opts) {
  require(k == 0 || k == 1, ErrorCode::invalid_argument,
          "second_solution: only modes 0 and 1 have a bounded base solution");
  check_options(opts);
  require(range.lo > 0.0 && range.hi > range.lo, ErrorCode::invalid_argument,
          "second_solution: requires 0 < lo < hi");
  const int per_decade =
      opts.points_per_decade > 0 ? opts.points_per_decade
                                 : default_points_per_decade(k, n);
  const auto grid = log_grid(range.lo, range.hi, per_decade);
  const double r0 = second_solution_launch_radius(n);

  SolutionTrajectory traj;
  traj.k = k;
  traj.n = n.value();

  if (method == SecondMethod::wronskian_launch) {
    traj.launch = LaunchType::prescribed_at_r;
    const auto base = base_jet(k, n, r0);
    const Real t0 = std::log(static_cast<Real>(r0));
    // psi2(r0) = 0 and P psi2' psi_base = 1 at r0.
    const Real dpsi =
        1.0L / (static_cast<Real>(modes::divergence_factor(n, r0)) * base.value);
    const State y0{0, static_cast<Real>(r0) * dpsi};
    const ModeSystem sys = make_system(k, n, 0, false);

    std::vector<Real> fwd, bwd;
    for (Real t : grid) (t >= t0 ? fwd : bwd).push_back(t);
    std::reverse(bwd.begin(), bwd.end());

    std::vector<Node> nodes, steps;
    if (!bwd.empty()) {
      Path p = run(sys, t0, bwd.back(), y0, bwd, opts);
      nodes.assign(p.grid.rbegin(), p.grid.rend());
      steps.assign(p.steps.rbegin(), p.steps.rend());
    }
    if (!fwd.empty()) {
      Path p = run(sys, t0, fwd.back(), y0, fwd, opts);
      nodes.insert(nodes.end(), p.grid.begin(), p.grid.end());
      steps.insert(steps.end(), p.steps.begin(), p.steps.end());
    }
    for (const auto& node : nodes) traj.samples.push_back(to_sample(node, 0));
    for (const auto& node : steps) {
      const Sample s = to_sample(node, 0);
      if (s.r >= range.lo && s.r <= std::exp(static_cast<double>(grid.back())))
        traj.steps.push_back(s);
    }
    std::sort(traj.steps.begin(), traj.steps.end(),
              [](const Sample& a, const Sample& b) { return a.r < b.r; });
    traj.steps.erase(std::unique(traj.steps.begin(), traj.steps.end(),
                                 [](const Sample& a, const Sample& b) {
                                   return a.r == b.r;
                                 }),
                     traj.steps.end());
    return traj;
  }

  traj.launch = LaunchType::reduction_of_order;
  const double r_hi = std::exp(static_cast<double>(grid.back()));
  if (auto bad = reduction_excluded(k, n)) {
    require(r_hi < bad->lo || range.lo > bad->hi, ErrorCode::precondition,
            "second_solution: the reduction formula is singular at the zero "
            "of psi_0; keep the range outside [0.9 r*, 1.1 r*]");
  }

  // c'(r) = A (1+rho)^{N-2} / (psi_base^2 r^{1 + N(N-2)/(N-1)}), with
  // A = (N^2/(N-1))^{-(N-2)} so that the Wronskian is 1.
  const double N = n.real();
  const double amp = std::pow(n.a(), -(N - 2.0));
  const double expo = 1.0 + N * (N - 2.0) / (N - 1.0);
  auto dc = [&](double r) {
    const double base = base_jet(k, n, r).value;
    return amp * std::pow(1.0 + bubble::rho(n, r), N - 2.0) /
           (base * base * std::pow(r, expo));
  };
  // In t = log r: dc/dt = r c'(r).
  auto dc_dt = [&](double t) {
    const double r = std::exp(t);
    return r * dc(r);
  };
  using boost::math::quadrature::gauss_kronrod;
  auto integral = [&](double t_a, double t_b) {
    // Grid intervals are short, so a 15-point rule is exact to rounding and
    // the tolerance only guards against a coarse custom grid.
    return gauss_kronrod<double, 15>::integrate(dc_dt, t_a, t_b, 6, 1e-12);
  };

  std::vector<double> ts(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) ts[i] = static_cast<double>(grid[i]);
  const double t_ref = std::clamp(std::log(r0), ts.front(), ts.back());
  std::vector<double> c(ts.size());
  const auto split = static_cast<std::size_t>(
      std::lower_bound(ts.begin(), ts.end(), t_ref) - ts.begin());
  // Accumulate outwards from t_ref in both directions.
  double acc = 0.0, prev = t_ref;
  for (std::size_t i = split; i < ts.size(); ++i) {
    acc += integral(prev, ts[i]);
    prev = ts[i];
    c[i] = acc;
  }
  acc = 0.0;
  prev = t_ref;
  for (std::size_t i = split; i-- > 0;) {
    acc -= integral(ts[i], prev);
    prev = ts[i];
    c[i] = acc;
  }

  traj.samples.reserve(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double r = std::exp(ts[i]);
    const auto base = base_jet(k, n, r);
    traj.samples.push_back(
        {r, c[i] * base.value, dc(r) * base.value + c[i] * base.d1});
  }
  return traj;
}

SolutionTrajectory sample_closed_form(int k, Dimension n, Range range,
                                      int points_per_decade) {
  require(k == 0 || k == 1, ErrorCode::invalid_argument,
          "sample_closed_form: closed forms exist for k = 0, 1 only");
  require(points_per_decade > 0, ErrorCode::invalid_argument,
          "sample_closed_form: points_per_decade must be > 0");
  SolutionTrajectory traj;
  traj.k = k;
  traj.n = n.value();
  traj.launch = LaunchType::closed_form;
  for (Real t : log_grid(range.lo, range.hi, points_per_decade)) {
    const double r = std::exp(static_cast<double>(t));
    const auto j = base_jet(k, n, r);
    traj.samples.push_back({r, j.value, j.d1});
  }
  return traj;
}

double divergence_wronskian(Dimension n, const Sample& a, const Sample& b) {
  return modes::divergence_factor(n, a.r) * (b.dpsi * a.psi - a.dpsi * b.psi);
}

Sample interpolate(const SolutionTrajectory& traj, double r) {
  const auto& s = traj.samples;
  require(!s.empty() && r >= s.front().r && r <= s.back().r,
          ErrorCode::invalid_argument, "interpolate: r outside trajectory");
  auto it = std::lower_bound(s.begin(), s.end(), r,
                             [](const Sample& a, double v) { return a.r < v; });
  if (it != s.end() && it->r == r) return *it;
  const Sample& b = *it;
  const Sample& a = *(it - 1);
  const double h = b.r - a.r;
  const double u = (r - a.r) / h;
  const double h00 = (1 + 2 * u) * (1 - u) * (1 - u);
  const double h10 = u * (1 - u) * (1 - u);
  const double h01 = u * u * (3 - 2 * u);
  const double h11 = u * u * (u - 1);
  const double psi = h00 * a.psi + h10 * h * a.dpsi + h01 * b.psi + h11 * h * b.dpsi;
  // derivative of the Hermite cubic
  const double d00 = 6 * u * u - 6 * u;
  const double d10 = 3 * u * u - 4 * u + 1;
  const double d01 = -d00;
  const double d11 = 3 * u * u - 2 * u;
  const double dpsi =
      (d00 * a.psi + d01 * b.psi) / h + d10 * a.dpsi + d11 * b.dpsi;
  return {r, psi, dpsi};
}

GrowthEstimate growth_exponent(const SolutionTrajectory& traj, Range window,
                               const GrowthOptions& opts) {
  require(window.lo > 0.0 && window.hi > window.lo, ErrorCode::invalid_argument,
          "growth_exponent: invalid window");
  require(!traj.samples.empty() && window.lo >= traj.r_min() * (1 - 1e-12) &&
              window.hi <= traj.r_max() * (1 + 1e-12),
          ErrorCode::invalid_argument,
          "growth_exponent: window must lie inside the trajectory");
  require(window.hi >= 10.0 * window.lo * (1 - 1e-12),
          ErrorCode::invalid_argument,
          "growth_exponent: window must span at least one decade");

  GrowthEstimate g;
  g.fit_window = window;
  std::vector<double> lr, lpsi, psi;
  bool sign_change = false;
  double sign = 0.0;
  for (const auto& s : traj.samples) {
    if (s.r < window.lo * (1 - 1e-12) || s.r > window.hi * (1 + 1e-12)) continue;
    if (s.psi == 0.0 || !std::isfinite(s.psi)) {
      sign_change = true;
      continue;
    }
    const double sg = s.psi > 0 ? 1.0 : -1.0;
    if (sign != 0.0 && sg != sign) sign_change = true;
    sign = sg;
    lr.push_back(std::log(s.r));
    lpsi.push_back(std::log(std::abs(s.psi)));
    psi.push_back(s.psi);
  }
  g.points = static_cast<int>(lr.size());
  if (sign_change || lr.size() < 3) {
    g.kind = GrowthKind::inconclusive;
    return g;
  }

  const auto [slope, icpt] = fit_line(lr, lpsi);
  g.power_slope = slope;
  for (std::size_t i = 0; i < lr.size(); ++i)
    g.power_residual =
        std::max(g.power_residual, std::abs(lpsi[i] - (slope * lr[i] + icpt)));

  const auto [a, b] = fit_line(lr, psi);
  g.log_coefficient = a;
  g.log_offset = b;
  double peak = 0.0, worst = 0.0;
  for (std::size_t i = 0; i < lr.size(); ++i) {
    peak = std::max(peak, std::abs(psi[i]));
    worst = std::max(worst, std::abs(psi[i] - (a * lr[i] + b)));
  }
  g.log_residual = worst / peak;

  const double span = lr.back() - lr.front();
  const bool log_varies =
      std::abs(a) * span > opts.bounded_exponent * peak;
  const bool log_fits = g.log_residual <= opts.log_fit_tol;

  if (std::abs(slope) < opts.bounded_exponent && !log_varies) {
    g.kind = GrowthKind::bounded;
    g.exponent = 0.0;
    g.residual = g.power_residual;
  } else if (log_fits && log_varies && g.log_residual < g.power_residual) {
    g.kind = GrowthKind::logarithmic;
    g.exponent = 0.0;
    g.residual = g.log_residual;
  } else {
    g.kind = GrowthKind::power;
    g.exponent = slope;
    g.residual = g.power_residual;
  }
  const double limit =
      g.kind == GrowthKind::logarithmic ? opts.log_fit_tol : opts.power_fit_tol;
  g.conclusive = g.residual <= limit;
  return g;
}

LagrangeIdentity lagrange_identity(int k, int j, Dimension n,
                                   const SolutionTrajectory& traj_k,
                                   const SolutionTrajectory& traj_j,
                                   double r_lo, double r_hi) {
  require(k != j, ErrorCode::precondition,
          "lagrange_identity: modes must differ (k != j)");
  require(r_lo > 0.0 && r_hi > r_lo, ErrorCode::invalid_argument,
          "lagrange_identity: requires 0 < r_lo < r_hi");
  require(traj_k.r_min() <= r_lo * (1 + 1e-12) &&
              traj_k.r_max() >= r_hi * (1 - 1e-12) &&
              traj_j.r_min() <= r_lo * (1 + 1e-12) &&
              traj_j.r_max() >= r_hi * (1 - 1e-12),
          ErrorCode::precondition,
          "lagrange_identity: both trajectories must cover [r_lo, r_hi]");

  std::vector<Sample> sk, sj;
  for (const auto& s : traj_k.samples) {
    if (s.r < r_lo * (1 - 1e-12) || s.r > r_hi * (1 + 1e-12)) continue;
    sk.push_back(s);
    auto it = std::lower_bound(
        traj_j.samples.begin(), traj_j.samples.end(), s.r,
        [](const Sample& a, double v) { return a.r < v * (1 - 1e-13); });
    if (it != traj_j.samples.end() && std::abs(it->r - s.r) <= 1e-13 * s.r)
      sj.push_back(*it);
    else
      sj.push_back(interpolate(traj_j, s.r));
  }
  require(sk.size() >= 2, ErrorCode::precondition,
          "lagrange_identity: fewer than two grid nodes in the window");

  const double N = n.real();
  const double coef =
      (modes::eigenvalue(k, n) - modes::eigenvalue(j, n)) / (N - 1.0);
  auto boundary = [&](std::size_t i) {
    return modes::divergence_factor(n, sk[i].r) *
           (sk[i].dpsi * sj[i].psi - sj[i].dpsi * sk[i].psi);
  };
  // integrand in t = log r: r * r^{N-3} |U'|^{N-2} psi_k psi_j
  std::vector<double> f(sk.size());
  for (std::size_t i = 0; i < sk.size(); ++i) {
    const double r = sk[i].r;
    f[i] = std::pow(r, N - 2.0) * bubble::grad_norm_power(n, r, n.value() - 2) *
           sk[i].psi * sj[i].psi;
  }
  const double h = std::log(sk[1].r / sk[0].r);

  LagrangeIdentity out;
  out.window = {sk.front().r, sk.back().r};
  const double b_lo = boundary(0);
  const double b_hi = boundary(sk.size() - 1);
  out.boundary = b_hi - b_lo;
  out.integral_side = coef * uniform_quadrature(f, h);
  out.residual = std::abs(out.boundary - out.integral_side);
  out.scale = std::abs(b_lo) + std::abs(b_hi);

  double partial = 0.0;
  out.min_partial_integral = HUGE_VAL;
  for (std::size_t i = 1; i < f.size(); ++i) {
    partial += 0.5 * h * (f[i - 1] + f[i]);
    out.min_partial_integral = std::min(out.min_partial_integral, coef * partial);
  }
  return out;
}

double lagrange_identity_residual(int k, int j, Dimension n,
                                  const SolutionTrajectory& traj_k,
                                  const SolutionTrajectory& traj_j,
                                  double r_lo, double r_hi) {
  return lagrange_identity(k, j, n, traj_k, traj_j, r_lo, r_hi).residual;
}

std::string to_csv(const SolutionTrajectory& traj) {
  std::string out = "r,psi,dpsi\n";
  out.reserve(out.size() + traj.samples.size() * 72);
  char line[128];
  for (const auto& s : traj.samples) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", s.r, s.psi, s.dpsi);
    out += line;
  }
  return out;
}

}  // namespace nlk::ode

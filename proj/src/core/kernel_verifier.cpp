#include "core/kernel_verifier.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <random>
#include <thread>

#include "core/linop.hpp"

namespace nlk::verify {

namespace {

constexpr int kClosedFormPoints = 200;
constexpr double kClosedFormLo = 1e-3;
constexpr double kClosedFormHi = 1e3;
// Regular k = 1 solutions decay like r^{-1} while the growing companion
// behaves like r; errors relative to psi_1 grow like r^2, so the match runs
// at tighter tolerances than the rest of the pipeline.
constexpr double kMatchTightening = 1e-4;
// Largest |log10 psi| allowed at either end of a higher-mode trajectory.
constexpr double kMaxDecades = 250.0;

std::vector<double> log_grid(double lo, double hi, int count) {
  std::vector<double> r(count);
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (int i = 0; i < count; ++i) {
    r[i] = std::pow(10.0, a + (b - a) * i / (count - 1));
  }
  return r;
}

ode::IntegrationOptions ode_options(const Tolerances& tol, double scale = 1.0) {
  ode::IntegrationOptions o;
  o.rtol = tol.ode_rtol * scale;
  o.atol = tol.ode_atol * scale;
  return o;
}

ode::GrowthOptions growth_options(const Tolerances& tol) {
  ode::GrowthOptions g;
  g.bounded_exponent = tol.bounded_exponent;
  g.log_fit_tol = tol.log_fit;
  g.power_fit_tol = tol.power_fit;
  return g;
}

double closed_form_residual(int k, Dimension n) {
  double worst = 0.0;
  for (double r : log_grid(kClosedFormLo, kClosedFormHi, kClosedFormPoints)) {
    const auto j = k == 0 ? modes::psi0(n, r) : modes::psi1(n, r);
    worst = std::max(worst, std::abs(modes::mode_residual(k, n, r, j)));
  }
  return worst;
}

double wronskian_drift(int k, Dimension n, const ode::SolutionTrajectory& s) {
  double worst = 0.0;
  for (const auto& x : s.samples) {
    const auto b = k == 0 ? modes::psi0(n, x.r) : modes::psi1(n, x.r);
    const double w = ode::divergence_wronskian(n, {x.r, b.value, b.d1}, x);
    worst = std::max(worst, std::abs(w - 1.0));
  }
  return worst;
}

// Largest fitted slope of log|psi| over two adjacent decades of the tail.
struct TailFit {
  double max_slope = 0.0;
  bool conclusive = true;
};

TailFit tail_slopes(const ode::SolutionTrajectory& t, const Tolerances& tol) {
  TailFit out;
  out.max_slope = -HUGE_VAL;
  for (auto w : {ode::Range{Grid::tail_lo, Grid::tail_mid},
                 ode::Range{Grid::tail_mid, Grid::r_end}}) {
    const auto g = ode::growth_exponent(t, w, growth_options(tol));
    if (g.kind == ode::GrowthKind::inconclusive) out.conclusive = false;
    out.max_slope = std::max(out.max_slope, g.power_slope);
  }
  return out;
}

void finish(ModeReport& m, bool conclusive) {
  const bool all = std::all_of(m.checks.begin(), m.checks.end(),
                               [](const Check& c) { return c.pass; });
  if (!conclusive)
    m.verdict = Verdict::inconclusive;
  else
    m.verdict = all ? Verdict::pass : Verdict::fail;
}

ModeReport start(int k, Dimension n) {
  ModeReport m;
  const auto s = modes::mode_spec(k, n);
  m.k = k;
  m.lambda = s.lambda;
  m.multiplicity = s.multiplicity;
  return m;
}

template <class Body>
ModeReport guarded(int k, Dimension n, Body body) {
  try {
    return body();
  } catch (const Error& e) {
    if (e.code() != ErrorCode::not_converged &&
        e.code() != ErrorCode::precondition)
      throw;
    ModeReport m = start(k, n);
    m.verdict = Verdict::inconclusive;
    m.diagnostic = e.what();
    return m;
  }
}

}  // namespace

void Tolerances::validate() const {
  for (double v : {residual, exponent, log_fit, power_fit, bounded_exponent,
                   lagrange, match, wronskian, ode_rtol, ode_atol, pde, mass,
                   operator_equivalence, kernel_element}) {
    require(std::isfinite(v) && v > 0.0, ErrorCode::invalid_argument,
            "tolerances must be finite and > 0");
  }
}

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

Check at_most(std::string name, double value, double threshold) {
  return {std::move(name), value, threshold,
          std::isfinite(value) && value <= threshold};
}

Check above(std::string name, double value, double threshold) {
  return {std::move(name), value, threshold,
          std::isfinite(value) && value > threshold};
}

ModeReport verify_mode0(Dimension n, const Tolerances& tol) {
  tol.validate();
  return guarded(0, n, [&] {
    ModeReport m = start(0, n);
    m.checks.push_back(
        at_most("psi0_residual_max", closed_form_residual(0, n), tol.residual));

    const auto reg = ode::integrate_regular(0, n, Grid::r_start, Grid::r_end,
                                            ode_options(tol));
    const double scale =
        modes::psi0(n, reg.r_min()).value / reg.samples.front().psi;
    double err = 0.0, peak = 0.0;
    for (const auto& s : reg.samples) {
      const double ref = modes::psi0(n, s.r).value;
      err = std::max(err, std::abs(scale * s.psi - ref));
      peak = std::max(peak, std::abs(ref));
    }
    const Check match = at_most("regular_match_psi0", err / peak, tol.match);
    m.checks.push_back(match);
    const TailFit tail = tail_slopes(reg, tol);
    const Check bounded = at_most("regular_tail_slope_max",
                                  std::abs(tail.max_slope), tol.bounded_exponent);
    m.checks.push_back(bounded);

    const auto second =
        ode::second_solution(0, n, ode::SecondMethod::wronskian_launch,
                             {Grid::second_lo, Grid::r_end}, ode_options(tol));
    const auto g = ode::growth_exponent(second, {Grid::tail_lo, Grid::r_end},
                                        growth_options(tol));
    m.second_solution_growth = g;
    m.checks.push_back(at_most("second_log_fit_residual", g.log_residual,
                               tol.log_fit));
    double tail_peak = 0.0;
    for (const auto& s : second.samples) {
      if (s.r >= Grid::tail_lo) tail_peak = std::max(tail_peak, std::abs(s.psi));
    }
    // Share of the tail explained by A log r; must stand above the fit error.
    const double signal = std::abs(g.log_coefficient) *
                          std::log(Grid::r_end / Grid::tail_lo) / tail_peak;
    m.checks.push_back(above("min_second_log_signal", signal, tol.log_fit));
    m.checks.push_back(at_most("second_wronskian_drift",
                               wronskian_drift(0, n, second), tol.wronskian));

    if (match.pass) m.bounded_solution_matches = "psi0";
    m.bounded_solution_found = match.pass && bounded.pass;
    finish(m, tail.conclusive && g.kind != ode::GrowthKind::inconclusive);
    if (g.kind != ode::GrowthKind::logarithmic && m.verdict == Verdict::pass)
      m.verdict = Verdict::fail;
    return m;
  });
}

ModeReport verify_mode1(Dimension n, const Tolerances& tol) {
  tol.validate();
  return guarded(1, n, [&] {
    ModeReport m = start(1, n);
    m.checks.push_back(
        at_most("psi1_residual_max", closed_form_residual(1, n), tol.residual));

    const auto reg = ode::integrate_regular(1, n, Grid::r_start, Grid::r_end,
                                            ode_options(tol, kMatchTightening));
    const double scale =
        modes::psi1(n, reg.r_min()).value / reg.samples.front().psi;
    double err = 0.0;
    for (const auto& s : reg.samples) {
      if (s.r < 1e-4 || s.r > kClosedFormHi) continue;
      err = std::max(err,
                     std::abs(scale * s.psi / modes::psi1(n, s.r).value - 1.0));
    }
    const Check match = at_most("regular_match_psi1", err, tol.match);
    m.checks.push_back(match);

    const auto closed = ode::sample_closed_form(
        1, n, {Grid::tail_lo, Grid::r_end}, ode::default_points_per_decade(1, n));
    const auto decay = ode::growth_exponent(closed, {Grid::tail_lo, Grid::r_end},
                                            growth_options(tol));
    m.checks.push_back(at_most("psi1_decay_exponent_error",
                               std::abs(decay.exponent + 1.0), tol.exponent));
    const TailFit tail = tail_slopes(reg, tol);
    const Check bounded =
        at_most("regular_tail_slope_max", tail.max_slope, tol.bounded_exponent);
    m.checks.push_back(bounded);

    const auto second =
        ode::second_solution(1, n, ode::SecondMethod::wronskian_launch,
                             {Grid::second_lo, Grid::r_end}, ode_options(tol));
    const auto g = ode::growth_exponent(second, {Grid::tail_lo, Grid::r_end},
                                        growth_options(tol));
    m.second_solution_growth = g;
    m.checks.push_back(at_most("second_growth_exponent_error",
                               std::abs(g.exponent - 1.0), tol.exponent));
    m.checks.push_back(at_most("second_wronskian_drift",
                               wronskian_drift(1, n, second), tol.wronskian));

    if (match.pass) m.bounded_solution_matches = "psi1";
    m.bounded_solution_found = match.pass && bounded.pass;
    finish(m, tail.conclusive && decay.conclusive && g.conclusive);
    return m;
  });
}

ModeReport verify_higher_mode(int k, Dimension n, const Tolerances& tol) {
  require(k >= 2 && k <= ode::kMaxMode, ErrorCode::invalid_argument,
          "verify_higher_mode: requires 2 <= k <= " +
              std::to_string(ode::kMaxMode));
  tol.validate();
  return guarded(k, n, [&] {
    ModeReport m = start(k, n);
    const auto spec = modes::mode_spec(k, n);
    // Keep psi representable at both ends for large k.
    const double r_start =
        std::max(Grid::r_start, std::pow(10.0, -kMaxDecades / spec.beta_plus));
    const double r_end =
        std::min(Grid::r_end, std::pow(10.0, kMaxDecades / spec.gamma));
    auto opts = ode_options(tol);
    opts.points_per_decade = ode::default_points_per_decade(k, n);

    const auto reg = ode::integrate_regular(k, n, r_start, r_end, opts);
    double min_scaled = HUGE_VAL;
    for (const auto* v : {&reg.samples, &reg.steps}) {
      for (const auto& s : *v) {
        min_scaled = std::min(min_scaled, s.psi / std::pow(s.r, spec.beta_plus));
      }
    }
    m.checks.push_back(above("min_regular_scaled", min_scaled, 0.0));

    const auto g = ode::growth_exponent(reg, {r_end / 100.0, r_end},
                                        growth_options(tol));
    m.second_solution_growth = g;
    m.checks.push_back(at_most("growth_exponent_relative_error",
                               std::abs(g.exponent / spec.gamma - 1.0),
                               tol.exponent));
    m.checks.push_back(
        above("min_growth_exponent", g.exponent, tol.bounded_exponent));

    const double hi = std::min(Grid::lagrange_hi, r_end);
    const auto base = ode::integrate_regular(1, n, r_start, hi, opts);
    const auto lag = ode::lagrange_identity(k, 1, n, reg, base,
                                            Grid::lagrange_lo, hi);
    m.checks.push_back(at_most("lagrange_relative_residual",
                               lag.residual / lag.scale, tol.lagrange));
    m.checks.push_back(
        above("min_lagrange_partial_integral", lag.min_partial_integral, 0.0));

    m.bounded_solution_found = false;
    finish(m, g.conclusive);
    return m;
  });
}

std::vector<Check> dimension_checks(Dimension n, const Tolerances& tol,
                                    std::uint64_t seed) {
  tol.validate();
  std::vector<Check> out;

  double pde = 0.0;
  for (double r : log_grid(1e-3, 1e3, 200)) {
    pde = std::max(pde,
                   std::abs(bubble::n_laplace_residual(n, r)) / bubble::exp_u(n, r));
  }
  out.push_back(at_most("pde_residual_max", pde, tol.pde));

  const auto mass = bubble::mass_integral(n, 1e-13);
  out.push_back(at_most("mass_relative_error",
                        std::abs(mass.value / mass.target - 1.0), tol.mass));

  std::seed_seq seq{seed, static_cast<std::uint64_t>(n.value())};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unit;
  auto random_point = [&](double log_lo, double log_hi) {
    Eigen::VectorXd x(n.value());
    do {
      for (int i = 0; i < n.value(); ++i) x[i] = gauss(rng);
    } while (x.norm() == 0.0);
    const double r = std::pow(10.0, log_lo + (log_hi - log_lo) * unit(rng));
    return bubble::SpacePoint(x * (r / x.norm()));
  };

  double equiv = 0.0;
  for (int i = 0; i < 200; ++i) {
    const auto f = linop::random_poly_gaussian(n, rng);
    const auto x = random_point(-1.0, 1.0);
    const double lhs = linop::apply_linearized(n, *f, x);
    const double rhs = linop::weight(n, x.r()) * linop::radial_form(n, *f, x);
    const double den = std::max(std::abs(lhs), std::abs(rhs));
    if (den > 0.0) equiv = std::max(equiv, std::abs(lhs - rhs) / den);
  }
  out.push_back(at_most("operator_equivalence_relative", equiv,
                        tol.operator_equivalence));

  std::vector<linop::TestFunctionPtr> kernel{linop::make_z0(n)};
  for (int i = 1; i <= n.value(); ++i) kernel.push_back(linop::make_zi(n, i));
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto x = random_point(-2.0, 2.0);
    for (const auto& z : kernel) {
      worst = std::max(worst, std::abs(linop::apply_linearized(n, *z, x)));
    }
  }
  out.push_back(at_most("kernel_element_residual_max", worst, tol.kernel_element));
  return out;
}

VerificationReport full_report(Dimension n, int k_max, const Tolerances& tol,
                               std::uint64_t seed, int threads) {
  require(k_max >= 2 && k_max <= ode::kMaxMode, ErrorCode::invalid_argument,
          "k_max must satisfy 2 <= k_max <= " + std::to_string(ode::kMaxMode));
  require(threads >= 0, ErrorCode::invalid_argument, "threads must be >= 0");
  tol.validate();
  const auto t0 = std::chrono::steady_clock::now();

  VerificationReport rep;
  rep.dimension = n.value();
  rep.k_max = k_max;
  rep.seed = seed;
  rep.tolerances = tol;
  rep.modes.resize(k_max + 1);

  // Task k_max + 1 is the dimension-level block.
  const int tasks = k_max + 2;
  std::vector<std::exception_ptr> errors(tasks);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < tasks; i = next++) {
      try {
        if (i == 0)
          rep.modes[0] = verify_mode0(n, tol);
        else if (i == 1)
          rep.modes[1] = verify_mode1(n, tol);
        else if (i <= k_max)
          rep.modes[i] = verify_higher_mode(i, n, tol);
        else
          rep.checks = dimension_checks(n, tol, seed);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  int workers = threads == 0 ? static_cast<int>(std::thread::hardware_concurrency())
                             : threads;
  workers = std::clamp(workers, 1, tasks);
  {
    std::vector<std::jthread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  double prev = -HUGE_VAL, min_gap = HUGE_VAL;
  for (int k = 2; k <= k_max; ++k) {
    const double e = rep.modes[k].second_solution_growth.exponent;
    if (k > 2) min_gap = std::min(min_gap, e - prev);
    prev = e;
  }
  if (k_max >= 3) rep.checks.push_back(above("min_exponent_increment", min_gap, 0.0));

  bool inconclusive = false, failed = false;
  std::int64_t count = 0;
  for (const auto& m : rep.modes) {
    inconclusive |= m.verdict == Verdict::inconclusive;
    failed |= m.verdict == Verdict::fail;
    if (m.bounded_solution_found) count += m.multiplicity;
  }
  for (const auto& c : rep.checks) failed |= !c.pass;
  if (inconclusive) {
    rep.verdict = Verdict::inconclusive;
  } else {
    rep.kernel_dimension = count;
    failed |= count != n.value() + 1;
    rep.verdict = failed ? Verdict::fail : Verdict::pass;
  }
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace nlk::verify

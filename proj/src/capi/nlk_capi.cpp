#include "nlk/nlk.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <random>
#include <string>

#include "core/kernel_verifier.hpp"
#include "core/linop.hpp"
#include "core/report_io.hpp"

struct nlk_testfn {
  nlk::linop::TestFunctionPtr f;
};

struct nlk_trajectory {
  nlk::ode::SolutionTrajectory t;
};

struct nlk_report {
  std::vector<nlk::verify::VerificationReport> reports;
};

namespace {

using nlk::ErrorCode;
using nlk::bubble::Dimension;
using nlk::bubble::SpacePoint;

thread_local std::string g_last_error;

nlk_status fail_with(nlk_status s, const char* what) {
  g_last_error = what;
  return s;
}

template <class Body>
nlk_status guard(Body&& body) {
  try {
    body();
    g_last_error.clear();
    return NLK_OK;
  } catch (const nlk::Error& e) {
    return fail_with(static_cast<nlk_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail_with(NLK_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail_with(NLK_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail_with(NLK_ERR_INTERNAL, "unknown error");
  }
}

template <class T>
void need(const T* p, const char* name) {
  nlk::require(p != nullptr, ErrorCode::invalid_argument,
               std::string(name) + " must not be NULL");
}

SpacePoint point(int n, const double* x) {
  need(x, "x");
  return SpacePoint(Eigen::Map<const Eigen::VectorXd>(x, n));
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

nlk::ode::IntegrationOptions options(const nlk_ode_options* o) {
  nlk::ode::IntegrationOptions out;
  if (o) {
    out.rtol = o->rtol;
    out.atol = o->atol;
    out.points_per_decade = o->points_per_decade;
  }
  return out;
}

nlk::verify::Tolerances tolerances(const nlk_tolerances* t) {
  nlk::verify::Tolerances out;
  if (t) {
    out.residual = t->residual;
    out.exponent = t->exponent;
    out.log_fit = t->log_fit;
    out.power_fit = t->power_fit;
    out.bounded_exponent = t->bounded_exponent;
    out.lagrange = t->lagrange;
    out.match = t->match;
    out.wronskian = t->wronskian;
    out.ode_rtol = t->ode_rtol;
    out.ode_atol = t->ode_atol;
    out.pde = t->pde;
    out.mass = t->mass;
    out.operator_equivalence = t->operator_equivalence;
    out.kernel_element = t->kernel_element;
  }
  return out;
}

void put_jet(const nlk::modes::RadialJet& j, double* out) {
  need(out, "out");
  out[0] = j.value;
  out[1] = j.d1;
  out[2] = j.d2;
}

nlk::linop::Term term_of(char c) {
  nlk::require(c >= 'A' && c <= 'G', ErrorCode::invalid_argument,
               "term must be one of 'A'..'G'");
  return nlk::linop::kAllTerms[c - 'A'];
}

}  // namespace

extern "C" {

const char* nlk_version(void) { return "0.1.0"; }

const char* nlk_status_string(nlk_status status) {
  switch (status) {
    case NLK_OK: return "ok";
    case NLK_ERR_INVALID_ARGUMENT: return "invalid argument";
    case NLK_ERR_SINGULAR_INPUT: return "singular input";
    case NLK_ERR_NOT_CONVERGED: return "not converged";
    case NLK_ERR_PRECONDITION: return "precondition violated";
    case NLK_ERR_IO: return "i/o error";
    case NLK_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* nlk_last_error(void) { return g_last_error.c_str(); }

void nlk_string_free(char* s) { std::free(s); }

// bubble

nlk_status nlk_c_constant(int n, double* out) {
  return guard([&] {
    need(out, "out");
    *out = nlk::bubble::c_constant(Dimension(n));
  });
}

nlk_status nlk_sphere_area(int n, double* out) {
  return guard([&] {
    need(out, "out");
    *out = nlk::bubble::sphere_area(Dimension(n));
  });
}

nlk_status nlk_mass_target(int n, double* out) {
  return guard([&] {
    need(out, "out");
    *out = nlk::bubble::mass_target(Dimension(n));
  });
}

nlk_status nlk_u_radial(int n, double r, double* out) {
  return guard([&] {
    need(out, "out");
    *out = nlk::bubble::u_radial(Dimension(n), r);
  });
}

nlk_status nlk_exp_u(int n, double r, double* out) {
  return guard([&] {
    need(out, "out");
    *out = nlk::bubble::exp_u(Dimension(n), r);
  });
}

nlk_status nlk_u_value(int n, double lam, const double* a, const double* x,
                       double* out) {
  return guard([&] {
    need(out, "out");
    const Dimension d(n);
    nlk::bubble::BubbleParams p;
    p.lam = lam;
    if (a) p.a = Eigen::Map<const Eigen::VectorXd>(a, n);
    *out = nlk::bubble::u_value(d, p, point(n, x));
  });
}

nlk_status nlk_u_radial_derivative(int n, double r, double* out,
                                   int* at_origin) {
  return guard([&] {
    need(out, "out");
    const auto v = nlk::bubble::u_radial_derivative(Dimension(n), r);
    *out = v.value;
    if (at_origin) *at_origin = v.at_origin ? 1 : 0;
  });
}

nlk_status nlk_grad_norm_power(int n, double r, int k, double* out) {
  return guard([&] {
    need(out, "out");
    *out = nlk::bubble::grad_norm_power(Dimension(n), r, k);
  });
}

nlk_status nlk_n_laplace_residual(int n, double r, double* out) {
  return guard([&] {
    need(out, "out");
    *out = nlk::bubble::n_laplace_residual(Dimension(n), r);
  });
}

nlk_status nlk_mass_integral(int n, double tol, double* value,
                             double* error_estimate) {
  return guard([&] {
    need(value, "value");
    const auto m = nlk::bubble::mass_integral(Dimension(n), tol);
    *value = m.value;
    if (error_estimate) *error_estimate = m.error_estimate;
  });
}

nlk_status nlk_z0(int n, const double* x, double* out) {
  return guard([&] {
    need(out, "out");
    *out = nlk::bubble::z0(Dimension(n), point(n, x));
  });
}

nlk_status nlk_zi(int n, const double* x, int i, double* out) {
  return guard([&] {
    need(out, "out");
    *out = nlk::bubble::zi(Dimension(n), point(n, x), i);
  });
}

// modes

nlk_status nlk_mode_spec_get(int k, int n, nlk_mode_spec* out) {
  return guard([&] {
    need(out, "out");
    const auto s = nlk::modes::mode_spec(k, Dimension(n));
    *out = {s.k, s.lambda, s.multiplicity, s.beta_minus, s.beta_plus, s.gamma};
  });
}

nlk_status nlk_psi0(int n, double r, double out[3]) {
  return guard([&] { put_jet(nlk::modes::psi0(Dimension(n), r), out); });
}

nlk_status nlk_psi1(int n, double r, double out[3]) {
  return guard([&] { put_jet(nlk::modes::psi1(Dimension(n), r), out); });
}

nlk_status nlk_mode_residual(int k, int n, double r, double psi, double dpsi,
                             double d2psi, double* out) {
  return guard([&] {
    need(out, "out");
    *out = nlk::modes::mode_residual(k, Dimension(n), r, psi, dpsi, d2psi);
  });
}

nlk_status nlk_divergence_residual(int k, int n, double r, double psi,
                                   double dpsi, double d2psi, double* out) {
  return guard([&] {
    need(out, "out");
    *out = nlk::modes::divergence_residual(k, Dimension(n), r, psi, dpsi, d2psi);
  });
}

// linearized operator

nlk_status nlk_testfn_constant(int n, double c, nlk_testfn** out) {
  return guard([&] {
    need(out, "out");
    *out = new nlk_testfn{nlk::linop::make_constant(Dimension(n), c)};
  });
}

nlk_status nlk_testfn_z0(int n, nlk_testfn** out) {
  return guard([&] {
    need(out, "out");
    *out = new nlk_testfn{nlk::linop::make_z0(Dimension(n))};
  });
}

nlk_status nlk_testfn_zi(int n, int i, nlk_testfn** out) {
  return guard([&] {
    need(out, "out");
    *out = new nlk_testfn{nlk::linop::make_zi(Dimension(n), i)};
  });
}

nlk_status nlk_testfn_poly_gaussian(int n, size_t n_terms, const double* coeffs,
                                    const int* powers, double sigma,
                                    nlk_testfn** out) {
  return guard([&] {
    need(out, "out");
    const Dimension d(n);
    std::vector<nlk::linop::Monomial> terms(n_terms);
    if (n_terms > 0) {
      need(coeffs, "coeffs");
      need(powers, "powers");
    }
    for (size_t t = 0; t < n_terms; ++t) {
      terms[t].coeff = coeffs[t];
      terms[t].powers.assign(powers + t * n, powers + (t + 1) * n);
    }
    *out = new nlk_testfn{nlk::linop::make_poly_gaussian(d, std::move(terms), sigma)};
  });
}

nlk_status nlk_testfn_random(int n, uint64_t seed, nlk_testfn** out) {
  return guard([&] {
    need(out, "out");
    std::mt19937_64 rng(seed);
    *out = new nlk_testfn{nlk::linop::random_poly_gaussian(Dimension(n), rng)};
  });
}

nlk_status nlk_testfn_eval(const nlk_testfn* f, const double* x, double* value) {
  return guard([&] {
    need(f, "f");
    need(value, "value");
    *value = f->f->value(point(f->f->dim(), x));
  });
}

void nlk_testfn_free(nlk_testfn* f) { delete f; }

nlk_status nlk_linop_term(int n, const nlk_testfn* f, const double* x,
                          char which, double* out) {
  return guard([&] {
    need(f, "f");
    need(out, "out");
    *out = nlk::linop::term(Dimension(n), *f->f, point(n, x), term_of(which));
  });
}

nlk_status nlk_linop_apply(int n, const nlk_testfn* f, const double* x,
                           double* out) {
  return guard([&] {
    need(f, "f");
    need(out, "out");
    *out = nlk::linop::apply_linearized(Dimension(n), *f->f, point(n, x));
  });
}

nlk_status nlk_linop_radial_form(int n, const nlk_testfn* f, const double* x,
                                 double* out) {
  return guard([&] {
    need(f, "f");
    need(out, "out");
    *out = nlk::linop::radial_form(Dimension(n), *f->f, point(n, x));
  });
}

nlk_status nlk_linop_weight(int n, double r, double* out) {
  return guard([&] {
    need(out, "out");
    *out = nlk::linop::weight(Dimension(n), r);
  });
}

nlk_status nlk_linop_directional_check(int n, const nlk_testfn* f,
                                       const double* x, double t, double* out) {
  return guard([&] {
    need(f, "f");
    need(out, "out");
    *out = nlk::linop::directional_derivative_check(Dimension(n), *f->f,
                                                    point(n, x), t);
  });
}

// trajectories

void nlk_ode_options_default(nlk_ode_options* out) {
  if (!out) return;
  const nlk::ode::IntegrationOptions d;
  *out = {d.rtol, d.atol, d.points_per_decade};
}

nlk_status nlk_integrate_regular(int k, int n, double r_start, double r_end,
                                 const nlk_ode_options* opts,
                                 nlk_trajectory** out) {
  return guard([&] {
    need(out, "out");
    auto t = nlk::ode::integrate_regular(k, Dimension(n), r_start, r_end,
                                         options(opts));
    *out = new nlk_trajectory{std::move(t)};
  });
}

nlk_status nlk_second_solution(int k, int n, nlk_second_method method,
                               double r_lo, double r_hi,
                               const nlk_ode_options* opts,
                               nlk_trajectory** out) {
  return guard([&] {
    need(out, "out");
    nlk::require(method == NLK_SECOND_REDUCTION ||
                     method == NLK_SECOND_WRONSKIAN_LAUNCH,
                 ErrorCode::invalid_argument, "unknown second-solution method");
    const auto m = method == NLK_SECOND_REDUCTION
                       ? nlk::ode::SecondMethod::reduction
                       : nlk::ode::SecondMethod::wronskian_launch;
    auto t = nlk::ode::second_solution(k, Dimension(n), m, {r_lo, r_hi},
                                       options(opts));
    *out = new nlk_trajectory{std::move(t)};
  });
}

nlk_status nlk_trajectory_size(const nlk_trajectory* t, size_t* out) {
  return guard([&] {
    need(t, "t");
    need(out, "out");
    *out = t->t.samples.size();
  });
}

nlk_status nlk_trajectory_sample(const nlk_trajectory* t, size_t i, double* r,
                                 double* psi, double* dpsi) {
  return guard([&] {
    need(t, "t");
    nlk::require(i < t->t.samples.size(), ErrorCode::invalid_argument,
                 "sample index out of range");
    const auto& s = t->t.samples[i];
    if (r) *r = s.r;
    if (psi) *psi = s.psi;
    if (dpsi) *dpsi = s.dpsi;
  });
}

nlk_status nlk_trajectory_growth(const nlk_trajectory* t, double r_lo,
                                 double r_hi, nlk_growth* out) {
  return guard([&] {
    need(t, "t");
    need(out, "out");
    const auto g = nlk::ode::growth_exponent(t->t, {r_lo, r_hi});
    *out = {static_cast<nlk_growth_kind>(g.kind),
            g.exponent,
            g.power_slope,
            g.log_coefficient,
            g.log_offset,
            g.fit_window.lo,
            g.fit_window.hi,
            g.residual,
            g.conclusive ? 1 : 0};
  });
}

nlk_status nlk_lagrange_identity_residual(int k, int j, int n,
                                          const nlk_trajectory* tk,
                                          const nlk_trajectory* tj, double r_lo,
                                          double r_hi, double* out) {
  return guard([&] {
    need(tk, "tk");
    need(tj, "tj");
    need(out, "out");
    *out = nlk::ode::lagrange_identity_residual(k, j, Dimension(n), tk->t,
                                                tj->t, r_lo, r_hi);
  });
}

nlk_status nlk_trajectory_to_csv(const nlk_trajectory* t, char** out) {
  return guard([&] {
    need(t, "t");
    need(out, "out");
    *out = copy_string(nlk::ode::to_csv(t->t));
  });
}

void nlk_trajectory_free(nlk_trajectory* t) { delete t; }

// verification

void nlk_tolerances_default(nlk_tolerances* out) {
  if (!out) return;
  const nlk::verify::Tolerances d;
  *out = {d.residual,  d.exponent,  d.log_fit,  d.power_fit,
          d.bounded_exponent, d.lagrange, d.match, d.wronskian,
          d.ode_rtol,  d.ode_atol,  d.pde,      d.mass,
          d.operator_equivalence, d.kernel_element};
}

nlk_status nlk_verify(const int* dims, size_t n_dims, int k_max,
                      const nlk_tolerances* tol, uint64_t seed, int threads,
                      nlk_report** out) {
  return guard([&] {
    need(out, "out");
    need(dims, "dims");
    nlk::require(n_dims > 0, ErrorCode::invalid_argument,
                 "at least one dimension is required");
    const auto t = tolerances(tol);
    t.validate();
    std::vector<Dimension> ds;
    for (size_t i = 0; i < n_dims; ++i) ds.emplace_back(dims[i]);
    auto rep = std::make_unique<nlk_report>();
    for (const auto d : ds) {
      rep->reports.push_back(nlk::verify::full_report(d, k_max, t, seed, threads));
    }
    *out = rep.release();
  });
}

nlk_status nlk_report_verdict(const nlk_report* r, nlk_verdict* out) {
  return guard([&] {
    need(r, "r");
    need(out, "out");
    *out = static_cast<nlk_verdict>(nlk::report::overall(r->reports));
  });
}

nlk_status nlk_report_count(const nlk_report* r, size_t* out) {
  return guard([&] {
    need(r, "r");
    need(out, "out");
    *out = r->reports.size();
  });
}

nlk_status nlk_report_kernel_dimension(const nlk_report* r, size_t index,
                                       int64_t* out, int* available) {
  return guard([&] {
    need(r, "r");
    need(out, "out");
    nlk::require(index < r->reports.size(), ErrorCode::invalid_argument,
                 "report index out of range");
    const auto& kd = r->reports[index].kernel_dimension;
    *out = kd.value_or(0);
    if (available) *available = kd.has_value() ? 1 : 0;
  });
}

nlk_status nlk_report_wall_seconds(const nlk_report* r, double* out) {
  return guard([&] {
    need(r, "r");
    need(out, "out");
    double s = 0.0;
    for (const auto& x : r->reports) s += x.wall_seconds;
    *out = s;
  });
}

nlk_status nlk_report_to_json(const nlk_report* r, char** out) {
  return guard([&] {
    need(r, "r");
    need(out, "out");
    *out = copy_string(nlk::report::to_json(r->reports));
  });
}

nlk_status nlk_report_to_csv(const nlk_report* r, char** out) {
  return guard([&] {
    need(r, "r");
    need(out, "out");
    *out = copy_string(nlk::report::to_csv(r->reports));
  });
}

void nlk_report_free(nlk_report* r) { delete r; }

}  // extern "C"

/*
 * nlk.h : C interface to the N-Laplace Liouville bubble library.
 *
 * Every function returns an nlk_status; results come back through out
 * parameters. On failure nlk_last_error() describes the problem (per thread).
 * Handles are opaque and immutable after creation; free each one with its
 * matching *_free function. Strings returned through char** are owned by the
 * caller and released with nlk_string_free.
 */
#ifndef NLK_NLK_H
#define NLK_NLK_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(NLK_BUILDING_LIBRARY)
#    define NLK_API __declspec(dllexport)
#  else
#    define NLK_API __declspec(dllimport)
#  endif
#else
#  define NLK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nlk_status {
  NLK_OK = 0,
  NLK_ERR_INVALID_ARGUMENT = 1,
  NLK_ERR_SINGULAR_INPUT = 2,
  NLK_ERR_NOT_CONVERGED = 3,
  NLK_ERR_PRECONDITION = 4,
  NLK_ERR_IO = 5,
  NLK_ERR_INTERNAL = 6
} nlk_status;

typedef enum nlk_verdict {
  NLK_VERDICT_PASS = 0,
  NLK_VERDICT_FAIL = 1,
  NLK_VERDICT_INCONCLUSIVE = 2
} nlk_verdict;

NLK_API const char* nlk_version(void);
NLK_API const char* nlk_status_string(nlk_status status);
/* Message of the last failed call on this thread; "" if none. */
NLK_API const char* nlk_last_error(void);
NLK_API void nlk_string_free(char* s);

/* ---- bubble ------------------------------------------------------------ */

NLK_API nlk_status nlk_c_constant(int n, double* out);
NLK_API nlk_status nlk_sphere_area(int n, double* out);
NLK_API nlk_status nlk_mass_target(int n, double* out);
NLK_API nlk_status nlk_u_radial(int n, double r, double* out);
NLK_API nlk_status nlk_exp_u(int n, double r, double* out);
/* U(lam (x - a)) + n log lam. a may be NULL (origin); x has n entries. */
NLK_API nlk_status nlk_u_value(int n, double lam, const double* a,
                               const double* x, double* out);
/* at_origin (may be NULL) is set to 1 when r == 0. */
NLK_API nlk_status nlk_u_radial_derivative(int n, double r, double* out,
                                           int* at_origin);
NLK_API nlk_status nlk_grad_norm_power(int n, double r, int k, double* out);
NLK_API nlk_status nlk_n_laplace_residual(int n, double r, double* out);
NLK_API nlk_status nlk_mass_integral(int n, double tol, double* value,
                                     double* error_estimate);
NLK_API nlk_status nlk_z0(int n, const double* x, double* out);
/* i in 1..n */
NLK_API nlk_status nlk_zi(int n, const double* x, int i, double* out);

/* ---- modes ------------------------------------------------------------- */

typedef struct nlk_mode_spec {
  int k;
  double lambda;
  int64_t multiplicity;
  double beta_minus;
  double beta_plus;
  double gamma;
} nlk_mode_spec;

NLK_API nlk_status nlk_mode_spec_get(int k, int n, nlk_mode_spec* out);
/* out[0..2] = value, first and second derivative. */
NLK_API nlk_status nlk_psi0(int n, double r, double out[3]);
NLK_API nlk_status nlk_psi1(int n, double r, double out[3]);
NLK_API nlk_status nlk_mode_residual(int k, int n, double r, double psi,
                                     double dpsi, double d2psi, double* out);
NLK_API nlk_status nlk_divergence_residual(int k, int n, double r, double psi,
                                           double dpsi, double d2psi,
                                           double* out);

/* ---- linearized operator ----------------------------------------------- */

typedef struct nlk_testfn nlk_testfn;

NLK_API nlk_status nlk_testfn_constant(int n, double c, nlk_testfn** out);
NLK_API nlk_status nlk_testfn_z0(int n, nlk_testfn** out);
NLK_API nlk_status nlk_testfn_zi(int n, int i, nlk_testfn** out);
/* sum_t coeffs[t] prod_i x_i^powers[t*n + i], times exp(-|x|^2 / sigma^2) */
NLK_API nlk_status nlk_testfn_poly_gaussian(int n, size_t n_terms,
                                            const double* coeffs,
                                            const int* powers, double sigma,
                                            nlk_testfn** out);
/* Random polynomial-Gaussian drawn from a generator seeded with seed. */
NLK_API nlk_status nlk_testfn_random(int n, uint64_t seed, nlk_testfn** out);
NLK_API nlk_status nlk_testfn_eval(const nlk_testfn* f, const double* x,
                                   double* value);
NLK_API void nlk_testfn_free(nlk_testfn* f);

/* term is one of 'A'..'G'. */
NLK_API nlk_status nlk_linop_term(int n, const nlk_testfn* f, const double* x,
                                  char term, double* out);
NLK_API nlk_status nlk_linop_apply(int n, const nlk_testfn* f, const double* x,
                                   double* out);
NLK_API nlk_status nlk_linop_radial_form(int n, const nlk_testfn* f,
                                         const double* x, double* out);
NLK_API nlk_status nlk_linop_weight(int n, double r, double* out);
/* Central difference of N(U + t f) at x with step t. */
NLK_API nlk_status nlk_linop_directional_check(int n, const nlk_testfn* f,
                                               const double* x, double t,
                                               double* out);

/* ---- radial ODE trajectories ------------------------------------------- */

typedef struct nlk_trajectory nlk_trajectory;

typedef struct nlk_ode_options {
  double rtol;
  double atol;
  int points_per_decade; /* 0: chosen from the mode */
} nlk_ode_options;

typedef enum nlk_second_method {
  NLK_SECOND_REDUCTION = 0,
  NLK_SECOND_WRONSKIAN_LAUNCH = 1
} nlk_second_method;

typedef enum nlk_growth_kind {
  NLK_GROWTH_POWER = 0,
  NLK_GROWTH_LOGARITHMIC = 1,
  NLK_GROWTH_BOUNDED = 2,
  NLK_GROWTH_INCONCLUSIVE = 3
} nlk_growth_kind;

typedef struct nlk_growth {
  nlk_growth_kind kind;
  double exponent;
  double power_slope;
  double log_coefficient;
  double log_offset;
  double r_lo;
  double r_hi;
  double residual;
  int conclusive;
} nlk_growth;

NLK_API void nlk_ode_options_default(nlk_ode_options* out);
/* opts may be NULL for the defaults. */
NLK_API nlk_status nlk_integrate_regular(int k, int n, double r_start,
                                         double r_end,
                                         const nlk_ode_options* opts,
                                         nlk_trajectory** out);
NLK_API nlk_status nlk_second_solution(int k, int n, nlk_second_method method,
                                       double r_lo, double r_hi,
                                       const nlk_ode_options* opts,
                                       nlk_trajectory** out);
NLK_API nlk_status nlk_trajectory_size(const nlk_trajectory* t, size_t* out);
NLK_API nlk_status nlk_trajectory_sample(const nlk_trajectory* t, size_t i,
                                         double* r, double* psi, double* dpsi);
NLK_API nlk_status nlk_trajectory_growth(const nlk_trajectory* t, double r_lo,
                                         double r_hi, nlk_growth* out);
NLK_API nlk_status nlk_lagrange_identity_residual(int k, int j, int n,
                                                  const nlk_trajectory* tk,
                                                  const nlk_trajectory* tj,
                                                  double r_lo, double r_hi,
                                                  double* out);
/* `r,psi,dpsi` CSV, 17 significant digits. */
NLK_API nlk_status nlk_trajectory_to_csv(const nlk_trajectory* t, char** out);
NLK_API void nlk_trajectory_free(nlk_trajectory* t);

/* ---- verification ------------------------------------------------------ */

typedef struct nlk_report nlk_report;

typedef struct nlk_tolerances {
  double residual;
  double exponent;
  double log_fit;
  double power_fit;
  double bounded_exponent;
  double lagrange;
  double match;
  double wronskian;
  double ode_rtol;
  double ode_atol;
  double pde;
  double mass;
  double operator_equivalence;
  double kernel_element;
} nlk_tolerances;

NLK_API void nlk_tolerances_default(nlk_tolerances* out);
/* One entry per dimension in dims. tol may be NULL; threads 0 uses all cores. */
NLK_API nlk_status nlk_verify(const int* dims, size_t n_dims, int k_max,
                              const nlk_tolerances* tol, uint64_t seed,
                              int threads, nlk_report** out);
NLK_API nlk_status nlk_report_verdict(const nlk_report* r, nlk_verdict* out);
NLK_API nlk_status nlk_report_count(const nlk_report* r, size_t* out);
/* available is 0 when the count was withheld (inconclusive modes). */
NLK_API nlk_status nlk_report_kernel_dimension(const nlk_report* r,
                                               size_t index, int64_t* out,
                                               int* available);
NLK_API nlk_status nlk_report_wall_seconds(const nlk_report* r, double* out);
NLK_API nlk_status nlk_report_to_json(const nlk_report* r, char** out);
NLK_API nlk_status nlk_report_to_csv(const nlk_report* r, char** out);
NLK_API void nlk_report_free(nlk_report* r);

#ifdef __cplusplus
}
#endif

#endif /* NLK_NLK_H */

/*
 * modcount: solution counts of q_1 ... q_t = c (mod q) in short torus boxes,
 * their second and higher moments, Kloosterman / hyper-Kloosterman sums and
 * covering radii of the modular hyperbola xy = 1 (mod q).
 *
 * Plain C interface over the C++ core. Every entry point that can fail
 * returns an mc_status; the diagnostic for the most recent failure on a
 * context is available from mc_context_last_error(). Handles are opaque and
 * owned by the caller, who releases them with the matching _destroy call.
 * A context may be shared between threads only if it is not mutated and no
 * call on it fails concurrently (the error string is per context).
 */
#ifndef MODCOUNT_H
#define MODCOUNT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(MODCOUNT_BUILDING)
#    define MC_API __declspec(dllexport)
#  else
#    define MC_API __declspec(dllimport)
#  endif
#else
#  define MC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mc_status {
  MC_OK = 0,
  MC_ERR_INVALID_ARGUMENT = 1,
  MC_ERR_NOT_COPRIME = 2,
  MC_ERR_BUDGET_EXCEEDED = 3,
  MC_ERR_OVERFLOW = 4,
  MC_ERR_INTERNAL = 5
} mc_status;

MC_API const char* mc_status_string(mc_status status);
MC_API const char* mc_version(void);

/* ---- context: thread count, budgets, last error ---------------------- */

typedef struct mc_context mc_context;

MC_API mc_status mc_context_create(mc_context** out);
MC_API void mc_context_destroy(mc_context* ctx);
MC_API mc_status mc_context_set_threads(mc_context* ctx, unsigned threads);
/* name: "enumeration", "grid_cells", "covering_samples" or "sample_cap". */
MC_API mc_status mc_context_set_budget(mc_context* ctx, const char* name, uint64_t value);
MC_API mc_status mc_context_get_budget(const mc_context* ctx, const char* name, uint64_t* value);
MC_API const char* mc_context_last_error(const mc_context* ctx);

/* ---- modular arithmetic ---------------------------------------------- */

typedef struct mc_modulus mc_modulus;

MC_API mc_status mc_modulus_create(mc_context* ctx, uint64_t q, mc_modulus** out);
MC_API void mc_modulus_destroy(mc_modulus* m);
MC_API uint64_t mc_modulus_value(const mc_modulus* m);
MC_API uint64_t mc_modulus_phi(const mc_modulus* m);
MC_API uint64_t mc_modulus_divisor_count(const mc_modulus* m);
MC_API unsigned mc_modulus_omega(const mc_modulus* m);
MC_API size_t mc_modulus_factor_count(const mc_modulus* m);
MC_API mc_status mc_modulus_factor(const mc_modulus* m, size_t index, uint64_t* prime, unsigned* exponent);
/* C_q for t variables: 1 for odd q, 2^((t+1)/2) for even q. */
MC_API double mc_modulus_parity_constant(const mc_modulus* m, unsigned t);

/* Residues are returned in [1, q]. */
MC_API mc_status mc_mod_inverse(mc_context* ctx, int64_t n, uint64_t q, uint64_t* out);
MC_API mc_status mc_gcd3(mc_context* ctx, int64_t a, int64_t b, uint64_t q, uint64_t* out);
/* Writes up to `capacity` units of q in ascending order; *count receives phi(q). */
MC_API mc_status mc_units(mc_context* ctx, uint64_t q, uint64_t* out, size_t capacity, size_t* count);

/* ---- exponential sums -------------------------------------------------- */

typedef struct mc_complex {
  double re;
  double im;
} mc_complex;

typedef struct mc_expsum {
  mc_complex value;
  double bound; /* Weil or Weinstein bound with constant 1 */
} mc_expsum;

MC_API mc_status mc_kloosterman(mc_context* ctx, int64_t a, int64_t b, uint64_t q, mc_expsum* out);
MC_API mc_status mc_ramanujan(mc_context* ctx, int64_t b, uint64_t q, double* out);
MC_API mc_status mc_hyper_kloosterman(mc_context* ctx, const int64_t* ks, size_t t, int64_t c, uint64_t q,
                                      mc_expsum* out);
MC_API mc_status mc_fejer(mc_context* ctx, int64_t k, uint64_t L, uint64_t q, double* out);
MC_API mc_status mc_fejer_mass(mc_context* ctx, uint64_t L, uint64_t q, double* out);
MC_API mc_status mc_fejer_gcd_sum(mc_context* ctx, uint64_t L, uint64_t q, double* out);
MC_API mc_status mc_incomplete_kloosterman(mc_context* ctx, int64_t b, uint64_t L, int64_t k, int64_t c, uint64_t q,
                                           mc_complex* out);
MC_API mc_status mc_complete_incomplete(mc_context* ctx, int64_t b, uint64_t L, int64_t k, int64_t c, uint64_t q,
                                        mc_complex* out);

/* ---- boxes and moments ------------------------------------------------- */

typedef enum mc_shape { MC_SHAPE_THM1 = 0, MC_SHAPE_THM3 = 1 } mc_shape;

typedef enum mc_method {
  MC_METHOD_PREFIX = 0,
  MC_METHOD_PAIRS = 1,
  MC_METHOD_SPECTRAL = 2,
  MC_METHOD_EXACT_T = 3,
  MC_METHOD_SPECTRAL_T = 4,
  MC_METHOD_KTH = 5
} mc_method;

typedef struct mc_moment_report {
  uint64_t q;
  uint64_t c;
  unsigned t;
  uint64_t L1;
  uint64_t L2;
  unsigned k;
  mc_method method;
  double moment_value;
  int has_exact;        /* exact_num / exact_den is the moment when nonzero */
  char exact_num[48];   /* decimal; for t = 2, k = 2 this is q^2 S */
  char exact_den[48];
  mc_shape main_term_kind;
  double bound_value;
  double ratio;
} mc_moment_report;

/* A box: t torus windows (start_i, start_i + length_i] and residue c.
 * coprime_flags must be {0, 1} (t = 2) or all 1. */
typedef struct mc_box {
  uint64_t q;
  int64_t c;
  unsigned t;
  const uint64_t* starts;
  const uint64_t* lengths;
  const int* coprime_flags;
} mc_box;

MC_API mc_status mc_count_solutions(mc_context* ctx, const mc_box* box, uint64_t* out);
/* Exact main term as num / den in lowest terms. */
MC_API mc_status mc_main_term(mc_context* ctx, const mc_box* box, int64_t* num, int64_t* den);

/* method: PREFIX, PAIRS (L1, L2 arbitrary) or SPECTRAL (requires L1 == L2). */
MC_API mc_status mc_second_moment(mc_context* ctx, mc_method method, uint64_t q, int64_t c, uint64_t L1, uint64_t L2,
                                  mc_moment_report* out);
/* method: EXACT_T or SPECTRAL_T; all coordinates coprime, equal side L. */
MC_API mc_status mc_second_moment_t(mc_context* ctx, mc_method method, uint64_t q, int64_t c, uint64_t L, unsigned t,
                                    mc_moment_report* out);
MC_API mc_status mc_kth_moment(mc_context* ctx, uint64_t q, int64_t c, uint64_t L, unsigned k, mc_shape shape,
                               mc_moment_report* out);
MC_API mc_status mc_theorem_ratio(mc_context* ctx, const mc_moment_report* report, double* out);

typedef struct mc_badbox_report mc_badbox_report;

MC_API mc_status mc_bad_boxes(mc_context* ctx, uint64_t q, int64_t c, uint64_t L, unsigned t, mc_badbox_report** out);
MC_API void mc_badbox_report_destroy(mc_badbox_report* r);
MC_API uint64_t mc_badbox_count(const mc_badbox_report* r);
MC_API const char* mc_badbox_total(const mc_badbox_report* r); /* q^t in decimal */
MC_API double mc_badbox_fraction(const mc_badbox_report* r);
MC_API size_t mc_badbox_sample_size(const mc_badbox_report* r);
/* Copies the t starts of sample `index` into out[0..t). */
MC_API mc_status mc_badbox_sample(const mc_badbox_report* r, size_t index, uint64_t* out, size_t capacity);

/* ---- covering ---------------------------------------------------------- */

typedef struct mc_covering_report mc_covering_report;

/* Grid step is q / subdivisions. theta <= 0 skips r_tilde. */
MC_API mc_status mc_covering(mc_context* ctx, uint64_t q, uint64_t subdivisions, double theta, unsigned curve_points,
                             int torus, mc_covering_report** out);
MC_API void mc_covering_report_destroy(mc_covering_report* r);
MC_API double mc_covering_grid_step(const mc_covering_report* r);
MC_API double mc_covering_r_max(const mc_covering_report* r);
MC_API double mc_covering_error_bound(const mc_covering_report* r);
MC_API double mc_covering_theta(const mc_covering_report* r);
MC_API double mc_covering_r_tilde(const mc_covering_report* r);
MC_API size_t mc_covering_curve_size(const mc_covering_report* r);
MC_API mc_status mc_covering_curve_point(const mc_covering_report* r, size_t index, double* radius, double* fraction);

MC_API mc_status mc_coverage_fraction(mc_context* ctx, uint64_t q, double r, uint64_t subdivisions, double* out);
/* Writes up to `capacity` points; *count receives phi(q). */
MC_API mc_status mc_solution_points(mc_context* ctx, uint64_t q, uint64_t* xs, uint64_t* ys, size_t capacity,
                                    size_t* count);

/* ---- verification suite ------------------------------------------------ */

typedef struct mc_verify_report mc_verify_report;

MC_API mc_status mc_verify(mc_context* ctx, uint64_t max_q, mc_verify_report** out);
MC_API void mc_verify_report_destroy(mc_verify_report* r);
MC_API size_t mc_verify_check_count(const mc_verify_report* r);
MC_API mc_status mc_verify_check(const mc_verify_report* r, size_t index, const char** name, uint64_t* cases,
                                 uint64_t* violations, double* worst_margin);

#ifdef __cplusplus
}
#endif

#endif /* MODCOUNT_H */

// Glue between the public C interface and the C++ core.

#include <cstring>
#include <exception>
#include <new>
#include <span>
#include <string>
#include <string_view>

#include "covering.hpp"
#include "error.hpp"
#include "expsums.hpp"
#include "modarith.hpp"
#include "moments.hpp"
#include "verify.hpp"

#include "modcount/modcount.h"

struct mc_context {
  modcount::Config config;
  std::string last_error;
};

struct mc_modulus {
  modcount::Modulus value;
};

struct mc_badbox_report {
  modcount::BadBoxReport report;
  std::string total;
};

struct mc_covering_report {
  modcount::CoveringReport report;
};

struct mc_verify_report {
  std::vector<modcount::CheckResult> checks;
};

namespace {

mc_status to_status(modcount::ErrorCode code) {
  switch (code) {
    case modcount::ErrorCode::invalid_argument: return MC_ERR_INVALID_ARGUMENT;
    case modcount::ErrorCode::not_coprime: return MC_ERR_NOT_COPRIME;
    case modcount::ErrorCode::budget_exceeded: return MC_ERR_BUDGET_EXCEEDED;
    case modcount::ErrorCode::overflow: return MC_ERR_OVERFLOW;
  }
  return MC_ERR_INTERNAL;
}

template <class Fn>
mc_status guarded(mc_context* ctx, Fn&& fn) {
  if (ctx == nullptr) return MC_ERR_INVALID_ARGUMENT;
  try {
    fn();
    return MC_OK;
  } catch (const modcount::Error& e) {
    ctx->last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    ctx->last_error = "out of memory";
    return MC_ERR_INTERNAL;
  } catch (const std::exception& e) {
    ctx->last_error = e.what();
    return MC_ERR_INTERNAL;
  }
}

void require_out(const void* p) { modcount::require(p != nullptr, "output pointer must not be null"); }

void copy_decimal(char (&dst)[48], const std::string& src) {
  std::strncpy(dst, src.c_str(), sizeof dst - 1);
  dst[sizeof dst - 1] = '\0';
}

void fill_report(const modcount::MomentReport& r, mc_moment_report* out) {
  *out = mc_moment_report{};
  out->q = r.q;
  out->c = r.c;
  out->t = r.t;
  out->L1 = r.lengths.empty() ? 0 : r.lengths[0];
  out->L2 = r.lengths.size() > 1 ? r.lengths[1] : out->L1;
  out->k = r.k;
  out->method = static_cast<mc_method>(r.method);
  out->moment_value = r.moment_value;
  out->has_exact = r.exact_num.has_value() ? 1 : 0;
  if (r.exact_num) {
    copy_decimal(out->exact_num, modcount::to_string(*r.exact_num));
    copy_decimal(out->exact_den, modcount::to_string(r.exact_den));
  }
  out->main_term_kind = r.main_term_kind == modcount::MainTermShape::thm1 ? MC_SHAPE_THM1 : MC_SHAPE_THM3;
  out->bound_value = r.bound_value;
  out->ratio = r.ratio;
}

modcount::MomentReport to_core(const mc_moment_report& in) {
  modcount::MomentReport r;
  r.q = in.q;
  r.c = in.c;
  r.t = in.t;
  r.lengths = {in.L1, in.L2};
  if (in.t > 2) r.lengths.assign(in.t, in.L1);
  r.k = in.k;
  r.method = static_cast<modcount::MomentMethod>(in.method);
  r.moment_value = in.moment_value;
  r.main_term_kind = in.main_term_kind == MC_SHAPE_THM1 ? modcount::MainTermShape::thm1 : modcount::MainTermShape::thm3;
  r.bound_value = in.bound_value;
  return r;
}

modcount::BoxSpec to_box(const mc_box* box) {
  modcount::require(box != nullptr && box->starts != nullptr && box->lengths != nullptr &&
                        box->coprime_flags != nullptr,
                    "box fields must not be null");
  modcount::require(box->t >= 2, "a box needs t >= 2 coordinates");
  modcount::BoxSpec spec{modcount::Modulus(box->q), box->t, {}, modcount::reduce(box->c, box->q), {}};
  for (unsigned i = 0; i < box->t; ++i) {
    spec.intervals.push_back({box->starts[i] % box->q, box->lengths[i]});
    spec.coprime_flags.push_back(box->coprime_flags[i] != 0);
  }
  spec.validate();
  return spec;
}

std::uint64_t* budget_slot(modcount::Budgets& b, std::string_view name) {
  if (name == "enumeration") return &b.enumeration;
  if (name == "grid_cells") return &b.grid_cells;
  if (name == "covering_samples") return &b.covering_samples;
  if (name == "sample_cap") return &b.sample_cap;
  return nullptr;
}

}  // namespace

extern "C" {

const char* mc_status_string(mc_status status) {
  switch (status) {
    case MC_OK: return "ok";
    case MC_ERR_INVALID_ARGUMENT: return "invalid argument";
    case MC_ERR_NOT_COPRIME: return "not coprime";
    case MC_ERR_BUDGET_EXCEEDED: return "budget exceeded";
    case MC_ERR_OVERFLOW: return "overflow";
    case MC_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* mc_version(void) { return "1.0.0"; }

mc_status mc_context_create(mc_context** out) {
  if (out == nullptr) return MC_ERR_INVALID_ARGUMENT;
  *out = new (std::nothrow) mc_context{};
  return *out ? MC_OK : MC_ERR_INTERNAL;
}

void mc_context_destroy(mc_context* ctx) { delete ctx; }

mc_status mc_context_set_threads(mc_context* ctx, unsigned threads) {
  return guarded(ctx, [&] {
    modcount::require(threads >= 1, "threads must be positive");
    ctx->config.threads = threads;
  });
}

mc_status mc_context_set_budget(mc_context* ctx, const char* name, uint64_t value) {
  return guarded(ctx, [&] {
    modcount::require(name != nullptr, "budget name must not be null");
    std::uint64_t* slot = budget_slot(ctx->config.budgets, name);
    modcount::require(slot != nullptr, std::string("unknown budget '") + name + "'");
    *slot = value;
  });
}

mc_status mc_context_get_budget(const mc_context* ctx, const char* name, uint64_t* value) {
  if (ctx == nullptr || name == nullptr || value == nullptr) return MC_ERR_INVALID_ARGUMENT;
  auto budgets = ctx->config.budgets;
  const std::uint64_t* slot = budget_slot(budgets, name);
  if (slot == nullptr) return MC_ERR_INVALID_ARGUMENT;
  *value = *slot;
  return MC_OK;
}

const char* mc_context_last_error(const mc_context* ctx) { return ctx ? ctx->last_error.c_str() : ""; }

mc_status mc_modulus_create(mc_context* ctx, uint64_t q, mc_modulus** out) {
  return guarded(ctx, [&] {
    require_out(out);
    *out = new mc_modulus{modcount::Modulus(q)};
  });
}

void mc_modulus_destroy(mc_modulus* m) { delete m; }
uint64_t mc_modulus_value(const mc_modulus* m) { return m ? m->value.value() : 0; }
uint64_t mc_modulus_phi(const mc_modulus* m) { return m ? m->value.phi() : 0; }
uint64_t mc_modulus_divisor_count(const mc_modulus* m) { return m ? m->value.divisor_count() : 0; }
unsigned mc_modulus_omega(const mc_modulus* m) { return m ? m->value.omega() : 0; }
size_t mc_modulus_factor_count(const mc_modulus* m) { return m ? m->value.factors().size() : 0; }

mc_status mc_modulus_factor(const mc_modulus* m, size_t index, uint64_t* prime, unsigned* exponent) {
  if (m == nullptr || prime == nullptr || exponent == nullptr || index >= m->value.factors().size()) {
    return MC_ERR_INVALID_ARGUMENT;
  }
  *prime = m->value.factors()[index].prime;
  *exponent = m->value.factors()[index].exponent;
  return MC_OK;
}

double mc_modulus_parity_constant(const mc_modulus* m, unsigned t) { return m ? m->value.parity_constant(t) : 0.0; }

mc_status mc_mod_inverse(mc_context* ctx, int64_t n, uint64_t q, uint64_t* out) {
  return guarded(ctx, [&] {
    require_out(out);
    *out = modcount::mod_inverse(n, q);
  });
}

mc_status mc_gcd3(mc_context* ctx, int64_t a, int64_t b, uint64_t q, uint64_t* out) {
  return guarded(ctx, [&] {
    require_out(out);
    *out = modcount::gcd3(a, b, q);
  });
}

mc_status mc_units(mc_context* ctx, uint64_t q, uint64_t* out, size_t capacity, size_t* count) {
  return guarded(ctx, [&] {
    require_out(count);
    const auto all = modcount::units(q);
    *count = all.size();
    for (size_t i = 0; i < all.size() && i < capacity && out != nullptr; ++i) out[i] = all[i];
  });
}

mc_status mc_kloosterman(mc_context* ctx, int64_t a, int64_t b, uint64_t q, mc_expsum* out) {
  return guarded(ctx, [&] {
    require_out(out);
    const auto v = modcount::kloosterman(a, b, q);
    *out = {{v.value.real(), v.value.imag()}, v.bound};
  });
}

mc_status mc_ramanujan(mc_context* ctx, int64_t b, uint64_t q, double* out) {
  return guarded(ctx, [&] {
    require_out(out);
    *out = modcount::ramanujan(b, q);
  });
}

mc_status mc_hyper_kloosterman(mc_context* ctx, const int64_t* ks, size_t t, int64_t c, uint64_t q, mc_expsum* out) {
  return guarded(ctx, [&] {
    require_out(out);
    modcount::require(ks != nullptr, "frequency array must not be null");
    const auto v = modcount::hyper_kloosterman(std::span<const std::int64_t>(ks, t), c, q,
                                               ctx->config.budgets.enumeration);
    *out = {{v.value.real(), v.value.imag()}, v.bound};
  });
}

mc_status mc_fejer(mc_context* ctx, int64_t k, uint64_t L, uint64_t q, double* out) {
  return guarded(ctx, [&] {
    require_out(out);
    *out = modcount::fejer(k, L, q);
  });
}

mc_status mc_fejer_mass(mc_context* ctx, uint64_t L, uint64_t q, double* out) {
  return guarded(ctx, [&] {
    require_out(out);
    *out = modcount::fejer_mass(L, q);
  });
}

mc_status mc_fejer_gcd_sum(mc_context* ctx, uint64_t L, uint64_t q, double* out) {
  return guarded(ctx, [&] {
    require_out(out);
    *out = modcount::fejer_gcd_sum(L, q);
  });
}

mc_status mc_incomplete_kloosterman(mc_context* ctx, int64_t b, uint64_t L, int64_t k, int64_t c, uint64_t q,
                                    mc_complex* out) {
  return guarded(ctx, [&] {
    require_out(out);
    const auto v = modcount::incomplete_kloosterman(b, L, k, c, q);
    *out = {v.real(), v.imag()};
  });
}

mc_status mc_complete_incomplete(mc_context* ctx, int64_t b, uint64_t L, int64_t k, int64_t c, uint64_t q,
                                 mc_complex* out) {
  return guarded(ctx, [&] {
    require_out(out);
    const auto v = modcount::complete_incomplete(b, L, k, c, q);
    *out = {v.real(), v.imag()};
  });
}

mc_status mc_count_solutions(mc_context* ctx, const mc_box* box, uint64_t* out) {
  return guarded(ctx, [&] {
    require_out(out);
    *out = modcount::count_solutions(to_box(box), ctx->config.budgets);
  });
}

mc_status mc_main_term(mc_context* ctx, const mc_box* box, int64_t* num, int64_t* den) {
  return guarded(ctx, [&] {
    require_out(num);
    require_out(den);
    const auto value = modcount::main_term(to_box(box));
    constexpr modcount::i128 kMax = INT64_MAX;
    if (value.num > kMax || value.num < -kMax || value.den > kMax) {
      modcount::fail(modcount::ErrorCode::overflow, "main term " + value.str() + " does not fit in 64 bits");
    }
    *num = static_cast<int64_t>(value.num);
    *den = static_cast<int64_t>(value.den);
  });
}

mc_status mc_second_moment(mc_context* ctx, mc_method method, uint64_t q, int64_t c, uint64_t L1, uint64_t L2,
                           mc_moment_report* out) {
  return guarded(ctx, [&] {
    require_out(out);
    switch (method) {
      case MC_METHOD_PREFIX: fill_report(modcount::second_moment_prefix(q, c, L1, L2, ctx->config), out); break;
      case MC_METHOD_PAIRS: fill_report(modcount::second_moment_pairs(q, c, L1, L2, ctx->config), out); break;
      case MC_METHOD_SPECTRAL:
        modcount::require(L1 == L2, "the spectral method needs equal side lengths");
        fill_report(modcount::second_moment_spectral(q, c, L1, ctx->config), out);
        break;
      default: modcount::fail(modcount::ErrorCode::invalid_argument, "method must be prefix, pairs or spectral");
    }
  });
}

mc_status mc_second_moment_t(mc_context* ctx, mc_method method, uint64_t q, int64_t c, uint64_t L, unsigned t,
                             mc_moment_report* out) {
  return guarded(ctx, [&] {
    require_out(out);
    switch (method) {
      case MC_METHOD_EXACT_T: fill_report(modcount::second_moment_exact_t(q, c, L, t, ctx->config), out); break;
      case MC_METHOD_SPECTRAL_T: fill_report(modcount::second_moment_spectral_t(q, c, L, t, ctx->config), out); break;
      default: modcount::fail(modcount::ErrorCode::invalid_argument, "method must be exact_t or spectral_t");
    }
  });
}

mc_status mc_kth_moment(mc_context* ctx, uint64_t q, int64_t c, uint64_t L, unsigned k, mc_shape shape,
                        mc_moment_report* out) {
  return guarded(ctx, [&] {
    require_out(out);
    const auto s = shape == MC_SHAPE_THM1 ? modcount::MainTermShape::thm1 : modcount::MainTermShape::thm3;
    fill_report(modcount::kth_moment(q, c, L, k, s, ctx->config), out);
  });
}

mc_status mc_theorem_ratio(mc_context* ctx, const mc_moment_report* report, double* out) {
  return guarded(ctx, [&] {
    require_out(out);
    require_out(report);
    *out = modcount::theorem_ratio(to_core(*report));
  });
}

mc_status mc_bad_boxes(mc_context* ctx, uint64_t q, int64_t c, uint64_t L, unsigned t, mc_badbox_report** out) {
  return guarded(ctx, [&] {
    require_out(out);
    auto report = modcount::bad_boxes(q, c, L, t, ctx->config);
    auto total = modcount::to_string(report.total);
    *out = new mc_badbox_report{std::move(report), std::move(total)};
  });
}

void mc_badbox_report_destroy(mc_badbox_report* r) { delete r; }
uint64_t mc_badbox_count(const mc_badbox_report* r) { return r ? r->report.bad_count : 0; }
const char* mc_badbox_total(const mc_badbox_report* r) { return r ? r->total.c_str() : ""; }
double mc_badbox_fraction(const mc_badbox_report* r) { return r ? r->report.fraction : 0.0; }
size_t mc_badbox_sample_size(const mc_badbox_report* r) { return r ? r->report.sample.size() : 0; }

mc_status mc_badbox_sample(const mc_badbox_report* r, size_t index, uint64_t* out, size_t capacity) {
  if (r == nullptr || out == nullptr || index >= r->report.sample.size()) return MC_ERR_INVALID_ARGUMENT;
  const auto& tuple = r->report.sample[index];
  if (capacity < tuple.size()) return MC_ERR_INVALID_ARGUMENT;
  for (size_t i = 0; i < tuple.size(); ++i) out[i] = tuple[i];
  return MC_OK;
}

mc_status mc_covering(mc_context* ctx, uint64_t q, uint64_t subdivisions, double theta, unsigned curve_points,
                      int torus, mc_covering_report** out) {
  return guarded(ctx, [&] {
    require_out(out);
    modcount::require(theta <= 1.0, "theta must not exceed 1");
    *out = new mc_covering_report{
        modcount::covering_report(q, subdivisions, theta, curve_points, ctx->config, torus != 0)};
  });
}

void mc_covering_report_destroy(mc_covering_report* r) { delete r; }
double mc_covering_grid_step(const mc_covering_report* r) { return r ? r->report.grid_step : 0.0; }
double mc_covering_r_max(const mc_covering_report* r) { return r ? r->report.r_max : 0.0; }
double mc_covering_error_bound(const mc_covering_report* r) { return r ? r->report.error_bound : 0.0; }
double mc_covering_theta(const mc_covering_report* r) { return r ? r->report.theta : 0.0; }
double mc_covering_r_tilde(const mc_covering_report* r) { return r ? r->report.r_tilde_estimate : 0.0; }
size_t mc_covering_curve_size(const mc_covering_report* r) { return r ? r->report.curve.size() : 0; }

mc_status mc_covering_curve_point(const mc_covering_report* r, size_t index, double* radius, double* fraction) {
  if (r == nullptr || radius == nullptr || fraction == nullptr || index >= r->report.curve.size()) {
    return MC_ERR_INVALID_ARGUMENT;
  }
  *radius = r->report.curve[index].first;
  *fraction = r->report.curve[index].second;
  return MC_OK;
}

mc_status mc_coverage_fraction(mc_context* ctx, uint64_t q, double r, uint64_t subdivisions, double* out) {
  return guarded(ctx, [&] {
    require_out(out);
    *out = modcount::coverage_fraction(q, r, subdivisions, ctx->config);
  });
}

mc_status mc_solution_points(mc_context* ctx, uint64_t q, uint64_t* xs, uint64_t* ys, size_t capacity,
                             size_t* count) {
  return guarded(ctx, [&] {
    require_out(count);
    const auto points = modcount::solution_points(q);
    *count = points.size();
    if (xs == nullptr || ys == nullptr) return;
    for (size_t i = 0; i < points.size() && i < capacity; ++i) {
      xs[i] = points[i].x;
      ys[i] = points[i].y;
    }
  });
}

mc_status mc_verify(mc_context* ctx, uint64_t max_q, mc_verify_report** out) {
  return guarded(ctx, [&] {
    require_out(out);
    *out = new mc_verify_report{modcount::run_verification(max_q, ctx->config)};
  });
}

void mc_verify_report_destroy(mc_verify_report* r) { delete r; }
size_t mc_verify_check_count(const mc_verify_report* r) { return r ? r->checks.size() : 0; }

mc_status mc_verify_check(const mc_verify_report* r, size_t index, const char** name, uint64_t* cases,
                          uint64_t* violations, double* worst_margin) {
  if (r == nullptr || index >= r->checks.size()) return MC_ERR_INVALID_ARGUMENT;
  const auto& check = r->checks[index];
  if (name) *name = check.name.c_str();
  if (cases) *cases = check.cases;
  if (violations) *violations = check.violations;
  if (worst_margin) *worst_margin = check.worst_margin;
  return MC_OK;
}

}  // extern "C"

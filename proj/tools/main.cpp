// modcount command line front end. Talks to the library only through the C API.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "modcount/modcount.h"
#include "table.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitBudget = 3;

struct ApiError : std::runtime_error {
  mc_status status;
  ApiError(mc_status s, const std::string& message) : std::runtime_error(message), status(s) {}
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_code(mc_status status) {
  switch (status) {
    case MC_ERR_INVALID_ARGUMENT:
    case MC_ERR_NOT_COPRIME: return kExitInvalid;
    case MC_ERR_BUDGET_EXCEEDED:
    case MC_ERR_OVERFLOW: return kExitBudget;
    default: return kExitFailure;
  }
}

class Context {
 public:
  Context() {
    if (mc_context_create(&ctx_) != MC_OK) throw std::runtime_error("cannot create context");
  }
  ~Context() { mc_context_destroy(ctx_); }
  Context(const Context&) = delete;
  Context& operator=(const Context&) = delete;

  mc_context* get() const { return ctx_; }

  void check(mc_status status) const {
    if (status != MC_OK) throw ApiError(status, mc_context_last_error(ctx_));
  }

 private:
  mc_context* ctx_ = nullptr;
};

template <class T, void (*Destroy)(T*)>
struct Deleter {
  void operator()(T* p) const { Destroy(p); }
};
using BadBoxes = std::unique_ptr<mc_badbox_report, Deleter<mc_badbox_report, mc_badbox_report_destroy>>;
using Covering = std::unique_ptr<mc_covering_report, Deleter<mc_covering_report, mc_covering_report_destroy>>;
using Verify = std::unique_ptr<mc_verify_report, Deleter<mc_verify_report, mc_verify_report_destroy>>;
using Modulus = std::unique_ptr<mc_modulus, Deleter<mc_modulus, mc_modulus_destroy>>;

struct Common {
  std::string format = "table";
  unsigned threads = 1;
  std::optional<std::uint64_t> enumeration, grid_cells, covering_samples, sample_cap;
  std::string output;
};

struct Params {
  std::int64_t a = 0, b = 0, c = 1;
  std::uint64_t q = 0;
  std::vector<std::int64_t> ks;
  std::optional<std::uint64_t> L, L1, L2;
  unsigned k = 2, t = 2;
  std::string method, shape = "thm1";
  std::uint64_t subdivisions = 2048;
  double theta = 0.99;
  unsigned curve_points = 0;
  bool curve = false, torus = false;
  std::uint64_t max_q = 200;
  // sweep
  std::string kind = "badboxes";
  std::uint64_t q_min = 0, q_max = 0, q_step = 1;
  bool primes = false, no_timing = false;
  std::vector<std::uint64_t> L_list;
  std::vector<double> L_exp;
  std::vector<unsigned> k_list;
};

std::string method_name(mc_method m) {
  switch (m) {
    case MC_METHOD_PREFIX: return "prefix";
    case MC_METHOD_PAIRS: return "pairs";
    case MC_METHOD_SPECTRAL: return "spectral";
    case MC_METHOD_EXACT_T: return "exact_t";
    case MC_METHOD_SPECTRAL_T: return "spectral_t";
    case MC_METHOD_KTH: return "kth";
  }
  return "unknown";
}

std::string shape_name(mc_shape s) { return s == MC_SHAPE_THM1 ? "thm1" : "thm3"; }

mc_shape parse_shape(const std::string& s) {
  if (s == "thm1") return MC_SHAPE_THM1;
  if (s == "thm3") return MC_SHAPE_THM3;
  throw UsageError("shape must be thm1 or thm3");
}

std::string exact_text(const mc_moment_report& r) {
  if (!r.has_exact) return "";
  return std::string(r.exact_num) + "/" + r.exact_den;
}

std::uint64_t side_length(const std::optional<std::uint64_t>& v, const char* name) {
  if (!v) throw UsageError(std::string("missing --") + name);
  return *v;
}

// ---- single-shot commands ------------------------------------------------

Table run_kloosterman(const Context& ctx, const Params& p) {
  mc_expsum s;
  ctx.check(mc_kloosterman(ctx.get(), p.a, p.b, p.q, &s));
  Table t{{"a", "b", "q", "re", "im", "abs", "bound"}, {}};
  t.rows.push_back({p.a, p.b, p.q, s.value.re, s.value.im, std::hypot(s.value.re, s.value.im), s.bound});
  t.single = true;
  return t;
}

Table run_hyperkloosterman(const Context& ctx, const Params& p) {
  if (p.ks.size() < 2) throw UsageError("--k needs at least two frequencies");
  mc_expsum s;
  ctx.check(mc_hyper_kloosterman(ctx.get(), p.ks.data(), p.ks.size(), p.c, p.q, &s));
  std::string ks;
  for (std::size_t i = 0; i < p.ks.size(); ++i) ks += (i ? " " : "") + std::to_string(p.ks[i]);
  Table t{{"ks", "t", "c", "q", "re", "im", "abs", "bound"}, {}};
  t.rows.push_back({ks, std::uint64_t(p.ks.size()), p.c, p.q, s.value.re, s.value.im,
                    std::hypot(s.value.re, s.value.im), s.bound});
  t.single = true;
  return t;
}

mc_moment_report moment2(const Context& ctx, const std::string& method, std::uint64_t q, std::int64_t c,
                         std::uint64_t L1, std::uint64_t L2) {
  mc_method m;
  if (method == "prefix") m = MC_METHOD_PREFIX;
  else if (method == "pairs") m = MC_METHOD_PAIRS;
  else if (method == "spectral") m = MC_METHOD_SPECTRAL;
  else throw UsageError("method must be prefix, pairs or spectral");
  mc_moment_report r;
  ctx.check(mc_second_moment(ctx.get(), m, q, c, L1, L2, &r));
  return r;
}

mc_moment_report momentt(const Context& ctx, const std::string& method, std::uint64_t q, std::int64_t c,
                         std::uint64_t L, unsigned t) {
  mc_method m;
  if (method == "exact") m = MC_METHOD_EXACT_T;
  else if (method == "spectral") m = MC_METHOD_SPECTRAL_T;
  else throw UsageError("method must be exact or spectral");
  mc_moment_report r;
  ctx.check(mc_second_moment_t(ctx.get(), m, q, c, L, t, &r));
  return r;
}

mc_moment_report momentk(const Context& ctx, const std::string& shape, std::uint64_t q, std::int64_t c,
                         std::uint64_t L, unsigned k) {
  mc_moment_report r;
  ctx.check(mc_kth_moment(ctx.get(), q, c, L, k, parse_shape(shape), &r));
  return r;
}

Table moment_table(const mc_moment_report& r, bool with_sides) {
  Table t;
  t.single = true;
  t.columns = {"q", "c", "L"};
  t.rows.push_back({r.q, r.c, r.L1});
  auto& row = t.rows.back();
  if (with_sides) {
    t.columns.insert(t.columns.end(), {"L1", "L2"});
    row.insert(row.end(), {r.L1, r.L2});
  }
  t.columns.insert(t.columns.end(), {"t", "k", "method", "S", "S_exact", "main_term_kind", "bound", "ratio"});
  row.insert(row.end(), {std::uint64_t(r.t), std::uint64_t(r.k), method_name(r.method), r.moment_value,
                         exact_text(r), shape_name(r.main_term_kind), r.bound_value, r.ratio});
  return t;
}

Table run_moment2(const Context& ctx, const Params& p) {
  const std::uint64_t L1 = p.L1 ? *p.L1 : side_length(p.L, "L");
  const std::uint64_t L2 = p.L2 ? *p.L2 : side_length(p.L, "L");
  const std::string method = p.method.empty() ? "pairs" : p.method;
  return moment_table(moment2(ctx, method, p.q, p.c, L1, L2), L1 != L2);
}

Table run_momentt(const Context& ctx, const Params& p) {
  const std::string method = p.method.empty() ? "exact" : p.method;
  return moment_table(momentt(ctx, method, p.q, p.c, side_length(p.L, "L"), p.t), false);
}

Table run_momentk(const Context& ctx, const Params& p) {
  return moment_table(momentk(ctx, p.shape, p.q, p.c, side_length(p.L, "L"), p.k), false);
}

Table run_badboxes(const Context& ctx, const Params& p) {
  mc_badbox_report* raw = nullptr;
  ctx.check(mc_bad_boxes(ctx.get(), p.q, p.c, side_length(p.L, "L"), p.t, &raw));
  BadBoxes r(raw);
  Table t{{"q", "c", "t", "L", "bad_count", "total", "fraction"}, {}};
  t.rows.push_back({p.q, p.c, std::uint64_t(p.t), *p.L, mc_badbox_count(r.get()), std::string(mc_badbox_total(r.get())),
                    mc_badbox_fraction(r.get())});
  t.single = true;
  nlohmann::ordered_json sample = nlohmann::ordered_json::array();
  std::vector<std::uint64_t> tuple(p.t);
  for (std::size_t i = 0; i < mc_badbox_sample_size(r.get()); ++i) {
    mc_badbox_sample(r.get(), i, tuple.data(), tuple.size());
    sample.push_back(tuple);
  }
  t.extra["sample"] = sample;
  return t;
}

Table run_covering(const Context& ctx, const Params& p) {
  const unsigned points = p.curve && p.curve_points == 0 ? 65 : p.curve_points;
  mc_covering_report* raw = nullptr;
  ctx.check(mc_covering(ctx.get(), p.q, p.subdivisions, p.theta, points, p.torus ? 1 : 0, &raw));
  Covering r(raw);
  std::vector<std::pair<double, double>> curve(mc_covering_curve_size(r.get()));
  for (std::size_t i = 0; i < curve.size(); ++i) {
    mc_covering_curve_point(r.get(), i, &curve[i].first, &curve[i].second);
  }
  if (p.curve) {
    Table t{{"r", "fraction"}, {}};
    for (const auto& [radius, fraction] : curve) t.rows.push_back({radius, fraction});
    return t;
  }
  const double bound = std::pow(double(p.q), 0.75) * std::log(double(p.q));
  Table t{{"q", "subdivisions", "grid_step", "r_max", "error_bound", "theta", "r_tilde", "q34_log_q", "geometry"}, {}};
  t.rows.push_back({p.q, p.subdivisions, mc_covering_grid_step(r.get()), mc_covering_r_max(r.get()),
                    mc_covering_error_bound(r.get()), mc_covering_theta(r.get()), mc_covering_r_tilde(r.get()),
                    bound, std::string(p.torus ? "torus" : "square")});
  t.single = true;
  if (!curve.empty()) {
    nlohmann::ordered_json c = nlohmann::ordered_json::array();
    for (const auto& [radius, fraction] : curve) c.push_back({cell_json(radius), cell_json(fraction)});
    t.extra["curve"] = c;
  }
  return t;
}

Table run_verify(const Context& ctx, const Params& p, bool& failed) {
  mc_verify_report* raw = nullptr;
  ctx.check(mc_verify(ctx.get(), p.max_q, &raw));
  Verify r(raw);
  Table t{{"check", "cases", "violations", "worst_margin", "status"}, {}};
  failed = false;
  for (std::size_t i = 0; i < mc_verify_check_count(r.get()); ++i) {
    const char* name = nullptr;
    std::uint64_t cases = 0, violations = 0;
    double margin = 0;
    mc_verify_check(r.get(), i, &name, &cases, &violations, &margin);
    failed = failed || violations != 0;
    t.rows.push_back({std::string(name), cases, violations, margin, std::string(violations ? "FAIL" : "ok")});
  }
  return t;
}

// ---- sweeps ----------------------------------------------------------------

bool is_prime(const Context& ctx, std::uint64_t q) {
  if (q < 2) return false;
  mc_modulus* raw = nullptr;
  ctx.check(mc_modulus_create(ctx.get(), q, &raw));
  Modulus m(raw);
  std::uint64_t prime = 0;
  unsigned exponent = 0;
  return mc_modulus_factor_count(m.get()) == 1 && mc_modulus_factor(m.get(), 0, &prime, &exponent) == MC_OK &&
         exponent == 1;
}

std::uint64_t gcd(std::uint64_t a, std::uint64_t b) {
  while (b) {
    const std::uint64_t r = a % b;
    a = b;
    b = r;
  }
  return a;
}

// Ascending distinct side lengths for modulus q; values above q are dropped.
std::vector<std::uint64_t> sweep_lengths(const Params& p, std::uint64_t q) {
  std::set<std::uint64_t> out;
  for (std::uint64_t L : p.L_list) {
    if (L <= q) out.insert(L);
  }
  for (double e : p.L_exp) {
    const auto L = static_cast<std::uint64_t>(std::ceil(std::pow(double(q), e) - 1e-9));
    if (L <= q) out.insert(L);
  }
  return {out.begin(), out.end()};
}

Table run_sweep(const Context& ctx, const Params& p) {
  if (p.L_list.empty() && p.L_exp.empty()) throw UsageError("sweep needs --L or --L-exp");
  if (p.q_step == 0) throw UsageError("--q-step must be positive");
  const bool badboxes = p.kind == "badboxes";
  if (!badboxes && p.kind != "moment2" && p.kind != "momentk" && p.kind != "momentt") {
    throw UsageError("kind must be badboxes, moment2, momentk or momentt");
  }
  Table t;
  if (badboxes) t.columns = {"q", "c", "t", "L", "bad_count", "total", "fraction", "elapsed_ms"};
  else t.columns = {"q", "c", "t", "L1", "L2", "k", "method", "S", "main_kind", "bound", "ratio", "elapsed_ms"};

  std::vector<unsigned> ks = p.k_list.empty() ? std::vector<unsigned>{2} : p.k_list;
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

  for (std::uint64_t q = std::max<std::uint64_t>(p.q_min, 1); q <= p.q_max; q += p.q_step) {
    if (p.primes && !is_prime(ctx, q)) continue;
    const std::uint64_t c = static_cast<std::uint64_t>(((p.c % std::int64_t(q)) + std::int64_t(q)) % std::int64_t(q));
    if (gcd(c, q) != 1) continue;
    for (std::uint64_t L : sweep_lengths(p, q)) {
      const auto start = std::chrono::steady_clock::now();
      auto elapsed = [&] {
        if (p.no_timing) return std::int64_t{0};
        return std::int64_t(std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                                                  start)
                                .count());
      };
      if (badboxes) {
        mc_badbox_report* raw = nullptr;
        ctx.check(mc_bad_boxes(ctx.get(), q, std::int64_t(c), L, p.t, &raw));
        BadBoxes r(raw);
        t.rows.push_back({q, c, std::uint64_t(p.t), L, mc_badbox_count(r.get()), std::string(mc_badbox_total(r.get())),
                          mc_badbox_fraction(r.get()), elapsed()});
        continue;
      }
      const std::vector<unsigned> orders = p.kind == "momentk" ? ks : std::vector<unsigned>{2};
      for (unsigned k : orders) {
        mc_moment_report r;
        if (p.kind == "moment2") r = moment2(ctx, p.method.empty() ? "pairs" : p.method, q, std::int64_t(c), L, L);
        else if (p.kind == "momentt") r = momentt(ctx, p.method.empty() ? "exact" : p.method, q, std::int64_t(c), L, p.t);
        else r = momentk(ctx, p.shape, q, std::int64_t(c), L, k);
        t.rows.push_back({q, c, std::uint64_t(r.t), r.L1, r.L2, std::uint64_t(r.k), method_name(r.method),
                          r.moment_value, shape_name(r.main_term_kind), r.bound_value, r.ratio, elapsed()});
      }
    }
  }
  return t;
}

void emit(const Table& table, const Common& common) {
  std::string text;
  if (common.format == "csv") text = table.csv();
  else if (common.format == "json") text = table.json();
  else text = table.text();
  if (common.output.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    std::fflush(stdout);
    return;
  }
  std::ofstream out(common.output, std::ios::binary);
  out << text;
  if (!out) throw UsageError("cannot write " + common.output);
}

void configure(const Context& ctx, const Common& common) {
  ctx.check(mc_context_set_threads(ctx.get(), common.threads));
  const std::pair<const char*, const std::optional<std::uint64_t>*> budgets[] = {
      {"enumeration", &common.enumeration},
      {"grid_cells", &common.grid_cells},
      {"covering_samples", &common.covering_samples},
      {"sample_cap", &common.sample_cap}};
  for (const auto& [name, value] : budgets) {
    if (*value) ctx.check(mc_context_set_budget(ctx.get(), name, **value));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Solution counts of q_1...q_t = c (mod q) in short torus boxes, their moments, "
               "Kloosterman sums and covering radii of xy = 1 (mod q)."};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(mc_version()));

  Common common;
  Params p;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--format", common.format, "Output format")
        ->check(CLI::IsMember({"csv", "json", "table"}))
        ->capture_default_str();
    cmd->add_option("--threads", common.threads, "Worker threads for library scans")
        ->check(CLI::Range(1u, 1024u))
        ->capture_default_str();
    cmd->add_option("--budget-enumeration", common.enumeration, "Max terms in one enumeration");
    cmd->add_option("--budget-grid-cells", common.grid_cells, "Max cells in a q^t counting grid");
    cmd->add_option("--budget-covering-samples", common.covering_samples, "Max samples in a covering grid");
    cmd->add_option("--sample-cap", common.sample_cap, "Max bad tuples kept in a bad-box report");
    cmd->add_option("-o,--output", common.output, "Write to this file instead of stdout");
  };
  auto add_q = [&](CLI::App* cmd) { cmd->add_option("--q", p.q, "Modulus")->required(); };
  auto add_c = [&](CLI::App* cmd) { cmd->add_option("--c", p.c, "Target residue, coprime to q")->capture_default_str(); };

  auto* kl = app.add_subcommand("kloosterman", "Kloosterman sum S(a, b; q) and its Weil bound");
  kl->add_option("--a", p.a)->required();
  kl->add_option("--b", p.b)->required();
  add_q(kl);

  auto* hk = app.add_subcommand("hyperkloosterman", "Hyper-Kloosterman sum and its Weinstein bound");
  hk->add_option("--k", p.ks, "Frequencies k_1..k_t")->required()->delimiter(',');
  add_c(hk);
  add_q(hk);

  auto* m2 = app.add_subcommand("moment2", "Second moment of two-variable box counts");
  add_q(m2);
  add_c(m2);
  m2->add_option("--L", p.L, "Side length of both windows");
  m2->add_option("--L1", p.L1, "First side length");
  m2->add_option("--L2", p.L2, "Second side length");
  m2->add_option("--method", p.method, "prefix, pairs or spectral (default pairs)")
      ->check(CLI::IsMember({"prefix", "pairs", "spectral"}));

  auto* mk = app.add_subcommand("momentk", "k-th absolute moment of two-variable box counts");
  add_q(mk);
  add_c(mk);
  mk->add_option("--L", p.L)->required();
  mk->add_option("--k", p.k)->required();
  mk->add_option("--shape", p.shape, "Main term: thm1 or thm3")->capture_default_str();

  auto* mt = app.add_subcommand("momentt", "Second moment of all-coprime t-variable box counts");
  add_q(mt);
  add_c(mt);
  mt->add_option("--L", p.L)->required();
  mt->add_option("--t", p.t)->capture_default_str();
  mt->add_option("--method", p.method, "exact or spectral (default exact)")
      ->check(CLI::IsMember({"exact", "spectral"}));

  auto* bb = app.add_subcommand("badboxes", "Count base tuples whose box has no solution");
  add_q(bb);
  add_c(bb);
  bb->add_option("--L", p.L)->required();
  bb->add_option("--t", p.t)->capture_default_str();

  auto* cv = app.add_subcommand("covering", "Covering radius of xy = 1 (mod q) in [0, q]^2");
  add_q(cv);
  cv->add_option("--subdivisions", p.subdivisions, "Grid step is q / subdivisions")->capture_default_str();
  cv->add_option("--theta", p.theta, "Coverage fraction for r_tilde (0 skips)")->capture_default_str();
  cv->add_option("--curve-points", p.curve_points, "Radii in the coverage curve");
  cv->add_flag("--curve", p.curve, "Emit the coverage curve instead of the summary");
  cv->add_flag("--torus", p.torus, "Wrapped distances (exploratory)");

  auto* sw = app.add_subcommand("sweep", "One CSV row per (q, L, k) point");
  sw->add_option("--kind", p.kind, "badboxes, moment2, momentk or momentt")->capture_default_str();
  sw->add_option("--q-min", p.q_min)->required();
  sw->add_option("--q-max", p.q_max)->required();
  sw->add_option("--q-step", p.q_step)->capture_default_str();
  sw->add_flag("--primes", p.primes, "Only prime q");
  add_c(sw);
  sw->add_option("--L", p.L_list, "Fixed side lengths")->delimiter(',');
  sw->add_option("--L-exp", p.L_exp, "Side lengths ceil(q^e)")->delimiter(',');
  sw->add_option("--k", p.k_list, "Moment orders (momentk)")->delimiter(',');
  sw->add_option("--t", p.t)->capture_default_str();
  sw->add_option("--method", p.method);
  sw->add_option("--shape", p.shape)->capture_default_str();
  sw->add_flag("--no-timing", p.no_timing, "Write elapsed_ms as 0");

  auto* vf = app.add_subcommand("verify", "Identity and bound suite over built-in sweeps");
  vf->add_option("--max-q", p.max_q, "Largest modulus swept")->capture_default_str();

  for (auto* cmd : {kl, hk, m2, mk, mt, bb, cv, sw, vf}) add_common(cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  if (sw->parsed() && sw->count("--format") == 0) common.format = "csv";

  try {
    Context ctx;
    configure(ctx, common);
    bool failed = false;
    Table table;
    if (kl->parsed()) table = run_kloosterman(ctx, p);
    else if (hk->parsed()) table = run_hyperkloosterman(ctx, p);
    else if (m2->parsed()) table = run_moment2(ctx, p);
    else if (mk->parsed()) table = run_momentk(ctx, p);
    else if (mt->parsed()) table = run_momentt(ctx, p);
    else if (bb->parsed()) table = run_badboxes(ctx, p);
    else if (cv->parsed()) table = run_covering(ctx, p);
    else if (sw->parsed()) table = run_sweep(ctx, p);
    else table = run_verify(ctx, p, failed);
    emit(table, common);
    if (failed) {
      std::cerr << "error: verification found violations\n";
      return kExitFailure;
    }
    return kExitOk;
  } catch (const ApiError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.status);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

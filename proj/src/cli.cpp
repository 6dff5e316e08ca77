#include "feketelab/cli.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "feketelab/analytic.hpp"
#include "feketelab/arith.hpp"
#include "feketelab/character.hpp"
#include "feketelab/construct.hpp"
#include "feketelab/errors.hpp"
#include "feketelab/family.hpp"
#include "feketelab/fekete.hpp"
#include "feketelab/persist.hpp"
#include "feketelab/random_model.hpp"

namespace feketelab::cli {

using nlohmann::json;

namespace {

// Every default the paper leaves open lives here.
struct Defaults {
  static constexpr double alpha = 0.04;         // partial-sum and zero windows, 0 < alpha < 1/20
  static constexpr std::uint64_t grid_points = 96;
  static constexpr double h_min_factor = 0.125;
  static constexpr double log_l_y = 1000;
  static constexpr double quad_tol = 1e-10;
  static constexpr double poisson_precision = 1e-12;
  static constexpr double eps = 0.1;            // exponent slack in sqrt(e) - eps
  static constexpr double moment_eps = 0.05;
  static constexpr double A = 10;               // upper-regime certificate constant
  static constexpr double kappa = 4;            // Y_r threshold in units of sigma_r
  static constexpr double M = 3;
  static constexpr std::uint64_t R = 4;
};

struct Context {
  std::ostream& out;
  std::ostream& err;
  bool json_mode = false;
  std::string out_path;
  std::string subcommand;
  json config;
};

using Handler = std::function<void(Context&)>;

std::string scalar_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return persist::format_double(v.get<double>());
  return v.dump();
}

void emit(Context& ctx, json result) {
  result["subcommand"] = ctx.subcommand;
  result["config_hash"] = persist::config_hash(ctx.config);
  result["schema_version"] = persist::kSchemaVersion;
  if (ctx.json_mode) {
    ctx.out << result.dump() << '\n';
    return;
  }
  for (const auto& [k, v] : result.items()) {
    if (v.is_array() && !v.empty() && v.front().is_object()) {
      ctx.out << k << ":\n";
      for (const auto& row : v) {
        ctx.out << " ";
        for (const auto& [rk, rv] : row.items()) ctx.out << ' ' << rk << '=' << scalar_text(rv);
        ctx.out << '\n';
      }
    } else {
      ctx.out << k << ": " << scalar_text(v) << '\n';
    }
  }
}

// Writes a data file plus its manifest; rows excludes any header line.
void write_artifact(Context& ctx, const std::string& path, const std::string& body, std::uint64_t rows,
                    double seconds) {
  persist::Manifest m;
  m.path = path;
  m.format = persist::format_from_path(path);
  m.config = ctx.config;
  m.config_hash = persist::config_hash(ctx.config);
  m.code_version = persist::code_version();
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << body;
  f.close();
  if (!f) {
    m.error = "write failed";
    persist::write_manifest(m);
    throw IoError("write failed on '" + path + "'");
  }
  m.rows = rows;
  m.wall_seconds = seconds;
  m.complete = true;
  persist::write_manifest(m);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

arith::Sign parse_sign(const std::string& s) {
  if (s == "positive") return arith::Sign::positive;
  if (s == "negative") return arith::Sign::negative;
  return arith::Sign::both;
}

json sign_json(const character::SignChangeReport& r) {
  return {{"count", r.count}, {"variant", std::string(character::to_string(r.variant))}, {"degenerate", r.degenerate}};
}

json zero_json(const fekete::ZeroCountReport& r) {
  json brackets = json::array();
  for (const auto& b : r.brackets) brackets.push_back({{"lo", b.lo}, {"hi", b.hi}});
  json j = {{"a", r.a},
            {"b", r.b},
            {"method", std::string(fekete::to_string(r.method))},
            {"count", r.count},
            {"brackets", brackets}};
  if (r.grid_points) j["grid_points"] = r.grid_points;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

json identity_json(const analytic::IdentityResult& r) {
  json j = {{"D", r.D},
            {"s", r.s},
            {"lhs", r.lhs},
            {"rhs", r.rhs},
            {"residual", r.residual},
            {"quad_error", r.quad_error}};
  if (!std::isnan(r.rhs_as_written)) {
    j["rhs_full_log_weight"] = r.rhs_as_written;
    j["residual_full_log_weight"] = r.residual_as_written;
  }
  return j;
}

json certificate_json(const construct::NoZeroCertificate& c) {
  json j = {{"D", c.D},
            {"y", c.y},
            {"eps", c.eps},
            {"z_hi", c.z_hi},
            {"clipped", c.clipped},
            {"grid_count", c.grid.count},
            {"grid_points", c.grid.grid_points},
            {"lower_k", c.lower_k},
            {"lower_margin", c.lower_margin},
            {"lower_ok", c.lower_ok},
            {"upper_k", c.upper_k},
            {"upper_A", c.upper_A},
            {"min_ratio", c.min_ratio},
            {"upper_margin", c.upper_margin},
            {"upper_ok", c.upper_ok},
            {"upper_empty", c.upper_empty},
            {"certified", c.certified},
            {"kind", c.kind}};
  if (c.counterexample) j["counterexample"] = *c.counterexample;
  return j;
}

// The canonical configuration of a parsed subcommand: every option of the
// subcommand chain with its value or default, minus presentation flags.
json collect_config(const CLI::App* sub) {
  json cfg;
  std::string name;
  for (auto* app = sub; app && app->get_parent(); app = app->get_parent()) {
    name = name.empty() ? app->get_name() : app->get_name() + " " + name;
    for (const auto* opt : app->get_options()) {
      const auto key = opt->get_single_name();
      if (key.empty() || key == "help" || key == "out" || key == "json" || key == "threads") continue;
      if (opt->count() > 0) {
        const auto& res = opt->results();
        if (opt->get_type_size_max() == 0) {
          cfg[key] = true;
        } else if (res.size() == 1) {
          cfg[key] = res.front();
        } else {
          cfg[key] = res;
        }
      } else if (!opt->get_default_str().empty()) {
        cfg[key] = opt->get_default_str();
      } else if (opt->get_type_size_max() == 0) {
        cfg[key] = false;
      }
    }
  }
  cfg["subcommand"] = name;
  cfg["schema_version"] = persist::kSchemaVersion;
  return cfg;
}

void check_positive_d(std::int64_t D, const char* who) {
  if (D <= 1) throw DomainError(std::string(who) + " needs a positive fundamental discriminant");
}

void register_commands(CLI::App& app, std::map<const CLI::App*, Handler>& handlers) {
  // scan-family
  {
    auto* c = app.add_subcommand("scan-family", "zeros, sign changes and log L over the family |D| <= x");
    auto x = std::make_shared<std::uint64_t>(100000);
    auto sign = std::make_shared<std::string>("both");
    auto cfg = std::make_shared<family::ScanConfig>();
    c->add_option("--x", *x, "family bound")->capture_default_str();
    c->add_option("--sign", *sign, "positive, negative or both")
        ->check(CLI::IsMember({"positive", "negative", "both"}))
        ->capture_default_str();
    c->add_option("--grid-points", cfg->grid_points, "zero grid points per polynomial")->capture_default_str();
    c->add_option("--h-min-factor", cfg->h_min_factor, "grid stops at 1 - h/|D|")->capture_default_str();
    c->add_option("--alpha-zero", cfg->alpha_zero_window, "alpha of the localized zero window")
        ->capture_default_str();
    c->add_option("--window-points", cfg->window_points, "extra grid points in the zero window")
        ->capture_default_str();
    c->add_option("--alpha-sum", cfg->alpha_sum_window, "alpha of the partial-sum window")->capture_default_str();
    c->add_option("--log-l-y", cfg->log_l_y, "smoothing length of log L")->capture_default_str();
    c->add_option("--block", cfg->block, "discriminants per checkpoint")->capture_default_str();
    handlers[c] = [=](Context& ctx) {
      if (cfg->log_l_s != std::vector<double>{0.55, 0.75}) throw DomainError("log L abscissae are fixed");
      const auto t0 = std::chrono::steady_clock::now();
      std::vector<family::FamilyRecord> records;
      std::unique_ptr<persist::RecordWriter> writer;
      if (!ctx.out_path.empty()) {
        writer = std::make_unique<persist::RecordWriter>(ctx.out_path, persist::format_from_path(ctx.out_path),
                                                          ctx.config);
      }
      family::scan_family(
          *x, parse_sign(*sign), *cfg,
          [&](const family::FamilyRecord& r) {
            records.push_back(r);
            if (writer) writer->write(r);
          },
          [&](std::uint64_t done, std::uint64_t total) {
            if (writer) writer->checkpoint(seconds_since(t0));
            if (!ctx.json_mode) ctx.err << "scan-family: " << done << "/" << total << '\n';
          });
      if (writer) writer->finish(seconds_since(t0));
      const auto s = family::summarize(records, static_cast<double>(*x));
      emit(ctx, {{"x", *x},
                 {"family_size", s.count},
                 {"density", static_cast<double>(s.count) / static_cast<double>(*x)},
                 {"mean_zeros", s.mean_zeros},
                 {"mean_window_zeros", s.mean_window_zeros},
                 {"mean_sign_changes", s.mean_sign_changes},
                 {"mean_window_sign_changes", s.mean_window_sign_changes},
                 {"fraction_no_zeros", s.fraction_no_zeros},
                 {"fraction_all_nonneg", s.fraction_nonneg},
                 {"scale_log2_over_log4", s.scale_log4},
                 {"scale_log2_over_log3", s.scale_log3}});
    };
  }

  // sign-changes
  {
    auto* c = app.add_subcommand("sign-changes", "sign changes of the partial sums S(N) of chi_D");
    auto D = std::make_shared<std::int64_t>();
    auto alpha = std::make_shared<double>(Defaults::alpha);
    c->add_option("--d", *D, "fundamental discriminant")->required();
    c->add_option("--alpha", *alpha, "window exponent")->capture_default_str();
    handlers[c] = [=](Context& ctx) {
      const character::QuadraticCharacter chr(*D);
      const auto sums = character::partial_sums(chr, chr.modulus() - 1);
      const auto minus = character::sign_changes(sums, character::SignVariant::deleted_zeros);
      const auto plus = character::sign_changes(sums, character::SignVariant::max_over_zeros);
      const auto win = character::partial_sum_window(chr.modulus(), *alpha);
      const auto in_win = character::sign_changes_in_window(chr.modulus(), sums, *alpha);
      emit(ctx, {{"D", *D},
                 {"s_minus", minus.count},
                 {"s_plus", plus.count},
                 {"min_sum", *std::min_element(sums.begin(), sums.end())},
                 {"window_lo", win.lo},
                 {"window_hi", win.hi},
                 {"window", sign_json(in_win)}});
    };
  }

  // legendre-trace
  {
    auto* c = app.add_subcommand("legendre-trace", "partial sums of the Legendre symbol mod p");
    auto p = std::make_shared<std::uint64_t>();
    auto emit_kind = std::make_shared<std::string>("summary");
    c->add_option("--p", *p, "odd prime")->required();
    c->add_option("--emit", *emit_kind, "summary, csv or json")
        ->check(CLI::IsMember({"summary", "csv", "json"}))
        ->capture_default_str();
    handlers[c] = [=](Context& ctx) {
      const auto t0 = std::chrono::steady_clock::now();
      const auto trace = character::legendre_trace(*p);
      const auto minus = character::sign_changes(trace, character::SignVariant::deleted_zeros);
      const json summary = {{"p", *p},
                            {"rows", trace.size()},
                            {"min", *std::min_element(trace.begin(), trace.end())},
                            {"max", *std::max_element(trace.begin(), trace.end())},
                            {"s_minus", minus.count}};
      std::string body;
      if (*emit_kind == "csv") {
        body = "N,S\n";
        for (std::size_t i = 0; i < trace.size(); ++i) body += std::to_string(i + 1) + ',' + std::to_string(trace[i]) + '\n';
      } else if (*emit_kind == "json") {
        for (std::size_t i = 0; i < trace.size(); ++i) {
          body += json{{"schema_version", persist::kSchemaVersion}, {"N", i + 1}, {"S", trace[i]}}.dump() + '\n';
        }
      }
      if (body.empty()) {
        emit(ctx, summary);
      } else if (ctx.out_path.empty()) {
        ctx.out << body;
        if (!ctx.json_mode) ctx.err << "min " << summary["min"] << " s_minus " << summary["s_minus"] << '\n';
      } else {
        write_artifact(ctx, ctx.out_path, body, trace.size(), seconds_since(t0));
        emit(ctx, summary);
      }
    };
  }

  // fekete-zeros
  {
    auto* c = app.add_subcommand("fekete-zeros", "count real zeros of F_D on an interval");
    auto D = std::make_shared<std::int64_t>();
    auto interval = std::make_shared<std::vector<double>>(std::vector<double>{0.0, 0.999});
    auto method = std::make_shared<std::string>("grid");
    auto points = std::make_shared<std::uint64_t>(4096);
    c->add_option("--d", *D, "fundamental discriminant")->required();
    c->add_option("--interval", *interval, "a,b inside [0, 1)")->delimiter(',')->expected(2)->capture_default_str();
    c->add_option("--method", *method, "grid, sturm, descartes or jensen")
        ->check(CLI::IsMember({"grid", "sturm", "descartes", "jensen"}))
        ->capture_default_str();
    c->add_option("--points", *points, "grid points")->capture_default_str();
    handlers[c] = [=](Context& ctx) {
      const character::QuadraticCharacter chr(*D);
      const double a = (*interval)[0], b = (*interval)[1];
      if (*method == "grid") {
        emit(ctx, zero_json(fekete::count_zeros_grid(chr, a, b, *points)));
      } else if (*method == "sturm") {
        emit(ctx, zero_json(fekete::count_zeros_sturm(chr, a, b)));
      } else if (*method == "descartes") {
        emit(ctx, {{"D", *D}, {"method", "descartes"}, {"interval", "(0,1)"},
                   {"upper_bound", fekete::descartes_upper_bound(chr)}});
      } else {
        if (!(a >= 0 && a < b && b < 1)) throw DomainError("jensen needs 0 <= a < b < 1");
        std::vector<double> centers;
        for (double z = a; z < b;) {
          centers.push_back(z);
          z += 0.5 * (1 - z);  // discs of radius (1 - z)/4 around each center overlap
        }
        const auto cover = fekete::jensen_cover(chr, centers);
        json discs = json::array();
        for (const auto& d : cover.discs) discs.push_back({{"z0", d.z0}, {"r", d.r}, {"R", d.R}, {"bound", d.bound}});
        emit(ctx, {{"D", *D}, {"method", "jensen"}, {"a", a}, {"b", b}, {"upper_bound", cover.total_bound},
                   {"discs", discs}});
      }
    };
  }

  // fekete-eval
  {
    auto* c = app.add_subcommand("fekete-eval", "evaluate F_D at z, or at exp(-T/D) through the dual sum");
    auto D = std::make_shared<std::int64_t>();
    auto z = std::make_shared<double>(0.5);
    auto T = std::make_shared<double>(0.0);
    auto method = std::make_shared<std::string>("direct");
    auto tail = std::make_shared<double>(1e-16);
    auto precision = std::make_shared<double>(Defaults::poisson_precision);
    c->add_option("--d", *D, "fundamental discriminant")->required();
    c->add_option("--z", *z, "point in [0, 1)")->capture_default_str();
    c->add_option("--T", *T, "dual parameter, z = exp(-T/D)")->capture_default_str();
    c->add_option("--method", *method, "direct, truncated or poisson-dual")
        ->check(CLI::IsMember({"direct", "truncated", "poisson-dual"}))
        ->capture_default_str();
    c->add_option("--tail", *tail, "tail tolerance for truncated")->capture_default_str();
    c->add_option("--precision", *precision, "dual tail tolerance")->capture_default_str();
    handlers[c] = [=](Context& ctx) {
      const character::QuadraticCharacter chr(*D);
      fekete::FeketeEval e;
      if (*method == "poisson-dual") {
        e = fekete::eval_poisson_dual(chr, *T, *precision);
      } else {
        double zz = *z;
        if (*T > 0) zz = std::exp(-*T / static_cast<double>(chr.modulus()));
        e = *method == "direct" ? fekete::eval_direct(chr, zz) : fekete::eval_truncated(chr, zz, *tail);
      }
      emit(ctx, {{"D", e.D}, {"z", e.z}, {"value", e.value}, {"method", std::string(fekete::to_string(e.method))},
                 {"error_bound", e.error_bound}, {"terms", e.n_terms}});
    };
  }

  // theta-scan
  {
    auto* c = app.add_subcommand("theta-scan", "sign changes of theta(t, chi_D) on [t_lo, t_hi]");
    auto D = std::make_shared<std::int64_t>();
    auto t_lo = std::make_shared<double>(0.01);
    auto t_hi = std::make_shared<double>(100.0);
    auto points = std::make_shared<std::uint64_t>(2000);
    c->add_option("--d", *D, "positive fundamental discriminant")->required();
    c->add_option("--t-lo", *t_lo)->capture_default_str();
    c->add_option("--t-hi", *t_hi)->capture_default_str();
    c->add_option("--points", *points)->capture_default_str();
    handlers[c] = [=](Context& ctx) {
      check_positive_d(*D, "theta-scan");
      const character::QuadraticCharacter chr(*D);
      const auto r = analytic::theta_zero_scan(chr, *t_lo, *t_hi, *points);
      emit(ctx, {{"D", *D}, {"t_lo", *t_lo}, {"t_hi", *t_hi}, {"sign_changes", r.count}, {"zeros", r.positions}});
    };
  }

  // identity-check
  {
    auto* c = app.add_subcommand("identity-check", "numerical check of an integral identity for L(s, chi_D)");
    c->require_subcommand(1);
    for (const std::string kind : {"dirichlet", "laplace", "fekete-laplace", "mellin"}) {
      auto* k = c->add_subcommand(kind);
      auto D = std::make_shared<std::int64_t>();
      auto s = std::make_shared<double>(1.0);
      auto tol = std::make_shared<double>(Defaults::quad_tol);
      k->add_option("--d", *D, "fundamental discriminant")->required();
      k->add_option("--s", *s, "real abscissa")->capture_default_str();
      k->add_option("--tol", *tol, "quadrature tolerance")->capture_default_str();
      handlers[k] = [=](Context& ctx) {
        const character::QuadraticCharacter chr(*D);
        analytic::IdentityResult r;
        if (kind == "dirichlet") r = analytic::verify_dirichlet_identity(chr, *s, *tol);
        if (kind == "laplace") r = analytic::laplace_identity_check(chr, *s, *tol);
        if (kind == "fekete-laplace") r = analytic::fekete_laplace_check(chr, *s, *tol);
        if (kind == "mellin") r = analytic::mellin_theta_check(chr, *s, *tol);
        emit(ctx, identity_json(r));
      };
    }
  }

  // random-model
  {
    auto* c = app.add_subcommand("random-model", "simulations of the random model X(p)");
    c->require_subcommand(1);
    {
      auto* k = c->add_subcommand("marginals", "empirical P(X(p) = -1, 0, 1)");
      auto seed = std::make_shared<std::uint64_t>();
      auto primes = std::make_shared<std::vector<std::uint64_t>>(std::vector<std::uint64_t>{2, 3, 5, 7, 101});
      auto samples = std::make_shared<std::uint64_t>(100000);
      k->add_option("--seed", *seed)->required();
      k->add_option("--p", *primes, "primes")->delimiter(',')->capture_default_str();
      k->add_option("--samples", *samples)->capture_default_str();
      handlers[k] = [=](Context& ctx) {
        json rows = json::array();
        for (auto p : *primes) {
          if (!arith::is_prime(p)) throw DomainError(std::to_string(p) + " is not prime");
          std::uint64_t cnt[3] = {0, 0, 0};
          for (std::uint64_t i = 0; i < *samples; ++i) ++cnt[random_model::model_value(random_model::trial_seed(*seed, i), p) + 1];
          const double n = static_cast<double>(*samples);
          const double pd = static_cast<double>(p);
          rows.push_back({{"p", p},
                          {"minus", cnt[0] / n},
                          {"zero", cnt[1] / n},
                          {"plus", cnt[2] / n},
                          {"expected_zero", 1 / (pd + 1)},
                          {"expected_pm", pd / (2 * (pd + 1))}});
        }
        emit(ctx, {{"samples", *samples}, {"seed", *seed}, {"marginals", rows}});
      };
    }
    {
      auto* k = c->add_subcommand("variance", "windowed variance against the variance formula");
      auto seed = std::make_shared<std::uint64_t>();
      auto s = std::make_shared<double>(0.75);
      auto u = std::make_shared<double>(10.0);
      auto v = std::make_shared<double>(1000.0);
      auto samples = std::make_shared<std::uint64_t>(100000);
      k->add_option("--seed", *seed)->required();
      k->add_option("--s", *s)->capture_default_str();
      k->add_option("--u", *u)->capture_default_str();
      k->add_option("--v", *v)->capture_default_str();
      k->add_option("--samples", *samples)->capture_default_str();
      handlers[k] = [=](Context& ctx) {
        if (!(*u >= 1 && *u < *v)) throw DomainError("variance needs 1 <= u < v");
        const arith::PrimeTable primes(static_cast<std::uint64_t>(std::ceil(*v)));
        const double expected = random_model::window_variance(primes, *s, *u, *v);
        double sum = 0, sum2 = 0, sum4 = 0;
        const auto n = static_cast<std::int64_t>(*samples);
#pragma omp parallel for reduction(+ : sum, sum2, sum4) schedule(static)
        for (std::int64_t i = 0; i < n; ++i) {
          const double w = random_model::window_value(random_model::trial_seed(*seed, static_cast<std::uint64_t>(i)),
                                                      primes, *s, *u, *v);
          sum += w;
          sum2 += w * w;
          sum4 += w * w * w * w;
        }
        const double nd = static_cast<double>(n);
        const double mean = sum / nd;
        const double second = sum2 / nd;
        const double se = std::sqrt(std::max(0.0, sum4 / nd - second * second) / nd);
        emit(ctx, {{"s", *s}, {"u", *u}, {"v", *v}, {"samples", *samples}, {"seed", *seed}, {"mean", mean},
                   {"second_moment", second}, {"expected_variance", expected}, {"std_error", se},
                   {"z_score", se > 0 ? (second - expected) / se : 0.0}});
      };
    }
    {
      auto* k = c->add_subcommand("bamo", "P(S^- <= delta R / 5) for independent symmetric signs");
      auto seed = std::make_shared<std::uint64_t>();
      auto delta = std::make_shared<double>(0.5);
      auto R = std::make_shared<std::uint64_t>(10);
      auto trials = std::make_shared<std::uint64_t>(100000);
      k->add_option("--seed", *seed)->required();
      k->add_option("--delta", *delta)->capture_default_str();
      k->add_option("--R", *R)->capture_default_str();
      k->add_option("--trials", *trials)->capture_default_str();
      handlers[k] = [=](Context& ctx) {
        const auto r = random_model::bamo_check(*delta, *R, *trials, *seed);
        json j = {{"delta", r.delta}, {"R", r.R},           {"trials", r.trials}, {"threshold", r.threshold},
                  {"hits", r.hits},   {"probability", r.probability}, {"std_error", r.std_error}};
        if (*R <= 12) j["exact"] = random_model::bamo_exact(*delta, *R);
        emit(ctx, j);
      };
    }
    {
      auto* k = c->add_subcommand("rmf-signs", "sign changes of Rademacher multiplicative partial sums");
      auto seed = std::make_shared<std::uint64_t>();
      auto x = std::make_shared<std::uint64_t>(1000000);
      auto trials = std::make_shared<std::uint64_t>(100);
      k->add_option("--seed", *seed)->required();
      k->add_option("--x", *x)->capture_default_str();
      k->add_option("--trials", *trials)->capture_default_str();
      handlers[k] = [=](Context& ctx) {
        if (*x < 16) throw DomainError("rmf-signs needs x >= 16");
        auto primes = std::make_shared<const arith::PrimeTable>(*x);
        std::vector<std::uint64_t> counts(*trials);
        for (std::uint64_t t = 0; t < *trials; ++t) {
          const auto sample = random_model::sample_rademacher(random_model::trial_seed(*seed, t), primes);
          counts[t] = random_model::rademacher_partial_sums(sample, *x).count;
        }
        auto sorted = counts;
        std::sort(sorted.begin(), sorted.end());
        const double l2 = std::log(std::log(static_cast<double>(*x)));
        const double l4 = std::log(std::log(l2));
        double mean = 0;
        for (auto v : counts) mean += static_cast<double>(v);
        mean /= static_cast<double>(counts.size());
        emit(ctx, {{"x", *x}, {"trials", *trials}, {"seed", *seed}, {"median", sorted[sorted.size() / 2]},
                   {"mean", mean}, {"min", sorted.front()}, {"max", sorted.back()},
                   {"scale_log2_over_log4", l2 / l4}, {"counts", counts}});
      };
    }
    {
      auto* k = c->add_subcommand("points-sim", "sign pattern of windowed sums over the paper's windows");
      auto seed = std::make_shared<std::uint64_t>();
      auto M = std::make_shared<double>(Defaults::M);
      auto R = std::make_shared<std::uint64_t>(Defaults::R);
      auto limit = std::make_shared<std::uint64_t>(10000000);
      auto trials = std::make_shared<std::uint64_t>(1000);
      auto kappa = std::make_shared<double>(Defaults::kappa);
      k->add_option("--seed", *seed)->required();
      k->add_option("--M", *M)->capture_default_str();
      k->add_option("--R", *R)->capture_default_str();
      k->add_option("--limit", *limit, "largest prime used")->capture_default_str();
      k->add_option("--trials", *trials)->capture_default_str();
      k->add_option("--kappa", *kappa)->capture_default_str();
      handlers[k] = [=](Context& ctx) {
        const auto windows = random_model::paper_windows(*M, *R, *limit);
        const auto r = random_model::sign_change_points_simulation(windows, *trials, *seed, *kappa);
        json rows = json::array();
        for (const auto& w : r.windows) {
          rows.push_back({{"s", w.window.s},
                          {"u", w.window.u},
                          {"v", w.window.v},
                          {"clipped", w.window.clipped},
                          {"degenerate", w.window.degenerate},
                          {"sigma", w.sigma},
                          {"empirical_sd", w.empirical_sd},
                          {"p_plus", w.p_plus},
                          {"p_minus", w.p_minus},
                          {"p_abs_above_kappa", w.p_abs_above4}});
        }
        emit(ctx, {{"trials", r.trials}, {"seed", *seed}, {"kappa", r.kappa}, {"windows", rows},
                   {"sminus_histogram", r.sminus_histogram}, {"lag1_correlation", r.lag1_correlation},
                   {"lag1_correlation_se", r.lag1_correlation_se}});
      };
    }
  }

  // discrepancy
  {
    auto* c = app.add_subcommand("discrepancy", "box discrepancy between family and model window vectors");
    auto seed = std::make_shared<std::uint64_t>();
    auto x = std::make_shared<std::uint64_t>(20000);
    auto specs = std::make_shared<std::vector<std::string>>(std::vector<std::string>{"0.75:10:100"});
    auto trials = std::make_shared<std::uint64_t>(20000);
    auto boxes = std::make_shared<std::uint64_t>(2000);
    c->add_option("--seed", *seed)->required();
    c->add_option("--x", *x)->capture_default_str();
    c->add_option("--window", *specs, "s:u:v, repeatable")->capture_default_str();
    c->add_option("--trials", *trials, "model samples")->capture_default_str();
    c->add_option("--boxes", *boxes)->capture_default_str();
    handlers[c] = [=](Context& ctx) {
      std::vector<family::Window> windows;
      for (const auto& sp : *specs) {
        family::Window w;
        char c1 = 0, c2 = 0;
        std::istringstream in(sp);
        if (!(in >> w.s >> c1 >> w.u >> c2 >> w.v) || c1 != ':' || c2 != ':') {
          throw DomainError("window '" + sp + "' is not s:u:v");
        }
        windows.push_back(w);
      }
      const auto r = family::empirical_discrepancy(*x, windows, *trials, *boxes, *seed);
      emit(ctx, {{"x", *x}, {"J", windows.size()}, {"family_size", r.family_size}, {"model_trials", r.model_trials},
                 {"boxes_tested", r.boxes_tested}, {"sup_abs_difference", r.sup_abs_difference},
                 {"paper_scale", r.paper_scale}, {"full_box_difference", r.full_box_difference},
                 {"family_correlation", r.family_correlation}});
    };
  }

  // moments
  {
    auto* c = app.add_subcommand("moments", "mixed moments of F_D at three points over F+(x)");
    auto ladder = std::make_shared<std::vector<std::uint64_t>>(std::vector<std::uint64_t>{1000, 2000, 4000, 8000});
    auto eps = std::make_shared<double>(Defaults::moment_eps);
    c->add_option("--ladder", *ladder, "x values")->delimiter(',')->capture_default_str();
    c->add_option("--eps", *eps)->capture_default_str();
    handlers[c] = [=](Context& ctx) {
      const auto m = family::mixed_moments(*ladder, *eps);
      json rows = json::array();
      for (const auto& r : m.rows) {
        rows.push_back({{"x", r.x}, {"family_size", r.family_size}, {"S1", r.S1}, {"S2", r.S2},
                        {"cauchy_schwarz", r.cauchy_schwarz}});
      }
      emit(ctx, {{"eps", m.eps}, {"rows", rows}, {"slope_S1", m.slope_S1}, {"slope_S2", m.slope_S2},
                 {"target_S1", m.target_S1}, {"target_S2", m.target_S2}});
    };
  }

  // orthogonality
  {
    auto* c = app.add_subcommand("orthogonality", "sums of chi_D(n) over the family");
    auto x = std::make_shared<std::uint64_t>(100000);
    auto ns = std::make_shared<std::vector<std::uint64_t>>(std::vector<std::uint64_t>{1, 2, 3, 4, 6, 9, 10, 25});
    c->add_option("--x", *x)->capture_default_str();
    c->add_option("--n", *ns)->delimiter(',')->capture_default_str();
    handlers[c] = [=](Context& ctx) {
      json rows = json::array();
      for (const auto& r : family::orthogonality_check(*x, *ns)) {
        rows.push_back({{"n", r.n}, {"square", r.square}, {"sum", r.sum}, {"main_term", r.main_term},
                        {"deviation", r.deviation}, {"bound_ratio", r.bound_ratio}});
      }
      emit(ctx, {{"x", *x}, {"rows", rows}});
    };
  }

  // jutila
  {
    auto* c = app.add_subcommand("jutila", "second moment of partial sums over the family");
    auto x = std::make_shared<std::uint64_t>(100000);
    auto Ns = std::make_shared<std::vector<std::uint64_t>>(std::vector<std::uint64_t>{10, 100, 1000});
    c->add_option("--x", *x)->capture_default_str();
    c->add_option("--N", *Ns)->delimiter(',')->capture_default_str();
    handlers[c] = [=](Context& ctx) {
      const auto r = family::jutila_check(*x, *Ns);
      json rows = json::array();
      for (const auto& row : r.rows) rows.push_back({{"N", row.N}, {"moment", row.moment}, {"ratio", row.ratio}});
      emit(ctx, {{"x", r.x}, {"family_size", r.family_size}, {"rows", rows}});
    };
  }

  // construct-positive
  {
    auto* c = app.add_subcommand("construct-positive", "discriminants with chi_D(n) = 1 for n <= y");
    auto x = std::make_shared<double>(1e6);
    auto y = std::make_shared<double>(3.0);
    auto limit = std::make_shared<std::uint64_t>(0);
    auto wide = std::make_shared<bool>(false);
    auto certify = std::make_shared<bool>(false);
    auto eps = std::make_shared<double>(Defaults::eps);
    auto A = std::make_shared<double>(Defaults::A);
    c->add_option("--x", *x)->capture_default_str();
    c->add_option("--y", *y)->capture_default_str();
    c->add_option("--limit", *limit, "maximum pairs listed (0 = all)")->capture_default_str();
    c->add_flag("--wide", *wide, "search all q <= sqrt(x)");
    c->add_flag("--certify", *certify, "certify the zero-free interval for every pair");
    c->add_option("--eps", *eps)->capture_default_str();
    c->add_option("--A", *A)->capture_default_str();
    handlers[c] = [=](Context& ctx) {
      const auto t0 = std::chrono::steady_clock::now();
      const auto search = construct::find_positive_pairs(*x, *y, *limit, *wide);
      const double bound = construct::pair_lower_bound(*x, *y);
      std::string body;
      std::uint64_t certified = 0;
      const double t_max = std::floor(std::pow(*y, construct::kSqrtE - *eps / 2));
      for (const auto& p : search.pairs) {
        json j = {{"schema_version", persist::kSchemaVersion}, {"D", p.D}, {"q1", p.q1}, {"q2", p.q2},
                  {"y", p.y}, {"residue_vector", p.residue_vector}};
        if (*certify) {
          construct::NoZeroConfig cfg;
          cfg.A = *A;
          const auto cert = construct::certify_no_zeros(p.D, *y, *eps, cfg);
          certified += cert.certified && cert.grid.count == 0;
          j["certificate"] = certificate_json(cert);
          if (t_max >= 1) {
            j["vinogradov_min_ratio"] =
                construct::vinogradov_check(p.D, *y, static_cast<std::uint64_t>(t_max), *eps);
          }
        }
        body += j.dump() + '\n';
      }
      if (!ctx.out_path.empty()) write_artifact(ctx, ctx.out_path, body, search.pairs.size(), seconds_since(t0));
      json summary = {{"x", *x},
                      {"y", *y},
                      {"wide", *wide},
                      {"q_lo", search.q_lo},
                      {"q_hi", search.q_hi},
                      {"primes_in_window", search.primes_in_window},
                      {"buckets", search.buckets},
                      {"pairs", search.total_pairs},
                      {"lower_bound", bound},
                      {"ratio", static_cast<double>(search.total_pairs) / bound},
                      {"listed", search.pairs.size()}};
      if (*certify) summary["certified"] = certified;
      json first = json::array();
      for (std::size_t i = 0; i < std::min<std::size_t>(10, search.pairs.size()); ++i) first.push_back(search.pairs[i].D);
      summary["first_D"] = first;
      emit(ctx, summary);
    };
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fekete polynomials, quadratic characters and their sign changes", "feketelab"};
  app.set_version_flag("--version", persist::code_version());
  app.require_subcommand(1);
  bool json_mode = false;
  int threads = 0;
  std::string out_path;
  app.add_flag("--json", json_mode, "machine-readable output");
  app.add_option("--threads", threads, "thread cap (default: FEKETELAB_THREADS or all cores)");
  app.add_option("--out", out_path, "output file (.csv or .jsonl)");
  std::map<const CLI::App*, Handler> handlers;
  register_commands(app, handlers);
  // Global flags are accepted after the subcommand too.
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();
  for (auto* sub : app.get_subcommands({})) {
    for (auto* leaf : sub->get_subcommands({})) leaf->fallthrough();
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion& e) {
    out << persist::code_version() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const CLI::App* failing = &app;
    for (auto* sub : app.get_subcommands()) {
      failing = sub;
      for (auto* leaf : sub->get_subcommands()) failing = leaf;
    }
    err << failing->help();
    return kExitUsage;
  }

  const CLI::App* leaf = nullptr;
  for (auto* sub : app.get_subcommands()) {
    leaf = sub;
    for (auto* l : sub->get_subcommands()) leaf = l;
  }
  const auto it = handlers.find(leaf);
  if (it == handlers.end()) {
    err << app.help();
    return kExitUsage;
  }

  if (threads <= 0) {
    if (const char* env = std::getenv("FEKETELAB_THREADS")) threads = std::atoi(env);
  }
  if (threads > 0) omp_set_num_threads(threads);

  Context ctx{out, err, json_mode, out_path, {}, {}};
  ctx.config = collect_config(leaf);
  ctx.subcommand = ctx.config["subcommand"].get<std::string>();
  try {
    it->second(ctx);
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const CapabilityError& e) {
    err << "unsupported: " << e.what() << '\n';
    return kExitDomain;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace feketelab::cli

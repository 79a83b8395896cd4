#pragma once
// Experiment orchestration: configuration parsing and validation, the seven
// experiments, and report / CSV emission.

#include <Eigen/Core>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/polygamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "loggamma/errors.hpp"
#include "loggamma/fredholm.hpp"
#include "loggamma/kernels.hpp"
#include "loggamma/oracle/airy_determinant.hpp"
#include "loggamma/parallel.hpp"
#include "loggamma/polymer.hpp"
#include "loggamma/rng.hpp"
#include "loggamma/scaling.hpp"
#include "loggamma/specfun.hpp"
#include "loggamma/stats.hpp"

namespace loggamma {

inline constexpr const char* kVersion = "1.0.0";

using json = nlohmann::json;

enum class Experiment { VerifyLaplace, TwConvergence, Tails, Bbp, LlnPhase, Invariants, Tables };

inline const std::map<std::string, Experiment>& experiment_names() {
  static const std::map<std::string, Experiment> m = {
      {"verify_laplace", Experiment::VerifyLaplace}, {"tw_convergence", Experiment::TwConvergence},
      {"tails", Experiment::Tails},                  {"bbp", Experiment::Bbp},
      {"lln_phase", Experiment::LlnPhase},           {"invariants", Experiment::Invariants},
      {"tables", Experiment::Tables}};
  return m;
}

inline std::string experiment_name(Experiment e) {
  for (const auto& [k, v] : experiment_names()) {
    if (v == e) return k;
  }
  return "unknown";
}

struct ExperimentConfig {
  Experiment experiment = Experiment::Invariants;
  std::uint64_t seed = 1;
  long samples = 0;
  int threads = 0;  // 0: LOGGAMMA_THREADS or hardware concurrency
  std::string output_path = "out";
  json model = json::object();
  json params = json::object();
  json thresholds = json::object();
  fredholm::QuadSettings quad;
  json raw;  // validated input, echoed in the report
};

struct Metric {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  std::string comparison;  // "<=", "<", ">=", ">"
  bool pass = false;
  int criterion = 0;  // acceptance criterion this metric feeds, 0 for none
  std::string note;
};

struct ExperimentReport {
  std::string experiment;
  json config;
  std::vector<Metric> metrics;
  double wall_seconds = 0.0;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> data_header;
  std::vector<std::vector<std::string>> data_rows;
  json extra = json::object();

  bool all_pass() const {
    return std::all_of(metrics.begin(), metrics.end(), [](const Metric& m) { return m.pass; });
  }
};

namespace harness {

// ---------------------------------------------------------------------------
// Configuration

namespace detail {

enum class Kind { Number, Integer, Bool, String, Array, Object };

struct Field {
  const char* name;
  Kind kind;
  bool required;
};

inline bool kind_ok(const json& v, Kind k) {
  switch (k) {
    case Kind::Number: return v.is_number();
    case Kind::Integer: return v.is_number_integer() || (v.is_number_float() && std::floor(v.get<double>()) == v.get<double>());
    case Kind::Bool: return v.is_boolean();
    case Kind::String: return v.is_string();
    case Kind::Array: return v.is_array();
    case Kind::Object: return v.is_object();
  }
  return false;
}

inline void check_object(const json& obj, const std::string& where, const std::vector<Field>& fields) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  std::set<std::string> known;
  for (const auto& f : fields) {
    known.insert(f.name);
    if (!obj.contains(f.name)) {
      if (f.required) throw ConfigError(where + ": missing required key '" + f.name + "'");
      continue;
    }
    if (!kind_ok(obj.at(f.name), f.kind)) throw ConfigError(where + ": key '" + f.name + "' has the wrong type");
  }
  for (const auto& [k, v] : obj.items()) {
    if (!known.count(k)) throw ConfigError(where + ": unknown key '" + k + "'");
  }
}

struct Schema {
  std::vector<Field> model, params, thresholds;
};

inline const Schema& schema_for(Experiment e) {
  using K = Kind;
  static const std::map<Experiment, Schema> s = {
      {Experiment::VerifyLaplace,
       {{{"cases", K::Array, true}},
        {{"y_values", K::Array, true}, {"legacy", K::Object, true}},
        {{"stderr_multiple", K::Number, true}, {"abs_floor", K::Number, true}, {"legacy_tol", K::Number, true}}}},
      {Experiment::Tables,
       {{{"layouts", K::Array, true}},
        {{"gue_grid", K::Object, true},
         {"oracle_points", K::Array, true},
         {"bbp_grid", K::Object, true},
         {"reduction_points", K::Array, true},
         {"symmetry_points", K::Array, true},
         {"anchor_fractions", K::Array, true}},
        {{"oracle_tol", K::Number, true},
         {"mean_tol", K::Number, true},
         {"reduction_tol", K::Number, true},
         {"anchor_tol", K::Number, true},
         {"exchange_tol", K::Number, true},
         {"monotone_slack", K::Number, true},
         {"lower_end_max", K::Number, true},
         {"upper_end_min", K::Number, true}}}},
      {Experiment::TwConvergence,
       {{{"theta", K::Number, true}, {"shapes", K::Array, true}, {"off_diagonal", K::Array, true}},
        {{"cdf_grid", K::Object, true}},
        {{"ks_max", K::Number, true}}}},
      {Experiment::Tails,
       {{{"M", K::Integer, true}, {"N", K::Integer, true}, {"theta", K::Number, true}},
        {{"x_grid", K::Object, true}, {"level", K::Number, true}},
        {{"r2_min", K::Number, true}, {"c2_min", K::Number, true}}}},
      {Experiment::LlnPhase,
       {{{"theta", K::Number, true}, {"p", K::Number, true}, {"M", K::Integer, true}},
        {{"alpha_offsets", K::Array, true}},
        {{"tol", K::Number, true}}}},
      {Experiment::Bbp,
       {{{"theta", K::Number, true}, {"x", K::Array, true}, {"y_values", K::Array, true}, {"sizes", K::Array, true}},
        {{"cdf_grid", K::Object, true}},
        {{"ks_max", K::Number, true}}}},
      {Experiment::Invariants,
       {{},
        {{"descent", K::Object, true},
         {"cubic", K::Object, true},
         {"deformation", K::Object, true},
         {"tau", K::Object, true}},
        {{"descent_violations", K::Integer, true},
         {"cubic_exponent", K::Number, true},
         {"cubic_tol", K::Number, true},
         {"deformation_tol", K::Number, true},
         {"exchange_tol", K::Number, true},
         {"specfun_tol", K::Number, true},
         {"tau_tol", K::Number, true}}}},
  };
  return s.at(e);
}

template <class T>
T get_as(const json& j, const std::string& where) {
  try {
    return j.get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

inline const json& at(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError(where + ": missing key '" + key + "'");
  return j.at(key);
}

template <class T>
T get(const json& j, const std::string& key, const std::string& where) {
  return get_as<T>(at(j, key, where), where + "." + key);
}

inline std::vector<double> grid_from(const json& g, const std::string& where) {
  check_object(g, where, {{"lo", Kind::Number, true}, {"hi", Kind::Number, true}, {"step", Kind::Number, false},
                          {"points", Kind::Integer, false}});
  const double lo = g.at("lo").get<double>(), hi = g.at("hi").get<double>();
  if (!(hi > lo)) throw ConfigError(where + ": requires hi > lo");
  std::vector<double> x;
  if (g.contains("points")) {
    const long n = g.at("points").get<long>();
    if (n < 2) throw ConfigError(where + ": points must be at least 2");
    for (long k = 0; k < n; ++k) x.push_back(lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1));
  } else if (g.contains("step")) {
    const double h = g.at("step").get<double>();
    if (!(h > 0.0)) throw ConfigError(where + ": step must be positive");
    const long n = std::lround((hi - lo) / h);
    for (long k = 0; k <= n; ++k) x.push_back(lo + h * static_cast<double>(k));
  } else {
    throw ConfigError(where + ": needs step or points");
  }
  return x;
}

}  // namespace detail

/// Applies "a.b.c=value"; the value is parsed as JSON when possible and kept
/// as a string otherwise.
inline void apply_override(json& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + assignment + "' is not key=value");
  const std::string path = assignment.substr(0, eq), text = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::exception&) {
    value = text;
  }
  json* node = &cfg;
  std::size_t start = 0;
  for (;;) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (key.empty()) throw ConfigError("override '" + assignment + "' has an empty key segment");
    if (!node->is_object()) throw ConfigError("override '" + assignment + "' descends into a non-object");
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    node = &(*node)[key];
    start = dot + 1;
  }
}

/// Validates the whole document and builds the typed configuration.
inline ExperimentConfig parse_config(const json& doc) {
  using detail::Field;
  using detail::Kind;
  detail::check_object(doc, "config",
                       {{"experiment", Kind::String, true},
                        {"seed", Kind::Integer, true},
                        {"samples", Kind::Integer, true},
                        {"threads", Kind::Integer, false},
                        {"output_path", Kind::String, true},
                        {"model", Kind::Object, true},
                        {"params", Kind::Object, true},
                        {"thresholds", Kind::Object, true},
                        {"quad", Kind::Object, false}});
  ExperimentConfig c;
  const std::string name = doc.at("experiment").get<std::string>();
  const auto it = experiment_names().find(name);
  if (it == experiment_names().end()) throw ConfigError("config: unknown experiment '" + name + "'");
  c.experiment = it->second;
  const auto seed = doc.at("seed").get<long long>();
  if (seed < 0) throw ConfigError("config: seed must be nonnegative");
  c.seed = static_cast<std::uint64_t>(seed);
  c.samples = doc.at("samples").get<long>();
  if (c.samples < 0) throw ConfigError("config: samples must be nonnegative");
  c.threads = doc.value("threads", 0);
  if (c.threads < 0) throw ConfigError("config: threads must be nonnegative");
  c.output_path = doc.at("output_path").get<std::string>();
  const auto& sch = detail::schema_for(c.experiment);
  detail::check_object(doc.at("model"), "model", sch.model);
  detail::check_object(doc.at("params"), "params", sch.params);
  detail::check_object(doc.at("thresholds"), "thresholds", sch.thresholds);
  c.model = doc.at("model");
  c.params = doc.at("params");
  c.thresholds = doc.at("thresholds");
  if (doc.contains("quad")) {
    const json& q = doc.at("quad");
    detail::check_object(q, "quad",
                         {{"panel_order", Kind::Integer, false},
                          {"target_error", Kind::Number, false},
                          {"max_order", Kind::Integer, false},
                          {"finite_tail_tolerance", Kind::Number, false},
                          {"limit_tail_tolerance", Kind::Number, false}});
    c.quad.panel_order = q.value("panel_order", c.quad.panel_order);
    c.quad.target_error = q.value("target_error", c.quad.target_error);
    c.quad.max_order = q.value("max_order", c.quad.max_order);
    c.quad.finite.tail_tolerance = q.value("finite_tail_tolerance", c.quad.finite.tail_tolerance);
    c.quad.limit.tail_tolerance = q.value("limit_tail_tolerance", c.quad.limit.tail_tolerance);
    if (c.quad.panel_order < 4 || c.quad.panel_order + 8 > 64) throw ConfigError("quad.panel_order must lie in [4, 56]");
    if (!(c.quad.target_error > 0.0)) throw ConfigError("quad.target_error must be positive");
    if (!(c.quad.finite.tail_tolerance > 0.0) || !(c.quad.limit.tail_tolerance > 0.0)) {
      throw ConfigError("quad tail tolerances must be positive");
    }
  }
  c.raw = doc;
  return c;
}

inline ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  for (const auto& o : overrides) apply_override(doc, o);
  return parse_config(doc);
}

// ---------------------------------------------------------------------------
// Output

inline std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// RFC 4180 field quoting.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += "\"\"";
    else out += ch;
  }
  return out + "\"";
}

inline void write_csv(const std::filesystem::path& file, const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error("cannot write '" + file.string() + "'");
  auto line = [&](const std::vector<std::string>& r) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << csv_field(r[i]);
    out << "\r\n";
  };
  line(header);
  for (const auto& r : rows) line(r);
  if (!out) throw Error("write failed for '" + file.string() + "'");
}

inline json report_json(const ExperimentReport& r) {
  json m = json::array();
  for (const auto& x : r.metrics) {
    m.push_back({{"name", x.name},
                 {"value", x.value},
                 {"tolerance", x.tolerance},
                 {"comparison", x.comparison},
                 {"pass", x.pass},
                 {"criterion", x.criterion},
                 {"note", x.note}});
  }
  return {{"experiment", r.experiment},
          {"config", r.config},
          {"metrics", m},
          {"all_pass", r.all_pass()},
          {"wall_seconds", r.wall_seconds},
          {"seeds", r.seeds},
          {"versions",
           {{"loggamma", kVersion},
            {"compiler", __VERSION__},
            {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                          std::to_string(EIGEN_MINOR_VERSION)}}},
          {"extra", r.extra}};
}

/// Writes report.json and data.csv under dir.
inline void write_outputs(const ExperimentReport& r, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory '" + dir + "': " + ec.message());
  const std::filesystem::path base(dir);
  {
    std::ofstream out(base / "report.json", std::ios::binary);
    if (!out) throw Error("cannot write report.json in '" + dir + "'");
    out << report_json(r).dump(2) << "\n";
  }
  write_csv(base / "data.csv", r.data_header, r.data_rows);
}

/// CSV of r, value, est_error for a GUE or BBP table.
inline void emit_tables(const std::string& kind, const std::vector<double>& r_grid, const BBPLayout& layout,
                        const fredholm::QuadSettings& quad, const std::string& path) {
  if (!std::is_sorted(r_grid.begin(), r_grid.end())) throw DomainError("emit_tables: r_grid must be sorted");
  if (kind != "gue" && kind != "bbp") throw DomainError("emit_tables: kind must be gue or bbp");
  std::vector<std::vector<std::string>> rows;
  for (double r : r_grid) {
    const DetResult d =
        kind == "gue" ? fredholm::f_gue_det(r, quad) : fredholm::f_bbp_det(layout.x, layout.y, r, quad);
    rows.push_back({fmt(r), fmt(fredholm::real_checked(d, "emit_tables")), fmt(d.est_error)});
  }
  write_csv(path, {"r", "value", "est_error"}, rows);
}

// ---------------------------------------------------------------------------
// Experiments

namespace detail {

inline Metric make_metric(std::string name, double value, std::string cmp, double tol, int criterion,
                          std::string note = {}) {
  Metric m;
  m.name = std::move(name);
  m.value = value;
  m.tolerance = tol;
  m.comparison = cmp;
  m.criterion = criterion;
  m.note = std::move(note);
  if (cmp == "<=") m.pass = value <= tol;
  else if (cmp == "<") m.pass = value < tol;
  else if (cmp == ">=") m.pass = value >= tol;
  else if (cmp == ">") m.pass = value > tol;
  else throw Error("make_metric: unknown comparison " + cmp);
  if (!std::isfinite(value)) m.pass = false;
  return m;
}

inline std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t k) { return splitmix64(seed ^ splitmix64(k + 1)); }

inline std::string shape_tag(long M, long N, double theta) {
  std::ostringstream s;
  s << "M=" << M << " N=" << N << " theta=" << theta;
  return s.str();
}

inline std::string vec_tag(const std::vector<double>& v) {
  std::ostringstream s;
  s << "[";
  for (std::size_t i = 0; i < v.size(); ++i) s << (i ? " " : "") << v[i];
  s << "]";
  return s.str();
}

inline stats::TabulatedCdf tabulate(const std::function<double(double)>& F, const std::vector<double>& grid) {
  std::vector<double> v;
  v.reserve(grid.size());
  for (double r : grid) v.push_back(F(r));
  return stats::TabulatedCdf(grid, v);
}

inline void require_samples(const ExperimentConfig& c, long min = 1) {
  if (c.samples < min) throw ConfigError("samples must be at least " + std::to_string(min) + " for this experiment");
}

inline int threads_of(const ExperimentConfig& c) { return c.threads > 0 ? c.threads : default_threads(); }

// verify_laplace: Monte Carlo against the finite determinant, and the legacy
// formula against the tau-deformed determinant.
inline void run_verify_laplace(const ExperimentConfig& c, ExperimentReport& rep) {
  require_samples(c, 2);
  const int threads = threads_of(c);
  fredholm::QuadSettings q = c.quad;
  q.threads = threads;
  const double k_se = get<double>(c.thresholds, "stderr_multiple", "thresholds");
  const double floor_tol = get<double>(c.thresholds, "abs_floor", "thresholds");
  const auto ys = get<std::vector<double>>(c.params, "y_values", "params");
  rep.data_header = {"kind", "M", "N", "theta", "y", "tau", "log_u", "mc", "stderr", "det", "det_imag", "est_error", "abs_diff"};

  const json& cases = c.model.at("cases");
  for (std::size_t ci = 0; ci < cases.size(); ++ci) {
    const std::string where = "model.cases[" + std::to_string(ci) + "]";
    check_object(cases[ci], where, {{"M", Kind::Integer, true}, {"N", Kind::Integer, true}, {"theta", Kind::Number, true}});
    const ModelShape shape{cases[ci].at("M").get<long>(), cases[ci].at("N").get<long>(), cases[ci].at("theta").get<double>()};
    shape.validate();
    const ScalingConstants sc = scaling::scaling_constants(shape);
    const ModelSpec spec = ModelSpec::homogeneous(shape.M, shape.N, shape.theta);
    const ContourParams cp = kernels::default_contour(spec, shape, sc);
    const std::uint64_t seed = sub_seed(c.seed, ci);
    rep.seeds.push_back(seed);
    const SampleBatch batch = polymer::run_batch(spec, shape, sc, c.samples, seed, threads);
    for (double y : ys) {
      const double lu = kernels::log_u_scaled(y, shape, sc);
      const auto mc = polymer::laplace_from_samples(lu, batch.log_Z);
      const DetResult d = fredholm::finite_laplace(lu, spec, cp, q);
      const double diff = std::abs(mc.estimate - d.value.real());
      const double tol = std::max(k_se * mc.stderr_, floor_tol);
      std::ostringstream name;
      name << "laplace " << shape_tag(shape.M, shape.N, shape.theta) << " y=" << y;
      rep.metrics.push_back(make_metric(name.str(), diff, "<=", tol, 1,
                                        "det est_error " + fmt(d.est_error) + ", stderr " + fmt(mc.stderr_)));
      rep.data_rows.push_back({"laplace", std::to_string(shape.M), std::to_string(shape.N), fmt(shape.theta), fmt(y), "0",
                               fmt(lu), fmt(mc.estimate), fmt(mc.stderr_), fmt(d.value.real()), fmt(d.value.imag()),
                               fmt(d.est_error), fmt(diff)});
    }
  }

  const json& lg = c.params.at("legacy");
  check_object(lg, "params.legacy",
               {{"M", Kind::Integer, true}, {"N", Kind::Integer, true}, {"theta", Kind::Number, true},
                {"tau", Kind::Number, true}, {"y", Kind::Number, true}});
  const ModelShape shape{lg.at("M").get<long>(), lg.at("N").get<long>(), lg.at("theta").get<double>()};
  const double tau = lg.at("tau").get<double>(), y = lg.at("y").get<double>();
  const ScalingConstants sc = scaling::scaling_constants(shape);
  const ModelSpec spec = ModelSpec::homogeneous(shape.M, shape.N, shape.theta);
  const ContourParams cp = kernels::default_contour(spec, shape, sc);
  const double lu = kernels::log_u_scaled(y, shape, sc);
  const DetResult L = fredholm::legacy_laplace(lu, spec, tau, q);
  const DetResult F = fredholm::finite_laplace(lu, spec, cp, q, tau);
  const double diff = std::abs(L.value - F.value);
  rep.metrics.push_back(make_metric("legacy vs finite " + shape_tag(shape.M, shape.N, shape.theta) + " tau=" + fmt(tau),
                                    diff, "<=", get<double>(c.thresholds, "legacy_tol", "thresholds"), 2,
                                    "est_error legacy " + fmt(L.est_error) + ", finite " + fmt(F.est_error)));
  rep.data_rows.push_back({"legacy", std::to_string(shape.M), std::to_string(shape.N), fmt(shape.theta), fmt(y), fmt(tau),
                           fmt(lu), "", "", fmt(L.value.real()), fmt(L.value.imag()), fmt(L.est_error), fmt(diff)});
  rep.data_rows.push_back({"finite_tau", std::to_string(shape.M), std::to_string(shape.N), fmt(shape.theta), fmt(y),
                           fmt(tau), fmt(lu), "", "", fmt(F.value.real()), fmt(F.value.imag()), fmt(F.est_error), fmt(diff)});
}

inline BBPLayout layout_from(const json& j, const std::string& where) {
  check_object(j, where, {{"x", Kind::Array, true}, {"y", Kind::Array, true}});
  BBPLayout L{get_as<std::vector<double>>(j.at("x"), where + ".x"), get_as<std::vector<double>>(j.at("y"), where + ".y")};
  L.validate();
  return L;
}

/// Alternative wedge anchors (a, b) at fractions f1 < f2 of the admissible
/// window (max x, min y); one-sided windows use a span of 2.
inline std::pair<double, double> alt_anchors(const BBPLayout& L, double f1, double f2) {
  const bool hx = !L.x.empty(), hy = !L.y.empty();
  double lo, hi;
  if (hx && hy) {
    lo = *std::max_element(L.x.begin(), L.x.end());
    hi = *std::min_element(L.y.begin(), L.y.end());
  } else if (hx) {
    lo = *std::max_element(L.x.begin(), L.x.end());
    hi = lo + 2.0;
  } else if (hy) {
    hi = *std::min_element(L.y.begin(), L.y.end());
    lo = hi - 2.0;
  } else {
    lo = -1.0;
    hi = 1.0;
  }
  return {lo + f1 * (hi - lo), lo + f2 * (hi - lo)};
}

inline void run_tables(const ExperimentConfig& c, ExperimentReport& rep) {
  const auto& q = c.quad;
  const json& th = c.thresholds;
  rep.data_header = {"kind", "layout", "r", "value", "est_error"};

  // F_GUE table, oracle comparison and mean.
  const auto gue_grid = grid_from(c.params.at("gue_grid"), "params.gue_grid");
  std::vector<double> gue_vals;
  for (double r : gue_grid) {
    const DetResult d = fredholm::f_gue_det(r, q);
    gue_vals.push_back(fredholm::real_checked(d, "f_gue"));
    rep.data_rows.push_back({"gue", "", fmt(r), fmt(gue_vals.back()), fmt(d.est_error)});
  }
  const double oracle_tol = get<double>(th, "oracle_tol", "thresholds");
  for (double r : get<std::vector<double>>(c.params, "oracle_points", "params")) {
    const double a = fredholm::f_gue(r, q), b = oracle::tracy_widom_gue(r);
    rep.metrics.push_back(make_metric("f_gue vs Airy oracle r=" + fmt(r), std::abs(a - b), "<=", oracle_tol, 3));
    rep.data_rows.push_back({"oracle", "", fmt(r), fmt(b), ""});
  }
  const double mean_table = stats::mean_from_cdf(gue_grid, gue_vals);
  const double mean_oracle = oracle::tracy_widom_mean();
  rep.metrics.push_back(make_metric("mean from differentiated table vs oracle mean", std::abs(mean_table - mean_oracle), "<=",
                                    get<double>(th, "mean_tol", "thresholds"), 3,
                                    "table " + fmt(mean_table) + ", oracle " + fmt(mean_oracle)));
  rep.extra["gue_mean_table"] = mean_table;
  rep.extra["gue_mean_oracle"] = mean_oracle;

  // Empty-layout reduction: wedge form against the D-tilde F_GUE.
  double red = 0.0;
  for (double r : get<std::vector<double>>(c.params, "reduction_points", "params")) {
    red = std::max(red, std::abs(fredholm::f_bbp({}, {}, r, q) - fredholm::f_gue(r, q)));
  }
  rep.metrics.push_back(make_metric("empty BBP layout reduces to F_GUE (max abs diff)", red, "<=",
                                    get<double>(th, "reduction_tol", "thresholds"), 4));

  const auto bbp_grid = grid_from(c.params.at("bbp_grid"), "params.bbp_grid");
  const auto sym_pts = get<std::vector<double>>(c.params, "symmetry_points", "params");
  const auto fracs = get<std::vector<std::vector<double>>>(c.params, "anchor_fractions", "params");
  const double slack = get<double>(th, "monotone_slack", "thresholds");
  const json& layouts = c.model.at("layouts");
  for (std::size_t li = 0; li < layouts.size(); ++li) {
    const BBPLayout L = layout_from(layouts[li], "model.layouts[" + std::to_string(li) + "]");
    const std::string tag = "x=" + vec_tag(L.x) + " y=" + vec_tag(L.y);
    std::vector<double> vals;
    for (double r : bbp_grid) {
      const DetResult d = fredholm::f_bbp_det(L.x, L.y, r, q);
      vals.push_back(fredholm::real_checked(d, "f_bbp"));
      rep.data_rows.push_back({"bbp", tag, fmt(r), fmt(vals.back()), fmt(d.est_error)});
    }
    double worst_drop = 0.0;
    for (std::size_t i = 1; i < vals.size(); ++i) worst_drop = std::max(worst_drop, vals[i - 1] - vals[i]);
    const double lo = *std::min_element(vals.begin(), vals.end()), hi = *std::max_element(vals.begin(), vals.end());
    rep.metrics.push_back(make_metric("F_BBP monotone " + tag + " (largest decrease)", worst_drop, "<=", slack, 4));
    rep.metrics.push_back(make_metric("F_BBP >= 0 " + tag, lo, ">=", -slack, 4));
    rep.metrics.push_back(make_metric("F_BBP <= 1 " + tag, hi, "<=", 1.0 + slack, 4));
    rep.metrics.push_back(make_metric("F_BBP lower end " + tag + " r=" + fmt(bbp_grid.front()), vals.front(), "<=",
                                      get<double>(th, "lower_end_max", "thresholds"), 4));
    rep.metrics.push_back(make_metric("F_BBP upper end " + tag + " r=" + fmt(bbp_grid.back()), vals.back(), ">=",
                                      get<double>(th, "upper_end_min", "thresholds"), 4));

    double anchor = 0.0, exch = 0.0;
    for (double r : sym_pts) {
      const double base = fredholm::f_bbp(L.x, L.y, r, q);
      for (const auto& f : fracs) {
        if (f.size() != 2 || !(f[0] < f[1]) || !(f[0] > 0.0) || !(f[1] < 1.0)) {
          throw ConfigError("params.anchor_fractions: each entry must be [f1, f2] with 0 < f1 < f2 < 1");
        }
        anchor = std::max(anchor, std::abs(fredholm::f_bbp(L.x, L.y, r, q, alt_anchors(L, f[0], f[1])) - base));
      }
      std::vector<double> nx, ny;
      for (double v : L.y) nx.push_back(-v);
      for (double v : L.x) ny.push_back(-v);
      exch = std::max(exch, std::abs(fredholm::f_bbp(nx, ny, r, q) - base));
    }
    rep.metrics.push_back(make_metric("anchor shift invariance " + tag, anchor, "<=", get<double>(th, "anchor_tol", "thresholds"), 4));
    rep.metrics.push_back(make_metric("exchange invariance " + tag, exch, "<=", get<double>(th, "exchange_tol", "thresholds"), 4));
  }
}

inline void run_tw_convergence(const ExperimentConfig& c, ExperimentReport& rep) {
  require_samples(c, 10);
  const int threads = threads_of(c);
  const double theta = get<double>(c.model, "theta", "model");
  const auto shapes = get<std::vector<std::vector<long>>>(c.model, "shapes", "model");
  const auto off = get<std::vector<std::vector<long>>>(c.model, "off_diagonal", "model");
  const double ks_max = get<double>(c.thresholds, "ks_max", "thresholds");
  const auto grid = grid_from(c.params.at("cdf_grid"), "params.cdf_grid");
  const auto cdf = tabulate([&](double r) { return fredholm::f_gue(r, c.quad); }, grid);
  rep.data_header = {"M", "N", "sample", "log_Z", "F"};

  auto run = [&](long M, long N, std::uint64_t k) {
    const ModelShape shape{M, N, theta};
    const ScalingConstants sc = scaling::scaling_constants(shape);
    const ModelSpec spec = ModelSpec::homogeneous(M, N, theta);
    const std::uint64_t seed = sub_seed(c.seed, k);
    rep.seeds.push_back(seed);
    const SampleBatch b = polymer::run_batch(spec, shape, sc, c.samples, seed, threads);
    for (long i = 0; i < b.n_samples; ++i) {
      rep.data_rows.push_back({std::to_string(M), std::to_string(N), std::to_string(i), fmt(b.log_Z[i]), fmt(b.F[i])});
    }
    return stats::ks_statistic(b.F, [&](double x) { return cdf(x); });
  };

  std::vector<double> ks;
  std::uint64_t k = 0;
  for (const auto& s : shapes) {
    if (s.size() != 2) throw ConfigError("model.shapes: entries must be [M, N]");
    ks.push_back(run(s[0], s[1], k++));
    rep.extra["ks"][shape_tag(s[0], s[1], theta)] = ks.back();
  }
  double worst_step = -INFINITY;
  for (std::size_t i = 1; i < ks.size(); ++i) worst_step = std::max(worst_step, ks[i] - ks[i - 1]);
  std::string trend;
  for (std::size_t i = 0; i < ks.size(); ++i) trend += (i ? ", " : "") + fmt(ks[i]);
  if (ks.size() >= 2) {
    rep.metrics.push_back(make_metric("KS strictly decreasing in M (largest step)", worst_step, "<", 0.0, 5, "KS " + trend));
  }
  if (!shapes.empty()) {
    rep.metrics.push_back(make_metric("KS at largest diagonal " + shape_tag(shapes.back()[0], shapes.back()[1], theta),
                                      ks.back(), "<=", ks_max, 5));
  }
  for (const auto& s : off) {
    if (s.size() != 2) throw ConfigError("model.off_diagonal: entries must be [M, N]");
    const double d = run(s[0], s[1], k++);
    rep.extra["ks"][shape_tag(s[0], s[1], theta)] = d;
    rep.metrics.push_back(make_metric("KS off-diagonal " + shape_tag(s[0], s[1], theta), d, "<=", ks_max, 5));
  }
}

inline void run_tails(const ExperimentConfig& c, ExperimentReport& rep) {
  require_samples(c, 100);
  const ModelShape shape{get<long>(c.model, "M", "model"), get<long>(c.model, "N", "model"), get<double>(c.model, "theta", "model")};
  shape.validate();
  const ScalingConstants sc = scaling::scaling_constants(shape);
  const ModelSpec spec = ModelSpec::homogeneous(shape.M, shape.N, shape.theta);
  const std::uint64_t seed = sub_seed(c.seed, 0);
  rep.seeds.push_back(seed);
  const SampleBatch b = polymer::run_batch(spec, shape, sc, c.samples, seed, threads_of(c));
  const auto xs = grid_from(c.params.at("x_grid"), "params.x_grid");
  const double level = get<double>(c.params, "level", "params");
  if (!(level > 0.0 && level < 1.0)) throw ConfigError("params.level must lie in (0, 1)");
  // Two-sided Wilson intervals at family level `level`, Bonferroni across points.
  const double conf = 1.0 - level / static_cast<double>(xs.size());

  std::vector<double> F = b.F;
  std::sort(F.begin(), F.end());
  const long n = static_cast<long>(F.size());
  std::vector<long> counts;
  // log of the empirical survival has delta-method variance (1 - p) / k.
  std::vector<double> fx, fy, fw;
  for (double x : xs) {
    const long k = static_cast<long>(F.end() - std::lower_bound(F.begin(), F.end(), x));
    counts.push_back(k);
    if (k > 0) {
      fx.push_back(std::pow(x, 1.5));
      const double p = static_cast<double>(k) / static_cast<double>(n);
      fy.push_back(std::log(p));
      fw.push_back(static_cast<double>(k) / std::max(1.0 - p, 1e-12));
    }
  }
  if (fx.size() < 2) throw NumericError("tails: fewer than two grid points with positive empirical survival");
  const auto fit = stats::weighted_linear_fit(fx, fy, fw);
  const double C2 = std::exp(fit.intercept), c2 = -fit.slope;
  rep.extra["C2"] = C2;
  rep.extra["c2"] = c2;
  rep.extra["r2"] = fit.r2;
  rep.metrics.push_back(make_metric("fitted c2", c2, ">", get<double>(c.thresholds, "c2_min", "thresholds"), 6));
  rep.metrics.push_back(make_metric("R^2 of log P vs x^{3/2}", fit.r2, ">=", get<double>(c.thresholds, "r2_min", "thresholds"), 6));
  rep.data_header = {"x", "count", "n", "survival", "wilson_lo", "wilson_hi", "envelope"};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto w = stats::wilson_interval(counts[i], n, conf);
    const double env = C2 * std::exp(-c2 * std::pow(xs[i], 1.5));
    const double p = static_cast<double>(counts[i]) / static_cast<double>(n);
    rep.metrics.push_back(make_metric("envelope covers survival at x=" + fmt(xs[i]) + " (Wilson lower / envelope)",
                                      w.lo / env, "<=", 1.0, 6,
                                      "survival " + fmt(p) + ", Wilson [" + fmt(w.lo) + ", " + fmt(w.hi) + "], envelope " + fmt(env)));
    rep.data_rows.push_back({fmt(xs[i]), std::to_string(counts[i]), std::to_string(n), fmt(p), fmt(w.lo), fmt(w.hi), fmt(env)});
  }
}

inline void run_lln_phase(const ExperimentConfig& c, ExperimentReport& rep) {
  require_samples(c, 2);
  const double theta = get<double>(c.model, "theta", "model"), p = get<double>(c.model, "p", "model");
  const long M = get<long>(c.model, "M", "model");
  const long N = std::lround(p * static_cast<double>(M));
  if (M < 1 || N < 1) throw ConfigError("lln_phase: M and p M must be at least 1");
  const double tol = get<double>(c.thresholds, "tol", "thresholds");
  const double theta_c = scaling::critical_theta(p, theta);
  const double h = scaling::h_theta(p, theta);
  const ScalingConstants sc = scaling::scaling_constants(ModelShape{M, N, theta});
  rep.extra["theta_c"] = theta_c;
  rep.extra["minus_h"] = -h;
  rep.data_header = {"alpha1", "sample", "log_Z", "log_Z_over_M"};
  std::uint64_t k = 0;
  for (double off : get<std::vector<double>>(c.params, "alpha_offsets", "params")) {
    const double a1 = theta_c + off;
    if (!(a1 > 0.0)) throw ConfigError("lln_phase: alpha1 = theta_c + offset must be positive");
    ModelSpec spec;
    spec.theta = theta;
    spec.alpha.assign(static_cast<std::size_t>(M + 1), theta);
    spec.alpha[0] = a1;
    spec.a.assign(static_cast<std::size_t>(N), 0.0);
    const std::uint64_t seed = sub_seed(c.seed, k++);
    rep.seeds.push_back(seed);
    const SampleBatch b = polymer::run_batch(spec, ModelShape{M, N, theta}, sc, c.samples, seed, threads_of(c));
    std::vector<double> v;
    for (long i = 0; i < b.n_samples; ++i) {
      v.push_back(b.log_Z[i] / static_cast<double>(M));
      rep.data_rows.push_back({fmt(a1), std::to_string(i), fmt(b.log_Z[i]), fmt(v.back())});
    }
    const double mean = stats::mean(v), se = std::sqrt(stats::variance(v) / static_cast<double>(v.size()));
    const auto lln = scaling::lln_perturbed(p, a1, theta);
    const std::string tag = "alpha1=" + fmt(a1);
    // Finite-M reference: Tracy-Widom mean shift of log Z / M for the bulk.
    const double tw_shift = -1.7710868074 * sc.sigma * std::pow(static_cast<double>(M), -2.0 / 3.0);
    if (a1 >= theta_c) {
      rep.metrics.push_back(make_metric("supercritical |mean M^-1 log Z + h| " + tag, std::abs(mean + h), "<=", tol, 7,
                                        "mean " + fmt(mean) + " +- " + fmt(se) + ", -h " + fmt(-h) +
                                            ", Tracy-Widom mean shift at this M " + fmt(tw_shift)));
    } else {
      rep.metrics.push_back(make_metric("subcritical |mean M^-1 log Z - LLN maximum| " + tag, std::abs(mean - lln.value),
                                        "<=", tol, 7,
                                        "mean " + fmt(mean) + " +- " + fmt(se) + ", maximum " + fmt(lln.value) +
                                            " at x = " + fmt(lln.maximizer)));
      rep.metrics.push_back(make_metric("subcritical maximizer is interior " + tag, lln.maximizer, ">", 0.0, 7,
                                        "closed form p - g(alpha1) = " + fmt(p - scaling::g_eval(a1, theta))));
    }
    rep.extra["runs"][tag] = {{"mean", mean}, {"stderr", se}, {"lln", lln.value}, {"maximizer", lln.maximizer}};
  }
}

inline void run_bbp(const ExperimentConfig& c, ExperimentReport& rep) {
  require_samples(c, 10);
  const int threads = threads_of(c);
  const double theta = get<double>(c.model, "theta", "model");
  const auto xs = get<std::vector<double>>(c.model, "x", "model");
  const auto yv = get<std::vector<double>>(c.model, "y_values", "model");
  auto sizes = get<std::vector<long>>(c.model, "sizes", "model");
  if (sizes.size() < 2) throw ConfigError("model.sizes needs at least two sizes");
  std::sort(sizes.begin(), sizes.end());
  const double ks_max = get<double>(c.thresholds, "ks_max", "thresholds");
  const auto grid = grid_from(c.params.at("cdf_grid"), "params.cdf_grid");
  rep.data_header = {"y1", "M", "sample", "log_Z", "F"};
  std::uint64_t k = 0;
  for (double y : yv) {
    const BBPLayout L{xs, {y}};
    L.validate();
    const auto cdf = tabulate([&](double r) { return fredholm::f_bbp(L.x, L.y, r, c.quad); }, grid);
    std::vector<double> ks;
    for (long M : sizes) {
      const ModelShape shape{M, M, theta};
      const ScalingConstants sc = scaling::scaling_constants(shape);
      const ModelSpec spec = polymer::build_bbp_spec(shape, L, sc);
      const std::uint64_t seed = sub_seed(c.seed, k++);
      rep.seeds.push_back(seed);
      const SampleBatch b = polymer::run_batch(spec, shape, sc, c.samples, seed, threads);
      for (long i = 0; i < b.n_samples; ++i) {
        rep.data_rows.push_back({fmt(y), std::to_string(M), std::to_string(i), fmt(b.log_Z[i]), fmt(b.F[i])});
      }
      ks.push_back(stats::ks_statistic(b.F, [&](double x) { return cdf(x); }));
      rep.extra["ks"]["y=" + fmt(y) + " M=" + std::to_string(M)] = ks.back();
    }
    const std::string tag = "y1=" + fmt(y);
    rep.metrics.push_back(make_metric("KS vs F_BBP " + tag + " M=" + std::to_string(sizes.back()), ks.back(), "<=", ks_max, 8));
    rep.metrics.push_back(make_metric("KS at M=" + std::to_string(sizes.back()) + " minus KS at M=" + std::to_string(sizes.front()) + " " + tag,
                                      ks.back() - ks.front(), "<", 0.0, 8));
  }
}

inline double wrap_pi(double x) { return std::remainder(x, 2.0 * specfun::kPi); }

inline void run_invariants(const ExperimentConfig& c, ExperimentReport& rep) {
  const json& P = c.params;
  const json& T = c.thresholds;
  const auto& q = c.quad;
  rep.data_header = {"suite", "case", "value"};

  // Steepest-descent sign and monotonicity checks.
  const json& D = P.at("descent");
  check_object(D, "params.descent",
               {{"thetas", Kind::Array, true}, {"ratios", Kind::Array, true}, {"M", Kind::Integer, true},
                {"grid_size", Kind::Integer, true}, {"max_radius", Kind::Number, true}});
  long total_viol = 0;
  for (double th : get<std::vector<double>>(D, "thetas", "params.descent")) {
    for (double ratio : get<std::vector<double>>(D, "ratios", "params.descent")) {
      const long M = D.at("M").get<long>();
      const long N = std::max(1L, std::lround(ratio * static_cast<double>(M)));
      const auto r = scaling::descent_checks(ModelShape{M, N, th}, D.at("grid_size").get<int>(), D.at("max_radius").get<double>());
      total_viol += r.violations;
      rep.data_rows.push_back({"descent", shape_tag(M, N, th), std::to_string(r.violations) + "/" + std::to_string(r.checks)});
    }
  }
  rep.metrics.push_back(make_metric("descent_checks violations over the (theta, N/M) grid", static_cast<double>(total_viol),
                                    "<=", get<double>(T, "descent_violations", "thresholds"), 9));

  // Cubic remainder: G_alpha(z) + sigma^3 (z - z_c)^3 / 3 = O(|z - z_c|^4).
  const json& Cb = P.at("cubic");
  check_object(Cb, "params.cubic",
               {{"M", Kind::Integer, true}, {"N", Kind::Integer, true}, {"theta", Kind::Number, true},
                {"radii", Kind::Object, true}, {"angle", Kind::Number, true}});
  {
    const ModelShape shape{Cb.at("M").get<long>(), Cb.at("N").get<long>(), Cb.at("theta").get<double>()};
    const ScalingConstants sc = scaling::scaling_constants(shape);
    const auto rg = grid_from(Cb.at("radii"), "params.cubic.radii");
    const cplx dir = std::polar(1.0, Cb.at("angle").get<double>());
    std::vector<double> lx, ly;
    for (double eps : rg) {
      const cplx dz = eps * dir;
      const cplx R = scaling::eval_G_alpha(sc.z_c + dz, shape, sc) + std::pow(sc.sigma, 3) * dz * dz * dz / 3.0;
      lx.push_back(std::log(eps));
      ly.push_back(std::log(std::abs(R)));
      rep.data_rows.push_back({"cubic_remainder", fmt(eps), fmt(std::abs(R))});
    }
    const auto fit = stats::linear_fit(lx, ly);
    rep.metrics.push_back(make_metric("cubic remainder exponent |slope - target|",
                                      std::abs(fit.slope - get<double>(T, "cubic_exponent", "thresholds")), "<=",
                                      get<double>(T, "cubic_tol", "thresholds"), 9, "slope " + fmt(fit.slope)));
  }

  // Deformation invariance of determinants.
  const json& Df = P.at("deformation");
  check_object(Df, "params.deformation",
               {{"M", Kind::Integer, true}, {"N", Kind::Integer, true}, {"theta", Kind::Number, true}, {"y", Kind::Number, true},
                {"contours", Kind::Array, true}, {"layout", Kind::Object, true}, {"r", Kind::Number, true},
                {"rhos", Kind::Array, true}});
  const double dtol = get<double>(T, "deformation_tol", "thresholds");
  {
    const ModelShape shape{Df.at("M").get<long>(), Df.at("N").get<long>(), Df.at("theta").get<double>()};
    const ScalingConstants sc = scaling::scaling_constants(shape);
    const ModelSpec spec = ModelSpec::homogeneous(shape.M, shape.N, shape.theta);
    const double lu = kernels::log_u_scaled(Df.at("y").get<double>(), shape, sc);
    const ContourParams base = kernels::default_contour(spec, shape, sc);
    const cplx ref = fredholm::finite_laplace(lu, spec, base, q, 0.0, true).value;
    const double amax = 0.0, amin = shape.theta;
    double worst = 0.0;
    for (const auto& fr : get<std::vector<std::vector<double>>>(Df, "contours", "params.deformation")) {
      if (fr.size() != 3) throw ConfigError("params.deformation.contours: entries are [a_frac, b_frac, d_frac]");
      ContourParams cp{amax + fr[0] * (amin - amax), amax + fr[1] * (amin - amax), 0.0};
      cp.d = fr[2] * std::min(0.25, (cp.b - cp.a) / 4.0);
      const cplx v = fredholm::finite_laplace(lu, spec, cp, q, 0.0, true).value;
      worst = std::max(worst, std::abs(v - ref));
      rep.data_rows.push_back({"finite_deformation", "a=" + fmt(cp.a) + " b=" + fmt(cp.b) + " d=" + fmt(cp.d), fmt(std::abs(v - ref))});
    }
    rep.metrics.push_back(make_metric("finite determinant invariance under (a, b, d)", worst, "<=", dtol, 9));

    const BBPLayout L = layout_from(Df.at("layout"), "params.deformation.layout");
    const double r = Df.at("r").get<double>();
    const double wedge = fredholm::f_bbp(L.x, L.y, r, q);
    double wl = 0.0;
    for (double rho : get<std::vector<double>>(Df, "rhos", "params.deformation")) {
      auto ks = kernels::LimitKernelSpec::defaults(L.x, L.y, r, kernels::LimitForm::Dtilde);
      ks.rho = rho;
      const double dt = fredholm::real_checked(fredholm::limit_det(ks, q), "limit_det");
      wl = std::max(wl, std::abs(dt - wedge));
      rep.data_rows.push_back({"limit_dtilde_vs_wedge", "rho=" + fmt(rho), fmt(std::abs(dt - wedge))});
    }
    rep.metrics.push_back(make_metric("limit determinant: D-tilde (several rho) vs wedge", wl, "<=", dtol, 9));

    // Exchange symmetry at the kernel-matrix level.
    std::vector<double> nx, ny;
    for (double v : L.y) nx.push_back(-v);
    for (double v : L.x) ny.push_back(-v);
    const double ex = std::abs(fredholm::f_bbp(nx, ny, r, q) - wedge);
    rep.metrics.push_back(make_metric("exchange symmetry (x, y) -> (-y, -x)", ex, "<=", get<double>(T, "exchange_tol", "thresholds"), 9));
  }

  // Special-function residuals: recurrences, reflection and Boost oracles.
  {
    double worst = 0.0;
    auto note = [&](const std::string& what, double r) {
      worst = std::max(worst, r);
      rep.data_rows.push_back({"specfun", what, fmt(r)});
    };
    const cplx pts[] = {{0.3, 0.2}, {1.7, -2.5}, {-3.4, 1.1}, {12.5, 40.0}, {-0.5, -7.0}, {5.0, 0.0}};
    for (const cplx& z : pts) {
      const cplx d = specfun::log_gamma(z + 1.0) - specfun::log_gamma(z) - std::log(z);
      note("log_gamma recurrence z=" + fmt(z.real()) + "+" + fmt(z.imag()) + "i", std::abs(cplx(d.real(), wrap_pi(d.imag()))));
      const cplx e = specfun::digamma(z + 1.0) - specfun::digamma(z) - 1.0 / z;
      note("digamma recurrence z=" + fmt(z.real()) + "+" + fmt(z.imag()) + "i", std::abs(e) / (1.0 + std::abs(specfun::digamma(z))));
    }
    const cplx s(0.3, 0.2);
    const cplx refl = std::exp(specfun::log_gamma(-s) + specfun::log_gamma(1.0 + s));
    note("Gamma(-s) Gamma(1+s) = -pi / sin(pi s)", std::abs(refl + specfun::recip_sin_pi(s)) / std::abs(refl));
    for (double x : {0.05, 0.4, 1.0, 2.5, 7.3, 30.0}) {
      note("log_gamma vs boost x=" + fmt(x), std::abs(specfun::log_gamma(cplx(x, 0.0)).real() - boost::math::lgamma(x)) /
                                                 std::max(1.0, std::abs(boost::math::lgamma(x))));
      note("digamma vs boost x=" + fmt(x), std::abs(specfun::digamma(cplx(x, 0.0)).real() - boost::math::digamma(x)) /
                                               std::max(1.0, std::abs(boost::math::digamma(x))));
      note("S2 vs trigamma x=" + fmt(x), std::abs(scaling::S2(x) - boost::math::trigamma(x)) / boost::math::trigamma(x));
      const double s3 = -0.5 * boost::math::polygamma(2, x);
      note("S3 vs polygamma x=" + fmt(x), std::abs(scaling::S3(x) - s3) / s3);
    }
    rep.metrics.push_back(make_metric("special-function residuals (max)", worst, "<=", get<double>(T, "specfun_tol", "thresholds"), 9));
  }

  // tau continuity of the finite kernel.
  const json& Tc = P.at("tau");
  check_object(Tc, "params.tau",
               {{"M", Kind::Integer, true}, {"N", Kind::Integer, true}, {"theta", Kind::Number, true}, {"y", Kind::Number, true},
                {"tau", Kind::Number, true}, {"offsets", Kind::Array, true}});
  {
    const ModelShape shape{Tc.at("M").get<long>(), Tc.at("N").get<long>(), Tc.at("theta").get<double>()};
    const ScalingConstants sc = scaling::scaling_constants(shape);
    const ModelSpec spec = ModelSpec::homogeneous(shape.M, shape.N, shape.theta);
    const ContourParams cp = kernels::default_contour(spec, shape, sc);
    const double lu = kernels::log_u_scaled(Tc.at("y").get<double>(), shape, sc);
    const kernels::FiniteKernel K0(FiniteKernelSpec{spec, lu, 0.0, cp.a, cp.b, cp.d}, q.finite);
    const kernels::FiniteKernel Kt(FiniteKernelSpec{spec, lu, Tc.at("tau").get<double>(), cp.a, cp.b, cp.d}, q.finite);
    double worst = 0.0;
    for (const auto& pr : get<std::vector<std::vector<double>>>(Tc, "offsets", "params.tau")) {
      if (pr.size() != 2) throw ConfigError("params.tau.offsets: entries are [t, t'] distances along the outer contour");
      auto on_outer = [&](double t) { return cp.a + std::abs(t) * std::polar(1.0, (t >= 0 ? 1.0 : -1.0) * 3.0 * specfun::kPi / 4.0); };
      const cplx v = on_outer(pr[0]), vp = on_outer(pr[1]);
      const double d = std::abs(Kt.eval(v, vp) - K0.eval(v, vp));
      worst = std::max(worst, d);
      rep.data_rows.push_back({"tau_continuity", "t=" + fmt(pr[0]) + " t'=" + fmt(pr[1]), fmt(d)});
    }
    rep.metrics.push_back(make_metric("tau continuity |K_tau - K_0|", worst, "<=", get<double>(T, "tau_tol", "thresholds"), 9));
  }
}

}  // namespace detail

/// Runs one experiment; deterministic for a given configuration.
inline ExperimentReport run_experiment(const ExperimentConfig& c) {
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentReport rep;
  rep.experiment = experiment_name(c.experiment);
  rep.config = c.raw;
  try {
    switch (c.experiment) {
      case Experiment::VerifyLaplace: detail::run_verify_laplace(c, rep); break;
      case Experiment::Tables: detail::run_tables(c, rep); break;
      case Experiment::TwConvergence: detail::run_tw_convergence(c, rep); break;
      case Experiment::Tails: detail::run_tails(c, rep); break;
      case Experiment::LlnPhase: detail::run_lln_phase(c, rep); break;
      case Experiment::Bbp: detail::run_bbp(c, rep); break;
      case Experiment::Invariants: detail::run_invariants(c, rep); break;
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace harness
}  // namespace loggamma

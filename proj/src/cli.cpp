#include "hypgaf/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

#include "hypgaf/errors.hpp"
#include "hypgaf/exact_l1.hpp"
#include "hypgaf/gaf_model.hpp"
#include "hypgaf/ldp_rates.hpp"
#include "hypgaf/mc_engine.hpp"
#include "hypgaf/rng.hpp"
#include "hypgaf/zero_counter.hpp"

namespace hypgaf::cli {
namespace {

using json = nlohmann::ordered_json;

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// JSON has no infinities; they are written as null.
json jnum(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

// RFC 4180 table: header row, CRLF line ends, numeric fields unquoted.
class Csv {
 public:
  explicit Csv(std::initializer_list<const char*> header) {
    bool first = true;
    for (const char* h : header) {
      os_ << (first ? "" : ",") << h;
      first = false;
    }
    os_ << "\r\n";
  }
  template <class... Ts>
  void row(const Ts&... fields) {
    bool first = true;
    ((os_ << (first ? "" : ",") << field(fields), first = false), ...);
    os_ << "\r\n";
    ++rows_;
  }
  std::string str() const { return os_.str(); }
  std::size_t rows() const { return rows_; }

 private:
  static std::string field(double x) { return num(x); }
  static std::string field(const std::string& s) { return s; }
  static std::string field(const char* s) { return s; }
  template <class I>
    requires std::is_integral_v<I>
  static std::string field(I i) {
    return std::to_string(i);
  }

  std::ostringstream os_;
  std::size_t rows_ = 0;
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << content;
  f.flush();
  if (!f) throw IoError("write to '" + path + "' failed");
}

std::string manifest_path(const std::string& out) { return out + ".manifest.json"; }

struct Manifest {
  std::string command;
  json params = json::object();
  std::uint64_t seed = 0;
  std::string started = utc_now();

  json finish(json results) const {
    json m;
    m["command"] = command;
    m["params"] = params;
    m["seed"] = seed;
    m["tool_version"] = kToolVersion;
    m["started"] = started;
    m["finished"] = utc_now();
    m["results"] = std::move(results);
    return m;
  }
};

void write_with_manifest(const std::string& out, const std::string& content,
                         const Manifest& manifest, json results) {
  write_file(out, content);
  write_file(manifest_path(out), manifest.finish(std::move(results)).dump(2) + "\n");
}

json error_json(const std::exception& e, int code) {
  json j;
  const char* kind = "Error";
  if (dynamic_cast<const UnreliableContour*>(&e)) kind = "UnreliableContour";
  else if (dynamic_cast<const BoundaryAmbiguous*>(&e)) kind = "BoundaryAmbiguous";
  else if (dynamic_cast<const CertificateFailed*>(&e)) kind = "CertificateFailed";
  else if (dynamic_cast<const TiltInfeasible*>(&e)) kind = "TiltInfeasible";
  else if (dynamic_cast<const ExperimentAborted*>(&e)) kind = "ExperimentAborted";
  else if (dynamic_cast<const NonConvergent*>(&e)) kind = "NonConvergent";
  else if (dynamic_cast<const DegenerateSpectrum*>(&e)) kind = "DegenerateSpectrum";
  else if (dynamic_cast<const NumericRangeError*>(&e)) kind = "NumericRangeError";
  else if (dynamic_cast<const DomainError*>(&e)) kind = "DomainError";
  else if (dynamic_cast<const ResourceError*>(&e)) kind = "ResourceError";
  else if (dynamic_cast<const IoError*>(&e)) kind = "IoError";
  else if (dynamic_cast<const CLI::Error*>(&e)) kind = "UsageError";
  j["error"] = kind;
  j["message"] = e.what();
  j["exit_code"] = code;
  if (auto* u = dynamic_cast<const UnreliableContour*>(&e)) {
    j["min_modulus"] = jnum(u->min_modulus());
    j["threshold"] = jnum(u->threshold());
  }
  if (auto* b = dynamic_cast<const BoundaryAmbiguous*>(&e)) j["root_modulus"] = jnum(b->root_modulus());
  if (auto* c = dynamic_cast<const CertificateFailed*>(&e)) {
    j["margin"] = jnum(c->margin());
    j["theta"] = jnum(c->theta());
  }
  return j;
}

// Coefficients from a CSV with header n,re,im.
std::vector<Complex> read_coefficients(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open '" + path + "' for reading");
  std::string line;
  std::getline(f, line);
  std::vector<Complex> coeffs;
  std::size_t lineno = 1;
  while (std::getline(f, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string a, b, c;
    if (!std::getline(ls, a, ',') || !std::getline(ls, b, ',') || !std::getline(ls, c)) {
      throw DomainError(path + ":" + std::to_string(lineno) + ": expected n,re,im");
    }
    std::size_t n;
    double re, im;
    try {
      n = std::stoul(a);
      re = std::stod(b);
      im = std::stod(c);
    } catch (const std::exception&) {
      throw DomainError(path + ":" + std::to_string(lineno) + ": malformed number");
    }
    if (n >= coeffs.size()) coeffs.resize(n + 1);
    coeffs[n] = Complex{re, im};
  }
  if (coeffs.empty()) throw DomainError(path + ": no coefficients");
  return coeffs;
}

json tail_json(const TailEstimate& e) {
  json j;
  j["p_hat"] = e.p_hat;
  j["log_p"] = jnum(e.log_p);
  j["stderr"] = e.stderr;
  j["ci_low"] = e.ci_low;
  j["ci_high"] = e.ci_high;
  j["replicates"] = e.replicates;
  j["method"] = to_string(e.method);
  j["zero_hits"] = e.zero_hits;
  j["tv_bound"] = e.tv_bound;
  return j;
}

json winding_json(const CountResult& c, double threshold) {
  json j;
  j["count"] = c.count;
  j["nodes_used"] = c.nodes_used;
  j["contour_min_modulus"] = c.contour_min_modulus;
  j["threshold"] = threshold;
  j["winding"] = c.winding;
  return j;
}

json roots_json(const CountResult& c, const RootSet& rs) {
  json j;
  j["count"] = c.count;
  j["degree"] = rs.roots.size();
  j["origin_multiplicity"] = rs.origin_multiplicity;
  j["sweeps"] = rs.sweeps;
  j["used_fallback"] = rs.used_fallback;
  return j;
}

struct Options {
  unsigned threads = 1;

  // sample / count / tail / experiment
  std::vector<double> L;
  std::vector<double> r;
  double radius = 0.0;
  double eps_tail = 1e-12;
  double eps_tv = 1e-12;
  std::uint64_t seed = 0;
  std::string out;
  std::string in;
  std::string method;

  // rate
  double alpha = 1.0;
  std::optional<double> x;
  std::optional<double> t;
  bool numeric_check = false;

  // tail / experiment
  std::vector<std::size_t> V;
  std::size_t trials = 100000;
  std::string name;
  int j_min = 0;
  int j_max = 0;
  double C = 2.0;
  bool no_enforce = false;
  std::size_t m = 0;
};

McConfig mc_config(const Options& o) {
  McConfig c;
  c.threads = o.threads;
  c.epsilon_tail = o.eps_tail;
  return c;
}

double single(const std::vector<double>& v, const char* flag) {
  if (v.size() != 1) throw DomainError(std::string("exactly one value required for ") + flag);
  return v.front();
}

int cmd_sample(const Options& o, std::ostream& out) {
  Manifest man{"sample"};
  const GafParams params{single(o.L, "--L"), single(o.r, "--r"), o.eps_tail};
  man.params = {{"L", params.L}, {"r", params.r}, {"eps_tail", params.epsilon_tail},
                {"out", o.out}};
  man.seed = o.seed;
  const GafSample s = sample_gaf(params, o.seed);
  Csv csv{"n", "re", "im"};
  for (std::size_t n = 0; n < s.coeffs.size(); ++n) csv.row(n, s.coeffs[n].real(), s.coeffs[n].imag());
  json res{{"truncation_degree", s.truncation_degree},
           {"tail_sigma2", s.tail_sigma2},
           {"radius", s.radius},
           {"L", s.L}};
  write_with_manifest(o.out, csv.str(), man, res);
  out << json{{"out", o.out}, {"rows", csv.rows()}, {"truncation_degree", s.truncation_degree}}.dump()
      << "\n";
  return 0;
}

int cmd_count(const Options& o, std::ostream& out) {
  Manifest man{"count"};
  CountConfig cfg;
  cfg.r = single(o.r, "--r");
  GafSample sample;
  if (!o.in.empty()) {
    sample = GafSample::from_polynomial(read_coefficients(o.in), cfg.r);
    // A sidecar written by `sample` carries the certified radius and tail.
    std::ifstream mf(manifest_path(o.in));
    if (mf) {
      try {
        const auto m = json::parse(mf);
        const auto& res = m.at("results");
        sample.radius = res.at("radius").get<double>();
        sample.tail_sigma2 = res.at("tail_sigma2").get<double>();
        sample.L = res.value("L", 0.0);
      } catch (const json::exception& e) {
        throw DomainError(manifest_path(o.in) + ": unreadable manifest: " + e.what());
      }
    }
    man.params = {{"in", o.in}, {"r", cfg.r}, {"method", o.method}};
  } else {
    const double radius = o.radius > 0.0 ? o.radius : cfg.r;
    const GafParams params{single(o.L, "--L"), radius, o.eps_tail};
    sample = sample_gaf(params, o.seed);
    man.params = {{"L", params.L}, {"radius", radius}, {"r", cfg.r}, {"eps_tail", o.eps_tail},
                  {"method", o.method}};
    man.seed = o.seed;
  }
  const double threshold = cfg.min_modulus_factor * sample.tail_amplitude();
  json res;
  std::optional<CountResult> wind;
  std::optional<CountResult> roots;
  if (o.method == "winding" || o.method == "both") {
    try {
      wind = count_winding(sample, cfg);
    } catch (const UnreliableContour& e) {
      out << json{{"count", nullptr}, {"method", o.method},
                  {"diagnostics", error_json(e, e.exit_code())}}
                 .dump()
          << "\n";
      throw;
    }
    res["winding"] = winding_json(*wind, threshold);
  }
  if (o.method == "roots" || o.method == "both") {
    const RootSet rs = find_roots(sample.coeffs);
    roots = count_roots(rs, cfg);
    res["roots"] = roots_json(*roots, rs);
  }
  json j;
  j["count"] = wind ? wind->count : roots->count;
  j["method"] = o.method;
  if (wind && roots) j["agree"] = wind->count == roots->count;
  j["diagnostics"] = res;
  j["manifest"] = man.finish(json::object());
  out << j.dump() << "\n";
  return 0;
}

int cmd_rate(const Options& o, std::ostream& out) {
  Manifest man{"rate"};
  if (o.x.has_value() == o.t.has_value()) throw DomainError("exactly one of --x and --t is required");
  json j;
  j["alpha"] = o.alpha;
  j["regime"] = to_string(regime_of(o.alpha));
  double value;
  double at;
  if (o.x) {
    at = *o.x;
    const RateResult rr = rate_function(o.alpha, at);
    value = rr.value;
    j["x"] = at;
    j["value"] = jnum(value);
    j["infinite"] = std::isinf(value);
    j["branch"] = to_string(rr.branch);
    man.params = {{"alpha", o.alpha}, {"x", at}, {"numeric_check", o.numeric_check}};
  } else {
    at = *o.t;
    value = c_of_t(o.alpha, at);
    j["t"] = at;
    j["value"] = jnum(value);
    j["infinite"] = false;
    man.params = {{"alpha", o.alpha}, {"t", at}, {"numeric_check", o.numeric_check}};
  }
  if (o.numeric_check) {
    const LegendreResult lr = legendre_numeric(o.alpha, at);
    j["numeric"] = jnum(lr.value);
    j["numeric_diverged"] = lr.diverged;
    if (std::isinf(value) || lr.diverged) {
      j["diff"] = (std::isinf(value) && lr.diverged) ? json(0.0) : json(nullptr);
    } else {
      j["diff"] = std::abs(value - lr.value);
    }
  }
  j["manifest"] = man.finish(json::object());
  out << j.dump() << "\n";
  return 0;
}

int cmd_dist(const Options& o, std::ostream& out) {
  Manifest man{"dist"};
  const double r = single(o.r, "--r");
  man.params = {{"r", r}, {"eps_tv", o.eps_tv}, {"out", o.out}};
  const auto model = build_model(r, o.eps_tv);
  const Pmf p = pmf(model);
  Csv csv{"k", "prob"};
  double total = 0.0;
  for (std::size_t k = 0; k < p.values.size(); ++k) {
    csv.row(k, p.values[k]);
    total += p.values[k];
  }
  json res{{"K", model.K},
           {"tv_bound", model.tv_bound},
           {"mean", model.mean()},
           {"variance", model.variance()},
           {"expected_mean", expected_zero_count(1.0, r)},
           {"expected_variance", variance_l1(r)},
           {"pmf_sum", total}};
  write_with_manifest(o.out, csv.str(), man, res);
  out << json{{"out", o.out}, {"rows", csv.rows()}, {"K", model.K}}.dump() << "\n";
  return 0;
}

int cmd_tail(const Options& o, std::ostream& out) {
  Manifest man{"tail"};
  const double L = single(o.L, "--L");
  const double r = single(o.r, "--r");
  if (o.V.size() != 1) throw DomainError("exactly one value required for --V");
  const std::size_t V = o.V.front();
  man.params = {{"L", L},           {"r", r},           {"V", V},
                {"method", o.method}, {"trials", o.trials}, {"eps_tv", o.eps_tv},
                {"eps_tail", o.eps_tail}};
  man.seed = o.seed;
  json j;
  if (o.method == "exact" || o.method == "tilted") {
    if (L != 1.0) throw DomainError("--method " + o.method + " requires --L 1");
    const auto model = build_model_for_tail(r, o.eps_tv, V);
    if (o.method == "exact") {
      j = tail_json(tail_exact_estimate(model, V));
    } else {
      const TiltedTail tt = tail_tilted_l1(model, V, o.trials, o.seed, o.threads);
      j = tail_json(tt.estimate);
      j["tilt"] = tt.tilt;
      j["weight_mean"] = tt.weight_mean;
      j["weight_stderr"] = tt.weight_stderr;
      j["log_stderr"] = jnum(tt.log_stderr);
    }
  } else {
    j = tail_json(tail_plain_mc(L, r, V, o.trials, o.seed, mc_config(o)));
  }
  j["manifest"] = man.finish(json::object());
  out << j.dump() << "\n";
  return 0;
}

int cmd_experiment(const Options& o, std::ostream& out) {
  Manifest man{"experiment"};
  man.seed = o.seed;
  man.params["name"] = o.name;
  man.params["out"] = o.out;
  std::optional<Csv> csv;
  json res = json::object();

  if (o.name == "moments") {
    if (o.L.empty() || o.r.empty()) throw DomainError("moments requires --L and --r");
    man.params["L"] = o.L;
    man.params["r"] = o.r;
    man.params["trials"] = o.trials;
    man.params["eps_tail"] = o.eps_tail;
    csv.emplace(Csv{"L", "r", "trials", "mean", "variance", "stderr_mean", "expected_mean",
                    "resamples", "root_fallbacks", "unreliable"});
    std::uint64_t index = 0;
    for (double L : o.L) {
      for (double r : o.r) {
        const Moments m = empirical_moments(L, r, o.trials, stream_seed(o.seed, index++), mc_config(o));
        csv->row(L, r, m.trials, m.mean, m.variance, m.stderr_mean, expected_zero_count(L, r),
                 m.resamples, m.root_fallbacks, m.unreliable);
      }
    }
  } else if (o.name == "deviation") {
    if (!o.t) throw DomainError("deviation requires --t");
    const int j_min = o.j_min > 0 ? o.j_min : 4;
    const int j_max = o.j_max > 0 ? o.j_max : 10;
    man.params["alpha"] = o.alpha;
    man.params["t"] = *o.t;
    man.params["j_min"] = j_min;
    man.params["j_max"] = j_max;
    man.params["eps_tv"] = o.eps_tv;
    csv.emplace(Csv{"j", "r", "mu", "v", "upper", "lower", "K", "log_p", "c", "ratio"});
    for (const auto& row : deviation_scaling_l1(o.alpha, *o.t, j_min, j_max, o.eps_tv)) {
      csv->row(row.j, row.r, row.mu, row.v, row.upper, row.lower, row.K, row.log_p, row.c,
               row.ratio);
    }
  } else if (o.name == "overcrowding") {
    OvercrowdingConfig cfg;
    cfg.rule_constant = o.C;
    cfg.enforce_assumption = !o.no_enforce;
    cfg.epsilon_tv = o.eps_tv;
    man.params["C"] = o.C;
    man.params["enforce_assumption"] = cfg.enforce_assumption;
    man.params["eps_tv"] = o.eps_tv;
    std::vector<OvercrowdingRow> rows;
    if (!o.V.empty()) {
      const double r = single(o.r, "--r");
      std::vector<std::pair<double, std::size_t>> q;
      for (auto V : o.V) q.emplace_back(r, V);
      man.params["r"] = r;
      man.params["V"] = o.V;
      rows = overcrowding_scaling_l1(q, cfg);
    } else {
      std::vector<double> grid = o.r;
      if (grid.empty()) {
        const int j_min = o.j_min > 0 ? o.j_min : 3;
        const int j_max = o.j_max > 0 ? o.j_max : 8;
        man.params["j_min"] = j_min;
        man.params["j_max"] = j_max;
        for (int j = j_min; j <= j_max; ++j) grid.push_back(1.0 - std::ldexp(1.0, -j));
      }
      man.params["r"] = grid;
      rows = overcrowding_scaling_l1(grid, cfg);
    }
    csv.emplace(Csv{"r", "V", "K", "neg_log_p", "normalized"});
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (const auto& row : rows) {
      csv->row(row.r, row.V, row.K, row.neg_log_p, row.normalized);
      lo = std::min(lo, row.normalized);
      hi = std::max(hi, row.normalized);
    }
    res["normalized_spread"] = hi / lo;
  } else if (o.name == "certificate") {
    const double L = single(o.L, "--L");
    const double r = single(o.r, "--r");
    man.params["L"] = L;
    man.params["r"] = r;
    man.params["m"] = o.m;
    const CertificateReport rep = build_certificate(L, r, o.m, o.seed, mc_config(o));
    csv.emplace(Csv{"L", "r", "m", "rouche_margin", "worst_theta", "tail_bound", "degree",
                    "verified_count"});
    csv->row(L, r, rep.m, rep.rouche_margin, rep.worst_theta, rep.tail_bound,
             rep.coeffs.size() - 1, rep.verified_count);
  } else {
    throw DomainError("unknown experiment '" + o.name + "'");
  }
  res["rows"] = csv->rows();
  write_with_manifest(o.out, csv->str(), man, res);
  out << json{{"name", o.name}, {"out", o.out}, {"rows", csv->rows()}}.dump() << "\n";
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Zero counts of hyperbolic Gaussian analytic functions", "hypgaf"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);
  Options o;
  app.add_option("--threads", o.threads, "worker threads (0 = all cores)")
      ->envname("HYPGAF_THREADS")
      ->capture_default_str();

  const auto pos = CLI::PositiveNumber;

  auto* sample = app.add_subcommand("sample", "draw a truncated GAF and write its coefficients");
  sample->add_option("--L", o.L, "intensity L")->required()->check(pos);
  sample->add_option("--r", o.r, "certified radius in (0, 1)")->required();
  sample->add_option("--eps-tail", o.eps_tail, "tail variance budget")->capture_default_str();
  sample->add_option("--seed", o.seed)->capture_default_str();
  sample->add_option("--out", o.out, "CSV path")->required();

  auto* count = app.add_subcommand("count", "count zeros inside |z| <= r");
  auto* in = count->add_option("--in", o.in, "CSV of coefficients (n,re,im)");
  count->add_option("--L", o.L, "intensity L when sampling")->excludes(in);
  count->add_option("--r", o.r, "counting radius")->required();
  count->add_option("--radius", o.radius, "sampling radius (default --r)")->excludes(in);
  count->add_option("--eps-tail", o.eps_tail)->capture_default_str();
  count->add_option("--seed", o.seed)->capture_default_str();
  o.method = "winding";
  count->add_option("--method", o.method)
      ->check(CLI::IsMember({"winding", "roots", "both"}))
      ->capture_default_str();

  auto* rate = app.add_subcommand("rate", "rate function or tail constant");
  rate->add_option("--alpha", o.alpha)->required();
  auto* xo = rate->add_option("--x", o.x, "rate function argument");
  rate->add_option("--t", o.t, "tail constant argument")->excludes(xo);
  rate->add_flag("--numeric-check", o.numeric_check, "compare with the numeric Legendre transform");

  auto* dist = app.add_subcommand("dist", "exact law of the L = 1 count");
  dist->add_option("--r", o.r)->required();
  dist->add_option("--eps-tv", o.eps_tv)->capture_default_str();
  dist->add_option("--out", o.out)->required();

  auto* tail = app.add_subcommand("tail", "estimate P[n >= V]");
  tail->add_option("--L", o.L)->required()->check(pos);
  tail->add_option("--r", o.r)->required();
  tail->add_option("--V", o.V)->required();
  std::string tail_method = "exact";
  tail->add_option("--method", tail_method)
      ->check(CLI::IsMember({"exact", "mc", "tilted"}))
      ->capture_default_str();
  tail->add_option("--trials", o.trials)->capture_default_str();
  tail->add_option("--seed", o.seed)->capture_default_str();
  tail->add_option("--eps-tv", o.eps_tv)->capture_default_str();
  tail->add_option("--eps-tail", o.eps_tail)->capture_default_str();

  auto* exp = app.add_subcommand("experiment", "write an experiment table");
  exp->add_option("--name", o.name)
      ->required()
      ->check(CLI::IsMember({"moments", "deviation", "overcrowding", "certificate"}));
  exp->add_option("--out", o.out)->required();
  exp->add_option("--L", o.L, "one or more L values");
  exp->add_option("--r", o.r, "one or more radii");
  exp->add_option("--V", o.V, "explicit thresholds (overcrowding)");
  exp->add_option("--trials", o.trials)->capture_default_str();
  exp->add_option("--seed", o.seed)->capture_default_str();
  exp->add_option("--alpha", o.alpha)->capture_default_str();
  exp->add_option("--t", o.t);
  exp->add_option("--j-min", o.j_min);
  exp->add_option("--j-max", o.j_max);
  exp->add_option("--eps-tv", o.eps_tv)->capture_default_str();
  exp->add_option("--eps-tail", o.eps_tail)->capture_default_str();
  exp->add_option("--C", o.C, "threshold rule constant")->capture_default_str();
  exp->add_flag("--no-enforce", o.no_enforce, "allow V below the threshold rule");
  exp->add_option("--m", o.m, "certificate target count");

  std::vector<const char*> argv{"hypgaf"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << error_json(e, 2).dump() << "\n";
    return 2;
  }

  try {
    if (*sample) return cmd_sample(o, out);
    if (*count) return cmd_count(o, out);
    if (*rate) return cmd_rate(o, out);
    if (*dist) return cmd_dist(o, out);
    if (*tail) {
      o.method = tail_method;
      return cmd_tail(o, out);
    }
    if (*exp) return cmd_experiment(o, out);
  } catch (const Error& e) {
    err << error_json(e, e.exit_code()).dump() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    err << error_json(e, 1).dump() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace hypgaf::cli

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "sievesdp/builders.hpp"
#include "sievesdp/certificate.hpp"
#include "sievesdp/config.hpp"
#include "sievesdp/json_io.hpp"
#include "sievesdp/oracle.hpp"
#include "sievesdp/solver.hpp"

using namespace sievesdp;

namespace {

enum Exit { kOk = 0, kFailed = 1, kUsage = 2, kResource = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  int threads = 0;
  std::uint64_t seed = 7;
  bool json = false;
  std::string manifest;
};

struct Manifest {
  std::string command;
  Json inputs = Json::object();
  Json result = Json::object();
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
};

Manifest g_manifest;

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
  return buf;
}

std::string load(const std::string& path) {
  std::string text = read_file(path);
  g_manifest.inputs[path] = hex64(fnv1a64(text));
  return text;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

std::string fmt(const Scalar& s) {
  if (s.is_exact()) {
    const Rational q = s.to_rational();
    std::string out = format_rational(q);
    if (q.get_den() != 1) out += " (~" + fmt(q.get_d()) + ")";
    return out;
  }
  return fmt(s.to_double());
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  return s.substr(a, s.find_last_not_of(" \t") - a + 1);
}

std::int64_t to_int(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UsageError("bad integer '" + s + "' in " + what);
  }
}

std::vector<std::int64_t> int_list(const std::string& s, const std::string& what) {
  std::vector<std::int64_t> out;
  if (trim(s).empty()) return out;
  for (const auto& t : split(s, ',')) out.push_back(to_int(trim(t), what));
  return out;
}

/// "2=1,3=2"
std::map<std::int64_t, int> kappa_map(const std::string& s) {
  std::map<std::int64_t, int> out;
  if (trim(s).empty()) return out;
  for (const auto& item : split(s, ',')) {
    const auto kv = split(item, '=');
    if (kv.size() != 2) throw UsageError("expected p=k in --kappa, got '" + item + "'");
    out[to_int(trim(kv[0]), "--kappa")] = static_cast<int>(to_int(trim(kv[1]), "--kappa"));
  }
  return out;
}

struct TermSets {
  std::vector<PartitionSet> sets;
  bool b0 = false;
};

/// Sets separated by '|', names by ','. "1" (or nothing) is the empty set and
/// "0" the B0 marker.
TermSets term_sets(const SiftingProblem& problem, const std::string& s, bool allow_b0) {
  TermSets out;
  if (trim(s).empty()) return out;
  for (const auto& raw : split(s, '|')) {
    const std::string item = trim(raw);
    if (item == "0") {
      if (!allow_b0) throw UsageError("the B0 marker 0 is only valid in --ds");
      out.b0 = true;
      continue;
    }
    if (item == "1" || item.empty()) {
      out.sets.push_back(PartitionSet{});
      continue;
    }
    std::vector<std::string> names;
    for (const auto& n : split(item, ',')) names.push_back(trim(n));
    out.sets.push_back(problem.resolve(names));
  }
  return out;
}

/// "2=0;3=0,1": part indices per partition (residues for interval problems).
ClassChoice class_choice(const SiftingProblem& problem, const std::string& s) {
  ClassChoice out;
  for (const auto& raw : split(s, ';')) {
    const std::string item = trim(raw);
    if (item.empty()) continue;
    const auto kv = split(item, '=');
    if (kv.size() != 2) throw UsageError("expected name=part[,part] in --avoid, got '" + item + "'");
    const auto p = problem.find(trim(kv[0]));
    if (!p) throw SieveError(ErrorCode::UnknownPartition, "no partition named '" + trim(kv[0]) + "'");
    std::vector<std::size_t> parts;
    for (auto v : int_list(kv[1], "--avoid")) {
      if (v < 0) throw UsageError("negative part index in --avoid");
      parts.push_back(static_cast<std::size_t>(v));
    }
    out[*p] = parts;
  }
  return out;
}

SiftingProblem load_problem(const std::string& path) { return parse_problem(load(path)); }

void write_cert(const std::string& path, const SiftingProblem& problem, const Certificate& cert) {
  write_file(path, serialize(problem, cert));
}

void write_problem(const std::string& path, const SiftingProblem& problem) {
  write_file(path, problem_to_json(problem).dump(2) + "\n");
}

std::string default_problem_path(const std::string& cert_path) {
  std::filesystem::path p(cert_path);
  return (p.parent_path() / (p.stem().string() + ".problem.json")).string();
}

Json report_json(const VerificationReport& rep) {
  Json j;
  j["status"] = std::string(to_string(rep.status));
  j["exact"] = rep.exact;
  j["effective_bound"] = scalar_to_json(rep.effective_bound);
  j["slack"] = rep.slack;
  j["cone_slack"] = rep.cone_slack;
  j["residual_min_eig"] = rep.residual_min_eig;
  j["residual_zero"] = rep.residual_zero;
  Json f = Json::array();
  for (const auto& x : rep.failures) f.push_back({{"kind", std::string(to_string(x.kind))}, {"message", x.message}});
  j["failures"] = f;
  return j;
}

void print(const Globals& g, const Json& j, const std::string& text) {
  if (g.json) {
    std::cout << j.dump() << "\n";
  } else {
    std::cout << text;
  }
}

// ---- build ----

struct BuildArgs {
  std::size_t N = 0;
  std::string primes, kappa, shape, out, problem_out, delta_inv;
  std::int64_t Q = 0;
};

int finish_build(const Globals& g, const BuildArgs& a, const SiftingProblem& problem, const Certificate& cert,
                 Json extra) {
  const auto rep = verify(problem, cert, VerifyOptions{1e-9, cert.is_exact(), 1'000'000, Exec::Parallel});
  Json j = std::move(extra);
  j["lambda"] = scalar_to_json(cert.lambda);
  j["verification"] = report_json(rep);
  std::string text = "lambda = " + fmt(cert.lambda) + "\nverify: " + std::string(to_string(rep.status)) +
                     (rep.exact ? " (exact)" : "") + ", effective bound " + fmt(rep.effective_bound) + "\n";
  if (!a.out.empty()) {
    const std::string ppath = a.problem_out.empty() ? default_problem_path(a.out) : a.problem_out;
    write_cert(a.out, problem, cert);
    write_problem(ppath, problem);
    j["certificate"] = a.out;
    j["problem"] = ppath;
    text += "wrote " + a.out + " and " + ppath + "\n";
  }
  g_manifest.result = {{"lambda", scalar_to_json(cert.lambda)},
                       {"status", std::string(to_string(rep.status))}};
  print(g, j, text);
  return rep.verified() ? kOk : kFailed;
}

int cmd_build_large(const Globals& g, const BuildArgs& a) {
  LargeSieveSpec spec;
  spec.N = a.N;
  spec.primes = int_list(a.primes, "--primes");
  spec.kappa = kappa_map(a.kappa);
  if (a.Q > 0) spec.Q = a.Q;
  if (!a.delta_inv.empty()) spec.delta_inv = parse_rational(a.delta_inv);
  LargeSieveInfo info;
  Built b = build_large_sieve(spec, &info);
  Json j;
  j["Q"] = info.Q;
  j["delta_inv"] = format_rational(info.delta_inv);
  j["sigma"] = format_rational(info.sigma);
  Json ds = Json::array();
  for (auto d : info.D) ds.push_back(subset_to_json(b.problem, d));
  j["D"] = ds;
  return finish_build(g, a, b.problem, b.cert, j);
}

int cmd_build_larger(const Globals& g, const BuildArgs& a) {
  Built b = build_larger_sieve(a.N, int_list(a.primes, "--primes"), kappa_map(a.kappa));
  return finish_build(g, a, b.problem, b.cert, Json::object());
}

int cmd_build_orthogonal(const Globals& g, const BuildArgs& a) {
  std::vector<std::size_t> shape;
  for (auto v : int_list(a.shape, "--shape")) {
    if (v < 1) throw UsageError("shape entries must be positive");
    shape.push_back(static_cast<std::size_t>(v));
  }
  Built b = build_orthogonal(shape);
  return finish_build(g, a, b.problem, b.cert, Json::object());
}

// ---- solve ----

struct SolveArgs {
  std::string problem, ds, df, out;
  bool free_b1 = false, b0 = false;
  double gap = 1e-4, feas = 1e-4;
  int max_outer = 60, max_inner = 4000;
  std::uint64_t selection_limit = 100'000;
};

Json trace_json(const SolveResult& r) {
  Json t = Json::array();
  for (const auto& s : r.trace) {
    t.push_back({{"lambda", s.lambda}, {"feasible", s.feasible}, {"achieved", s.achieved}, {"sweeps", s.sweeps}});
  }
  return t;
}

int cmd_solve(const Globals& g, const SolveArgs& a) {
  const SiftingProblem problem = load_problem(a.problem);
  TermSets ds = term_sets(problem, a.ds, true);
  TermSets df = term_sets(problem, a.df, false);
  if (a.free_b1) ds.sets.push_back(PartitionSet{});
  if (a.b0) ds.b0 = true;
  SolveOptions opts;
  opts.gap_tol = a.gap;
  opts.feas_tol = a.feas;
  opts.max_outer = a.max_outer;
  opts.max_inner = a.max_inner;
  opts.seed = g.seed;
  opts.selection_limit = a.selection_limit;
  const SolveResult r = solve(problem, ds.sets, df.sets, ds.b0, opts);
  Json j;
  j["lambda_hat"] = r.lambda_hat;
  j["status"] = std::string(to_string(r.status));
  j["interval"] = {r.lo, r.hi};
  j["trace"] = trace_json(r);
  j["verification"] = report_json(r.report);
  std::string text = "lambda_hat = " + fmt(r.lambda_hat) + "\nstatus: " + std::string(to_string(r.status)) +
                     " (bisection interval [" + fmt(r.lo) + ", " + fmt(r.hi) + "], " +
                     std::to_string(r.trace.size()) + " steps)\nverify: " +
                     std::string(to_string(r.report.status)) + "\n";
  if (!a.out.empty()) {
    write_cert(a.out, problem, r.cert);
    j["certificate"] = a.out;
    text += "wrote " + a.out + "\n";
  }
  g_manifest.result = {{"lambda_hat", r.lambda_hat}, {"status", std::string(to_string(r.status))}};
  print(g, j, text);
  return r.report.verified() ? kOk : kFailed;
}

// ---- verify ----

struct VerifyArgs {
  std::string problem, cert;
  double tol = 1e-9;
  bool exact = false;
  std::uint64_t selection_limit = 1'000'000;
};

int cmd_verify(const Globals& g, const VerifyArgs& a) {
  const SiftingProblem problem = load_problem(a.problem);
  const Certificate cert = parse_certificate(problem, load(a.cert));
  VerifyOptions o;
  o.tol = a.tol;
  o.exact = a.exact;
  o.selection_limit = a.selection_limit;
  const auto rep = verify(problem, cert, o);
  std::string text = std::string(to_string(rep.status)) + (rep.exact ? " (exact)" : "") + "\nlambda_eff = " +
                     fmt(rep.effective_bound) + "\n";
  if (!rep.exact) text += "slack = " + fmt(rep.slack) + ", cone slack = " + fmt(rep.cone_slack) + "\n";
  for (const auto& t : rep.terms) {
    text += "  term {" + subset_key(problem, t.d) + "}: " + std::string(to_string(t.verdict)) + ", " +
            std::to_string(t.selection_count) + " selections" + (t.via_symmetric ? " (symmetric check)" : "") +
            "\n";
  }
  for (const auto& f : rep.failures) text += "  failure " + std::string(to_string(f.kind)) + ": " + f.message + "\n";
  g_manifest.result = {{"status", std::string(to_string(rep.status))},
                       {"effective_bound", scalar_to_json(rep.effective_bound)}};
  print(g, report_json(rep), text);
  return rep.verified() ? kOk : kFailed;
}

// ---- oracle ----

std::string labels_of(const SiftingProblem& problem, const std::vector<std::size_t>& idx) {
  std::string s = "{";
  for (std::size_t i = 0; i < idx.size(); ++i) {
    s += (i ? "," : "") + std::to_string(problem.labels()[idx[i]]);
  }
  return s + "}";
}

Json sifted_json(const SiftingProblem& problem, const SiftedSet& s) {
  Json j;
  j["size"] = s.size;
  Json el = Json::array();
  for (auto i : s.elements) el.push_back(problem.labels()[i]);
  j["witness"] = el;
  Json av = Json::object();
  for (std::size_t p = 0; p < problem.partition_count(); ++p) av[problem.partition(p).name] = s.avoided[p];
  j["avoided"] = av;
  return j;
}

int cmd_oracle(const Globals& g, const std::string& path, std::size_t guard) {
  const SiftingProblem problem = load_problem(path);
  const SiftedSet s = max_sifted(problem, guard);
  std::string text = "max sifted size = " + std::to_string(s.size) + "\nwitness " + labels_of(problem, s.elements) + "\n";
  g_manifest.result = {{"size", s.size}};
  print(g, sifted_json(problem, s), text);
  return kOk;
}

// ---- linear ----

struct LinearArgs {
  std::string problem, weights, avoid;
  bool maximize = false;
  std::uint64_t guard = 1'000'000;
};

int cmd_linear_check(const Globals& g, const LinearArgs& a) {
  const SiftingProblem problem = load_problem(a.problem);
  const LinearWeights lw = linear_weights_from_json(problem, Json::parse(load(a.weights)));
  const LinearCheck c = check_linear_weights(problem, lw);
  Json j;
  j["satisfied"] = c.satisfied;
  j["lambda_one_ok"] = c.lambda_one_ok;
  std::string text;
  if (c.satisfied) {
    text = "Satisfied\n";
  } else if (c.violated) {
    j["violated"] = subset_to_json(problem, *c.violated);
    j["value"] = format_rational(c.value);
    text = "Violated at k = {" + subset_key(problem, *c.violated) + "} (sum = " + format_rational(c.value) + ")\n";
  } else {
    text = "Violated: lambda_1 < 1\n";
  }
  g_manifest.result = {{"satisfied", c.satisfied}};
  print(g, j, text);
  return c.satisfied ? kOk : kFailed;
}

int cmd_linear_bound(const Globals& g, const LinearArgs& a) {
  const SiftingProblem problem = load_problem(a.problem);
  const LinearWeights lw = linear_weights_from_json(problem, Json::parse(load(a.weights)));
  Json j;
  std::string text;
  if (a.maximize) {
    const LinearMax m = linear_bound_max(problem, lw, a.guard);
    j["bound"] = format_rational(m.bound);
    Json ch = Json::object();
    for (const auto& [p, parts] : m.choice) ch[problem.partition(p).name] = parts;
    j["choice"] = ch;
    text = "worst-case bound = " + fmt(Scalar(m.bound)) + "\n";
    g_manifest.result = {{"bound", format_rational(m.bound)}};
  } else {
    if (trim(a.avoid).empty()) throw UsageError("linear bound needs --avoid or --maximize-over-classes");
    const ClassChoice choice = class_choice(problem, a.avoid);
    const Rational b = linear_bound(problem, lw, choice);
    j["bound"] = format_rational(b);
    text = "bound = " + fmt(Scalar(b)) + "\n";
    if (problem.size() <= kDefaultGuard) {
      const std::size_t exact = max_sifted_avoiding(problem, choice);
      j["exact"] = exact;
      text += "largest set avoiding these parts = " + std::to_string(exact) + "\n";
    }
    g_manifest.result = {{"bound", format_rational(b)}};
  }
  print(g, j, text);
  return kOk;
}

// ---- compare / admissible ----

struct IntervalShape {
  std::size_t N = 0;
  std::vector<std::int64_t> primes;
  std::map<std::int64_t, int> kappa;
};

IntervalShape interval_shape(const SiftingProblem& problem) {
  if (!problem.is_interval()) throw SieveError(ErrorCode::NotAnInterval, "method needs an interval problem");
  IntervalShape s;
  s.N = *problem.interval_length();
  for (std::size_t p = 0; p < problem.partition_count(); ++p) {
    std::int64_t m = 0;
    try {
      m = to_int(problem.partition(p).name, "partition name");
    } catch (const UsageError&) {
      throw SieveError(ErrorCode::NotAnInterval, "partition names must be moduli");
    }
    s.primes.push_back(m);
    s.kappa[m] = problem.kappa(p);
  }
  if (problem_to_json(interval_problem(s.N, s.primes, s.kappa)) != problem_to_json(problem)) {
    throw SieveError(ErrorCode::NotAnInterval, "partitions are not residue classes of their names");
  }
  return s;
}

std::int64_t default_q(const SiftingProblem& problem) {
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::sqrt(static_cast<double>(problem.size()))));
}

struct Row {
  std::string method;
  std::string bound;
  double value = 0;
  std::string status;
  double ms = 0;
  std::optional<Certificate> cert;
  Json extra = Json::object();
};

Row run_method(const std::string& method, const SiftingProblem& problem, std::int64_t Q, const std::string& weights,
               std::uint64_t seed) {
  Row row;
  row.method = method;
  const auto t0 = std::chrono::steady_clock::now();
  auto finish_cert = [&](const Certificate& cert) {
    const auto rep = verify(problem, cert, VerifyOptions{1e-9, cert.is_exact(), 1'000'000, Exec::Parallel});
    row.value = rep.effective_bound.to_double();
    row.bound = fmt(rep.effective_bound);
    row.status = std::string(to_string(rep.status));
    row.cert = cert;
  };
  try {
    if (method == "large-sieve") {
      const IntervalShape s = interval_shape(problem);
      LargeSieveSpec spec{s.N, s.primes, s.kappa, std::nullopt, Q, std::nullopt};
      finish_cert(build_large_sieve(spec).cert);
    } else if (method == "larger-sieve") {
      const IntervalShape s = interval_shape(problem);
      finish_cert(build_larger_sieve(s.N, s.primes, s.kappa).cert);
    } else if (method == "symmetric") {
      std::vector<PartitionSet> df;
      if (problem.is_interval()) {
        const IntervalShape s = interval_shape(problem);
        df = products_up_to(s.primes, Q);
      } else {
        for (std::uint64_t m = 0; m < (std::uint64_t{1} << problem.partition_count()); ++m) {
          df.push_back(PartitionSet::from_mask(m));
        }
      }
      SolveOptions o;
      o.seed = seed;
      const auto r = solve_symmetric(problem, df, true, o);
      finish_cert(r.cert);
      row.extra["solver_status"] = std::string(to_string(r.status));
    } else if (method == "solver") {
      SolveOptions o;
      o.seed = seed;
      std::vector<PartitionSet> ds{problem.all()};
      if (!SelectionEnumerator(problem, problem.all(), o.selection_limit).within_limit()) {
        ds.clear();
        for (std::size_t p = 0; p < problem.partition_count(); ++p) ds.push_back(PartitionSet::singleton(p));
      }
      const auto r = solve(problem, ds, {}, false, o);
      finish_cert(r.cert);
      row.extra["solver_status"] = std::string(to_string(r.status));
    } else if (method == "oracle") {
      const SiftedSet s = max_sifted(problem);
      row.value = static_cast<double>(s.size);
      row.bound = std::to_string(s.size);
      row.status = "exact";
      row.extra = sifted_json(problem, s);
    } else if (method == "linear") {
      LinearWeights lw = weights.empty() ? inclusion_exclusion_weights(problem)
                                         : linear_weights_from_json(problem, Json::parse(load(weights)));
      const LinearMax m = linear_bound_max(problem, lw);
      row.value = m.bound.get_d();
      row.bound = fmt(Scalar(m.bound));
      row.status = "Satisfied";
    } else {
      throw UsageError("unknown method '" + method + "'");
    }
  } catch (const SieveError& e) {
    row.status = std::string(to_string(e.code()));
    row.bound = "-";
    row.extra["error"] = e.what();
  }
  row.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

std::string table(const std::vector<Row>& rows) {
  std::ostringstream os;
  os << std::left << std::setw(14) << "method" << std::setw(26) << "bound" << std::setw(22) << "status"
     << "time_ms\n";
  for (const auto& r : rows) {
    os << std::left << std::setw(14) << r.method << std::setw(26) << r.bound << std::setw(22) << r.status
       << std::fixed << std::setprecision(1) << r.ms << "\n";
    os.unsetf(std::ios::floatfield);
  }
  return os.str();
}

Json rows_json(const std::vector<Row>& rows) {
  Json j = Json::array();
  for (const auto& r : rows) {
    Json x = r.extra;
    x["method"] = r.method;
    x["bound"] = r.bound;
    x["value"] = r.value;
    x["status"] = r.status;
    x["time_ms"] = r.ms;
    j.push_back(x);
  }
  return j;
}

void write_row_certs(const std::vector<Row>& rows, const SiftingProblem& problem, const std::string& dir) {
  if (dir.empty()) return;
  std::filesystem::create_directories(dir);
  write_problem((std::filesystem::path(dir) / "problem.json").string(), problem);
  for (const auto& r : rows) {
    if (r.cert) write_cert((std::filesystem::path(dir) / (r.method + ".json")).string(), problem, *r.cert);
  }
}

struct CompareArgs {
  std::string problem, methods = "large-sieve,larger-sieve,symmetric,solver,oracle,linear", weights, cert_dir;
  std::int64_t Q = 0;
};

int cmd_compare(const Globals& g, const CompareArgs& a) {
  const SiftingProblem problem = load_problem(a.problem);
  const std::int64_t Q = a.Q > 0 ? a.Q : default_q(problem);
  std::vector<Row> rows;
  for (const auto& m : split(a.methods, ',')) rows.push_back(run_method(trim(m), problem, Q, a.weights, g.seed));
  write_row_certs(rows, problem, a.cert_dir);
  Json summary = Json::object();
  for (const auto& r : rows) summary[r.method] = r.bound;
  g_manifest.result = summary;
  print(g, rows_json(rows), table(rows));
  return kOk;
}

struct AdmissibleArgs {
  std::size_t N = 0;
  std::int64_t primes_upto = 0;
  std::string primes, method = "oracle", out;
  std::int64_t Q = 0;
};

std::vector<std::int64_t> primes_upto(std::int64_t n) {
  std::vector<std::int64_t> out;
  for (std::int64_t p = 2; p <= n; ++p) {
    bool prime = true;
    for (std::int64_t q = 2; q * q <= p; ++q) {
      if (p % q == 0) {
        prime = false;
        break;
      }
    }
    if (prime) out.push_back(p);
  }
  return out;
}

int cmd_admissible(const Globals& g, const AdmissibleArgs& a) {
  if (a.N == 0) throw UsageError("--N must be positive");
  check_dim(a.N, "admissible");
  std::vector<std::int64_t> ps = !a.primes.empty() ? int_list(a.primes, "--primes")
                                                   : primes_upto(a.primes_upto > 0 ? a.primes_upto
                                                                                   : static_cast<std::int64_t>(a.N));
  const SiftingProblem problem = interval_problem(a.N, ps);
  const std::int64_t Q = a.Q > 0 ? a.Q : default_q(problem);
  const Row row = run_method(a.method, problem, Q, "", g.seed);
  Json j = row.extra;
  j["N"] = a.N;
  j["primes"] = ps;
  j["method"] = row.method;
  j["bound"] = row.bound;
  j["status"] = row.status;
  std::string text = "admissible tuples in [0, " + std::to_string(a.N) + ") avoiding a class mod each of " +
                     std::to_string(ps.size()) + " primes\n" + row.method + ": " + row.bound + " (" + row.status + ")\n";
  if (row.extra.contains("witness")) text += "witness " + row.extra["witness"].dump() + "\n";
  if (!a.out.empty() && row.cert) {
    write_cert(a.out, problem, *row.cert);
    write_problem(default_problem_path(a.out), problem);
    text += "wrote " + a.out + "\n";
  }
  g_manifest.result = {{"bound", row.bound}, {"status", row.status}};
  print(g, j, text);
  if (row.extra.contains("error")) {
    const std::string st = row.status;
    if (st == "ResourceLimit" || st == "GuardExceeded" || st == "LimitExceeded" || st == "TooManyPartitions") {
      return kResource;
    }
    return kFailed;
  }
  return row.status == "Failed" ? kFailed : kOk;
}

int exit_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::ResourceLimit:
    case ErrorCode::GuardExceeded:
    case ErrorCode::LimitExceeded:
    case ErrorCode::TooManyPartitions:
      return kResource;
    case ErrorCode::InvalidArgument:
      return kUsage;
    default:
      return kFailed;
  }
}

void emit_manifest(const Globals& g, int code) {
  Json m;
  m["command"] = g_manifest.command;
  m["version"] = kVersion;
  m["seed"] = g.seed;
  m["threads"] = thread_count();
  m["inputs"] = g_manifest.inputs;
  m["elapsed_ms"] =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - g_manifest.start).count();
  m["exit_code"] = code;
  m["result"] = g_manifest.result;
  if (g.manifest.empty()) {
    std::cerr << m.dump() << "\n";
  } else {
    try {
      write_file(g.manifest, m.dump(2) + "\n");
    } catch (const std::exception& e) {
      std::cerr << "cannot write manifest: " << e.what() << "\n";
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 0; i < argc; ++i) g_manifest.command += (i ? " " : "") + std::string(argv[i]);

  CLI::App app{"Sifting bounds from semidefinite certificates"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  Globals g;
  app.add_option("--threads", g.threads, "OpenMP threads (0 = runtime default)");
  app.add_option("--seed", g.seed, "Seed recorded in the manifest and passed to randomized components");
  app.add_flag("--json", g.json, "Machine-readable JSON on stdout");
  app.add_option("--manifest", g.manifest, "Write the run manifest here instead of stderr");

  std::function<int()> action;

  auto* build = app.add_subcommand("build", "Construct a certificate");
  build->require_subcommand(1);
  BuildArgs ba;
  auto* ls = build->add_subcommand("large-sieve", "Large Sieve weights on an interval");
  ls->add_option("--N", ba.N, "Interval length")->required();
  ls->add_option("--primes", ba.primes, "Comma-separated primes")->required();
  ls->add_option("--Q", ba.Q, "Use every squarefree d with prod p <= Q");
  ls->add_option("--kappa", ba.kappa, "p=k,... (default 1)");
  ls->add_option("--delta-inv", ba.delta_inv, "Override delta^-1 (rational)");
  ls->add_option("-o,--out", ba.out, "Certificate output");
  ls->add_option("--problem-out", ba.problem_out, "Problem output (default <out>.problem.json)");
  ls->callback([&] { action = [&] { return cmd_build_large(g, ba); }; });
  auto* lr = build->add_subcommand("larger-sieve", "Larger Sieve certificate with a nonnegative B0");
  lr->add_option("--N", ba.N, "Interval length")->required();
  lr->add_option("--primes", ba.primes, "Comma-separated primes")->required();
  lr->add_option("--kappa", ba.kappa, "p=k,... (default 1)");
  lr->add_option("-o,--out", ba.out, "Certificate output");
  lr->add_option("--problem-out", ba.problem_out, "Problem output (default <out>.problem.json)");
  lr->callback([&] { action = [&] { return cmd_build_larger(g, ba); }; });
  auto* orth = build->add_subcommand("orthogonal", "Exact certificate for a product of cyclic groups");
  orth->add_option("--shape", ba.shape, "Comma-separated part counts, e.g. 3,5")->required();
  orth->add_option("-o,--out", ba.out, "Certificate output");
  orth->add_option("--problem-out", ba.problem_out, "Problem output (default <out>.problem.json)");
  orth->callback([&] { action = [&] { return cmd_build_orthogonal(g, ba); }; });

  SolveArgs sa;
  auto* sol = app.add_subcommand("solve", "Numerically optimize a relaxation");
  sol->add_option("problem", sa.problem, "Problem JSON")->required();
  sol->add_option("--ds", sa.ds, "Cone terms: sets separated by '|', names by ','; 1 = empty set, 0 = B0");
  sol->add_option("--df", sa.df, "Symmetric-class terms, same syntax");
  sol->add_flag("--free-b1", sa.free_b1, "Add a free PSD matrix for the empty set");
  sol->add_flag("--b0", sa.b0, "Add an entrywise nonnegative B0");
  sol->add_option("--out", sa.out, "Certificate output");
  sol->add_option("--gap", sa.gap, "Bisection gap tolerance");
  sol->add_option("--feas", sa.feas, "Feasibility tolerance");
  sol->add_option("--max-outer", sa.max_outer, "Bisection steps");
  sol->add_option("--max-inner", sa.max_inner, "Splitting iterations per step");
  sol->add_option("--selection-limit", sa.selection_limit, "Cap on selections per cone term");
  sol->callback([&] { action = [&] { return cmd_solve(g, sa); }; });

  VerifyArgs va;
  auto* ver = app.add_subcommand("verify", "Check a certificate");
  ver->add_option("problem", va.problem, "Problem JSON")->required();
  ver->add_option("cert", va.cert, "Certificate JSON")->required();
  ver->add_option("--tol", va.tol, "Float tolerance");
  ver->add_flag("--exact", va.exact, "Exact rational verification");
  ver->add_option("--selection-limit", va.selection_limit, "Cap on enumerated selections");
  ver->callback([&] { action = [&] { return cmd_verify(g, va); }; });

  std::string oracle_path;
  std::size_t guard = kDefaultGuard;
  auto* ora = app.add_subcommand("oracle", "Exact maximum sifted set");
  ora->add_option("problem", oracle_path, "Problem JSON")->required();
  ora->add_option("--guard", guard, "Largest |Z| to search");
  ora->callback([&] { action = [&] { return cmd_oracle(g, oracle_path, guard); }; });

  LinearArgs la;
  auto* lin = app.add_subcommand("linear", "Linear sieve weights");
  lin->require_subcommand(1);
  auto* lc = lin->add_subcommand("check", "Check the weight inequalities");
  lc->add_option("problem", la.problem, "Problem JSON")->required();
  lc->add_option("weights", la.weights, "Weights JSON")->required();
  lc->callback([&] { action = [&] { return cmd_linear_check(g, la); }; });
  auto* lb = lin->add_subcommand("bound", "Evaluate the bound for a class choice");
  lb->add_option("problem", la.problem, "Problem JSON")->required();
  lb->add_option("weights", la.weights, "Weights JSON")->required();
  lb->add_option("--avoid", la.avoid, "name=part[,part];... (residues for interval problems)");
  lb->add_flag("--maximize-over-classes", la.maximize, "Worst case over every class choice");
  lb->add_option("--guard", la.guard, "Cap on class choices");
  lb->callback([&] { action = [&] { return cmd_linear_bound(g, la); }; });

  CompareArgs ca;
  auto* cmp = app.add_subcommand("compare", "Run several methods on one problem");
  cmp->add_option("problem", ca.problem, "Problem JSON")->required();
  cmp->add_option("--methods", ca.methods, "Comma-separated subset of " + ca.methods);
  cmp->add_option("--Q", ca.Q, "Level for the sieve weights (default floor(sqrt |Z|))");
  cmp->add_option("--weights", ca.weights, "Linear weights JSON (default inclusion-exclusion)");
  cmp->add_option("--cert-dir", ca.cert_dir, "Write every certificate here");
  cmp->callback([&] { action = [&] { return cmd_compare(g, ca); }; });

  AdmissibleArgs aa;
  auto* adm = app.add_subcommand("admissible", "Bound the largest admissible tuple in [0, N)");
  adm->add_option("--N", aa.N, "Interval length")->required();
  adm->add_option("--primes-upto", aa.primes_upto, "Use every prime up to this (default N)");
  adm->add_option("--primes", aa.primes, "Explicit comma-separated primes");
  adm->add_option("--method", aa.method, "oracle, large-sieve, larger-sieve, symmetric or solver");
  adm->add_option("--Q", aa.Q, "Level for the sieve weights");
  adm->add_option("--out", aa.out, "Certificate output");
  adm->callback([&] { action = [&] { return cmd_admissible(g, aa); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  int code = kOk;
  try {
    if (g.threads < 0) throw UsageError("--threads must be nonnegative");
    if (g.threads > 0) set_threads(g.threads);
    code = action();
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    code = kUsage;
  } catch (const SieveError& e) {
    std::cerr << "error: " << e.what() << "\n";
    code = exit_for(e.code());
  } catch (const Json::exception& e) {
    std::cerr << "error: MalformedInput: " << e.what() << "\n";
    code = kFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    code = kFailed;
  }
  emit_manifest(g, code);
  return code;
}

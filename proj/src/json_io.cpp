#include "sievesdp/json_io.hpp"

#include <fstream>
#include <sstream>

namespace sievesdp {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SieveError(ErrorCode::MalformedInput, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SieveError(ErrorCode::InvalidArgument, "cannot write '" + path + "'");
  out << contents;
}

namespace {

[[noreturn]] void fail(ErrorCode code, const std::string& where, const std::string& what) {
  throw SieveError(code, where + ": " + what);
}

const Json& field(const Json& j, const char* key, ErrorCode code, const std::string& where) {
  if (!j.is_object()) fail(code, where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(code, where, std::string("missing field '") + key + "'");
  return *it;
}

std::int64_t as_int(const Json& j, ErrorCode code, const std::string& where) {
  if (!j.is_number_integer()) fail(code, where, "expected an integer");
  return j.get<std::int64_t>();
}

std::size_t as_index(const Json& j, ErrorCode code, const std::string& where) {
  const auto v = as_int(j, code, where);
  if (v < 0) fail(code, where, "expected a nonnegative integer");
  return static_cast<std::size_t>(v);
}

Json parse_text(std::string_view text, ErrorCode code, const std::string& what) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < std::min<std::size_t>(e.byte, text.size()); ++i) line += text[i] == '\n';
    fail(code, what, "parse error at line " + std::to_string(line) + " (byte " + std::to_string(e.byte) + ")");
  }
}

Rational rational_entry(const Json& j, ErrorCode code, const std::string& where) {
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const SieveError& e) {
      fail(code, where, e.what());
    }
  }
  if (j.is_number_integer()) return Rational(Integer(std::to_string(j.get<std::int64_t>())));
  fail(code, where, "expected a rational string or integer");
}

double float_entry(const Json& j, ErrorCode code, const std::string& where) {
  if (!j.is_number()) fail(code, where, "expected a number");
  return j.get<double>();
}

template <class T, class Read>
SymMatrix<T> read_rows(const Json& rows, std::size_t n, ErrorCode code, const std::string& where, Read&& read) {
  if (!rows.is_array() || rows.size() != n) fail(code, where, "rows must be an array of length dim");
  SymMatrix<T> m(n);
  bool full = n > 0 && rows[0].size() == n && n > 1;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = rows[i];
    const std::string at = where + ".rows[" + std::to_string(i) + "]";
    if (!row.is_array()) fail(code, at, "expected an array");
    if (full && row.size() != n) fail(code, at, "inconsistent row lengths");
    if (!full && row.size() != i + 1) fail(code, at, "lower-triangular row must have " + std::to_string(i + 1) + " entries");
    for (std::size_t j = 0; j <= i; ++j) m.at(i, j) = read(row[j], at + "[" + std::to_string(j) + "]");
  }
  if (full) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const std::string at = where + ".rows[" + std::to_string(i) + "][" + std::to_string(j) + "]";
        if (!(read(rows[i][j], at) == m(i, j))) fail(code, at, "matrix is not symmetric");
      }
    }
  }
  return m;
}

AnyMatrix matrix_from(const Json& j, const std::string& where, ErrorCode code) {
  const std::size_t n = as_index(field(j, "dim", code, where), code, where + ".dim");
  const Json& mode = field(j, "mode", code, where);
  const Json& rows = field(j, "rows", code, where);
  if (mode == "float") {
    return read_rows<double>(rows, n, code, where,
                             [&](const Json& e, const std::string& at) { return float_entry(e, code, at); });
  }
  if (mode == "rational") {
    return read_rows<Rational>(rows, n, code, where,
                               [&](const Json& e, const std::string& at) { return rational_entry(e, code, at); });
  }
  fail(code, where + ".mode", "expected \"float\" or \"rational\"");
}

Scalar scalar_from(const Json& j, ErrorCode code, const std::string& where) {
  if (j.is_number_float()) return Scalar(j.get<double>());
  return Scalar(rational_entry(j, code, where));
}

PartitionSet subset_from(const SiftingProblem& problem, const Json& j, ErrorCode code, const std::string& where) {
  if (!j.is_array()) fail(code, where, "expected an array of partition names");
  PartitionSet d;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_string()) fail(code, where, "partition names must be strings");
    auto p = problem.find(j[i].get<std::string>());
    if (!p) fail(code, where, "unknown partition '" + j[i].get<std::string>() + "'");
    d = d.with(*p);
  }
  return d;
}

}  // namespace

Json problem_to_json(const SiftingProblem& problem) {
  Json j;
  if (problem.is_interval()) {
    j["universe"] = {{"interval", *problem.interval_length()}};
  } else {
    j["universe"] = {{"elements", problem.labels()}};
  }
  Json parts = Json::array();
  Json kappa = Json::object();
  for (std::size_t p = 0; p < problem.partition_count(); ++p) {
    parts.push_back({{"name", problem.partition(p).name}, {"parts", problem.partition(p).parts}});
    kappa[problem.partition(p).name] = problem.kappa(p);
  }
  j["partitions"] = parts;
  j["kappa"] = kappa;
  return j;
}

SiftingProblem problem_from_json(const Json& j) {
  constexpr auto code = ErrorCode::MalformedInput;
  ProblemData data;
  const Json& u = field(j, "universe", code, "problem");
  if (u.contains("interval")) {
    const auto n = as_int(u["interval"], code, "universe.interval");
    if (n <= 0) fail(code, "universe.interval", "must be positive");
    data.interval = static_cast<std::size_t>(n);
  } else if (u.contains("elements")) {
    const Json& e = u["elements"];
    if (!e.is_array()) fail(code, "universe.elements", "expected an array");
    for (std::size_t i = 0; i < e.size(); ++i) {
      data.elements.push_back(as_int(e[i], code, "universe.elements[" + std::to_string(i) + "]"));
    }
  } else {
    fail(code, "universe", "expected 'interval' or 'elements'");
  }
  const Json& ps = field(j, "partitions", code, "problem");
  if (!ps.is_array()) fail(code, "partitions", "expected an array");
  for (std::size_t q = 0; q < ps.size(); ++q) {
    const std::string where = "partitions[" + std::to_string(q) + "]";
    Partition part;
    const Json& name = field(ps[q], "name", code, where);
    if (!name.is_string()) fail(code, where + ".name", "expected a string");
    part.name = name.get<std::string>();
    const Json& parts = field(ps[q], "parts", code, where);
    if (!parts.is_array()) fail(code, where + ".parts", "expected an array");
    for (std::size_t c = 0; c < parts.size(); ++c) {
      const std::string at = where + ".parts[" + std::to_string(c) + "]";
      if (!parts[c].is_array()) fail(code, at, "expected an array");
      std::vector<std::size_t> idx;
      for (const auto& v : parts[c]) idx.push_back(as_index(v, code, at));
      part.parts.push_back(std::move(idx));
    }
    data.partitions.push_back(std::move(part));
  }
  if (j.contains("kappa")) {
    const Json& k = j["kappa"];
    if (!k.is_object()) fail(code, "kappa", "expected an object");
    for (auto it = k.begin(); it != k.end(); ++it) {
      data.kappa[it.key()] = static_cast<int>(as_int(it.value(), code, "kappa." + it.key()));
    }
  }
  return SiftingProblem(std::move(data));
}

SiftingProblem parse_problem(std::string_view text) {
  return problem_from_json(parse_text(text, ErrorCode::MalformedInput, "problem"));
}

Json matrix_to_json(const AnyMatrix& m) {
  const std::size_t n = m.dim();
  Json rows = Json::array();
  if (const MatrixQ* q = m.exact()) {
    for (std::size_t i = 0; i < n; ++i) {
      Json row = Json::array();
      for (std::size_t j = 0; j < n; ++j) row.push_back(format_rational((*q)(i, j)));
      rows.push_back(std::move(row));
    }
    return {{"dim", n}, {"mode", "rational"}, {"rows", rows}};
  }
  const MatrixF& f = *m.floating();
  for (std::size_t i = 0; i < n; ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < n; ++j) row.push_back(f(i, j));
    rows.push_back(std::move(row));
  }
  return {{"dim", n}, {"mode", "float"}, {"rows", rows}};
}

AnyMatrix matrix_from_json(const Json& j, const std::string& where) {
  return matrix_from(j, where, ErrorCode::MalformedInput);
}

Json scalar_to_json(const Scalar& s) {
  if (s.is_exact()) return format_rational(s.to_rational());
  return s.to_double();
}

Scalar scalar_from_json(const Json& j, const std::string& where) {
  return scalar_from(j, ErrorCode::MalformedInput, where);
}

std::string subset_key(const SiftingProblem& problem, PartitionSet d) {
  std::string key;
  for (const auto& name : problem.names(d)) key += (key.empty() ? "" : ",") + name;
  return key;
}

PartitionSet subset_from_key(const SiftingProblem& problem, std::string_view key) {
  std::vector<std::string> names;
  std::size_t start = 0;
  if (key.empty()) return {};
  while (true) {
    auto comma = key.find(',', start);
    names.emplace_back(key.substr(start, comma == std::string_view::npos ? key.size() - start : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return problem.resolve(names);
}

Json subset_to_json(const SiftingProblem& problem, PartitionSet d) { return problem.names(d); }

PartitionSet subset_from_json(const SiftingProblem& problem, const Json& j, const std::string& where) {
  return subset_from(problem, j, ErrorCode::MalformedInput, where);
}

Json certificate_to_json(const SiftingProblem& problem, const Certificate& cert) {
  Json j;
  j["lambda"] = scalar_to_json(cert.lambda);
  Json terms = Json::array();
  for (const auto& t : cert.sdp_terms) {
    terms.push_back({{"d", subset_to_json(problem, t.d)}, {"matrix", matrix_to_json(t.matrix)}});
  }
  j["sdp_terms"] = terms;
  j["b0"] = cert.b0 ? matrix_to_json(*cert.b0) : Json(nullptr);
  Json sym = Json::array();
  for (const auto& t : cert.sym_terms) {
    sym.push_back({{"d", subset_to_json(problem, t.d)}, {"w", scalar_to_json(t.w)}});
  }
  j["sym_terms"] = sym;
  return j;
}

Certificate certificate_from_json(const SiftingProblem& problem, const Json& j) {
  constexpr auto code = ErrorCode::MalformedCertificate;
  Certificate cert;
  cert.lambda = scalar_from(field(j, "lambda", code, "certificate"), code, "lambda");
  if (j.contains("sdp_terms")) {
    const Json& terms = j["sdp_terms"];
    if (!terms.is_array()) fail(code, "sdp_terms", "expected an array");
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const std::string where = "sdp_terms[" + std::to_string(i) + "]";
      SdpTerm t;
      t.d = subset_from(problem, field(terms[i], "d", code, where), code, where + ".d");
      t.matrix = matrix_from(field(terms[i], "matrix", code, where), where + ".matrix", code);
      cert.sdp_terms.push_back(std::move(t));
    }
  }
  if (j.contains("b0") && !j["b0"].is_null()) cert.b0 = matrix_from(j["b0"], "b0", code);
  if (j.contains("sym_terms")) {
    const Json& terms = j["sym_terms"];
    if (!terms.is_array()) fail(code, "sym_terms", "expected an array");
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const std::string where = "sym_terms[" + std::to_string(i) + "]";
      SymTerm t;
      t.d = subset_from(problem, field(terms[i], "d", code, where), code, where + ".d");
      t.w = scalar_from(field(terms[i], "w", code, where), code, where + ".w");
      cert.sym_terms.push_back(std::move(t));
    }
  }
  return cert;
}

std::string serialize(const SiftingProblem& problem, const Certificate& cert) {
  return certificate_to_json(problem, cert).dump() + "\n";
}

Certificate parse_certificate(const SiftingProblem& problem, std::string_view text) {
  return certificate_from_json(problem, parse_text(text, ErrorCode::MalformedCertificate, "certificate"));
}

Json coeffs_to_json(const SiftingProblem& problem, const SymCoeffs& b, PartitionSet s) {
  Json vals = Json::object();
  for (std::size_t k = 0; k < b.size(); ++k) {
    vals[subset_key(problem, PartitionSet::from_mask(k))] = format_rational(b.values()[k]);
  }
  return {{"s", subset_to_json(problem, s)}, {"b", vals}};
}

std::pair<SymCoeffs, PartitionSet> coeffs_from_json(const SiftingProblem& problem, const Json& j) {
  constexpr auto code = ErrorCode::MalformedInput;
  PartitionSet s;
  if (j.contains("s")) s = subset_from(problem, j["s"], code, "s");
  const Json& vals = field(j, "b", code, "coefficients");
  if (!vals.is_object()) fail(code, "b", "expected an object");
  SymCoeffs b(problem.partition_count());
  std::vector<char> seen(b.size(), 0);
  for (auto it = vals.begin(); it != vals.end(); ++it) {
    PartitionSet d;
    try {
      d = subset_from_key(problem, it.key());
    } catch (const SieveError& e) {
      fail(code, "b." + it.key(), e.what());
    }
    b[d] = rational_entry(it.value(), code, "b." + it.key());
    seen[d.mask()] = 1;
  }
  for (std::size_t k = 0; k < b.size(); ++k) {
    if (!seen[k]) {
      fail(code, "b", "missing coefficient for {" + subset_key(problem, PartitionSet::from_mask(k)) + "}");
    }
  }
  return {std::move(b), s};
}

Json linear_weights_to_json(const SiftingProblem& problem, const LinearWeights& lw) {
  Json lam = Json::object(), rem = Json::object();
  for (const auto& [d, v] : lw.lambda) lam[subset_key(problem, d)] = format_rational(v);
  for (const auto& [d, v] : lw.remainder) rem[subset_key(problem, d)] = format_rational(v);
  Json j = {{"lambda", lam}};
  if (!lw.remainder.empty()) j["remainder"] = rem;
  return j;
}

LinearWeights linear_weights_from_json(const SiftingProblem& problem, const Json& j) {
  constexpr auto code = ErrorCode::MalformedInput;
  LinearWeights lw;
  auto read = [&](const Json& obj, const std::string& where, std::map<PartitionSet, Rational>& out) {
    if (!obj.is_object()) fail(code, where, "expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      PartitionSet d;
      try {
        d = subset_from_key(problem, it.key());
      } catch (const SieveError& e) {
        fail(code, where + "." + it.key(), e.what());
      }
      out[d] = rational_entry(it.value(), code, where + "." + it.key());
    }
  };
  read(field(j, "lambda", code, "weights"), "lambda", lw.lambda);
  if (j.contains("remainder")) read(j["remainder"], "remainder", lw.remainder);
  return lw;
}

}  // namespace sievesdp

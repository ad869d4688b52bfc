#include "sievesdp/certificate.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "sievesdp/config.hpp"
#include "sievesdp/linalg.hpp"
#include "sievesdp/sym_relax.hpp"

namespace sievesdp {

bool Certificate::is_exact() const {
  if (!lambda.is_exact()) return false;
  for (const auto& t : sdp_terms) {
    if (!t.matrix.is_exact()) return false;
  }
  if (b0 && !b0->is_exact()) return false;
  for (const auto& t : sym_terms) {
    if (!t.w.is_exact()) return false;
  }
  return true;
}

std::string_view to_string(Status s) { return s == Status::Verified ? "Verified" : "Failed"; }

std::string_view to_string(FailureKind k) {
  switch (k) {
    case FailureKind::InvariantViolation: return "InvariantViolation";
    case FailureKind::ConeViolation: return "ConeViolation";
    case FailureKind::B0Violation: return "B0Violation";
    case FailureKind::ResidualNotPsd: return "ResidualNotPsd";
  }
  return "?";
}

namespace {

std::string describe(const SiftingProblem& problem, PartitionSet d) {
  std::string s = "{";
  const auto names = problem.names(d);
  for (std::size_t i = 0; i < names.size(); ++i) s += (i ? "," : "") + names[i];
  return s + "}";
}

void check_structure(const SiftingProblem& problem, const Certificate& cert) {
  const std::size_t n = problem.size();
  std::set<std::uint64_t> seen;
  for (const auto& t : cert.sdp_terms) {
    if (!t.d.subset_of(problem.all())) {
      throw SieveError(ErrorCode::UnknownPartition, "sdp term index mentions an unknown partition");
    }
    if (t.matrix.dim() != n) {
      throw SieveError(ErrorCode::DimensionMismatch, "sdp term " + describe(problem, t.d) + " has dim " +
                                                         std::to_string(t.matrix.dim()) + ", universe has " +
                                                         std::to_string(n));
    }
    if (!seen.insert(t.d.mask()).second) {
      throw SieveError(ErrorCode::DuplicateTerm, "sdp term " + describe(problem, t.d) + " appears twice");
    }
  }
  if (cert.b0 && cert.b0->dim() != n) {
    throw SieveError(ErrorCode::DimensionMismatch, "b0 has dim " + std::to_string(cert.b0->dim()));
  }
  seen.clear();
  for (const auto& t : cert.sym_terms) {
    if (!t.d.subset_of(problem.all())) {
      throw SieveError(ErrorCode::UnknownPartition, "sym term index mentions an unknown partition");
    }
    if (!seen.insert(t.d.mask()).second) {
      throw SieveError(ErrorCode::DuplicateTerm, "sym term " + describe(problem, t.d) + " appears twice");
    }
  }
}

MatrixF relaxation_float(const SiftingProblem& problem, PartitionSet d) {
  std::map<std::size_t, std::pair<double, double>> factors;
  for (auto p : d.indices()) {
    factors[p] = {static_cast<double>(problem.part_count(p)) - problem.kappa(p), -1.0};
  }
  return tensor_restrict<double>(problem, factors);
}

template <class T>
void record_cone(const SiftingProblem& problem, const SymMatrix<T>& m, PartitionSet d, const VerifyOptions& opts,
                 TermReport& tr, std::vector<Failure>& failures) {
  ConeOptions co{opts.tol, opts.selection_limit, opts.exec};
  auto v = in_B_cone(problem, m, d, co);
  tr.selection_count = v.selection_count;
  if (v.verdict == Verdict::LimitExceeded) {
    std::optional<SymCoeffs> b;
    if constexpr (std::is_same_v<T, double>) {
      b = extract_sym_coeffs(problem, m, opts.tol);
    } else {
      b = extract_sym_coeffs(problem, m);
    }
    if (!b || problem.partition_count() > kMaxSymPartitions ||
        !check_sym_inequalities(problem, *b, d, opts.exec).satisfied) {
      throw SieveError(ErrorCode::LimitExceeded,
                       "term " + describe(problem, d) + " needs " + std::to_string(v.selection_count) +
                           " selections (limit " + std::to_string(opts.selection_limit) +
                           ") and is not certified by the symmetric-class inequalities");
    }
    tr.verdict = Verdict::Member;
    tr.via_symmetric = true;
    return;
  }
  tr.verdict = v.verdict;
  if (v.verdict == Verdict::NotMember) {
    tr.failing_selection = v.selection;
    tr.witness_value = to_double(v.value);
    failures.push_back({FailureKind::ConeViolation, d,
                        "term " + describe(problem, d) + " fails at selection #" +
                            std::to_string(v.selection_index) + " (x^T B x = " + std::to_string(tr.witness_value) +
                            ")"});
  }
}

}  // namespace

MatrixQ residual_exact(const SiftingProblem& problem, const Certificate& cert) {
  const std::size_t n = problem.size();
  MatrixQ r = MatrixQ::identity(n);
  r *= cert.lambda.to_rational();
  r -= MatrixQ::ones(n);
  for (const auto& t : cert.sdp_terms) r -= t.matrix.as_rational();
  if (cert.b0) r -= cert.b0->as_rational();
  for (const auto& t : cert.sym_terms) r.add_scaled(-t.w.to_rational(), relaxation_matrix(problem, t.d));
  return r;
}

MatrixF term_sum_float(const SiftingProblem& problem, const Certificate& cert) {
  const std::size_t n = problem.size();
  MatrixF s = MatrixF::ones(n);
  for (const auto& t : cert.sdp_terms) s += t.matrix.as_float();
  if (cert.b0) s += cert.b0->as_float();
  for (const auto& t : cert.sym_terms) s.add_scaled(t.w.to_double(), relaxation_float(problem, t.d));
  return s;
}

MatrixF residual_float(const SiftingProblem& problem, const Certificate& cert) {
  MatrixF r = MatrixF::identity(problem.size());
  r *= cert.lambda.to_double();
  r -= term_sum_float(problem, cert);
  return r;
}

VerificationReport verify(const SiftingProblem& problem, const Certificate& cert, const VerifyOptions& opts) {
  check_dim(problem.size(), "verify");
  check_structure(problem, cert);
  VerificationReport rep;
  rep.exact = opts.exact;
  rep.effective_bound = opts.exact ? Scalar(cert.lambda.to_rational()) : Scalar(cert.lambda.to_double());

  for (const auto& t : cert.sym_terms) {
    if (t.w.is_negative()) {
      rep.failures.push_back({FailureKind::InvariantViolation, t.d,
                              "sym term " + describe(problem, t.d) + " has negative weight"});
    }
  }
  if (!rep.failures.empty()) {
    std::stable_sort(rep.failures.begin(), rep.failures.end(),
                     [](const Failure& a, const Failure& b) { return a.d < b.d; });
    return rep;
  }

  if (cert.b0) {
    TermReport tr;
    tr.selection_count = 1;
    if (opts.exact) {
      auto v = in_B0(cert.b0->as_rational(), 0.0);
      tr.verdict = v.verdict;
      if (v.verdict == Verdict::NotMember) tr.witness_value = to_double(v.value);
    } else {
      const MatrixF b0 = cert.b0->as_float();
      auto v = in_B0(b0, opts.tol);
      tr.verdict = v.verdict;
      if (v.verdict == Verdict::NotMember) tr.witness_value = v.value;
      double lo = 0;
      for (double e : b0.packed()) lo = std::min(lo, e);
      tr.shift = -lo * static_cast<double>(problem.size());
    }
    if (tr.verdict == Verdict::NotMember) {
      rep.failures.push_back(
          {FailureKind::B0Violation, std::nullopt, "b0 has entry " + std::to_string(tr.witness_value)});
    }
    rep.b0 = tr;
  }

  std::vector<std::size_t> order(cert.sdp_terms.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return cert.sdp_terms[a].d < cert.sdp_terms[b].d; });
  for (auto idx : order) {
    const auto& t = cert.sdp_terms[idx];
    TermReport tr;
    tr.d = t.d;
    if (opts.exact) {
      record_cone(problem, t.matrix.as_rational(), t.d, opts, tr, rep.failures);
    } else {
      const MatrixF m = t.matrix.as_float();
      record_cone(problem, m, t.d, opts, tr, rep.failures);
      if (tr.verdict == Verdict::Member && !tr.via_symmetric) {
        tr.shift = cone_shift(problem, m, t.d, {opts.tol, opts.selection_limit, opts.exec}).value_or(0.0);
      }
      rep.cone_slack += tr.shift;
    }
    rep.terms.push_back(std::move(tr));
  }

  if (opts.exact) {
    const MatrixQ r = residual_exact(problem, cert);
    rep.residual_zero = r.is_zero();
    rep.residual_min_eig = rep.residual_zero ? 0.0 : min_eigenvalue(to_float(r));
    if (!rep.residual_zero && !psd_check(r, 0.0).member) {
      rep.failures.push_back({FailureKind::ResidualNotPsd, std::nullopt,
                              "residual is not PSD (lambda_min ~ " + std::to_string(rep.residual_min_eig) + ")"});
    }
  } else {
    const MatrixF r = residual_float(problem, cert);
    rep.residual_min_eig = min_eigenvalue(r);
    rep.residual_zero = r.is_zero();
    rep.slack = std::max(0.0, -rep.residual_min_eig);
    if (rep.b0) rep.cone_slack += rep.b0->shift;
    rep.effective_bound = Scalar(cert.lambda.to_double() + rep.slack + rep.cone_slack);
  }
  rep.status = rep.failures.empty() ? Status::Verified : Status::Failed;
  return rep;
}

}  // namespace sievesdp

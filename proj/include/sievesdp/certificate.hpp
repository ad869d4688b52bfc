#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sievesdp/cone.hpp"
#include "sievesdp/problem.hpp"
#include "sievesdp/rational.hpp"
#include "sievesdp/sym_matrix.hpp"

namespace sievesdp {

struct SdpTerm {
  PartitionSet d;
  AnyMatrix matrix;
};

struct SymTerm {
  PartitionSet d;
  Scalar w;
};

/// lambda I - J - sum B^d - B0 - sum w_d T_d is meant to be PSD; every
/// B^d in B_{d,kappa}, B0 entrywise nonnegative, w_d >= 0.
struct Certificate {
  Scalar lambda;
  std::vector<SdpTerm> sdp_terms;
  std::optional<AnyMatrix> b0;
  std::vector<SymTerm> sym_terms;

  /// True when lambda, every matrix and every weight are rational.
  bool is_exact() const;
};

enum class Status { Verified, Failed };
std::string_view to_string(Status s);

enum class FailureKind {
  InvariantViolation,  // negative sym weight
  ConeViolation,       // some B^d outside B_{d,kappa}
  B0Violation,         // negative B0 entry
  ResidualNotPsd,      // exact mode: R is not PSD
};
std::string_view to_string(FailureKind k);

struct Failure {
  FailureKind kind;
  std::optional<PartitionSet> d;
  std::string message;
};

struct TermReport {
  PartitionSet d;
  Verdict verdict = Verdict::Member;
  std::uint64_t selection_count = 0;
  /// Decided through the symmetric-class inequalities after LimitExceeded.
  bool via_symmetric = false;
  /// Float mode: smallest c with B + cI in the cone.
  double shift = 0;
  PartSelection failing_selection;
  double witness_value = 0;
};

struct VerificationReport {
  Status status = Status::Failed;
  std::vector<Failure> failures;
  bool exact = false;
  /// lambda + s + cone slack; equals lambda in exact mode.
  Scalar effective_bound;
  /// s = max(0, -lambda_min(R)); always 0 in exact mode.
  double slack = 0;
  double cone_slack = 0;
  double residual_min_eig = 0;
  bool residual_zero = false;
  std::vector<TermReport> terms;
  std::optional<TermReport> b0;

  bool verified() const { return status == Status::Verified; }
};

struct VerifyOptions {
  double tol = 1e-9;
  bool exact = false;
  std::uint64_t selection_limit = 1'000'000;
  Exec exec = Exec::Parallel;
};

/// Structural errors throw (DimensionMismatch, DuplicateTerm, UnknownPartition,
/// LimitExceeded); mathematical failures are reported.
VerificationReport verify(const SiftingProblem& problem, const Certificate& cert, const VerifyOptions& opts = {});

/// R = lambda I - J - sum(terms), in exact arithmetic.
MatrixQ residual_exact(const SiftingProblem& problem, const Certificate& cert);
MatrixF residual_float(const SiftingProblem& problem, const Certificate& cert);

/// J + sum(terms); lambda_max of this is the best lambda for these terms.
MatrixF term_sum_float(const SiftingProblem& problem, const Certificate& cert);

}  // namespace sievesdp

#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "sievesdp/certificate.hpp"
#include "sievesdp/problem.hpp"

namespace sievesdp {

struct SolveOptions {
  int max_outer = 60;     // bisection steps
  int max_inner = 4000;   // projection sweeps per step
  double feas_tol = 1e-4;
  double gap_tol = 1e-4;
  std::uint64_t seed = 0;  // recorded; the iteration itself is deterministic
  std::uint64_t selection_limit = 100'000;
  Exec exec = Exec::Parallel;
};

enum class SolveStatus { Optimal, Feasible, IterLimit };
std::string_view to_string(SolveStatus s);

struct BisectionStep {
  double lambda = 0;     // the tested midpoint
  bool feasible = false;
  double achieved = 0;   // best lambda_max(J + terms) seen in this step
  int sweeps = 0;
};

struct SolveResult {
  Certificate cert;
  /// Effective bound reported by verify() on `cert`.
  double lambda_hat = 0;
  SolveStatus status = SolveStatus::IterLimit;
  double lo = 1, hi = 0;
  std::vector<BisectionStep> trace;
  VerificationReport report;
  std::uint64_t seed = 0;
};

/// Minimizes lambda over B^d in B_{d,kappa} (d in ds), an optional entrywise
/// nonnegative B0, and weights w_d >= 0 on T_d (d in df).
SolveResult solve(const SiftingProblem& problem, const std::vector<PartitionSet>& ds,
                  const std::vector<PartitionSet>& df, bool with_b0, const SolveOptions& opts = {});

/// Weights on T_d only, plus an optional free PSD matrix for the empty set.
SolveResult solve_symmetric(const SiftingProblem& problem, const std::vector<PartitionSet>& df,
                            bool include_free_b1, const SolveOptions& opts = {});

}  // namespace sievesdp

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "sievesdp/problem.hpp"
#include "sievesdp/rational.hpp"

namespace sievesdp {

inline constexpr std::size_t kDefaultGuard = 30;
inline constexpr std::size_t kMaxLinearPartitions = 25;

struct SiftedSet {
  std::size_t size = 0;
  std::vector<std::size_t> elements;  // ascending
  /// For each partition, the parts X does not meet.
  std::vector<std::vector<std::size_t>> avoided;
};

/// Exact maximum sifted set by branch and bound; among maxima, the
/// lexicographically smallest. Throws GuardExceeded when |Z| > guard.
SiftedSet max_sifted(const SiftingProblem& problem, std::size_t guard = kDefaultGuard);

/// True when X misses at least kappa_p parts of every partition p.
bool is_sifted(const SiftingProblem& problem, const std::vector<std::size_t>& elements);

/// Finitely supported sieve weights lambda_d, plus optional remainders R_d
/// that are carried for reporting only.
struct LinearWeights {
  std::map<PartitionSet, Rational> lambda;
  std::map<PartitionSet, Rational> remainder;

  Rational at(PartitionSet d) const;
};

struct LinearCheck {
  bool satisfied = true;
  bool lambda_one_ok = true;  // lambda_empty >= 1
  /// First k (colex) with sum_{d <= k} lambda_d < 0.
  std::optional<PartitionSet> violated;
  Rational value;
};

LinearCheck check_linear_weights(const SiftingProblem& problem, const LinearWeights& lw);

/// Chosen parts per partition; each entry must name kappa_p distinct parts.
using ClassChoice = std::map<std::size_t, std::vector<std::size_t>>;

/// sum_d lambda_d |A_d| with A_p the union of the chosen parts of p.
/// Throws InvalidWeights if the weights fail check_linear_weights.
Rational linear_bound(const SiftingProblem& problem, const LinearWeights& lw, const ClassChoice& avoided);

struct LinearMax {
  Rational bound;
  ClassChoice choice;
};

/// Worst case over every class choice, under the same guard on the number
/// of choices.
LinearMax linear_bound_max(const SiftingProblem& problem, const LinearWeights& lw,
                           std::uint64_t guard = 1'000'000);

/// Largest sifted set that avoids exactly the chosen parts (for overlap
/// checks against linear_bound).
std::size_t max_sifted_avoiding(const SiftingProblem& problem, const ClassChoice& avoided);

struct MobiusCheck {
  bool holds = false;
  Rational lhs;
  Rational rhs;
};

/// prod_p (1 - kappa_p/|p|) sum_k theta(k) kappa(k)/phi_kappa(k)
///   = sum_d lambda_d kappa(d)/|d|,   theta(k) = sum_{d <= k} lambda_d.
MobiusCheck mobius_identity_check(const SiftingProblem& problem, const LinearWeights& lw);

/// lambda_d = mu(d) on every subset of P.
LinearWeights inclusion_exclusion_weights(const SiftingProblem& problem);

}  // namespace sievesdp

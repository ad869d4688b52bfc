#pragma once

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "sievesdp/certificate.hpp"
#include "sievesdp/problem.hpp"
#include "sievesdp/sym_relax.hpp"

namespace sievesdp {

/// A certificate together with the problem it refers to.
struct Built {
  SiftingProblem problem;
  Certificate cert;
};

struct LargeSieveSpec {
  std::size_t N = 0;
  std::vector<std::int64_t> primes;
  std::map<std::int64_t, int> kappa;
  /// Explicit index sets (lists of primes); the empty set is always added.
  std::optional<std::vector<std::vector<std::int64_t>>> D;
  /// Default D is every subset with prod p <= Q.
  std::optional<std::int64_t> Q;
  /// Default max(1, Q(Q-1)) with Q the largest product in D.
  std::optional<Rational> delta_inv;
};

struct LargeSieveInfo {
  std::vector<PartitionSet> D;
  std::int64_t Q = 1;
  Rational delta_inv;
  Rational sigma;  // sum_{d in D} kappa(d)/phi_kappa(d)
};

/// Exact certificate with lambda = (N + delta^-1 - 1)/sigma and residual 0.
Built build_large_sieve(const LargeSieveSpec& spec, LargeSieveInfo* info = nullptr);

/// Squarefree subsets of `primes` with product <= Q, in mask order.
std::vector<PartitionSet> products_up_to(const std::vector<std::int64_t>& primes, std::int64_t Q);

struct LsiCheck {
  double norm = 0;
  double bound = 0;  // N + delta^-1 - 1
  double margin = 0;  // bound - norm
  bool holds = false;
};

/// Numerical check of || sum_alpha S(alpha) ||_op <= N + delta^-1 - 1.
/// Throws NotDeltaSpaced when two alphas are closer than delta mod 1.
LsiCheck check_analytic_lsi(std::size_t N, const std::vector<Rational>& alphas, const Rational& delta,
                            double tol = 1e-9);

/// a/q in [0,1) with gcd(a,q) = 1 and q <= Q.
std::vector<Rational> farey_fractions(std::int64_t Q);

/// Float certificate with a nonnegative B0; throws InfeasibleDenominator when
/// sum log p/(p - kappa_p) <= log N.
Built build_larger_sieve(std::size_t N, const std::vector<std::int64_t>& primes,
                         const std::map<std::int64_t, int>& kappa = {});

/// split(j, rhs) returns w^p_j for the members p of j (ascending), which must
/// be positive and satisfy sum_p w^p_j (|p|-1)/|p| = rhs.
using WeightSplit = std::function<std::vector<Rational>(const SiftingProblem&, PartitionSet, const Rational&)>;

WeightSplit equal_split();

struct OrthogonalInfo {
  /// w[p] over subsets of P; zero unless p is in the subset.
  std::vector<WeightVector> w;
  std::vector<SymCoeffs> b;
};

/// Exact certificate with lambda = phi(P) and residual 0. Requires an
/// orthogonal problem with kappa = 1 and every |p| >= 3.
Certificate build_orthogonal(const SiftingProblem& problem, const WeightSplit& split = equal_split(),
                             OrthogonalInfo* info = nullptr);
Built build_orthogonal(const std::vector<std::size_t>& shape);

struct Halves {
  std::vector<std::size_t> c0, c1;
  SiftingProblem sub0, sub1;
};

/// The induced subproblems on the two parts of partition p.
Halves split_two_part(const SiftingProblem& problem, std::size_t p);

/// Glues certificates for the two halves into one for the whole problem with
/// lambda = max(lambda0, lambda1).
Certificate combine_two_part(const SiftingProblem& problem, std::size_t p, const Certificate& cert0,
                             const Certificate& cert1);

/// Certificate for a problem whose partitions all have two parts, built by
/// splitting recursively.
Certificate build_two_part_recursive(const SiftingProblem& problem);

}  // namespace sievesdp

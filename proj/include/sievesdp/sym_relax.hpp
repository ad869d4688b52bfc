#pragma once

#include <optional>
#include <vector>

#include "sievesdp/kernels.hpp"
#include "sievesdp/problem.hpp"
#include "sievesdp/sym_matrix.hpp"

namespace sievesdp {

/// Cap on |P| for the dense 2^|P| coefficient vectors.
inline constexpr std::size_t kMaxSymPartitions = 20;

/// One exact value per subset of P, indexed by mask (so ascending index is
/// colex order). Used both for the coefficients b_d and the weights w_k.
class SubsetVector {
 public:
  SubsetVector() = default;
  explicit SubsetVector(std::size_t partitions);

  std::size_t partitions() const { return bits_; }
  std::size_t size() const { return values_.size(); }
  Rational& operator[](PartitionSet d) { return values_[d.mask()]; }
  const Rational& operator[](PartitionSet d) const { return values_[d.mask()]; }
  std::vector<Rational>& values() { return values_; }
  const std::vector<Rational>& values() const { return values_; }

  friend bool operator==(const SubsetVector& a, const SubsetVector& b) {
    return a.bits_ == b.bits_ && a.values_ == b.values_;
  }

 private:
  std::size_t bits_ = 0;
  std::vector<Rational> values_;
};

using SymCoeffs = SubsetVector;
using WeightVector = SubsetVector;

/// b^s_d = sum_k phi^s_kappa(d & k) mu(k \ d) w_k
SymCoeffs b_from_w(const SiftingProblem& problem, const WeightVector& w, PartitionSet s,
                   Exec exec = Exec::Parallel);

/// Inverse of b_from_w. Throws NonInvertible when some |p| = 2.
WeightVector w_from_b(const SiftingProblem& problem, const SymCoeffs& b, PartitionSet s,
                      Exec exec = Exec::Parallel);

struct SymCheck {
  bool satisfied = true;
  PartitionSet violated;  // first k in colex order
  Rational value;         // the left-hand side at k
};

/// All 2^|P| inequalities; Satisfied iff the b_d come from weights w >= 0.
SymCheck check_sym_inequalities(const SiftingProblem& problem, const SymCoeffs& b, PartitionSet s,
                                Exec exec = Exec::Parallel);

/// Left-hand sides of every inequality, indexed by k.
SubsetVector sym_inequality_values(const SiftingProblem& problem, const SymCoeffs& b, PartitionSet s,
                                   Exec exec = Exec::Parallel);

/// B_ij = b at (j - i, P).
MatrixQ expand_sym_matrix(const SiftingProblem& problem, const SymCoeffs& b, Exec exec = Exec::Parallel);

/// T_d = prod_{p in d} ((|p| - kappa_p) I_p - J_p), J on the rest.
MatrixQ relaxation_matrix(const SiftingProblem& problem, PartitionSet d, Exec exec = Exec::Parallel);

/// Reads b off a matrix whose entries depend only on (j - i, P); empty when
/// two pairs in the same class disagree (beyond tol for floats) or some
/// class never occurs in Z.
std::optional<SymCoeffs> extract_sym_coeffs(const SiftingProblem& problem, const MatrixQ& m);
std::optional<SymCoeffs> extract_sym_coeffs(const SiftingProblem& problem, const MatrixF& m, double tol);

}  // namespace sievesdp

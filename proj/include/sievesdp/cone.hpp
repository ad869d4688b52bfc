#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "sievesdp/kernels.hpp"
#include "sievesdp/linalg.hpp"
#include "sievesdp/problem.hpp"
#include "sievesdp/sym_matrix.hpp"

namespace sievesdp {

enum class Verdict { Member, NotMember, LimitExceeded, Indeterminate };
std::string_view to_string(Verdict v);

/// Deleted parts for one selection: (partition index, sorted part indices).
using PartSelection = std::vector<std::pair<std::size_t, std::vector<std::size_t>>>;

template <class T>
struct ConeVerdict {
  Verdict verdict = Verdict::Member;
  std::uint64_t selection_count = 0;
  /// NotMember in a B cone: the failing selection, its position in the
  /// enumeration, and x (zero on deleted rows) with x^T B x = value < 0.
  PartSelection selection;
  std::uint64_t selection_index = 0;
  std::vector<T> witness;
  T value = T(0);
  /// NotMember in B0: position of the most negative entry.
  std::optional<std::pair<std::size_t, std::size_t>> entry;
};

struct ConeOptions {
  double tol = 1e-9;  // ignored for exact matrices
  std::uint64_t selection_limit = 1'000'000;
  Exec exec = Exec::Parallel;
};

/// Enumerates the ways to delete kappa_p parts from every p in d, in
/// lexicographic order of the part tuples (first partition varies slowest).
class SelectionEnumerator {
 public:
  SelectionEnumerator(const SiftingProblem& problem, PartitionSet d, std::uint64_t limit);
  /// Saturates at UINT64_MAX.
  std::uint64_t count() const { return count_; }
  bool within_limit() const { return within_; }
  PartSelection parts(std::uint64_t index) const;
  /// Indices of Z that survive the selection.
  std::vector<std::size_t> kept(std::uint64_t index) const;

 private:
  const SiftingProblem* problem_;
  std::vector<std::size_t> members_;
  std::vector<std::vector<std::vector<std::size_t>>> combos_;
  std::uint64_t count_ = 1;
  bool within_ = true;
};

/// Saturating binomial coefficient.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

template <class T>
ConeVerdict<T> in_B_cone(const SiftingProblem& problem, const SymMatrix<T>& B, PartitionSet d,
                         const ConeOptions& opts = {});

template <class T>
ConeVerdict<T> in_B0(const SymMatrix<T>& B, double tol = 0.0);

/// Smallest c >= 0 with B + cI in B_{d,kappa}, from the eigenvalues of every
/// surviving submatrix. Empty when the selection count exceeds the limit.
std::optional<double> cone_shift(const SiftingProblem& problem, const MatrixF& B, PartitionSet d,
                                 const ConeOptions& opts = {});

struct ASingletonResult {
  Verdict verdict = Verdict::Indeterminate;
  /// Member: X_i PSD with row/column i zero and sum within `residual` of A.
  std::vector<MatrixF> decomposition;
  double residual = 0;
  /// NotMember: B in B_p with ||B||_F <= 1 and Tr(AB) = dual_value < 0.
  MatrixF dual;
  double dual_value = 0;
  int iterations = 0;
};

/// Decomposition search for A in A_p when every part of p is a singleton.
ASingletonResult in_A_singleton(const MatrixF& A, const Partition& p, double tol = 1e-7,
                                int max_iters = 20000);

}  // namespace sievesdp

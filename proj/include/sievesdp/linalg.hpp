#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "sievesdp/kernels.hpp"
#include "sievesdp/problem.hpp"
#include "sievesdp/sym_matrix.hpp"

namespace sievesdp {

template <class T>
struct PsdResult {
  bool member = true;
  /// For NotMember: x with x^T M x = value < 0 (M unshifted).
  std::vector<T> witness;
  T value = T(0);
};

/// Pivoted LDL^T on M + tol*||M||_inf*I. Exact mode requires tol == 0.
PsdResult<double> psd_check(const MatrixF& m, double tol = 0.0);
PsdResult<Rational> psd_check(const MatrixQ& m, double tol = 0.0);

/// x^T M x
double quadratic_form(const MatrixF& m, const std::vector<double>& x);
Rational quadratic_form(const MatrixQ& m, const std::vector<Rational>& x);

/// Max absolute row sum.
double inf_norm(const MatrixF& m);

/// Eigenvalues in ascending order (cyclic Jacobi).
std::vector<double> eigenvalues(const MatrixF& m);
double min_eigenvalue(const MatrixF& m);
double max_eigenvalue(const MatrixF& m);
/// max |eigenvalue|
double operator_norm(const MatrixF& m);

/// Kept indices in ascending order after removing `deleted`.
std::vector<std::size_t> complement_indices(std::size_t n, const std::vector<std::size_t>& deleted);

template <class T>
SymMatrix<T> submatrix_keep(const SymMatrix<T>& m, const std::vector<std::size_t>& kept) {
  SymMatrix<T> out(kept.size());
  for (std::size_t a = 0; a < kept.size(); ++a) {
    for (std::size_t b = 0; b <= a; ++b) out.at(a, b) = m(kept[a], kept[b]);
  }
  return out;
}

template <class T>
SymMatrix<T> submatrix_delete(const SymMatrix<T>& m, const std::vector<std::size_t>& deleted) {
  for (auto i : deleted) {
    if (i >= m.dim()) throw SieveError(ErrorCode::IndexOutOfRange, "row " + std::to_string(i) + " out of range");
  }
  return submatrix_keep(m, complement_indices(m.dim(), deleted));
}

/// Entry (i,j) = prod_p (a_p [i ~_p j] + b_p); partitions absent from the
/// map use (0, 1).
template <class T>
SymMatrix<T> tensor_restrict(const SiftingProblem& problem,
                             const std::map<std::size_t, std::pair<T, T>>& factors,
                             Exec exec = Exec::Parallel);

/// S(alpha)_{jk} = cos(2 pi alpha (j - k)) on {0..N-1}.
MatrixF exp_matrix(std::size_t N, const Rational& alpha);
/// Throws NotAnInterval unless the problem's universe is an interval.
MatrixF exp_matrix(const SiftingProblem& problem, const Rational& alpha);

}  // namespace sievesdp

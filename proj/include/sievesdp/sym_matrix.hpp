#pragma once

#include <cstddef>
#include <utility>
#include <variant>
#include <vector>

#include "sievesdp/error.hpp"
#include "sievesdp/rational.hpp"

namespace sievesdp {

/// Dense symmetric matrix in packed lower-triangular storage, so symmetry
/// holds by construction.
template <class T>
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t n, const T& fill = T(0)) : n_(n), data_(n * (n + 1) / 2, fill) {}

  static SymMatrix identity(std::size_t n) {
    SymMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = T(1);
    return m;
  }
  static SymMatrix ones(std::size_t n) { return SymMatrix(n, T(1)); }

  std::size_t dim() const { return n_; }

  const T& operator()(std::size_t i, std::size_t j) const { return data_[index(i, j)]; }
  T& at(std::size_t i, std::size_t j) { return data_[index(i, j)]; }

  std::vector<T>& packed() { return data_; }
  const std::vector<T>& packed() const { return data_; }

  SymMatrix& operator+=(const SymMatrix& o) {
    require_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  SymMatrix& operator-=(const SymMatrix& o) {
    require_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  SymMatrix& operator*=(const T& s) {
    for (auto& v : data_) v *= s;
    return *this;
  }
  /// this += s * o
  SymMatrix& add_scaled(const T& s, const SymMatrix& o) {
    require_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += s * o.data_[k];
    return *this;
  }
  SymMatrix& add_diagonal(const T& s) {
    for (std::size_t i = 0; i < n_; ++i) at(i, i) += s;
    return *this;
  }

  friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
  friend SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
  friend SymMatrix operator*(const T& s, SymMatrix a) { return a *= s; }
  friend SymMatrix operator-(SymMatrix a) {
    for (auto& v : a.data_) v = -v;
    return a;
  }
  friend bool operator==(const SymMatrix& a, const SymMatrix& b) {
    return a.n_ == b.n_ && a.data_ == b.data_;
  }

  bool is_zero() const {
    for (const auto& v : data_) {
      if (v != T(0)) return false;
    }
    return true;
  }

 private:
  static std::size_t index(std::size_t i, std::size_t j) {
    if (i < j) std::swap(i, j);
    return i * (i + 1) / 2 + j;
  }
  void require_same(const SymMatrix& o) const {
    if (o.n_ != n_) {
      throw SieveError(ErrorCode::DimensionMismatch,
                       "matrix dims " + std::to_string(n_) + " and " + std::to_string(o.n_));
    }
  }

  std::size_t n_ = 0;
  std::vector<T> data_;
};

using MatrixF = SymMatrix<double>;
using MatrixQ = SymMatrix<Rational>;

MatrixF to_float(const MatrixQ& m);
/// Exact binary value of every entry.
MatrixQ to_rational(const MatrixF& m);

/// A certificate matrix in whichever scalar mode it was produced.
class AnyMatrix {
 public:
  AnyMatrix() : value_(MatrixQ()) {}
  AnyMatrix(MatrixF m) : value_(std::move(m)) {}  // NOLINT(google-explicit-constructor)
  AnyMatrix(MatrixQ m) : value_(std::move(m)) {}  // NOLINT(google-explicit-constructor)

  bool is_exact() const { return std::holds_alternative<MatrixQ>(value_); }
  std::size_t dim() const {
    return is_exact() ? std::get<MatrixQ>(value_).dim() : std::get<MatrixF>(value_).dim();
  }
  const MatrixQ* exact() const { return std::get_if<MatrixQ>(&value_); }
  const MatrixF* floating() const { return std::get_if<MatrixF>(&value_); }
  MatrixF as_float() const { return is_exact() ? to_float(*exact()) : *floating(); }
  MatrixQ as_rational() const { return is_exact() ? *exact() : to_rational(*floating()); }

  friend bool operator==(const AnyMatrix& a, const AnyMatrix& b) { return a.value_ == b.value_; }

 private:
  std::variant<MatrixF, MatrixQ> value_;
};

}  // namespace sievesdp

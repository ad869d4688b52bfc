#pragma once

#include <Eigen/Dense>

#include "sievesdp/sym_matrix.hpp"

namespace sievesdp::detail {

inline Eigen::MatrixXd to_eigen(const MatrixF& m) {
  const auto n = static_cast<Eigen::Index>(m.dim());
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      out(i, j) = out(j, i) = m(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    }
  }
  return out;
}

inline MatrixF from_eigen(const Eigen::MatrixXd& m) {
  MatrixF out(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      out.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = 0.5 * (m(i, j) + m(j, i));
    }
  }
  return out;
}

/// Nearest PSD matrix in Frobenius norm (negative eigenvalues clipped).
inline void project_psd(Eigen::MatrixXd& m) {
  if (m.rows() == 0) return;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
  m = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
  m = 0.5 * (m + m.transpose()).eval();
}

inline double min_eig(const Eigen::MatrixXd& m) {
  if (m.rows() == 0) return 0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

inline double max_eig(const Eigen::MatrixXd& m) {
  if (m.rows() == 0) return 0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(m.rows() - 1);
}

}  // namespace sievesdp::detail

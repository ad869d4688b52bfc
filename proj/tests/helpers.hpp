#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "sievesdp/problem.hpp"
#include "sievesdp/rational.hpp"
#include "sievesdp/sym_matrix.hpp"

namespace testing_util {

using namespace sievesdp;

inline Eigen::MatrixXd dense(const MatrixF& m) {
  const auto n = static_cast<Eigen::Index>(m.dim());
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) out(i, j) = m(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  }
  return out;
}

inline double eig_min(const MatrixF& m) {
  if (m.dim() == 0) return 0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

inline double eig_max(const MatrixF& m) {
  if (m.dim() == 0) return 0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

inline MatrixF random_sym(std::mt19937_64& rng, std::size_t n, double lo = -1, double hi = 1) {
  std::uniform_real_distribution<double> u(lo, hi);
  MatrixF m(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) m.at(i, j) = u(rng);
  }
  return m;
}

inline Rational random_rational(std::mt19937_64& rng, int span = 10, int den = 6) {
  std::uniform_int_distribution<int> a(-span, span), b(1, den);
  return ratio(Integer(a(rng)), Integer(b(rng)));
}

/// Random problem on an explicit universe of n elements with up to `max_p`
/// partitions into random parts; kappa is random within range.
inline SiftingProblem random_problem(std::mt19937_64& rng, std::size_t n, std::size_t max_p, bool mixed_kappa = true) {
  ProblemData data;
  for (std::size_t i = 0; i < n; ++i) data.elements.push_back(static_cast<std::int64_t>(i));
  std::uniform_int_distribution<std::size_t> np(1, max_p);
  const std::size_t parts_wanted = np(rng);
  for (std::size_t p = 0; p < parts_wanted; ++p) {
    std::uniform_int_distribution<std::size_t> k(2, std::min<std::size_t>(n, 5));
    const std::size_t parts = k(rng);
    std::vector<std::size_t> owner(n);
    for (std::size_t i = 0; i < n; ++i) owner[i] = i < parts ? i : std::uniform_int_distribution<std::size_t>(0, parts - 1)(rng);
    std::shuffle(owner.begin(), owner.end(), rng);
    Partition part;
    part.name = "q" + std::to_string(p);
    part.parts.resize(parts);
    for (std::size_t i = 0; i < n; ++i) part.parts[owner[i]].push_back(i);
    if (mixed_kappa && parts >= 3) {
      data.kappa[part.name] = static_cast<int>(std::uniform_int_distribution<std::size_t>(1, parts - 1)(rng));
    }
    data.partitions.push_back(std::move(part));
  }
  return SiftingProblem(std::move(data));
}

/// Largest sifted set by plain enumeration of all 2^n subsets.
inline std::size_t brute_force_max(const SiftingProblem& problem) {
  const std::size_t n = problem.size();
  std::size_t best = 0;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
    const auto size = static_cast<std::size_t>(std::popcount(m));
    if (size <= best) continue;
    bool ok = true;
    for (std::size_t p = 0; p < problem.partition_count() && ok; ++p) {
      std::vector<char> hit(problem.part_count(p), 0);
      for (std::size_t i = 0; i < n; ++i) {
        if ((m >> i) & 1U) hit[problem.part_of(p, i)] = 1;
      }
      const auto missed = static_cast<int>(std::count(hit.begin(), hit.end(), 0));
      ok = missed >= problem.kappa(p);
    }
    if (ok) best = size;
  }
  return best;
}

}  // namespace testing_util

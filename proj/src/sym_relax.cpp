#include "sievesdp/sym_relax.hpp"

#include <cmath>
#include <map>

#include "sievesdp/linalg.hpp"

namespace sievesdp {

SubsetVector::SubsetVector(std::size_t partitions) : bits_(partitions) {
  if (partitions > kMaxSymPartitions) {
    throw SieveError(ErrorCode::TooManyPartitions, std::to_string(partitions) + " partitions (max " +
                                                       std::to_string(kMaxSymPartitions) + ")");
  }
  values_.assign(std::size_t{1} << partitions, Rational(0));
}

namespace {

void require_shape(const SiftingProblem& problem, const SubsetVector& v, PartitionSet s) {
  if (v.partitions() != problem.partition_count()) {
    throw SieveError(ErrorCode::DimensionMismatch, "coefficient vector is over " + std::to_string(v.partitions()) +
                                                       " partitions, problem has " +
                                                       std::to_string(problem.partition_count()));
  }
  if (!s.subset_of(problem.all())) throw SieveError(ErrorCode::UnknownPartition, "s is not a subset of P");
}

// phi^s_kappa(p)
std::vector<Rational> local_phi(const SiftingProblem& problem, PartitionSet s) {
  std::vector<Rational> c(problem.partition_count());
  for (std::size_t p = 0; p < c.size(); ++p) {
    const long parts = static_cast<long>(problem.part_count(p));
    c[p] = s.contains(p) ? parts - problem.kappa(p) - 1 : parts - 1;
  }
  return c;
}

}  // namespace

SymCoeffs b_from_w(const SiftingProblem& problem, const WeightVector& w, PartitionSet s, Exec exec) {
  require_shape(problem, w, s);
  const auto c = local_phi(problem, s);
  SymCoeffs b = w;
  butterfly(b.values().data(), b.partitions(), exec, [&](std::size_t p, Rational& lo, Rational& hi) {
    Rational l = lo - hi;
    hi = lo + c[p] * hi;
    lo = std::move(l);
  });
  return b;
}

SubsetVector sym_inequality_values(const SiftingProblem& problem, const SymCoeffs& b, PartitionSet s,
                                   Exec exec) {
  require_shape(problem, b, s);
  const auto c = local_phi(problem, s);
  SubsetVector v = b;
  butterfly(v.values().data(), v.partitions(), exec, [&](std::size_t p, Rational& lo, Rational& hi) {
    Rational l = c[p] * lo + hi;
    hi = hi - lo;
    lo = std::move(l);
  });
  return v;
}

WeightVector w_from_b(const SiftingProblem& problem, const SymCoeffs& b, PartitionSet s, Exec exec) {
  require_shape(problem, b, s);
  std::string two;
  for (std::size_t p = 0; p < problem.partition_count(); ++p) {
    if (problem.part_count(p) == 2) two += (two.empty() ? "" : ",") + problem.partition(p).name;
  }
  if (!two.empty()) throw SieveError(ErrorCode::NonInvertible, "two-part partitions: " + two);
  // The inequality map times the coefficient map is a positive multiple of
  // the identity, so dividing by that multiple inverts.
  WeightVector w = sym_inequality_values(problem, b, s, exec);
  Rational scale(1);
  for (std::size_t p = 0; p < problem.partition_count(); ++p) {
    const long parts = static_cast<long>(problem.part_count(p));
    scale *= s.contains(p) ? parts - problem.kappa(p) : parts;
  }
  for (auto& v : w.values()) v /= scale;
  return w;
}

SymCheck check_sym_inequalities(const SiftingProblem& problem, const SymCoeffs& b, PartitionSet s, Exec exec) {
  const auto v = sym_inequality_values(problem, b, s, exec);
  SymCheck out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (sgn(v.values()[k]) < 0) {
      out.satisfied = false;
      out.violated = PartitionSet::from_mask(k);
      out.value = v.values()[k];
      return out;
    }
  }
  return out;
}

MatrixQ expand_sym_matrix(const SiftingProblem& problem, const SymCoeffs& b, Exec exec) {
  require_shape(problem, b, PartitionSet{});
  const std::size_t n = problem.size();
  MatrixQ out(n);
  parallel_for(static_cast<std::int64_t>(n), exec, [&](std::int64_t ii) {
    const auto i = static_cast<std::size_t>(ii);
    for (std::size_t j = 0; j <= i; ++j) out.at(i, j) = b[same_part_set(problem, i, j)];
  });
  return out;
}

MatrixQ relaxation_matrix(const SiftingProblem& problem, PartitionSet d, Exec exec) {
  if (!d.subset_of(problem.all())) throw SieveError(ErrorCode::UnknownPartition, "d is not a subset of P");
  std::map<std::size_t, std::pair<Rational, Rational>> factors;
  for (auto p : d.indices()) {
    factors[p] = {Rational(static_cast<long>(problem.part_count(p)) - problem.kappa(p)), Rational(-1)};
  }
  return tensor_restrict<Rational>(problem, factors, exec);
}

namespace {

template <class T, class Same>
std::optional<SymCoeffs> extract(const SiftingProblem& problem, const SymMatrix<T>& m, Same&& same) {
  if (m.dim() != problem.size()) throw SieveError(ErrorCode::DimensionMismatch, "matrix does not match Z");
  const std::size_t bits = problem.partition_count();
  SymCoeffs b(bits);
  std::vector<char> seen(b.size(), 0);
  std::vector<T> first(b.size(), T(0));
  for (std::size_t i = 0; i < m.dim(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const auto k = same_part_set(problem, i, j).mask();
      if (!seen[k]) {
        seen[k] = 1;
        first[k] = m(i, j);
      } else if (!same(first[k], m(i, j))) {
        return std::nullopt;
      }
    }
  }
  for (std::size_t k = 0; k < b.size(); ++k) {
    if (!seen[k]) return std::nullopt;
    b.values()[k] = Rational(first[k]);
  }
  return b;
}

}  // namespace

std::optional<SymCoeffs> extract_sym_coeffs(const SiftingProblem& problem, const MatrixQ& m) {
  return extract(problem, m, [](const Rational& a, const Rational& b) { return a == b; });
}

std::optional<SymCoeffs> extract_sym_coeffs(const SiftingProblem& problem, const MatrixF& m, double tol) {
  return extract(problem, m, [tol](double a, double b) { return std::abs(a - b) <= tol; });
}

}  // namespace sievesdp

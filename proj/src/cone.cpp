#include "sievesdp/cone.hpp"

#include <cmath>
#include <limits>

#include "eigen_util.hpp"

namespace sievesdp {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Member: return "Member";
    case Verdict::NotMember: return "NotMember";
    case Verdict::LimitExceeded: return "LimitExceeded";
    case Verdict::Indeterminate: return "Indeterminate";
  }
  return "?";
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(r);
}

namespace {

void combinations(std::size_t n, std::size_t k, std::vector<std::vector<std::size_t>>& out) {
  std::vector<std::size_t> c(k);
  for (std::size_t i = 0; i < k; ++i) c[i] = i;
  while (true) {
    out.push_back(c);
    std::size_t i = k;
    while (i > 0 && c[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++c[i - 1];
    for (std::size_t j = i; j < k; ++j) c[j] = c[j - 1] + 1;
  }
}

}  // namespace

SelectionEnumerator::SelectionEnumerator(const SiftingProblem& problem, PartitionSet d, std::uint64_t limit)
    : problem_(&problem), members_(d.indices()) {
  if (!d.subset_of(problem.all())) {
    throw SieveError(ErrorCode::UnknownPartition, "cone index mentions an unknown partition");
  }
  for (auto p : members_) {
    const std::uint64_t c = binomial(problem.part_count(p), static_cast<std::uint64_t>(problem.kappa(p)));
    unsigned __int128 next = static_cast<unsigned __int128>(count_) * c;
    count_ = next > std::numeric_limits<std::uint64_t>::max() ? std::numeric_limits<std::uint64_t>::max()
                                                              : static_cast<std::uint64_t>(next);
  }
  within_ = count_ <= limit;
  if (!within_) return;
  for (auto p : members_) {
    combos_.emplace_back();
    combinations(problem.part_count(p), static_cast<std::size_t>(problem.kappa(p)), combos_.back());
  }
}

PartSelection SelectionEnumerator::parts(std::uint64_t index) const {
  PartSelection out(members_.size());
  for (std::size_t t = members_.size(); t-- > 0;) {
    const auto radix = static_cast<std::uint64_t>(combos_[t].size());
    out[t] = {members_[t], combos_[t][index % radix]};
    index /= radix;
  }
  return out;
}

std::vector<std::size_t> SelectionEnumerator::kept(std::uint64_t index) const {
  std::vector<std::size_t> deleted;
  for (const auto& [p, chosen] : parts(index)) {
    for (auto c : chosen) {
      const auto& part = problem_->partition(p).parts[c];
      deleted.insert(deleted.end(), part.begin(), part.end());
    }
  }
  return complement_indices(problem_->size(), deleted);
}

namespace {

template <class T>
PsdResult<T> check_sub(const SymMatrix<T>& sub, double tol) {
  if constexpr (std::is_same_v<T, double>) {
    return psd_check(sub, tol);
  } else {
    (void)tol;
    return psd_check(sub, 0.0);
  }
}

}  // namespace

template <class T>
ConeVerdict<T> in_B_cone(const SiftingProblem& problem, const SymMatrix<T>& B, PartitionSet d,
                         const ConeOptions& opts) {
  if (B.dim() != problem.size()) {
    throw SieveError(ErrorCode::DimensionMismatch, "cone matrix has dim " + std::to_string(B.dim()) +
                                                       ", universe has " + std::to_string(problem.size()));
  }
  SelectionEnumerator sel(problem, d, opts.selection_limit);
  ConeVerdict<T> out;
  out.selection_count = sel.count();
  if (!sel.within_limit()) {
    out.verdict = Verdict::LimitExceeded;
    return out;
  }
  const auto n = static_cast<std::int64_t>(sel.count());
  const std::int64_t bad = first_failure(n, opts.exec, [&](std::int64_t i) {
    return !check_sub(submatrix_keep(B, sel.kept(static_cast<std::uint64_t>(i))), opts.tol).member;
  });
  if (bad == n) return out;

  const auto idx = static_cast<std::uint64_t>(bad);
  const auto kept = sel.kept(idx);
  auto r = check_sub(submatrix_keep(B, kept), opts.tol);
  out.verdict = Verdict::NotMember;
  out.selection = sel.parts(idx);
  out.selection_index = idx;
  out.witness.assign(B.dim(), T(0));
  for (std::size_t a = 0; a < kept.size(); ++a) out.witness[kept[a]] = r.witness[a];
  out.value = quadratic_form(B, out.witness);
  return out;
}

template ConeVerdict<double> in_B_cone<double>(const SiftingProblem&, const MatrixF&, PartitionSet,
                                               const ConeOptions&);
template ConeVerdict<Rational> in_B_cone<Rational>(const SiftingProblem&, const MatrixQ&, PartitionSet,
                                                   const ConeOptions&);

template <class T>
ConeVerdict<T> in_B0(const SymMatrix<T>& B, double tol) {
  ConeVerdict<T> out;
  out.selection_count = 1;
  std::optional<std::pair<std::size_t, std::size_t>> worst;
  T worst_value(0);
  for (std::size_t i = 0; i < B.dim(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      if (!worst || B(i, j) < worst_value) {
        worst = {i, j};
        worst_value = B(i, j);
      }
    }
  }
  bool negative;
  if constexpr (std::is_same_v<T, double>) {
    negative = worst && worst_value < -tol;
  } else {
    negative = worst && worst_value < Rational(-tol);
  }
  if (negative) {
    out.verdict = Verdict::NotMember;
    out.entry = worst;
    out.value = worst_value;
  }
  return out;
}

template ConeVerdict<double> in_B0<double>(const MatrixF&, double);
template ConeVerdict<Rational> in_B0<Rational>(const MatrixQ&, double);

std::optional<double> cone_shift(const SiftingProblem& problem, const MatrixF& B, PartitionSet d,
                                 const ConeOptions& opts) {
  SelectionEnumerator sel(problem, d, opts.selection_limit);
  if (!sel.within_limit()) return std::nullopt;
  const auto n = static_cast<std::int64_t>(sel.count());
  std::vector<double> shift(static_cast<std::size_t>(n), 0.0);
  parallel_for(n, opts.exec, [&](std::int64_t i) {
    const auto sub = detail::to_eigen(submatrix_keep(B, sel.kept(static_cast<std::uint64_t>(i))));
    shift[static_cast<std::size_t>(i)] = std::max(0.0, -detail::min_eig(sub));
  });
  double best = 0;
  for (double s : shift) best = std::max(best, s);
  return best;
}

ASingletonResult in_A_singleton(const MatrixF& A, const Partition& p, double tol, int max_iters) {
  for (const auto& part : p.parts) {
    if (part.size() != 1) {
      throw SieveError(ErrorCode::PartsNotSingleton, "partition '" + p.name + "' has a part of size " +
                                                         std::to_string(part.size()));
    }
  }
  const std::size_t m = p.parts.size();
  if (A.dim() != m) {
    throw SieveError(ErrorCode::DimensionMismatch, "A has dim " + std::to_string(A.dim()) + ", partition has " +
                                                       std::to_string(m) + " parts");
  }
  const auto n = static_cast<Eigen::Index>(m);
  const Eigen::MatrixXd a = detail::to_eigen(A);
  const double scale = std::max(1.0, a.norm());
  std::vector<Eigen::MatrixXd> x(m, Eigen::MatrixXd::Zero(n, n));
  std::vector<Eigen::Index> zero_row(m);
  for (std::size_t c = 0; c < m; ++c) zero_row[c] = static_cast<Eigen::Index>(p.parts[c][0]);

  auto project_cone = [&](std::size_t c) {
    const Eigen::Index z = zero_row[c];
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i != z) keep.push_back(i);
    }
    Eigen::MatrixXd sub(keep.size(), keep.size());
    for (std::size_t u = 0; u < keep.size(); ++u) {
      for (std::size_t v = 0; v < keep.size(); ++v) sub(u, v) = x[c](keep[u], keep[v]);
    }
    detail::project_psd(sub);
    x[c].setZero();
    for (std::size_t u = 0; u < keep.size(); ++u) {
      for (std::size_t v = 0; v < keep.size(); ++v) x[c](keep[u], keep[v]) = sub(u, v);
    }
  };

  ASingletonResult out;
  // Boundary case: A already vanishes (nearly) on some row, so one term can
  // carry all of it. The splitting below converges slowly there.
  for (std::size_t c = 0; c < m; ++c) {
    if (std::abs(a(zero_row[c], zero_row[c])) > tol * scale) continue;
    x[c] = a;
    project_cone(c);
    const double r = (a - x[c]).norm();
    if (r <= tol * scale) {
      out.verdict = Verdict::Member;
      out.residual = r;
      for (std::size_t k = 0; k < m; ++k) {
        out.decomposition.push_back(k == c ? detail::from_eigen(x[c]) : MatrixF(m));
      }
      return out;
    }
    x[c].setZero();
  }
  for (int it = 1; it <= max_iters; ++it) {
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n, n);
    for (const auto& xi : x) sum += xi;
    const Eigen::MatrixXd step = (a - sum) / static_cast<double>(m);
    for (std::size_t c = 0; c < m; ++c) {
      x[c] += step;
      project_cone(c);
    }
    out.iterations = it;
    if (it % 10 != 0 && it != max_iters) continue;

    sum.setZero();
    for (const auto& xi : x) sum += xi;
    const Eigen::MatrixXd gap = a - sum;
    const double r = gap.norm();
    if (r <= tol * scale) {
      out.verdict = Verdict::Member;
      out.residual = r;
      for (const auto& xi : x) out.decomposition.push_back(detail::from_eigen(xi));
      return out;
    }
    // At a nearest pair, -gap lies in the dual cone B_p and pairs negatively
    // with A. Repair the approximate candidate by a multiple of I.
    Eigen::MatrixXd b = -gap / r;
    double shift = 0;
    for (std::size_t c = 0; c < m; ++c) {
      const Eigen::Index z = zero_row[c];
      Eigen::MatrixXd sub(n - 1, n - 1);
      for (Eigen::Index i = 0, u = 0; i < n; ++i) {
        if (i == z) continue;
        for (Eigen::Index j = 0, v = 0; j < n; ++j) {
          if (j == z) continue;
          sub(u, v++) = b(i, j);
        }
        ++u;
      }
      shift = std::max(shift, -detail::min_eig(sub));
    }
    if (shift > 0) b += (shift * (1 + 1e-12) + 1e-15) * Eigen::MatrixXd::Identity(n, n);
    b /= b.norm();
    const double value = (a.cwiseProduct(b)).sum();
    if (value < -tol * scale) {
      out.verdict = Verdict::NotMember;
      out.dual = detail::from_eigen(b);
      out.dual_value = value;
      out.residual = r;
      return out;
    }
  }
  out.verdict = Verdict::Indeterminate;
  return out;
}

}  // namespace sievesdp

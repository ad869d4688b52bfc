#include "sievesdp/oracle.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>

#include "sievesdp/error.hpp"
#include "sievesdp/sym_relax.hpp"

namespace sievesdp {

namespace {

class BranchAndBound {
 public:
  explicit BranchAndBound(const SiftingProblem& problem)
      : pr_(problem), n_(problem.size()), P_(problem.partition_count()) {
    used_.resize(P_);
    rem_.resize(P_);
    touched_.assign(P_, 0);
    for (std::size_t p = 0; p < P_; ++p) {
      used_[p].assign(problem.part_count(p), 0);
      rem_[p].assign(problem.part_count(p), 0);
      for (std::size_t i = 0; i < n_; ++i) ++rem_[p][problem.part_of(p, i)];
    }
  }

  SiftedSet run() {
    dfs(0);
    SiftedSet out;
    out.size = best_.size();
    out.elements = best_;
    out.avoided.resize(P_);
    for (std::size_t p = 0; p < P_; ++p) {
      std::vector<char> hit(pr_.part_count(p), 0);
      for (auto i : best_) hit[pr_.part_of(p, i)] = 1;
      for (std::size_t c = 0; c < hit.size(); ++c) {
        if (!hit[c]) out.avoided[p].push_back(c);
      }
    }
    return out;
  }

 private:
  // Elements >= i that could still join: per partition, the remainder of
  // parts already in use plus the largest parts that may still be opened.
  std::size_t upper_bound(std::size_t i) const {
    std::size_t ub = n_ - i;
    std::vector<std::size_t> fresh;
    for (std::size_t p = 0; p < P_; ++p) {
      std::size_t b = 0;
      fresh.clear();
      for (std::size_t c = 0; c < rem_[p].size(); ++c) {
        if (used_[p][c]) {
          b += rem_[p][c];
        } else {
          fresh.push_back(rem_[p][c]);
        }
      }
      const std::size_t open = pr_.part_count(p) - static_cast<std::size_t>(pr_.kappa(p)) - touched_[p];
      const std::size_t take = std::min(open, fresh.size());
      std::partial_sort(fresh.begin(), fresh.begin() + static_cast<std::ptrdiff_t>(take), fresh.end(),
                        std::greater<>());
      for (std::size_t t = 0; t < take; ++t) b += fresh[t];
      ub = std::min(ub, b);
    }
    return ub;
  }

  void dfs(std::size_t i) {
    if (i == n_) {
      if (cur_.size() > best_.size()) best_ = cur_;
      return;
    }
    if (cur_.size() + upper_bound(i) <= best_.size()) return;
    for (std::size_t p = 0; p < P_; ++p) --rem_[p][pr_.part_of(p, i)];

    bool ok = true;
    for (std::size_t p = 0; p < P_ && ok; ++p) {
      const auto c = pr_.part_of(p, i);
      if (!used_[p][c] && touched_[p] + pr_.kappa(p) >= pr_.part_count(p)) ok = false;
    }
    if (ok) {
      for (std::size_t p = 0; p < P_; ++p) {
        const auto c = pr_.part_of(p, i);
        if (used_[p][c]++ == 0) ++touched_[p];
      }
      cur_.push_back(i);
      dfs(i + 1);
      cur_.pop_back();
      for (std::size_t p = 0; p < P_; ++p) {
        const auto c = pr_.part_of(p, i);
        if (--used_[p][c] == 0) --touched_[p];
      }
    }
    dfs(i + 1);
    for (std::size_t p = 0; p < P_; ++p) ++rem_[p][pr_.part_of(p, i)];
  }

  const SiftingProblem& pr_;
  std::size_t n_, P_;
  std::vector<std::vector<std::size_t>> used_, rem_;
  std::vector<std::size_t> touched_;
  std::vector<std::size_t> cur_, best_;
};

void require_linear_size(const SiftingProblem& problem) {
  if (problem.partition_count() > kMaxLinearPartitions) {
    throw SieveError(ErrorCode::TooManyPartitions, std::to_string(problem.partition_count()) +
                                                       " partitions (max " + std::to_string(kMaxLinearPartitions) +
                                                       ")");
  }
}

}  // namespace

SiftedSet max_sifted(const SiftingProblem& problem, std::size_t guard) {
  if (problem.size() > guard) {
    throw SieveError(ErrorCode::GuardExceeded, "|Z| = " + std::to_string(problem.size()) + " exceeds guard " +
                                                   std::to_string(guard));
  }
  return BranchAndBound(problem).run();
}

bool is_sifted(const SiftingProblem& problem, const std::vector<std::size_t>& elements) {
  for (std::size_t p = 0; p < problem.partition_count(); ++p) {
    std::vector<char> hit(problem.part_count(p), 0);
    for (auto i : elements) {
      if (i >= problem.size()) return false;
      hit[problem.part_of(p, i)] = 1;
    }
    const auto misses = static_cast<long>(std::count(hit.begin(), hit.end(), 0));
    if (misses < problem.kappa(p)) return false;
  }
  return true;
}

Rational LinearWeights::at(PartitionSet d) const {
  auto it = lambda.find(d);
  return it == lambda.end() ? Rational(0) : it->second;
}

LinearCheck check_linear_weights(const SiftingProblem& problem, const LinearWeights& lw) {
  require_linear_size(problem);
  LinearCheck out;
  std::uint64_t support = 0;
  for (const auto& [d, v] : lw.lambda) {
    if (!d.subset_of(problem.all())) throw SieveError(ErrorCode::UnknownPartition, "weight on unknown partition");
    if (sgn(v) != 0) support |= d.mask();
  }
  out.lambda_one_ok = lw.at(PartitionSet{}) >= 1;

  // Only k inside the support can be first violators: sum_{d <= k} depends
  // on k & support, and k & support <= k in colex order.
  const auto bits = PartitionSet::from_mask(support).indices();
  const std::size_t m = bits.size();
  auto compress = [&](std::uint64_t mask) {
    std::uint64_t c = 0;
    for (std::size_t t = 0; t < m; ++t) {
      if ((mask >> bits[t]) & 1U) c |= std::uint64_t{1} << t;
    }
    return c;
  };
  auto expand = [&](std::uint64_t c) {
    std::uint64_t mask = 0;
    for (std::size_t t = 0; t < m; ++t) {
      if ((c >> t) & 1U) mask |= std::uint64_t{1} << bits[t];
    }
    return PartitionSet::from_mask(mask);
  };
  const std::size_t total = std::size_t{1} << m;

  Integer den = 1;
  Integer mag = 0;
  for (const auto& [d, v] : lw.lambda) den = lcm(den, v.get_den());
  for (const auto& [d, v] : lw.lambda) mag += abs(Rational(v * den).get_num());
  const bool fits = mag * static_cast<unsigned long>(total) < (Integer(1) << 62);

  auto finish = [&](std::int64_t idx, Rational value) {
    if (idx >= 0) {
      out.violated = expand(static_cast<std::uint64_t>(idx));
      out.value = std::move(value);
    }
    out.satisfied = out.lambda_one_ok && !out.violated;
  };

  if (fits) {
    std::vector<std::int64_t> v(total, 0);
    for (const auto& [d, q] : lw.lambda) v[compress(d.mask())] += Rational(q * den).get_num().get_si();
    for (std::size_t t = 0; t < m; ++t) {
      for (std::size_t k = 0; k < total; ++k) {
        if ((k >> t) & 1U) v[k] += v[k ^ (std::size_t{1} << t)];
      }
    }
    for (std::size_t k = 0; k < total; ++k) {
      if (v[k] < 0) {
        Rational r(Integer(static_cast<long>(v[k])), den);
        r.canonicalize();
        finish(static_cast<std::int64_t>(k), r);
        return out;
      }
    }
  } else {
    std::vector<Rational> v(total, Rational(0));
    for (const auto& [d, q] : lw.lambda) v[compress(d.mask())] += q;
    for (std::size_t t = 0; t < m; ++t) {
      for (std::size_t k = 0; k < total; ++k) {
        if ((k >> t) & 1U) v[k] += v[k ^ (std::size_t{1} << t)];
      }
    }
    for (std::size_t k = 0; k < total; ++k) {
      if (sgn(v[k]) < 0) {
        finish(static_cast<std::int64_t>(k), v[k]);
        return out;
      }
    }
  }
  finish(-1, Rational(0));
  return out;
}

namespace {

std::vector<std::vector<char>> avoided_membership(const SiftingProblem& problem, const ClassChoice& avoided) {
  std::vector<std::vector<char>> in(problem.partition_count());
  for (const auto& [p, parts] : avoided) {
    if (p >= problem.partition_count()) throw SieveError(ErrorCode::UnknownPartition, "class choice on unknown partition");
    std::set<std::size_t> uniq(parts.begin(), parts.end());
    if (uniq.size() != parts.size()) throw SieveError(ErrorCode::InvalidArgument, "class choice repeats a part");
    if (parts.size() != static_cast<std::size_t>(problem.kappa(p))) {
      throw SieveError(ErrorCode::InvalidArgument, "partition '" + problem.partition(p).name + "' needs " +
                                                       std::to_string(problem.kappa(p)) + " chosen parts");
    }
    in[p].assign(problem.size(), 0);
    for (auto c : parts) {
      if (c >= problem.part_count(p)) throw SieveError(ErrorCode::IndexOutOfRange, "part index out of range");
      for (auto i : problem.partition(p).parts[c]) in[p][i] = 1;
    }
  }
  return in;
}

Rational bound_for(const SiftingProblem& problem, const LinearWeights& lw,
                   const std::vector<std::vector<char>>& in) {
  Rational total(0);
  for (const auto& [d, v] : lw.lambda) {
    if (sgn(v) == 0) continue;
    const auto members = d.indices();
    for (auto p : members) {
      if (in[p].empty()) {
        throw SieveError(ErrorCode::InvalidArgument,
                         "no class chosen for partition '" + problem.partition(p).name + "'");
      }
    }
    long count = 0;
    for (std::size_t i = 0; i < problem.size(); ++i) {
      bool all = true;
      for (auto p : members) all = all && in[p][i];
      count += all;
    }
    total += v * count;
  }
  return total;
}

}  // namespace

Rational linear_bound(const SiftingProblem& problem, const LinearWeights& lw, const ClassChoice& avoided) {
  const auto check = check_linear_weights(problem, lw);
  if (!check.satisfied) throw SieveError(ErrorCode::InvalidWeights, "weights fail the sieve inequalities");
  return bound_for(problem, lw, avoided_membership(problem, avoided));
}

LinearMax linear_bound_max(const SiftingProblem& problem, const LinearWeights& lw, std::uint64_t guard) {
  const auto check = check_linear_weights(problem, lw);
  if (!check.satisfied) throw SieveError(ErrorCode::InvalidWeights, "weights fail the sieve inequalities");
  std::uint64_t support = 0;
  for (const auto& [d, v] : lw.lambda) {
    if (sgn(v) != 0) support |= d.mask();
  }
  const auto members = PartitionSet::from_mask(support).indices();
  std::vector<std::vector<std::vector<std::size_t>>> combos(members.size());
  unsigned __int128 count = 1;
  for (std::size_t t = 0; t < members.size(); ++t) {
    const std::size_t n = problem.part_count(members[t]);
    const std::size_t k = static_cast<std::size_t>(problem.kappa(members[t]));
    std::vector<std::size_t> c(k);
    std::iota(c.begin(), c.end(), 0);
    while (true) {
      combos[t].push_back(c);
      std::size_t i = k;
      while (i > 0 && c[i - 1] == n - k + i - 1) --i;
      if (i == 0) break;
      ++c[i - 1];
      for (std::size_t j = i; j < k; ++j) c[j] = c[j - 1] + 1;
    }
    count *= combos[t].size();
    if (count > guard) throw SieveError(ErrorCode::GuardExceeded, "too many class choices to maximize over");
  }
  LinearMax best;
  bool have = false;
  std::vector<std::size_t> idx(members.size(), 0);
  while (true) {
    ClassChoice choice;
    for (std::size_t t = 0; t < members.size(); ++t) choice[members[t]] = combos[t][idx[t]];
    Rational b = bound_for(problem, lw, avoided_membership(problem, choice));
    if (!have || b > best.bound) {
      best = {b, choice};
      have = true;
    }
    std::size_t t = members.size();
    while (t > 0 && ++idx[t - 1] == combos[t - 1].size()) idx[--t] = 0;
    if (t == 0) break;
  }
  return best;
}

std::size_t max_sifted_avoiding(const SiftingProblem& problem, const ClassChoice& avoided) {
  const auto in = avoided_membership(problem, avoided);
  std::size_t count = 0;
  for (std::size_t i = 0; i < problem.size(); ++i) {
    bool hit = false;
    for (const auto& v : in) hit = hit || (!v.empty() && v[i]);
    count += !hit;
  }
  return count;
}

MobiusCheck mobius_identity_check(const SiftingProblem& problem, const LinearWeights& lw) {
  const std::size_t P = problem.partition_count();
  if (P > kMaxSymPartitions) {
    throw SieveError(ErrorCode::TooManyPartitions, "identity check is limited to " +
                                                       std::to_string(kMaxSymPartitions) + " partitions");
  }
  const std::size_t total = std::size_t{1} << P;
  std::vector<Rational> theta(total, Rational(0));
  for (const auto& [d, v] : lw.lambda) {
    if (!d.subset_of(problem.all())) throw SieveError(ErrorCode::UnknownPartition, "weight on unknown partition");
    theta[d.mask()] += v;
  }
  for (std::size_t t = 0; t < P; ++t) {
    for (std::size_t k = 0; k < total; ++k) {
      if ((k >> t) & 1U) theta[k] += theta[k ^ (std::size_t{1} << t)];
    }
  }
  MobiusCheck out;
  Rational sum(0);
  for (std::size_t k = 0; k < total; ++k) {
    const auto ks = PartitionSet::from_mask(k);
    sum += theta[k] * ratio(kappa_of(problem, ks), phi_kappa(problem, ks));
  }
  Rational front(1);
  for (std::size_t p = 0; p < P; ++p) {
    front *= 1 - ratio(Integer(problem.kappa(p)), Integer(static_cast<unsigned long>(problem.part_count(p))));
  }
  out.lhs = front * sum;
  out.rhs = 0;
  for (const auto& [d, v] : lw.lambda) out.rhs += v * ratio(kappa_of(problem, d), part_product(problem, d));
  out.lhs.canonicalize();
  out.rhs.canonicalize();
  out.holds = out.lhs == out.rhs;
  return out;
}

LinearWeights inclusion_exclusion_weights(const SiftingProblem& problem) {
  require_linear_size(problem);
  LinearWeights lw;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << problem.partition_count()); ++m) {
    const auto d = PartitionSet::from_mask(m);
    lw.lambda[d] = Rational(mu(d));
  }
  return lw;
}

}  // namespace sievesdp

#include "sievesdp/problem.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace sievesdp {

std::vector<std::size_t> PartitionSet::indices() const {
  std::vector<std::size_t> out;
  out.reserve(size());
  for (std::uint64_t m = bits_; m != 0; m &= m - 1) {
    out.push_back(static_cast<std::size_t>(std::countr_zero(m)));
  }
  return out;
}

namespace {

std::string join_messages(const std::vector<Violation>& violations) {
  std::ostringstream os;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    // The first code is already the error's own prefix.
    if (i) os << "; " << to_string(violations[i].code) << ": ";
    os << violations[i].message;
  }
  return os.str();
}

std::size_t universe_size(const ProblemData& data) {
  return data.interval ? *data.interval : data.elements.size();
}

}  // namespace

ProblemValidationError::ProblemValidationError(std::vector<Violation> violations)
    : SieveError(violations.empty() ? ErrorCode::InvalidArgument : violations.front().code,
                 join_messages(violations)),
      violations_(std::move(violations)) {}

std::vector<Violation> validate_problem(const ProblemData& data) {
  std::vector<Violation> out;
  const std::size_t n = universe_size(data);
  if (n == 0) out.push_back({ErrorCode::InvalidArgument, "universe is empty"});
  if (data.interval && !data.elements.empty()) {
    out.push_back({ErrorCode::InvalidArgument, "universe gives both an interval and an element list"});
  }
  if (!data.interval) {
    std::set<std::int64_t> seen(data.elements.begin(), data.elements.end());
    if (seen.size() != data.elements.size()) {
      out.push_back({ErrorCode::InvalidArgument, "universe element list has repeated labels"});
    }
  }
  if (data.partitions.size() > kMaxPartitions) {
    out.push_back({ErrorCode::TooManyPartitions,
                   std::to_string(data.partitions.size()) + " partitions (max " +
                       std::to_string(kMaxPartitions) + ")"});
  }

  std::set<std::string> names;
  for (const auto& p : data.partitions) {
    if (!names.insert(p.name).second) {
      out.push_back({ErrorCode::DuplicatePartitionName, "partition '" + p.name + "' appears twice"});
    }
    std::vector<int> hits(n, 0);
    bool out_of_range = false;
    for (std::size_t c = 0; c < p.parts.size(); ++c) {
      if (p.parts[c].empty()) {
        out.push_back({ErrorCode::EmptyPart,
                       "partition '" + p.name + "' part " + std::to_string(c) + " is empty"});
      }
      for (auto idx : p.parts[c]) {
        if (idx >= n) {
          out_of_range = true;
        } else {
          ++hits[idx];
        }
      }
    }
    if (out_of_range) {
      out.push_back({ErrorCode::PartsDontCover,
                     "partition '" + p.name + "' references an index outside the universe"});
    }
    std::size_t missing = 0, repeated = 0;
    for (int h : hits) {
      if (h == 0) ++missing;
      if (h > 1) ++repeated;
    }
    if (missing || repeated) {
      out.push_back({ErrorCode::PartsDontCover,
                     "partition '" + p.name + "': " + std::to_string(missing) + " elements uncovered, " +
                         std::to_string(repeated) + " covered more than once"});
    }
    auto it = data.kappa.find(p.name);
    const int k = it == data.kappa.end() ? 1 : it->second;
    const auto parts = static_cast<long long>(p.parts.size());
    if (k < 1 || k > parts - 1) {
      out.push_back({ErrorCode::KappaOutOfRange, "partition '" + p.name + "' has kappa " + std::to_string(k) +
                                                     " but " + std::to_string(parts) + " parts"});
    }
  }
  for (const auto& [name, k] : data.kappa) {
    if (!names.count(name)) {
      out.push_back({ErrorCode::UnknownPartition, "kappa given for unknown partition '" + name + "'"});
    }
  }
  return out;
}

SiftingProblem::SiftingProblem(ProblemData data) : data_(std::move(data)) {
  if (auto v = validate_problem(data_); !v.empty()) throw ProblemValidationError(std::move(v));
  interval_ = data_.interval;
  const std::size_t n = universe_size(data_);
  if (interval_) {
    labels_.resize(n);
    for (std::size_t i = 0; i < n; ++i) labels_[i] = static_cast<std::int64_t>(i);
  } else {
    labels_ = data_.elements;
  }
  partitions_ = data_.partitions;
  kappa_.reserve(partitions_.size());
  part_of_.assign(partitions_.size(), std::vector<std::size_t>(n, 0));
  for (std::size_t p = 0; p < partitions_.size(); ++p) {
    auto it = data_.kappa.find(partitions_[p].name);
    kappa_.push_back(it == data_.kappa.end() ? 1 : it->second);
    for (std::size_t c = 0; c < partitions_[p].parts.size(); ++c) {
      for (auto idx : partitions_[p].parts[c]) part_of_[p][idx] = c;
    }
  }
}

std::optional<std::size_t> SiftingProblem::find(const std::string& name) const {
  for (std::size_t p = 0; p < partitions_.size(); ++p) {
    if (partitions_[p].name == name) return p;
  }
  return std::nullopt;
}

PartitionSet SiftingProblem::resolve(const std::vector<std::string>& names) const {
  PartitionSet d;
  for (const auto& name : names) {
    auto p = find(name);
    if (!p) throw SieveError(ErrorCode::UnknownPartition, "no partition named '" + name + "'");
    d = d.with(*p);
  }
  return d;
}

std::vector<std::string> SiftingProblem::names(PartitionSet d) const {
  std::vector<std::string> out;
  for (auto p : d.indices()) {
    if (p >= partitions_.size()) {
      throw SieveError(ErrorCode::UnknownPartition, "partition index " + std::to_string(p) + " out of range");
    }
    out.push_back(partitions_[p].name);
  }
  return out;
}

bool SiftingProblem::is_orthogonal() const {
  Integer total = 1;
  for (const auto& p : partitions_) total *= static_cast<unsigned long>(p.parts.size());
  if (total != static_cast<unsigned long>(size())) return false;
  std::set<std::vector<std::size_t>> seen;
  for (std::size_t i = 0; i < size(); ++i) {
    std::vector<std::size_t> key(partitions_.size());
    for (std::size_t p = 0; p < partitions_.size(); ++p) key[p] = part_of_[p][i];
    if (!seen.insert(std::move(key)).second) return false;
  }
  return true;
}

SiftingProblem interval_problem(std::size_t N, const std::vector<std::int64_t>& primes,
                                const std::map<std::int64_t, int>& kappa) {
  if (N == 0) throw SieveError(ErrorCode::InvalidArgument, "interval length must be positive");
  std::set<std::int64_t> seen;
  ProblemData data;
  data.interval = N;
  for (auto p : primes) {
    if (p < 2) throw SieveError(ErrorCode::InvalidArgument, "modulus " + std::to_string(p) + " is below 2");
    if (!seen.insert(p).second) {
      throw SieveError(ErrorCode::InvalidArgument, "modulus " + std::to_string(p) + " listed twice");
    }
    Partition part;
    part.name = std::to_string(p);
    const auto classes = static_cast<std::size_t>(std::min<std::int64_t>(p, static_cast<std::int64_t>(N)));
    part.parts.resize(classes);
    for (std::size_t i = 0; i < N; ++i) part.parts[i % static_cast<std::size_t>(p)].push_back(i);
    data.partitions.push_back(std::move(part));
  }
  for (const auto& [p, k] : kappa) data.kappa[std::to_string(p)] = k;
  return SiftingProblem(std::move(data));
}

SiftingProblem orthogonal_problem(const std::vector<std::size_t>& shape) {
  std::size_t n = 1;
  for (auto s : shape) {
    if (s < 2) throw SieveError(ErrorCode::InvalidArgument, "every factor of the shape must be at least 2");
    n *= s;
  }
  ProblemData data;
  data.elements.resize(n);
  for (std::size_t i = 0; i < n; ++i) data.elements[i] = static_cast<std::int64_t>(i);
  for (std::size_t q = 0; q < shape.size(); ++q) {
    std::size_t stride = 1;
    for (std::size_t r = q + 1; r < shape.size(); ++r) stride *= shape[r];
    Partition part;
    part.name = "p" + std::to_string(q);
    part.parts.resize(shape[q]);
    for (std::size_t i = 0; i < n; ++i) part.parts[(i / stride) % shape[q]].push_back(i);
    data.partitions.push_back(std::move(part));
  }
  return SiftingProblem(std::move(data));
}

SiftingProblem induced_subproblem(const SiftingProblem& problem, const std::vector<std::size_t>& elements) {
  std::vector<long> position(problem.size(), -1);
  for (std::size_t k = 0; k < elements.size(); ++k) {
    if (elements[k] >= problem.size()) {
      throw SieveError(ErrorCode::IndexOutOfRange, "element " + std::to_string(elements[k]) + " out of range");
    }
    if (position[elements[k]] != -1) {
      throw SieveError(ErrorCode::InvalidArgument, "element listed twice in subproblem");
    }
    position[elements[k]] = static_cast<long>(k);
  }
  ProblemData data;
  for (auto e : elements) data.elements.push_back(problem.labels()[e]);
  for (std::size_t p = 0; p < problem.partition_count(); ++p) {
    Partition restricted;
    restricted.name = problem.partition(p).name;
    for (const auto& part : problem.partition(p).parts) {
      std::vector<std::size_t> kept;
      for (auto idx : part) {
        if (position[idx] >= 0) kept.push_back(static_cast<std::size_t>(position[idx]));
      }
      std::sort(kept.begin(), kept.end());
      if (!kept.empty()) restricted.parts.push_back(std::move(kept));
    }
    const auto dropped = static_cast<int>(problem.part_count(p) - restricted.parts.size());
    const int k = problem.kappa(p) - dropped;
    if (k <= 0) continue;
    data.kappa[restricted.name] = k;
    data.partitions.push_back(std::move(restricted));
  }
  return SiftingProblem(std::move(data));
}

PartitionSet same_part_set(const SiftingProblem& problem, std::size_t i, std::size_t j) {
  if (i >= problem.size() || j >= problem.size()) {
    throw SieveError(ErrorCode::IndexOutOfRange, "element index out of range");
  }
  std::uint64_t m = 0;
  for (std::size_t p = 0; p < problem.partition_count(); ++p) {
    if (problem.part_of(p, i) == problem.part_of(p, j)) m |= std::uint64_t{1} << p;
  }
  return PartitionSet::from_mask(m);
}

namespace {

void check_known(const SiftingProblem& problem, PartitionSet d) {
  if (!d.subset_of(problem.all())) {
    throw SieveError(ErrorCode::UnknownPartition, "subset mentions a partition the problem does not have");
  }
}

template <class F>
Integer product_over(const SiftingProblem& problem, PartitionSet d, F&& factor) {
  check_known(problem, d);
  Integer r = 1;
  for (auto p : d.indices()) r *= factor(p);
  return r;
}

}  // namespace

Integer kappa_of(const SiftingProblem& problem, PartitionSet d) {
  return product_over(problem, d, [&](std::size_t p) { return Integer(problem.kappa(p)); });
}

Integer phi(const SiftingProblem& problem, PartitionSet d) {
  return product_over(problem, d, [&](std::size_t p) {
    return Integer(static_cast<long>(problem.part_count(p)) - 1);
  });
}

int mu(PartitionSet d) { return d.size() % 2 == 0 ? 1 : -1; }

Integer phi_kappa(const SiftingProblem& problem, PartitionSet d) {
  return product_over(problem, d, [&](std::size_t p) {
    return Integer(static_cast<long>(problem.part_count(p)) - problem.kappa(p));
  });
}

Integer phi_s_kappa(const SiftingProblem& problem, PartitionSet d, PartitionSet s) {
  check_known(problem, s);
  return product_over(problem, d, [&](std::size_t p) {
    const long parts = static_cast<long>(problem.part_count(p));
    return Integer(s.contains(p) ? parts - problem.kappa(p) - 1 : parts - 1);
  });
}

Integer part_product(const SiftingProblem& problem, PartitionSet d) {
  return product_over(problem, d, [&](std::size_t p) {
    return Integer(static_cast<unsigned long>(problem.part_count(p)));
  });
}

}  // namespace sievesdp

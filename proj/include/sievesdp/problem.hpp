#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sievesdp/error.hpp"
#include "sievesdp/rational.hpp"

namespace sievesdp {

/// Hard cap on |P|; subsets of partitions are 64-bit masks.
inline constexpr std::size_t kMaxPartitions = 64;

/// A subset d of the partitions of one problem, stored as a bit mask over
/// partition indices. Bit order is the problem's partition order, so the
/// integer value orders subsets colexicographically.
class PartitionSet {
 public:
  constexpr PartitionSet() = default;
  static constexpr PartitionSet from_mask(std::uint64_t m) {
    PartitionSet s;
    s.bits_ = m;
    return s;
  }
  static constexpr PartitionSet singleton(std::size_t i) {
    return from_mask(std::uint64_t{1} << i);
  }
  static constexpr PartitionSet all(std::size_t n) {
    return from_mask(n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
  }

  constexpr std::uint64_t mask() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr bool contains(std::size_t i) const { return (bits_ >> i) & 1U; }
  constexpr std::size_t size() const { return std::popcount(bits_); }
  constexpr bool subset_of(PartitionSet o) const { return (bits_ & ~o.bits_) == 0; }

  constexpr PartitionSet with(std::size_t i) const {
    return from_mask(bits_ | (std::uint64_t{1} << i));
  }
  constexpr PartitionSet operator|(PartitionSet o) const { return from_mask(bits_ | o.bits_); }
  constexpr PartitionSet operator&(PartitionSet o) const { return from_mask(bits_ & o.bits_); }
  /// Set difference d \ k.
  constexpr PartitionSet operator-(PartitionSet o) const { return from_mask(bits_ & ~o.bits_); }

  std::vector<std::size_t> indices() const;

  friend constexpr bool operator==(PartitionSet a, PartitionSet b) { return a.bits_ == b.bits_; }
  friend constexpr auto operator<=>(PartitionSet a, PartitionSet b) { return a.bits_ <=> b.bits_; }

 private:
  std::uint64_t bits_ = 0;
};

struct Partition {
  std::string name;
  std::vector<std::vector<std::size_t>> parts;
};

/// Raw, unvalidated problem description (what the JSON file holds).
struct ProblemData {
  std::optional<std::size_t> interval;  // Z = {0..N-1}
  std::vector<std::int64_t> elements;   // explicit universe otherwise
  std::vector<Partition> partitions;
  std::map<std::string, int> kappa;     // missing names default to 1
};

struct Violation {
  ErrorCode code;
  std::string message;
};

std::vector<Violation> validate_problem(const ProblemData& data);

class ProblemValidationError : public SieveError {
 public:
  explicit ProblemValidationError(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

/// A validated sifting problem: a finite universe Z, partitions of Z, and
/// the number of parts kappa_p that a sifted set must avoid in each.
/// Immutable after construction.
class SiftingProblem {
 public:
  /// Throws ProblemValidationError listing every violated invariant.
  explicit SiftingProblem(ProblemData data);

  std::size_t size() const { return labels_.size(); }
  std::size_t partition_count() const { return partitions_.size(); }

  const Partition& partition(std::size_t p) const { return partitions_[p]; }
  const std::vector<Partition>& partitions() const { return partitions_; }
  /// |p|: the number of (nonempty) parts.
  std::size_t part_count(std::size_t p) const { return partitions_[p].parts.size(); }
  int kappa(std::size_t p) const { return kappa_[p]; }
  /// Index of the part of partition p that contains element i.
  std::size_t part_of(std::size_t p, std::size_t i) const { return part_of_[p][i]; }

  bool is_interval() const { return interval_.has_value(); }
  std::optional<std::size_t> interval_length() const { return interval_; }
  /// Labels of the universe elements (0..N-1 for intervals).
  const std::vector<std::int64_t>& labels() const { return labels_; }

  std::optional<std::size_t> find(const std::string& name) const;
  PartitionSet resolve(const std::vector<std::string>& names) const;
  std::vector<std::string> names(PartitionSet d) const;
  PartitionSet all() const { return PartitionSet::all(partitions_.size()); }

  /// True when i -> (part of p)_p is a bijection Z -> prod_p parts(p).
  bool is_orthogonal() const;

  const ProblemData& data() const { return data_; }

 private:
  ProblemData data_;
  std::optional<std::size_t> interval_;
  std::vector<std::int64_t> labels_;
  std::vector<Partition> partitions_;
  std::vector<int> kappa_;
  std::vector<std::vector<std::size_t>> part_of_;
};

/// Z = {0..N-1}; partition "p" groups i by i mod p. Residue classes with no
/// representative in the interval are dropped.
SiftingProblem interval_problem(std::size_t N, const std::vector<std::int64_t>& primes,
                                const std::map<std::int64_t, int>& kappa = {});

/// Z = prod_i {0..shape[i]-1} in mixed radix (first coordinate slowest);
/// partition "p<i>" groups elements by coordinate i. kappa = 1 throughout.
SiftingProblem orthogonal_problem(const std::vector<std::size_t>& shape);

/// Restriction of a problem to a subset of its elements. A partition keeps
/// its name; parts that miss the subset are dropped and kappa shrinks by the
/// number of dropped parts. Partitions left with kappa <= 0 impose nothing
/// on the subset and are removed.
SiftingProblem induced_subproblem(const SiftingProblem& problem,
                                  const std::vector<std::size_t>& elements);

/// (j - i, P): the partitions in which i and j share a part.
PartitionSet same_part_set(const SiftingProblem& problem, std::size_t i, std::size_t j);

// Multiplicative functions on subsets of P; all equal 1 on the empty set.
Integer kappa_of(const SiftingProblem& problem, PartitionSet d);
Integer phi(const SiftingProblem& problem, PartitionSet d);
int mu(PartitionSet d);
Integer phi_kappa(const SiftingProblem& problem, PartitionSet d);
Integer phi_s_kappa(const SiftingProblem& problem, PartitionSet d, PartitionSet s);
/// prod_{p in d} |p|
Integer part_product(const SiftingProblem& problem, PartitionSet d);

}  // namespace sievesdp

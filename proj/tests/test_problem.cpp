#include <gtest/gtest.h>

#include "helpers.hpp"
#include "sievesdp/problem.hpp"

using namespace sievesdp;

namespace {

std::vector<ErrorCode> codes_of(const ProblemData& d) {
  std::vector<ErrorCode> out;
  for (const auto& v : validate_problem(d)) out.push_back(v.code);
  return out;
}

ProblemData mod23(std::size_t N) {
  ProblemData d;
  d.interval = N;
  Partition two{"2", {{}, {}}};
  Partition three{"3", {{}, {}, {}}};
  for (std::size_t i = 0; i < N; ++i) {
    two.parts[i % 2].push_back(i);
    three.parts[i % 3].push_back(i);
  }
  d.partitions = {two, three};
  return d;
}

bool has(const std::vector<ErrorCode>& v, ErrorCode c) { return std::find(v.begin(), v.end(), c) != v.end(); }

}  // namespace

TEST(Validate, WellFormedResidues) { EXPECT_TRUE(validate_problem(mod23(6)).empty()); }

TEST(Validate, KappaTooLargeOnTwoParts) {
  auto d = mod23(6);
  d.kappa["2"] = 2;
  EXPECT_TRUE(has(codes_of(d), ErrorCode::KappaOutOfRange));
  EXPECT_THROW(SiftingProblem{d}, ProblemValidationError);
}

TEST(Validate, EmptyPart) {
  auto d = mod23(6);
  d.partitions[1].parts.push_back({});
  EXPECT_TRUE(has(codes_of(d), ErrorCode::EmptyPart));
}

TEST(Validate, ReportsEveryViolation) {
  auto d = mod23(6);
  d.partitions[1].name = "2";
  d.partitions[0].parts[0].pop_back();
  d.kappa["3"] = 0;
  const auto c = codes_of(d);
  EXPECT_TRUE(has(c, ErrorCode::DuplicatePartitionName));
  EXPECT_TRUE(has(c, ErrorCode::PartsDontCover));
  try {
    SiftingProblem p{d};
    FAIL();
  } catch (const ProblemValidationError& e) {
    EXPECT_GE(e.violations().size(), 2u);
  }
}

TEST(Validate, DoubleCoverAndOutOfRange) {
  auto d = mod23(6);
  d.partitions[0].parts[0].push_back(1);
  EXPECT_TRUE(has(codes_of(d), ErrorCode::PartsDontCover));
  auto e = mod23(6);
  e.partitions[0].parts[0].push_back(17);
  EXPECT_TRUE(has(codes_of(e), ErrorCode::PartsDontCover));
}

TEST(Validate, OnePartPartitionRejected) {
  ProblemData d;
  d.interval = 3;
  d.partitions = {Partition{"x", {{0, 1, 2}}}};
  EXPECT_TRUE(has(codes_of(d), ErrorCode::KappaOutOfRange));
}

TEST(Validate, RandomMalformedInputsRejected) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    auto d = mod23(6 + t % 5);
    switch (t % 4) {
      case 0: d.partitions[t % 2].parts.push_back({}); break;
      case 1: d.partitions[t % 2].parts[0].clear(); break;
      case 2: d.kappa[d.partitions[t % 2].name] = static_cast<int>(d.partitions[t % 2].parts.size()); break;
      default: d.partitions.push_back(d.partitions[t % 2]); break;
    }
    EXPECT_FALSE(validate_problem(d).empty()) << t;
    EXPECT_THROW(SiftingProblem{d}, SieveError);
  }
}

TEST(IntervalProblem, ResidueGrouping) {
  const auto p = interval_problem(6, {2, 3});
  ASSERT_EQ(p.partition_count(), 2u);
  EXPECT_EQ(p.partition(0).parts, (std::vector<std::vector<std::size_t>>{{0, 2, 4}, {1, 3, 5}}));
  EXPECT_EQ(p.partition(1).parts, (std::vector<std::vector<std::size_t>>{{0, 3}, {1, 4}, {2, 5}}));
  EXPECT_TRUE(p.is_interval());
  EXPECT_EQ(p.kappa(0), 1);
}

TEST(IntervalProblem, DropsUnrepresentedClasses) {
  const auto p = interval_problem(2, {3});
  EXPECT_EQ(p.part_count(0), 2u);
}

TEST(IntervalProblem, FourPrimes) {
  const auto p = interval_problem(10, {2, 3, 5, 7});
  EXPECT_EQ(p.partition_count(), 4u);
  EXPECT_EQ(p.part_count(3), 7u);
  EXPECT_THROW(interval_problem(10, {2, 2}), SieveError);
  EXPECT_THROW(interval_problem(10, {1}), SieveError);
}

TEST(OrthogonalProblem, MixedRadix) {
  const auto p = orthogonal_problem({2, 3});
  EXPECT_EQ(p.size(), 6u);
  EXPECT_TRUE(p.is_orthogonal());
  EXPECT_EQ(p.part_of(0, 4), 1u);
  EXPECT_EQ(p.part_of(1, 4), 1u);
  EXPECT_FALSE(interval_problem(10, {2, 3}).is_orthogonal());
  EXPECT_TRUE(interval_problem(6, {2, 3}).is_orthogonal());
}

TEST(SamePartSet, Examples) {
  const auto p = interval_problem(10, {2, 3});
  EXPECT_EQ(same_part_set(p, 1, 7), p.all());
  EXPECT_EQ(same_part_set(p, 4, 4), p.all());
  EXPECT_TRUE(same_part_set(p, 0, 1).empty());
  EXPECT_EQ(same_part_set(p, 0, 2), PartitionSet::singleton(0));
  EXPECT_THROW(same_part_set(p, 0, 10), SieveError);
}

TEST(SamePartSet, SymmetricAndShiftInvariant) {
  const auto p = interval_problem(30, {2, 3, 5});
  for (std::size_t i = 0; i < 30; ++i) {
    for (std::size_t j = 0; j < 30; ++j) {
      EXPECT_EQ(same_part_set(p, i, j), same_part_set(p, j, i));
      const std::size_t gap = i > j ? i - j : j - i;
      EXPECT_EQ(same_part_set(p, i, j), same_part_set(p, 0, gap));
    }
  }
}

TEST(MultFns, Examples) {
  ProblemData d;
  d.interval = 10;
  d.partitions = {Partition{"p", {{0, 1, 2, 3, 4}, {5, 6, 7, 8, 9}}},
                  Partition{"q", {{0, 5}, {1, 6}, {2, 7}, {3, 8}, {4, 9}}}};
  d.kappa["q"] = 3;
  const SiftingProblem pr(d);
  const auto pq = pr.all();
  EXPECT_EQ(phi(pr, pq), 4);
  EXPECT_EQ(mu(pq), 1);
  EXPECT_EQ(kappa_of(pr, pq), 3);
  for (const Integer& v : {kappa_of(pr, {}), phi(pr, {}), phi_kappa(pr, {}), part_product(pr, {})}) EXPECT_EQ(v, 1);
  EXPECT_EQ(mu(PartitionSet{}), 1);
}

TEST(MultFns, PhiSKappa) {
  ProblemData d;
  d.interval = 5;
  d.partitions = {Partition{"p", {{0}, {1}, {2}, {3}, {4}}}};
  d.kappa["p"] = 2;
  const SiftingProblem pr(d);
  const auto s = PartitionSet::singleton(0);
  EXPECT_EQ(phi_kappa(pr, s), 3);
  EXPECT_EQ(phi_s_kappa(pr, s, s), 2);
  EXPECT_EQ(phi_s_kappa(pr, s, {}), 4);
  EXPECT_THROW(phi(pr, PartitionSet::singleton(3)), SieveError);
}

TEST(MultFns, MultiplicativeOnDisjointSets) {
  const auto pr = interval_problem(40, {2, 3, 5, 7, 11}, {{5, 2}, {7, 3}, {11, 4}});
  const auto s = PartitionSet::from_mask(0b10110);
  for (std::uint64_t a = 0; a < 32; ++a) {
    for (std::uint64_t b = 0; b < 32; ++b) {
      if (a & b) continue;
      const auto d = PartitionSet::from_mask(a), k = PartitionSet::from_mask(b);
      EXPECT_EQ(kappa_of(pr, d | k), kappa_of(pr, d) * kappa_of(pr, k));
      EXPECT_EQ(phi(pr, d | k), phi(pr, d) * phi(pr, k));
      EXPECT_EQ(mu(d | k), mu(d) * mu(k));
      EXPECT_EQ(phi_kappa(pr, d | k), phi_kappa(pr, d) * phi_kappa(pr, k));
      EXPECT_EQ(phi_s_kappa(pr, d | k, s), phi_s_kappa(pr, d, s) * phi_s_kappa(pr, k, s));
    }
  }
}

TEST(Problem, ResolveAndNames) {
  const auto p = interval_problem(12, {2, 3, 5});
  const auto d = p.resolve({"5", "2"});
  EXPECT_EQ(d.mask(), 0b101u);
  EXPECT_EQ(p.names(d), (std::vector<std::string>{"2", "5"}));
  EXPECT_THROW(p.resolve({"7"}), SieveError);
}

TEST(InducedSubproblem, KappaShrinksWithDroppedParts) {
  ProblemData d;
  d.interval = 6;
  d.partitions = {Partition{"a", {{0, 1}, {2, 3}, {4, 5}}}, Partition{"b", {{0, 2, 4}, {1, 3, 5}}}};
  d.kappa["a"] = 2;
  const SiftingProblem pr(d);
  const auto sub = induced_subproblem(pr, {0, 1, 2, 3});
  ASSERT_EQ(sub.partition_count(), 2u);
  EXPECT_EQ(sub.kappa(0), 1);
  EXPECT_EQ(sub.part_count(0), 2u);
  // b keeps one part and loses its only forbidden slot.
  const auto tiny = induced_subproblem(pr, {0, 2});
  ASSERT_EQ(tiny.partition_count(), 1u);
  EXPECT_EQ(tiny.partition(0).name, "a");
  EXPECT_EQ(tiny.kappa(0), 1);
  const auto gone = induced_subproblem(pr, {0, 1});
  EXPECT_EQ(gone.partition_count(), 1u);
  EXPECT_EQ(gone.partition(0).name, "b");
  EXPECT_THROW(induced_subproblem(pr, {9}), SieveError);
}

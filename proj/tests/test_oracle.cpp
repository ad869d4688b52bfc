#include <gtest/gtest.h>

#include "helpers.hpp"
#include "sievesdp/oracle.hpp"

using namespace sievesdp;
using namespace testing_util;

namespace {

// Lexicographically smallest maximum sifted set by plain enumeration.
std::vector<std::size_t> brute_witness(const SiftingProblem& p) {
  const std::size_t best = brute_force_max(p);
  std::vector<std::size_t> out;
  bool have = false;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << p.size()); ++m) {
    if (static_cast<std::size_t>(std::popcount(m)) != best) continue;
    std::vector<std::size_t> x;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if ((m >> i) & 1U) x.push_back(i);
    }
    if (!is_sifted(p, x)) continue;
    if (!have || x < out) out = x;
    have = true;
  }
  return out;
}

SiftingProblem two_part_problem(std::size_t partitions) {
  ProblemData d;
  d.interval = 2;
  for (std::size_t q = 0; q < partitions; ++q) d.partitions.push_back({"v" + std::to_string(q), {{0}, {1}}});
  return SiftingProblem(d);
}

}  // namespace

TEST(MaxSifted, Examples) {
  const auto a = max_sifted(interval_problem(6, {2, 3}));
  EXPECT_EQ(a.size, 2u);
  EXPECT_EQ(a.elements, (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(max_sifted(orthogonal_problem({3, 5})).size, 8u);
  ProblemData d;
  d.interval = 4;
  d.partitions = {Partition{"p", {{0}, {1}, {2}, {3}}}};
  d.kappa["p"] = 3;
  EXPECT_EQ(max_sifted(SiftingProblem(d)).size, 1u);
}

TEST(MaxSifted, ReportsAvoidedParts) {
  const auto p = interval_problem(12, {2, 3, 5}, {{5, 2}});
  const auto r = max_sifted(p);
  ASSERT_EQ(r.avoided.size(), 3u);
  for (std::size_t q = 0; q < 3; ++q) {
    EXPECT_GE(r.avoided[q].size(), static_cast<std::size_t>(p.kappa(q)));
    for (auto c : r.avoided[q]) {
      for (auto i : r.elements) EXPECT_NE(p.part_of(q, i), c);
    }
  }
}

TEST(MaxSifted, GuardExceeded) {
  try {
    max_sifted(interval_problem(40, {2}));
    FAIL();
  } catch (const SieveError& e) {
    EXPECT_EQ(e.code(), ErrorCode::GuardExceeded);
  }
  EXPECT_NO_THROW(max_sifted(interval_problem(40, {2}), 40));
}

TEST(MaxSifted, MatchesEnumeration) {
  std::mt19937_64 rng(61);
  for (int t = 0; t < 50; ++t) {
    const auto p = random_problem(rng, 6 + t % 11, 4);
    const auto r = max_sifted(p);
    EXPECT_EQ(r.size, brute_force_max(p)) << t;
    EXPECT_EQ(r.elements.size(), r.size);
    EXPECT_TRUE(is_sifted(p, r.elements));
    EXPECT_TRUE(std::is_sorted(r.elements.begin(), r.elements.end()));
    if (p.size() <= 12) EXPECT_EQ(r.elements, brute_witness(p)) << t;
  }
}

TEST(MaxSifted, IntervalAdmissible) {
  // Largest admissible subset of [0, 10) for primes up to 7.
  const auto p = interval_problem(10, {2, 3, 5, 7});
  const auto r = max_sifted(p);
  EXPECT_EQ(r.size, brute_force_max(p));
  EXPECT_EQ(r.size, 4u);
  const auto small = max_sifted(interval_problem(3, {2}));
  EXPECT_EQ(small.size, 2u);
  EXPECT_EQ(small.elements, (std::vector<std::size_t>{0, 2}));
}

TEST(IsSifted, Basics) {
  const auto p = interval_problem(6, {2, 3});
  EXPECT_TRUE(is_sifted(p, {}));
  EXPECT_TRUE(is_sifted(p, {1, 5}));
  EXPECT_FALSE(is_sifted(p, {1, 2}));
  EXPECT_FALSE(is_sifted(p, {0, 2, 4}));
  EXPECT_FALSE(is_sifted(p, {9}));
}

TEST(LinearWeights, BoundaryCases) {
  const auto p = interval_problem(12, {2, 3, 5});
  LinearWeights one;
  one.lambda[PartitionSet{}] = 1;
  one.lambda[PartitionSet::singleton(1)] = -1;
  EXPECT_TRUE(check_linear_weights(p, one).satisfied);

  LinearWeights two = one;
  two.lambda[PartitionSet::singleton(2)] = -1;
  const auto c = check_linear_weights(p, two);
  EXPECT_FALSE(c.satisfied);
  EXPECT_EQ(c.violated, PartitionSet::from_mask(0b110));
  EXPECT_EQ(c.value, -1);

  LinearWeights low;
  low.lambda[PartitionSet{}] = ratio(1, 2);
  const auto l = check_linear_weights(p, low);
  EXPECT_FALSE(l.satisfied);
  EXPECT_FALSE(l.lambda_one_ok);
  EXPECT_FALSE(l.violated);
}

TEST(LinearWeights, CliqueReduction) {
  // Vertices are partitions; lambda_1 = 1, lambda_v = -1/(c-1), and |G| on
  // every non-edge. A violation exists iff the graph has a c-clique.
  auto weights = [](const std::vector<std::pair<int, int>>& edges, std::size_t verts, int c) {
    LinearWeights lw;
    lw.lambda[PartitionSet{}] = 1;
    for (std::size_t v = 0; v < verts; ++v) lw.lambda[PartitionSet::singleton(v)] = ratio(-1, c - 1);
    for (std::size_t a = 0; a < verts; ++a) {
      for (std::size_t b = a + 1; b < verts; ++b) {
        const bool edge = std::find(edges.begin(), edges.end(), std::pair<int, int>(a, b)) != edges.end();
        if (!edge) lw.lambda[PartitionSet::singleton(a).with(b)] = static_cast<long>(verts);
      }
    }
    return lw;
  };
  const auto p = two_part_problem(4);
  const std::vector<std::pair<int, int>> triangle{{0, 1}, {0, 2}, {1, 2}};
  const std::vector<std::pair<int, int>> path{{0, 1}, {1, 2}, {2, 3}};
  const auto t3 = check_linear_weights(p, weights(triangle, 4, 3));
  EXPECT_FALSE(t3.satisfied);
  EXPECT_EQ(t3.violated, PartitionSet::from_mask(0b0111));
  EXPECT_TRUE(check_linear_weights(p, weights(path, 4, 3)).satisfied);
  EXPECT_FALSE(check_linear_weights(p, weights(path, 4, 2)).satisfied);
  EXPECT_TRUE(check_linear_weights(p, weights(triangle, 4, 4)).satisfied);
  // Independent enumeration over every vertex subset.
  for (const auto& g : {triangle, path}) {
    for (int c : {2, 3, 4}) {
      bool clique = false;
      for (std::uint64_t m = 0; m < 16; ++m) {
        if (std::popcount(m) < c) continue;
        bool all = true;
        for (int a = 0; a < 4; ++a) {
          for (int b = a + 1; b < 4; ++b) {
            if (((m >> a) & 1U) && ((m >> b) & 1U)) {
              all = all && std::find(g.begin(), g.end(), std::pair<int, int>(a, b)) != g.end();
            }
          }
        }
        clique = clique || all;
      }
      EXPECT_EQ(check_linear_weights(p, weights(g, 4, c)).satisfied, !clique) << c;
    }
  }
}

TEST(LinearWeights, TooManyPartitions) {
  const auto p = two_part_problem(kMaxLinearPartitions + 1);
  LinearWeights lw;
  lw.lambda[PartitionSet{}] = 1;
  try {
    check_linear_weights(p, lw);
    FAIL();
  } catch (const SieveError& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooManyPartitions);
  }
}

TEST(LinearBound, Examples) {
  const auto p = interval_problem(6, {2, 3});
  LinearWeights trivial;
  trivial.lambda[PartitionSet{}] = 1;
  EXPECT_EQ(linear_bound(p, trivial, {}), 6);
  const auto ie = inclusion_exclusion_weights(p);
  EXPECT_EQ(ie.lambda.size(), 4u);
  EXPECT_EQ(linear_bound(p, ie, {{0, {0}}, {1, {0}}}), 2);
  for (std::size_t a = 0; a < 2; ++a) {
    for (std::size_t b = 0; b < 3; ++b) {
      const ClassChoice ch{{0, {a}}, {1, {b}}};
      EXPECT_EQ(linear_bound(p, ie, ch), Rational(static_cast<long>(max_sifted_avoiding(p, ch))));
    }
  }
}

TEST(LinearBound, InclusionExclusionCountsSurvivors) {
  std::mt19937_64 rng(62);
  const auto p = interval_problem(60, {2, 3, 5, 7}, {{5, 2}, {7, 3}});
  const auto ie = inclusion_exclusion_weights(p);
  for (int t = 0; t < 20; ++t) {
    ClassChoice ch;
    for (std::size_t q = 0; q < 4; ++q) {
      std::vector<std::size_t> parts(p.part_count(q));
      std::iota(parts.begin(), parts.end(), 0);
      std::shuffle(parts.begin(), parts.end(), rng);
      parts.resize(static_cast<std::size_t>(p.kappa(q)));
      std::sort(parts.begin(), parts.end());
      ch[q] = parts;
    }
    long survivors = 0;
    for (std::size_t i = 0; i < 60; ++i) {
      bool hit = false;
      for (const auto& [q, parts] : ch) hit = hit || std::count(parts.begin(), parts.end(), p.part_of(q, i));
      survivors += !hit;
    }
    EXPECT_EQ(linear_bound(p, ie, ch), survivors);
  }
}

TEST(LinearBound, GuardsAndErrors) {
  const auto p = interval_problem(6, {2, 3});
  LinearWeights bad;
  bad.lambda[PartitionSet{}] = 1;
  bad.lambda[PartitionSet::singleton(0)] = -2;
  EXPECT_THROW(linear_bound(p, bad, {{0, {0}}}), SieveError);
  try {
    linear_bound(p, bad, {{0, {0}}});
  } catch (const SieveError& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidWeights);
  }
  const auto ie = inclusion_exclusion_weights(p);
  EXPECT_THROW(linear_bound(p, ie, {{0, {0}}}), SieveError);
  EXPECT_THROW(linear_bound(p, ie, {{0, {0, 0}}, {1, {0}}}), SieveError);
  EXPECT_THROW(linear_bound(p, ie, {{0, {4}}, {1, {0}}}), SieveError);
  EXPECT_THROW(linear_bound_max(p, ie, 3), SieveError);
}

TEST(LinearBound, WorstCaseIsTheOracle) {
  std::mt19937_64 rng(63);
  for (int t = 0; t < 10; ++t) {
    const auto p = random_problem(rng, 9, 3);
    const auto worst = linear_bound_max(p, inclusion_exclusion_weights(p));
    EXPECT_EQ(worst.bound, Rational(static_cast<long>(max_sifted(p).size))) << t;
    EXPECT_EQ(linear_bound(p, inclusion_exclusion_weights(p), worst.choice), worst.bound);
  }
}

TEST(LinearBound, ValidBoundsDominateSiftedSets) {
  // lambda_1 = 1 and lambda_p = -1/|P| for every p satisfy the inequalities.
  std::mt19937_64 rng(64);
  for (int t = 0; t < 20; ++t) {
    const auto p = random_problem(rng, 10, 3);
    LinearWeights lw;
    lw.lambda[PartitionSet{}] = 1;
    for (std::size_t q = 0; q < p.partition_count(); ++q) {
      lw.lambda[PartitionSet::singleton(q)] = ratio(-1, static_cast<long>(p.partition_count()));
    }
    ASSERT_TRUE(check_linear_weights(p, lw).satisfied);
    ClassChoice ch;
    for (std::size_t q = 0; q < p.partition_count(); ++q) {
      std::vector<std::size_t> parts(static_cast<std::size_t>(p.kappa(q)));
      std::iota(parts.begin(), parts.end(), 0);
      ch[q] = parts;
    }
    EXPECT_GE(linear_bound(p, lw, ch), Rational(static_cast<long>(max_sifted_avoiding(p, ch))));
  }
}

TEST(Mobius, RandomWeights) {
  std::mt19937_64 rng(65);
  for (int t = 0; t < 100; ++t) {
    const auto p = t % 2 ? random_problem(rng, 12, 4) : interval_problem(30, {2, 3, 5, 7}, {{7, 2}});
    LinearWeights lw;
    for (std::uint64_t m = 0; m < (1u << p.partition_count()); ++m) {
      if (rng() % 3) lw.lambda[PartitionSet::from_mask(m)] = random_rational(rng, 20, 9);
    }
    const auto r = mobius_identity_check(p, lw);
    EXPECT_TRUE(r.holds) << t;
    EXPECT_EQ(r.lhs, r.rhs);
  }
}

TEST(Mobius, IndicatorAndSinglePartition) {
  const auto p = interval_problem(30, {2, 3, 5});
  LinearWeights lw;
  lw.lambda[PartitionSet{}] = 1;
  const auto r = mobius_identity_check(p, lw);
  EXPECT_TRUE(r.holds);
  EXPECT_EQ(r.rhs, 1);

  ProblemData d;
  d.interval = 7;
  d.partitions = {Partition{"p", {{0}, {1}, {2}, {3}, {4}, {5}, {6}}}};
  d.kappa["p"] = 3;
  const SiftingProblem one(d);
  LinearWeights w;
  const Rational l1 = ratio(5, 2), lp = ratio(-3, 4);
  w.lambda[PartitionSet{}] = l1;
  w.lambda[PartitionSet::singleton(0)] = lp;
  const auto s = mobius_identity_check(one, w);
  EXPECT_TRUE(s.holds);
  EXPECT_EQ(s.rhs, l1 + lp * ratio(3, 7));
  // (1 - 3/7) (l1 + (l1 + lp) * 3/4)
  EXPECT_EQ(s.lhs, ratio(4, 7) * (l1 + (l1 + lp) * ratio(3, 4)));
}

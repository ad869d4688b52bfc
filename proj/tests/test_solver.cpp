#include <gtest/gtest.h>

#include "helpers.hpp"
#include "sievesdp/builders.hpp"
#include "sievesdp/json_io.hpp"
#include "sievesdp/oracle.hpp"
#include "sievesdp/solver.hpp"

using namespace sievesdp;
using namespace testing_util;

namespace {

SiftingProblem single(std::size_t parts) {
  ProblemData d;
  d.interval = parts;
  Partition p{"p", {}};
  for (std::size_t i = 0; i < parts; ++i) p.parts.push_back({i});
  d.partitions = {p};
  return SiftingProblem(d);
}

void expect_sound(const SiftingProblem& p, const SolveResult& r) {
  // Re-verify from scratch; the solver's own report is not trusted.
  const auto rep = verify(p, r.cert);
  ASSERT_TRUE(rep.verified());
  EXPECT_NEAR(rep.effective_bound.to_double(), r.lambda_hat, 1e-12);
  EXPECT_LE(rep.slack, 1e-4);
  double max_infeasible = 0, min_feasible = 1e300;
  for (const auto& s : r.trace) {
    if (s.feasible) {
      min_feasible = std::min(min_feasible, s.lambda);
    } else {
      max_infeasible = std::max(max_infeasible, s.lambda);
    }
  }
  EXPECT_LT(max_infeasible, min_feasible);
}

}  // namespace

TEST(Solver, SinglePartition) {
  const auto p = single(5);
  const auto r = solve(p, {p.all()}, {}, false);
  expect_sound(p, r);
  EXPECT_EQ(r.status, SolveStatus::Optimal);
  EXPECT_NEAR(r.lambda_hat, 4.0, 1e-3);
  EXPECT_GE(r.lambda_hat, 4.0 - 1e-9);
}

TEST(Solver, OrthogonalTwoByThree) {
  const auto p = orthogonal_problem({2, 3});
  const auto r = solve(p, {PartitionSet::singleton(0), PartitionSet::singleton(1)}, {}, false);
  expect_sound(p, r);
  EXPECT_NEAR(r.lambda_hat, 2.0, 1e-3);
}

TEST(Solver, FullDepthMatchesOracle) {
  std::mt19937_64 rng(51);
  for (int t = 0; t < 4; ++t) {
    const auto p = random_problem(rng, 5 + t % 4, 2);
    const auto best = static_cast<double>(brute_force_max(p));
    const auto r = solve(p, {p.all()}, {}, false);
    expect_sound(p, r);
    EXPECT_NEAR(r.lambda_hat, best, 1e-3) << t;
    EXPECT_GE(r.lambda_hat, best - 1e-9);
  }
}

TEST(Solver, WeightsAndB0) {
  const auto p = interval_problem(10, {2, 3, 5});
  std::vector<PartitionSet> df;
  for (std::uint64_t m = 1; m < 8; ++m) df.push_back(PartitionSet::from_mask(m));
  const auto r = solve(p, {}, df, true);
  expect_sound(p, r);
  for (const auto& t : r.cert.sym_terms) EXPECT_FALSE(t.w.is_negative());
  if (r.cert.b0) EXPECT_EQ(in_B0(r.cert.b0->as_float(), 0.0).verdict, Verdict::Member);
  EXPECT_GE(r.lambda_hat, static_cast<double>(max_sifted(p).size) - 1e-9);
  EXPECT_LT(r.lambda_hat, 10.0);
}

TEST(Solver, DeterministicAndThreadIndependent) {
  const auto p = orthogonal_problem({2, 3});
  const std::vector<PartitionSet> ds{PartitionSet::singleton(0), PartitionSet::singleton(1)};
  SolveOptions o;
  o.seed = 7;
  const auto a = solve(p, ds, {}, false, o);
  const auto b = solve(p, ds, {}, false, o);
  o.exec = Exec::Serial;
  const auto c = solve(p, ds, {}, false, o);
  EXPECT_EQ(serialize(p, a.cert), serialize(p, b.cert));
  EXPECT_EQ(serialize(p, a.cert), serialize(p, c.cert));
  EXPECT_EQ(a.trace.size(), c.trace.size());
  EXPECT_EQ(a.seed, 7u);
}

TEST(Solver, IterationCapGivesUsableCertificate) {
  const auto p = single(6);
  SolveOptions o;
  o.max_outer = 2;
  const auto r = solve(p, {p.all()}, {}, false, o);
  expect_sound(p, r);
  EXPECT_NE(r.status, SolveStatus::Optimal);
  EXPECT_EQ(r.trace.size(), 2u);
}

TEST(Solver, Errors) {
  const auto p = single(5);
  auto code_of = [&](auto&& f) {
    try {
      f();
    } catch (const SieveError& e) {
      return e.code();
    }
    return ErrorCode::ResourceLimit;
  };
  SolveOptions bad;
  bad.feas_tol = 0;
  EXPECT_EQ(code_of([&] { solve(p, {p.all()}, {}, false, bad); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { solve(p, {}, {}, false); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { solve(p, {p.all(), p.all()}, {}, false); }), ErrorCode::DuplicateTerm);
  EXPECT_EQ(code_of([&] { solve(p, {PartitionSet::singleton(3)}, {}, false); }), ErrorCode::UnknownPartition);
  SolveOptions few;
  few.selection_limit = 2;
  EXPECT_EQ(code_of([&] { solve(p, {p.all()}, {}, false, few); }), ErrorCode::LimitExceeded);
  std::mt19937_64 rng(52);
  const auto odd = random_problem(rng, 7, 2);
  ASSERT_FALSE(odd.is_interval());
  if (!odd.is_orthogonal()) {
    EXPECT_EQ(code_of([&] { solve_symmetric(odd, {odd.all()}, true); }), ErrorCode::NotAnInterval);
  }
  EXPECT_EQ(to_string(SolveStatus::Optimal), "Optimal");
}

TEST(SolveSymmetric, FreeB1AloneGivesN) {
  const auto p = interval_problem(9, {2, 3});
  const auto r = solve_symmetric(p, {}, true);
  expect_sound(p, r);
  EXPECT_NEAR(r.lambda_hat, 9.0, 1e-3);
}

TEST(SolveSymmetric, NoWorseThanLargeSieve) {
  LargeSieveSpec spec;
  spec.N = 11;
  spec.primes = {2, 3, 5};
  spec.Q = 6;
  const auto built = build_large_sieve(spec);
  const auto df = products_up_to(spec.primes, 6);
  std::vector<PartitionSet> nonempty;
  for (auto d : df) {
    if (!d.empty()) nonempty.push_back(d);
  }
  const auto r = solve_symmetric(built.problem, nonempty, true);
  expect_sound(built.problem, r);
  EXPECT_LE(r.lambda_hat, built.cert.lambda.to_double() + 1e-3);
  EXPECT_GE(r.lambda_hat, static_cast<double>(max_sifted(built.problem).size) - 1e-9);
}

TEST(SolveSymmetric, OrthogonalUniverse) {
  const auto p = orthogonal_problem({3, 3});
  const auto r = solve_symmetric(p, {PartitionSet::singleton(0), PartitionSet::singleton(1), p.all()}, false);
  expect_sound(p, r);
  EXPECT_GE(r.lambda_hat, 4.0 - 1e-9);
}

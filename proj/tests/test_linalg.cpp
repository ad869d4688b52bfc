#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "helpers.hpp"
#include "sievesdp/linalg.hpp"

using namespace sievesdp;
using namespace testing_util;

namespace {

MatrixQ three_i_minus_j(std::size_t n, long a) {
  MatrixQ m = MatrixQ::identity(n);
  m *= Rational(a);
  m -= MatrixQ::ones(n);
  return m;
}

MatrixF from_rows(const std::vector<std::vector<double>>& rows) {
  MatrixF m(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) m.at(i, j) = rows[i][j];
  }
  return m;
}

}  // namespace

TEST(PsdCheck, Identity) {
  EXPECT_TRUE(psd_check(MatrixF::identity(3)).member);
  EXPECT_TRUE(psd_check(MatrixQ::identity(3)).member);
}

TEST(PsdCheck, ThreeIMinusJ) {
  EXPECT_TRUE(psd_check(three_i_minus_j(3, 3)).member);
  EXPECT_TRUE(psd_check(to_float(three_i_minus_j(3, 3)), 1e-12).member);
  // Just below the boundary the exact test must refute.
  MatrixQ m = three_i_minus_j(3, 3);
  m.add_diagonal(ratio(-1, 1000000));
  const auto r = psd_check(m);
  ASSERT_FALSE(r.member);
  EXPECT_LT(r.value, 0);
  EXPECT_EQ(quadratic_form(m, r.witness), r.value);
}

TEST(PsdCheck, IndefiniteWitness) {
  const auto m = from_rows({{1, 2}, {2, 1}});
  const auto r = psd_check(m);
  ASSERT_FALSE(r.member);
  EXPECT_LT(r.value, 0);
  EXPECT_NEAR(quadratic_form(m, r.witness), r.value, 1e-12);
  // Any valid witness will do; the Rayleigh quotient cannot beat lambda_min = -1.
  double nrm = 0;
  for (double v : r.witness) nrm += v * v;
  EXPECT_GE(r.value / nrm, -1.0 - 1e-12);

  MatrixQ q(2);
  q.at(0, 0) = 1;
  q.at(1, 1) = 1;
  q.at(1, 0) = 2;
  const auto rq = psd_check(q);
  ASSERT_FALSE(rq.member);
  EXPECT_EQ(quadratic_form(q, rq.witness), rq.value);
  EXPECT_LT(rq.value, 0);
  EXPECT_GE(rq.value / (rq.witness[0] * rq.witness[0] + rq.witness[1] * rq.witness[1]), -1);
}

TEST(PsdCheck, ZeroPivotWithOffDiagonal) {
  // [[0,1],[1,0]]: all diagonal pivots vanish, the 2x2 form is indefinite.
  MatrixQ m(2);
  m.at(1, 0) = 1;
  const auto r = psd_check(m);
  ASSERT_FALSE(r.member);
  EXPECT_LT(r.value, 0);
  EXPECT_EQ(quadratic_form(m, r.witness), r.value);
  EXPECT_TRUE(psd_check(MatrixQ(3)).member);
}

TEST(PsdCheck, ToleranceArguments) {
  EXPECT_THROW(psd_check(MatrixF::identity(2), -1.0), SieveError);
  EXPECT_THROW(psd_check(MatrixQ::identity(2), 1e-9), SieveError);
  EXPECT_TRUE(psd_check(MatrixF(0)).member);
}

TEST(PsdCheck, ShiftedToleranceIsScaleInvariant) {
  auto m = from_rows({{1, 0}, {0, -1e-10}});
  EXPECT_FALSE(psd_check(m, 0).member);
  EXPECT_TRUE(psd_check(m, 1e-9).member);
  m *= 1e6;
  EXPECT_TRUE(psd_check(m, 1e-9).member);
}

TEST(PsdCheck, RandomAgreesWithEigen) {
  std::mt19937_64 rng(3);
  int members = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + t % 19;
    MatrixF m = random_sym(rng, n);
    m.add_diagonal(0.2 * static_cast<double>(t % 10));
    const double tol = 1e-9;
    const auto r = psd_check(m, tol);
    const double lmin = eig_min(m);
    if (r.member) {
      ++members;
      EXPECT_GE(lmin, -tol * inf_norm(m) * static_cast<double>(n) - 1e-9) << t;
    } else {
      EXPECT_LT(r.value, 0);
      EXPECT_NEAR(quadratic_form(m, r.witness), r.value, 1e-9 * (1 + std::abs(r.value)));
      EXPECT_LT(lmin, 1e-9);
    }
  }
  EXPECT_GT(members, 10);
  EXPECT_LT(members, 190);
}

TEST(PsdCheck, RandomGramMatricesAreMembers) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 3 + t % 8, rank = 1 + t % n;
    MatrixQ m(n);
    for (std::size_t r = 0; r < rank; ++r) {
      std::vector<Rational> v(n);
      for (auto& x : v) x = Rational(static_cast<long>(std::lround(g(rng) * 4)));
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) m.at(i, j) += v[i] * v[j];
      }
    }
    EXPECT_TRUE(psd_check(m).member) << t;
  }
}

TEST(Eigenvalues, JacobiMatchesReference) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 30; ++t) {
    const auto m = random_sym(rng, 1 + t % 25);
    EXPECT_NEAR(min_eigenvalue(m), eig_min(m), 1e-10);
    EXPECT_NEAR(max_eigenvalue(m), eig_max(m), 1e-10);
  }
}

TEST(OperatorNorm, Examples) {
  for (std::size_t n : {1u, 4u, 9u}) {
    EXPECT_NEAR(operator_norm(MatrixF::ones(n)), static_cast<double>(n), 1e-10 * static_cast<double>(n));
    EXPECT_NEAR(operator_norm(MatrixF::identity(n)), 1.0, 1e-12);
  }
  const auto m = to_float(three_i_minus_j(5, 5));
  EXPECT_NEAR(operator_norm(m), 5.0, 1e-10);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense(m));
  EXPECT_NEAR(es.eigenvalues().cwiseAbs().maxCoeff(), 5.0, 1e-10);
  EXPECT_NEAR(es.eigenvalues()(0), 0.0, 1e-10);
  EXPECT_EQ(operator_norm(MatrixF(0)), 0.0);
}

TEST(OperatorNorm, NegativeDominant) {
  auto m = MatrixF::identity(3);
  m *= -7;
  m.at(1, 1) = 2;
  EXPECT_NEAR(operator_norm(m), 7.0, 1e-12);
}

TEST(Submatrix, Examples) {
  const auto j5 = MatrixF::ones(5);
  EXPECT_EQ(submatrix_delete(j5, {}), j5);
  const auto none = submatrix_delete(j5, {0, 1, 2, 3, 4});
  EXPECT_EQ(none.dim(), 0u);
  EXPECT_TRUE(psd_check(none).member);
  EXPECT_EQ(submatrix_delete(j5, {0, 2}), MatrixF::ones(3));
  EXPECT_THROW(submatrix_delete(j5, {5}), SieveError);
  try {
    submatrix_delete(j5, {7});
  } catch (const SieveError& e) {
    EXPECT_EQ(e.code(), ErrorCode::IndexOutOfRange);
  }
}

TEST(Submatrix, PreservesOrderAndCommutesWithSums) {
  std::mt19937_64 rng(6);
  const auto a = random_sym(rng, 7), b = random_sym(rng, 7);
  const std::vector<std::size_t> del{1, 4, 5};
  const auto sa = submatrix_delete(a, del);
  EXPECT_EQ(sa(2, 1), a(3, 2));
  EXPECT_EQ(sa(3, 0), a(6, 0));
  EXPECT_EQ(submatrix_delete(a + b, del), sa + submatrix_delete(b, del));
  EXPECT_EQ(submatrix_delete(2.5 * a, del), 2.5 * sa);
}

TEST(TensorRestrict, AllOnesAndIdentity) {
  const auto p = interval_problem(6, {2, 3});
  EXPECT_EQ(tensor_restrict<Rational>(p, {}), MatrixQ::ones(6));
  const std::map<std::size_t, std::pair<Rational, Rational>> id{{0, {Rational(1), Rational(0)}},
                                                                  {1, {Rational(1), Rational(0)}}};
  EXPECT_EQ(tensor_restrict<Rational>(p, id), MatrixQ::identity(6));
  const auto o = orthogonal_problem({3, 2, 2});
  std::map<std::size_t, std::pair<double, double>> idf;
  for (std::size_t q = 0; q < 3; ++q) idf[q] = {1.0, 0.0};
  EXPECT_EQ(tensor_restrict<double>(o, idf), MatrixF::identity(12));
}

TEST(TensorRestrict, AlternatingSigns) {
  const auto p = interval_problem(6, {2, 3});
  const std::map<std::size_t, std::pair<Rational, Rational>> f{{0, {Rational(2), Rational(-1)}},
                                                                 {1, {Rational(0), Rational(1)}}};
  const auto m = tensor_restrict<Rational>(p, f);
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = 0; j < 6; ++j) EXPECT_EQ(m(i, j), (i + j) % 2 == 0 ? 1 : -1);
  }
  EXPECT_THROW(tensor_restrict<Rational>(p, {{5, {Rational(1), Rational(0)}}}), SieveError);
}

TEST(TensorRestrict, MatchesKroneckerOnOrthogonalProduct) {
  std::mt19937_64 rng(8);
  const auto o = orthogonal_problem({3, 4});
  for (int t = 0; t < 10; ++t) {
    const double a0 = random_rational(rng).get_d(), b0 = random_rational(rng).get_d();
    const double a1 = random_rational(rng).get_d(), b1 = random_rational(rng).get_d();
    const Eigen::MatrixXd f0 = a0 * Eigen::MatrixXd::Identity(3, 3) + b0 * Eigen::MatrixXd::Ones(3, 3);
    const Eigen::MatrixXd f1 = a1 * Eigen::MatrixXd::Identity(4, 4) + b1 * Eigen::MatrixXd::Ones(4, 4);
    Eigen::MatrixXd kron(12, 12);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) kron.block(4 * i, 4 * j, 4, 4) = f0(i, j) * f1;
    }
    const auto m = tensor_restrict<double>(o, {{0, {a0, b0}}, {1, {a1, b1}}});
    EXPECT_LT((dense(m) - kron).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(TensorRestrict, PsdFactorsGivePsdProduct) {
  // a I + b J on n points is PSD iff a >= 0 and a + n b >= 0; the restriction
  // to any subset of the product stays PSD.
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0, 2);
  const auto p = interval_problem(20, {2, 3, 5});
  for (int t = 0; t < 40; ++t) {
    std::map<std::size_t, std::pair<double, double>> f;
    for (std::size_t q = 0; q < 3; ++q) {
      const double a = u(rng);
      const double n = static_cast<double>(p.part_count(q));
      f[q] = {a, -a / n + 0.5 * u(rng)};
    }
    const auto m = tensor_restrict<double>(p, f);
    EXPECT_TRUE(psd_check(m, 1e-12).member) << t;
  }
}

TEST(TensorRestrict, SubmatrixCommutesOnOrthogonal) {
  // Deleting one part of p0 from the product is the product over the
  // remaining parts.
  const auto o = orthogonal_problem({3, 3});
  const std::map<std::size_t, std::pair<Rational, Rational>> f{{0, {Rational(3), Rational(-1)}},
                                                                 {1, {Rational(2), Rational(1)}}};
  const auto full = tensor_restrict<Rational>(o, f);
  const auto cut = submatrix_delete(full, {0, 1, 2});
  const auto smaller = orthogonal_problem({2, 3});
  EXPECT_EQ(cut, tensor_restrict<Rational>(smaller, f));
}

TEST(TensorRestrict, SerialMatchesParallel) {
  const auto p = interval_problem(40, {2, 3, 5, 7});
  std::map<std::size_t, std::pair<Rational, Rational>> f;
  for (std::size_t q = 0; q < 4; ++q) f[q] = {Rational(static_cast<long>(q) + 2), ratio(-1, 3)};
  EXPECT_EQ(tensor_restrict<Rational>(p, f, Exec::Serial), tensor_restrict<Rational>(p, f, Exec::Parallel));
}

TEST(ExpMatrix, Examples) {
  const auto zero = exp_matrix(7, Rational(0));
  for (std::size_t i = 0; i < 7; ++i) {
    for (std::size_t j = 0; j < 7; ++j) EXPECT_EQ(zero(i, j), 1.0);
  }
  const auto half = exp_matrix(3, ratio(1, 2));
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(half(i, j), (i + j) % 2 == 0 ? 1.0 : -1.0, 1e-15);
  }
  EXPECT_THROW(exp_matrix(orthogonal_problem({3, 3}), ratio(1, 3)), SieveError);
  EXPECT_NO_THROW(exp_matrix(interval_problem(5, {2}), ratio(1, 3)));
}

TEST(ExpMatrix, PsdRankTwoForAnyAlpha) {
  std::mt19937_64 rng(10);
  for (int t = 0; t < 40; ++t) {
    const long q = 1 + static_cast<long>(rng() % 40);
    const long a = static_cast<long>(rng() % static_cast<unsigned long>(q));
    const auto m = exp_matrix(25, ratio(a, q));
    EXPECT_TRUE(psd_check(m, 1e-12).member);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense(m), Eigen::EigenvaluesOnly);
    int big = 0;
    for (int k = 0; k < es.eigenvalues().size(); ++k) big += es.eigenvalues()(k) > 1e-8;
    EXPECT_LE(big, 2);
    EXPECT_NEAR(es.eigenvalues().sum(), 25.0, 1e-9);
  }
}

TEST(ExpMatrix, ArgumentReductionOnLongInterval) {
  // cos(2 pi * 1/3 * m) takes only the values 1 and -1/2.
  const auto m = exp_matrix(400, ratio(1, 3));
  for (std::size_t i = 0; i < 400; i += 37) {
    EXPECT_NEAR(m(i, 0), i % 3 == 0 ? 1.0 : -0.5, 1e-15);
  }
}

TEST(ExpMatrix, CharacterSumEqualsTensorMatrix) {
  // Summing S(a/m) over units a equals the tensor matrix with (|p|, -1)
  // on the primes dividing a squarefree m.
  const std::vector<std::int64_t> primes{2, 3, 5};
  const std::size_t N = 30;
  const auto problem = interval_problem(N, primes);
  for (std::uint64_t mask = 1; mask < 8; ++mask) {
    long m = 1;
    std::map<std::size_t, std::pair<double, double>> f;
    for (std::size_t q = 0; q < 3; ++q) {
      if ((mask >> q) & 1U) {
        m *= primes[q];
        f[q] = {static_cast<double>(primes[q]), -1.0};
      }
    }
    MatrixF sum(N);
    for (long a = 1; a < m; ++a) {
      if (std::gcd(a, m) == 1) sum += exp_matrix(N, ratio(a, m));
    }
    const auto t = tensor_restrict<double>(problem, f);
    for (std::size_t i = 0; i < N; ++i) {
      for (std::size_t j = 0; j <= i; ++j) EXPECT_NEAR(sum(i, j), t(i, j), 1e-9) << m;
    }
  }
}

TEST(Conversions, RoundTrip) {
  MatrixQ q(2);
  q.at(0, 0) = ratio(1, 3);
  q.at(1, 0) = ratio(-5, 2);
  const auto f = to_float(q);
  EXPECT_DOUBLE_EQ(f(0, 0), 1.0 / 3);
  EXPECT_EQ(to_float(to_rational(f)), f);
  MatrixF bad(1);
  bad.at(0, 0) = std::nan("");
  EXPECT_THROW(to_rational(bad), SieveError);
  EXPECT_THROW(MatrixF(2) += MatrixF(3), SieveError);
}

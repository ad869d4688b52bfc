#include "sievesdp/builders.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "sievesdp/config.hpp"
#include "sievesdp/linalg.hpp"

namespace sievesdp {

std::vector<PartitionSet> products_up_to(const std::vector<std::int64_t>& primes, std::int64_t Q) {
  if (primes.size() > kMaxSymPartitions) {
    throw SieveError(ErrorCode::TooManyPartitions, "too many moduli for subset enumeration");
  }
  std::vector<PartitionSet> out;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << primes.size()); ++m) {
    std::int64_t prod = 1;
    bool ok = true;
    for (auto p : PartitionSet::from_mask(m).indices()) {
      if (prod > Q / primes[p]) {
        ok = false;
        break;
      }
      prod *= primes[p];
    }
    if (ok && prod <= Q) out.push_back(PartitionSet::from_mask(m));
  }
  return out;
}

namespace {

std::int64_t product_of(const std::vector<std::int64_t>& primes, PartitionSet d) {
  std::int64_t prod = 1;
  for (auto p : d.indices()) prod *= primes[p];
  return prod;
}

int kappa_for(const std::map<std::int64_t, int>& kappa, std::int64_t p) {
  auto it = kappa.find(p);
  return it == kappa.end() ? 1 : it->second;
}

}  // namespace

Built build_large_sieve(const LargeSieveSpec& spec, LargeSieveInfo* info) {
  check_dim(spec.N, "large sieve");
  for (auto p : spec.primes) {
    const auto parts = std::min<std::int64_t>(p, static_cast<std::int64_t>(spec.N));
    if (p >= 2 && kappa_for(spec.kappa, p) >= parts) {
      throw SieveError(ErrorCode::InfeasibleSpec, "phi_kappa(" + std::to_string(p) + ") = " +
                                                      std::to_string(parts - kappa_for(spec.kappa, p)) +
                                                      " is not positive");
    }
  }
  SiftingProblem problem = interval_problem(spec.N, spec.primes, spec.kappa);

  std::vector<PartitionSet> D;
  if (spec.D) {
    if (spec.D->empty()) throw SieveError(ErrorCode::EmptyD, "index set D is empty");
    std::set<std::uint64_t> masks{0};
    for (const auto& ds : *spec.D) {
      std::vector<std::string> names;
      for (auto p : ds) names.push_back(std::to_string(p));
      masks.insert(problem.resolve(names).mask());
    }
    for (auto m : masks) D.push_back(PartitionSet::from_mask(m));
  } else if (spec.Q) {
    D = products_up_to(spec.primes, *spec.Q);
  } else {
    throw SieveError(ErrorCode::InvalidArgument, "large sieve needs either D or Q");
  }
  if (D.empty()) throw SieveError(ErrorCode::EmptyD, "index set D is empty");

  std::int64_t Q = 1;
  for (auto d : D) Q = std::max(Q, product_of(spec.primes, d));
  if (spec.Q && !spec.D) Q = *spec.Q;
  const Rational delta_inv = spec.delta_inv ? *spec.delta_inv : Rational(std::max<std::int64_t>(1, Q * (Q - 1)));

  Rational sigma(0);
  std::vector<Rational> weight(D.size());
  for (std::size_t i = 0; i < D.size(); ++i) {
    weight[i] = Rational(kappa_of(problem, D[i]), phi_kappa(problem, D[i]));
    weight[i].canonicalize();
    sigma += weight[i];
  }
  const std::size_t n = problem.size();
  const Rational inv_sigma = 1 / sigma;

  Certificate cert;
  cert.lambda = Scalar(Rational((static_cast<long>(spec.N) + delta_inv - 1) / sigma));
  MatrixQ b1 = MatrixQ::identity(n);
  b1 *= Rational(static_cast<long>(spec.N) + delta_inv - 1);
  std::vector<SdpTerm> rest;
  for (std::size_t i = 0; i < D.size(); ++i) {
    std::map<std::size_t, std::pair<Rational, Rational>> factors;
    for (auto p : D[i].indices()) factors[p] = {Rational(static_cast<long>(problem.part_count(p))), Rational(-1)};
    MatrixQ t = tensor_restrict<Rational>(problem, factors);
    b1 -= t;
    if (D[i].empty()) continue;
    t.add_scaled(-weight[i], MatrixQ::ones(n));
    t *= inv_sigma;
    rest.push_back({D[i], std::move(t)});
  }
  b1 *= inv_sigma;
  cert.sdp_terms.push_back({PartitionSet{}, std::move(b1)});
  for (auto& t : rest) cert.sdp_terms.push_back(std::move(t));

  if (info) {
    info->D = D;
    info->Q = Q;
    info->delta_inv = delta_inv;
    info->sigma = sigma;
  }
  return {std::move(problem), std::move(cert)};
}

std::vector<Rational> farey_fractions(std::int64_t Q) {
  std::vector<Rational> out;
  for (std::int64_t q = 1; q <= Q; ++q) {
    for (std::int64_t a = 0; a < q; ++a) {
      if (std::gcd(a, q) == 1) out.emplace_back(Integer(static_cast<long>(a)), Integer(static_cast<long>(q)));
    }
  }
  for (auto& r : out) r.canonicalize();
  std::sort(out.begin(), out.end());
  return out;
}

LsiCheck check_analytic_lsi(std::size_t N, const std::vector<Rational>& alphas, const Rational& delta,
                            double tol) {
  check_dim(N, "analytic large sieve check");
  std::vector<Rational> reduced;
  for (const auto& a : alphas) {
    Rational r = a - Rational(Integer(a.get_num() / a.get_den()));
    if (r < 0) r += 1;
    reduced.push_back(r);
  }
  for (std::size_t i = 0; i < reduced.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      Rational dist = abs(reduced[i] - reduced[j]);
      if (1 - dist < dist) dist = 1 - dist;
      if (dist < delta) {
        throw SieveError(ErrorCode::NotDeltaSpaced, reduced[j].get_str() + " and " + reduced[i].get_str() +
                                                        " are closer than " + delta.get_str());
      }
    }
  }
  MatrixF sum(N);
  for (const auto& a : reduced) sum += exp_matrix(N, a);
  LsiCheck out;
  out.norm = operator_norm(sum);
  out.bound = static_cast<double>(N) + Rational(1 / delta).get_d() - 1;
  out.margin = out.bound - out.norm;
  out.holds = out.norm <= out.bound + tol;
  return out;
}

Built build_larger_sieve(std::size_t N, const std::vector<std::int64_t>& primes,
                         const std::map<std::int64_t, int>& kappa) {
  check_dim(N, "larger sieve");
  double denom = -std::log(static_cast<double>(N));
  double top = -std::log(static_cast<double>(N));
  for (auto p : primes) {
    if (p < 2) throw SieveError(ErrorCode::InvalidArgument, "modulus below 2");
    const int k = kappa_for(kappa, p);
    if (k >= p) throw SieveError(ErrorCode::InfeasibleDenominator, "kappa_p >= p for p = " + std::to_string(p));
    denom += std::log(static_cast<double>(p)) / static_cast<double>(p - k);
    top += std::log(static_cast<double>(p));
  }
  if (!(denom > 0)) {
    throw SieveError(ErrorCode::InfeasibleDenominator,
                     "sum log p/(p - kappa_p) - log N = " + std::to_string(denom) + " is not positive");
  }
  SiftingProblem problem = interval_problem(N, primes, kappa);
  const std::size_t n = problem.size();
  Certificate cert;
  cert.lambda = Scalar(top / denom);

  MatrixF b0(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      double prod = 1;
      for (auto p : primes) {
        if ((i - j) % static_cast<std::size_t>(p) == 0) prod *= static_cast<double>(p);
      }
      b0.at(i, j) = std::log(static_cast<double>(N) / prod) / denom;
    }
  }
  cert.b0 = AnyMatrix(std::move(b0));
  for (std::size_t q = 0; q < primes.size(); ++q) {
    const double lp = std::log(static_cast<double>(primes[q]));
    const double k = kappa_for(kappa, primes[q]);
    std::map<std::size_t, std::pair<double, double>> factors;
    factors[q] = {lp / denom, -lp / (static_cast<double>(primes[q]) - k) / denom};
    cert.sdp_terms.push_back({PartitionSet::singleton(q), tensor_restrict<double>(problem, factors)});
  }
  return {std::move(problem), std::move(cert)};
}

WeightSplit equal_split() {
  return [](const SiftingProblem& problem, PartitionSet j, const Rational& rhs) {
    std::vector<Rational> w;
    const long size = static_cast<long>(j.size());
    for (auto p : j.indices()) {
      const long parts = static_cast<long>(problem.part_count(p));
      Rational v = rhs * parts / ((parts - 1) * size);
      v.canonicalize();
      w.push_back(v);
    }
    return w;
  };
}

Certificate build_orthogonal(const SiftingProblem& problem, const WeightSplit& split, OrthogonalInfo* info) {
  check_dim(problem.size(), "orthogonal construction");
  if (!problem.is_orthogonal()) throw SieveError(ErrorCode::NotOrthogonal, "Z is not the product of its partitions");
  std::string two;
  for (std::size_t p = 0; p < problem.partition_count(); ++p) {
    if (problem.kappa(p) != 1) throw SieveError(ErrorCode::NotOrthogonal, "construction needs kappa = 1");
    if (problem.part_count(p) == 2) two += (two.empty() ? "" : ",") + problem.partition(p).name;
  }
  if (!two.empty()) {
    throw SieveError(ErrorCode::TwoPartDegenerate, "two-part partitions " + two + "; split them with combine_two_part");
  }
  const std::size_t P = problem.partition_count();
  std::vector<WeightVector> w(P, WeightVector(P));
  Rational base(1);
  for (std::size_t p = 0; p < P; ++p) {
    const long parts = static_cast<long>(problem.part_count(p));
    base *= ratio(Integer(parts - 1), Integer(parts));
  }
  base.canonicalize();

  std::vector<std::uint64_t> order;
  for (std::uint64_t m = 1; m < (std::uint64_t{1} << P); ++m) order.push_back(m);
  std::stable_sort(order.begin(), order.end(),
                   [](std::uint64_t a, std::uint64_t b) { return std::popcount(a) > std::popcount(b); });
  for (auto m : order) {
    const auto j = PartitionSet::from_mask(m);
    Rational rhs = base;
    for (std::size_t p = 0; p < P; ++p) {
      if (j.contains(p)) continue;
      rhs += w[p][j.with(p)] / static_cast<long>(problem.part_count(p));
    }
    const auto members = j.indices();
    const auto ws = split(problem, j, rhs);
    if (ws.size() != members.size()) throw SieveError(ErrorCode::InvalidArgument, "split returned wrong arity");
    Rational check(0);
    for (std::size_t t = 0; t < members.size(); ++t) {
      const long parts = static_cast<long>(problem.part_count(members[t]));
      if (sgn(ws[t]) <= 0) throw SieveError(ErrorCode::InvalidArgument, "split weights must be positive");
      check += ws[t] * (parts - 1) / parts;
      w[members[t]][j] = ws[t];
    }
    if (check != rhs) throw SieveError(ErrorCode::InvalidArgument, "split weights do not meet the balance equation");
  }

  Certificate cert;
  Integer lam = phi(problem, problem.all());
  cert.lambda = Scalar(Rational(lam));
  std::vector<SymCoeffs> bs;
  for (std::size_t p = 0; p < P; ++p) {
    SymCoeffs b = b_from_w(problem, w[p], PartitionSet::singleton(p));
    cert.sdp_terms.push_back({PartitionSet::singleton(p), expand_sym_matrix(problem, b)});
    bs.push_back(std::move(b));
  }
  if (info) {
    info->w = std::move(w);
    info->b = std::move(bs);
  }
  return cert;
}

Built build_orthogonal(const std::vector<std::size_t>& shape) {
  SiftingProblem problem = orthogonal_problem(shape);
  Certificate cert = build_orthogonal(problem);
  return {std::move(problem), std::move(cert)};
}

Halves split_two_part(const SiftingProblem& problem, std::size_t p) {
  if (p >= problem.partition_count()) throw SieveError(ErrorCode::UnknownPartition, "partition index out of range");
  if (problem.part_count(p) != 2) {
    throw SieveError(ErrorCode::NotTwoParts, "partition '" + problem.partition(p).name + "' has " +
                                                 std::to_string(problem.part_count(p)) + " parts");
  }
  auto c0 = problem.partition(p).parts[0];
  auto c1 = problem.partition(p).parts[1];
  std::sort(c0.begin(), c0.end());
  std::sort(c1.begin(), c1.end());
  SiftingProblem s0 = induced_subproblem(problem, c0);
  SiftingProblem s1 = induced_subproblem(problem, c1);
  return {std::move(c0), std::move(c1), std::move(s0), std::move(s1)};
}

namespace {

Scalar checked_lambda(const SiftingProblem& sub, const Certificate& cert, const char* which) {
  VerifyOptions opts;
  opts.exact = cert.is_exact();
  VerificationReport rep;
  try {
    rep = verify(sub, cert, opts);
  } catch (const SieveError& e) {
    if (e.code() == ErrorCode::ResourceLimit) throw;
    throw SieveError(ErrorCode::SubcertificateInvalid, std::string(which) + ": " + e.what());
  }
  if (!rep.verified()) {
    throw SieveError(ErrorCode::SubcertificateInvalid,
                     std::string(which) + " does not verify: " + rep.failures.front().message);
  }
  return cert.lambda;
}

template <class T>
SymMatrix<T> convert(const AnyMatrix& m) {
  if constexpr (std::is_same_v<T, double>) {
    return m.as_float();
  } else {
    return m.as_rational();
  }
}

template <class T>
Certificate glue(const SiftingProblem& problem, std::size_t p, const Halves& h, const Certificate* certs[2],
                 Scalar lambda) {
  const std::size_t n = problem.size();
  std::map<std::uint64_t, SymMatrix<T>> terms;
  std::optional<SymMatrix<T>> b0;
  const std::vector<std::size_t>* pos[2] = {&h.c0, &h.c1};
  const SiftingProblem* subs[2] = {&h.sub0, &h.sub1};

  auto embed = [&](SymMatrix<T>& into, const SymMatrix<T>& block, const std::vector<std::size_t>& at) {
    for (std::size_t a = 0; a < at.size(); ++a) {
      for (std::size_t b = 0; b <= a; ++b) into.at(at[a], at[b]) += block(a, b);
    }
  };
  auto full_index = [&](const SiftingProblem& sub, PartitionSet d) {
    PartitionSet out;
    for (auto q : d.indices()) out = out.with(*problem.find(sub.partition(q).name));
    return out;
  };
  auto slot = [&](PartitionSet d) -> SymMatrix<T>& {
    auto it = terms.find(d.mask());
    if (it == terms.end()) it = terms.emplace(d.mask(), SymMatrix<T>(n)).first;
    return it->second;
  };

  for (int side = 0; side < 2; ++side) {
    const Certificate& c = *certs[side];
    const SiftingProblem& sub = *subs[side];
    for (const auto& t : c.sdp_terms) embed(slot(full_index(sub, t.d)), convert<T>(t.matrix), *pos[side]);
    for (const auto& t : c.sym_terms) {
      SymMatrix<T> m = convert<T>(AnyMatrix(relaxation_matrix(sub, t.d)));
      if constexpr (std::is_same_v<T, double>) {
        m *= t.w.to_double();
      } else {
        m *= t.w.to_rational();
      }
      embed(slot(full_index(sub, t.d)), m, *pos[side]);
    }
    if (c.b0) {
      if (!b0) b0 = SymMatrix<T>(n);
      embed(*b0, convert<T>(*c.b0), *pos[side]);
    }
  }
  SymMatrix<T>& cross = slot(PartitionSet::singleton(p));
  for (auto i : h.c0) {
    for (auto j : h.c1) cross.at(i, j) = T(-1);
  }

  Certificate out;
  out.lambda = lambda;
  for (auto& [mask, m] : terms) out.sdp_terms.push_back({PartitionSet::from_mask(mask), std::move(m)});
  if (b0) out.b0 = AnyMatrix(std::move(*b0));
  return out;
}

}  // namespace

Certificate combine_two_part(const SiftingProblem& problem, std::size_t p, const Certificate& cert0,
                             const Certificate& cert1) {
  check_dim(problem.size(), "two-part combination");
  Halves h = split_two_part(problem, p);
  const Scalar l0 = checked_lambda(h.sub0, cert0, "certificate for part 0");
  const Scalar l1 = checked_lambda(h.sub1, cert1, "certificate for part 1");
  const Certificate* certs[2] = {&cert0, &cert1};
  if (cert0.is_exact() && cert1.is_exact()) {
    const Rational a = l0.to_rational(), b = l1.to_rational();
    return glue<Rational>(problem, p, h, certs, Scalar(a < b ? b : a));
  }
  return glue<double>(problem, p, h, certs, Scalar(std::max(l0.to_double(), l1.to_double())));
}

Certificate build_two_part_recursive(const SiftingProblem& problem) {
  if (problem.partition_count() == 0) {
    Certificate c;
    c.lambda = Scalar(Rational(static_cast<long>(problem.size())));
    return c;
  }
  for (std::size_t p = 0; p < problem.partition_count(); ++p) {
    if (problem.part_count(p) != 2) {
      throw SieveError(ErrorCode::NotTwoParts, "partition '" + problem.partition(p).name + "' has " +
                                                   std::to_string(problem.part_count(p)) + " parts");
    }
  }
  Halves h = split_two_part(problem, 0);
  const Certificate c0 = build_two_part_recursive(h.sub0);
  const Certificate c1 = build_two_part_recursive(h.sub1);
  return combine_two_part(problem, 0, c0, c1);
}

}  // namespace sievesdp

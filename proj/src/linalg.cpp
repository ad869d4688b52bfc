#include "sievesdp/linalg.hpp"

#include <cmath>
#include <numbers>

namespace sievesdp {

MatrixF to_float(const MatrixQ& m) {
  MatrixF out(m.dim());
  for (std::size_t k = 0; k < m.packed().size(); ++k) out.packed()[k] = m.packed()[k].get_d();
  return out;
}

MatrixQ to_rational(const MatrixF& m) {
  MatrixQ out(m.dim());
  for (std::size_t k = 0; k < m.packed().size(); ++k) {
    if (!std::isfinite(m.packed()[k])) {
      throw SieveError(ErrorCode::MalformedInput, "non-finite matrix entry has no exact value");
    }
    out.packed()[k] = Rational(m.packed()[k]);
  }
  return out;
}

namespace {

int sign_of(double v) { return (v > 0) - (v < 0); }
int sign_of(const Rational& v) { return sgn(v); }

// Dense square working copy used by the factorization.
template <class T>
struct Dense {
  std::size_t n;
  std::vector<T> a;
  T& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
};

template <class T>
PsdResult<T> ldlt_check(const SymMatrix<T>& m, const T& shift) {
  const std::size_t n = m.dim();
  Dense<T> w{n, std::vector<T>(n * n)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) w(i, j) = m(i, j);
    w(i, i) += shift;
  }
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;

  // z lives on permuted coordinates >= k; eliminated coordinates are solved
  // from L^T x = z so that x^T M x equals the reduced form on the tail.
  auto witness = [&](std::size_t k, std::vector<T> z) {
    for (std::size_t t = k; t-- > 0;) {
      T acc(0);
      for (std::size_t i = t + 1; i < n; ++i) acc += w(i, t) * z[i];
      z[t] = -acc;
    }
    PsdResult<T> r;
    r.member = false;
    r.witness.assign(n, T(0));
    for (std::size_t i = 0; i < n; ++i) r.witness[perm[i]] = z[i];
    r.value = quadratic_form(m, r.witness);
    return r;
  };

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t r = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (w(i, i) > w(r, r)) r = i;
    }
    if (r != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(w(k, j), w(r, j));
      for (std::size_t i = 0; i < n; ++i) std::swap(w(i, k), w(i, r));
      std::swap(perm[k], perm[r]);
    }
    const T d = w(k, k);
    if (sign_of(d) < 0) {
      std::vector<T> z(n, T(0));
      z[k] = T(1);
      return witness(k, std::move(z));
    }
    if (sign_of(d) == 0) {
      // Remaining diagonal is <= 0 and its maximum is 0; a nonzero
      // off-diagonal entry then gives a negative 2x2 form.
      for (std::size_t i = k + 1; i < n; ++i) {
        for (std::size_t j = k; j < i; ++j) {
          const int s = sign_of(w(i, j));
          if (s != 0) {
            std::vector<T> z(n, T(0));
            z[i] = T(1);
            z[j] = T(-s);
            return witness(k, std::move(z));
          }
        }
      }
      for (std::size_t i = k + 1; i < n; ++i) {
        if (sign_of(w(i, i)) < 0) {
          std::vector<T> z(n, T(0));
          z[i] = T(1);
          return witness(k, std::move(z));
        }
      }
      break;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      if (sign_of(w(i, k)) == 0) continue;
      const T f = w(i, k) / d;
      for (std::size_t j = k + 1; j <= i; ++j) {
        w(i, j) -= f * w(j, k);
        if (j != i) w(j, i) = w(i, j);
      }
    }
    for (std::size_t i = k + 1; i < n; ++i) w(i, k) /= d;
  }
  return PsdResult<T>{};
}

}  // namespace

double inf_norm(const MatrixF& m) {
  double best = 0;
  for (std::size_t i = 0; i < m.dim(); ++i) {
    double row = 0;
    for (std::size_t j = 0; j < m.dim(); ++j) row += std::abs(m(i, j));
    best = std::max(best, row);
  }
  return best;
}

PsdResult<double> psd_check(const MatrixF& m, double tol) {
  if (tol < 0) throw SieveError(ErrorCode::InvalidArgument, "tolerance must be nonnegative");
  return ldlt_check<double>(m, tol * inf_norm(m));
}

PsdResult<Rational> psd_check(const MatrixQ& m, double tol) {
  if (tol != 0) throw SieveError(ErrorCode::InvalidArgument, "exact PSD check requires tol = 0");
  return ldlt_check<Rational>(m, Rational(0));
}

double quadratic_form(const MatrixF& m, const std::vector<double>& x) {
  double acc = 0;
  for (std::size_t i = 0; i < m.dim(); ++i) {
    if (x[i] == 0) continue;
    double row = 0;
    for (std::size_t j = 0; j < m.dim(); ++j) row += m(i, j) * x[j];
    acc += x[i] * row;
  }
  return acc;
}

Rational quadratic_form(const MatrixQ& m, const std::vector<Rational>& x) {
  Rational acc(0);
  for (std::size_t i = 0; i < m.dim(); ++i) {
    if (sgn(x[i]) == 0) continue;
    Rational row(0);
    for (std::size_t j = 0; j < m.dim(); ++j) {
      if (sgn(x[j]) != 0) row += m(i, j) * x[j];
    }
    acc += x[i] * row;
  }
  return acc;
}

std::vector<double> eigenvalues(const MatrixF& m) {
  const std::size_t n = m.dim();
  std::vector<double> a(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i * n + j] = m(i, j);
  }
  auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };
  double total = 0;
  for (double v : a) total += v * v;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
    }
    if (off <= 1e-30 * total || off == 0) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (apq == 0) continue;
        const double theta = (at(q, q) - at(p, p)) / (2 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        const double c = 1 / std::sqrt(t * t + 1);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = at(k, p), akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = at(p, k), aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
        at(p, q) = at(q, p) = 0;
      }
    }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = at(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

double min_eigenvalue(const MatrixF& m) {
  if (m.dim() == 0) return 0;
  return eigenvalues(m).front();
}

double max_eigenvalue(const MatrixF& m) {
  if (m.dim() == 0) return 0;
  return eigenvalues(m).back();
}

double operator_norm(const MatrixF& m) {
  if (m.dim() == 0) return 0;
  auto ev = eigenvalues(m);
  return std::max(std::abs(ev.front()), std::abs(ev.back()));
}

std::vector<std::size_t> complement_indices(std::size_t n, const std::vector<std::size_t>& deleted) {
  std::vector<char> gone(n, 0);
  for (auto i : deleted) {
    if (i < n) gone[i] = 1;
  }
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < n; ++i) {
    if (!gone[i]) kept.push_back(i);
  }
  return kept;
}

template <class T>
SymMatrix<T> tensor_restrict(const SiftingProblem& problem,
                             const std::map<std::size_t, std::pair<T, T>>& factors, Exec exec) {
  for (const auto& [p, f] : factors) {
    if (p >= problem.partition_count()) {
      throw SieveError(ErrorCode::UnknownPartition, "factor for partition index " + std::to_string(p));
    }
  }
  const std::size_t n = problem.size();
  SymMatrix<T> out(n);
  std::vector<std::pair<std::size_t, std::pair<T, T>>> list(factors.begin(), factors.end());
  parallel_for(static_cast<std::int64_t>(n), exec, [&](std::int64_t ii) {
    const auto i = static_cast<std::size_t>(ii);
    for (std::size_t j = 0; j <= i; ++j) {
      T v(1);
      for (const auto& [p, f] : list) {
        if (problem.part_of(p, i) == problem.part_of(p, j)) {
          v *= f.first + f.second;
        } else {
          v *= f.second;
        }
      }
      out.at(i, j) = v;
    }
  });
  return out;
}

template MatrixF tensor_restrict<double>(const SiftingProblem&,
                                         const std::map<std::size_t, std::pair<double, double>>&, Exec);
template MatrixQ tensor_restrict<Rational>(const SiftingProblem&,
                                           const std::map<std::size_t, std::pair<Rational, Rational>>&,
                                           Exec);

MatrixF exp_matrix(std::size_t N, const Rational& alpha) {
  const Integer& num = alpha.get_num();
  const Integer& den = alpha.get_den();
  std::vector<double> c(N);
  for (std::size_t m = 0; m < N; ++m) {
    Integer r = (num * static_cast<unsigned long>(m)) % den;
    if (r < 0) r += den;
    const double frac = ratio(r, den).get_d();
    c[m] = std::cos(2 * std::numbers::pi * frac);
  }
  MatrixF out(N);
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = 0; j <= i; ++j) out.at(i, j) = c[i - j];
  }
  return out;
}

MatrixF exp_matrix(const SiftingProblem& problem, const Rational& alpha) {
  if (!problem.is_interval()) throw SieveError(ErrorCode::NotAnInterval, "universe is not an interval");
  return exp_matrix(problem.size(), alpha);
}

}  // namespace sievesdp

#include "sievesdp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <Eigen/Dense>

#include "eigen_util.hpp"
#include "sievesdp/config.hpp"
#include "sievesdp/sym_relax.hpp"

namespace sievesdp {

std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::Feasible: return "Feasible";
    case SolveStatus::IterLimit: return "IterLimit";
  }
  return "?";
}

namespace {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using Index = Eigen::Index;

constexpr int kCheckEvery = 25;
constexpr int kStallChecks = 12;

Mat gather(const Mat& m, const std::vector<Index>& idx) {
  const auto k = static_cast<Index>(idx.size());
  Mat out(k, k);
  for (Index a = 0; a < k; ++a) {
    for (Index b = 0; b < k; ++b) out(a, b) = m(idx[a], idx[b]);
  }
  return out;
}

struct ConeBlock {
  PartitionSet d;
  std::vector<std::vector<Index>> kept;
  Mat count;  // 1 + number of selections keeping both i and j
};

// One point of the product space: every cone matrix, a copy of its kept
// submatrix per selection, the residual, B0 and the scaled weights.
struct State {
  std::vector<Mat> b;
  std::vector<std::vector<Mat>> x;
  Mat r, b0;
  Vec w;

  void axpy(double a, const State& o) {
    for (std::size_t i = 0; i < b.size(); ++i) {
      b[i] += a * o.b[i];
      for (std::size_t s = 0; s < x[i].size(); ++s) x[i][s] += a * o.x[i][s];
    }
    r += a * o.r;
    b0 += a * o.b0;
    w += a * o.w;
  }
};

void add_block(Mat& m, const std::vector<Index>& idx, const Mat& block) {
  const auto k = static_cast<Index>(idx.size());
  for (Index a = 0; a < k; ++a) {
    for (Index b = 0; b < k; ++b) m(idx[a], idx[b]) += block(a, b);
  }
}

// Douglas-Rachford splitting between the affine set (copies agree with their
// matrix, and R + sum B + B0 + sum w T = lambda I - J) and the product of
// cones (each copy and R PSD, B0 and w nonnegative).
class Feasibility {
 public:
  Feasibility(const SiftingProblem& problem, const std::vector<PartitionSet>& ds,
              const std::vector<PartitionSet>& df, bool with_b0, std::uint64_t limit, Exec exec)
      : n_(static_cast<Index>(problem.size())), exec_(exec), with_b0_(with_b0), df_(df) {
    h_ = Mat::Ones(n_, n_);
    if (with_b0_) h_.array() += 1.0;
    for (auto d : ds) {
      SelectionEnumerator sel(problem, d, limit);
      if (!sel.within_limit()) {
        throw SieveError(ErrorCode::LimitExceeded, "term needs " + std::to_string(sel.count()) +
                                                       " selections (limit " + std::to_string(limit) + ")");
      }
      ConeBlock b;
      b.d = d;
      b.count = Mat::Ones(n_, n_);
      for (std::uint64_t i = 0; i < sel.count(); ++i) {
        std::vector<Index> k;
        for (auto e : sel.kept(i)) k.push_back(static_cast<Index>(e));
        const auto m = static_cast<Index>(k.size());
        add_block(b.count, k, Mat::Ones(m, m));
        b.kept.push_back(std::move(k));
      }
      h_ += b.count.cwiseInverse();
      blocks_.push_back(std::move(b));
    }
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
      for (std::size_t s = 0; s < blocks_[i].kept.size(); ++s) jobs_.emplace_back(i, s);
    }
    for (auto d : df) {
      Mat t = detail::to_eigen(to_float(relaxation_matrix(problem, d, exec)));
      const double nrm = t.norm();
      tnorm_.push_back(nrm > 0 ? nrm : 1.0);
      that_.push_back(t / tnorm_.back());
    }
    const auto k = static_cast<Index>(that_.size());
    Mat sys = Mat::Identity(k, k);
    for (Index a = 0; a < k; ++a) {
      for (Index c = 0; c < k; ++c) sys(a, c) += (that_[a].array() * that_[c].array() / h_.array()).sum();
    }
    solver_ = sys.ldlt();
  }

  void reset(double lambda) {
    target_ = lambda * Mat::Identity(n_, n_) - Mat::Ones(n_, n_);
    z_ = zero();
  }

  /// One splitting step; returns the norm of the change in z.
  double step() {
    State x = project_cones(z_);
    State r = x;
    r.axpy(1.0, x);
    r.axpy(-1.0, z_);
    y_ = project_affine(r);
    State delta = y_;
    delta.axpy(-1.0, x);
    z_.axpy(1.0, delta);
    return norm(delta);
  }

  /// Repairs the last affine iterate into valid terms and returns the
  /// certificate with the smallest lambda they allow.
  Certificate candidate(double* lambda) const {
    Certificate c;
    Mat sum = Mat::Ones(n_, n_);
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
      Mat m = 0.5 * (y_.b[i] + y_.b[i].transpose());
      double shift = 0;
      for (const auto& k : blocks_[i].kept) shift = std::max(shift, -detail::min_eig(gather(m, k)));
      if (shift > 0) m += (shift * (1 + 1e-12) + 1e-14) * Mat::Identity(n_, n_);
      sum += m;
      c.sdp_terms.push_back({blocks_[i].d, AnyMatrix(detail::from_eigen(m))});
    }
    if (with_b0_) {
      Mat m = (0.5 * (y_.b0 + y_.b0.transpose())).cwiseMax(0.0);
      sum += m;
      c.b0 = AnyMatrix(detail::from_eigen(m));
    }
    for (std::size_t d = 0; d < that_.size(); ++d) {
      const double wh = std::max(0.0, y_.w(static_cast<Index>(d)));
      sum += wh * that_[d];
      c.sym_terms.push_back({df_[d], Scalar(wh / tnorm_[d])});
    }
    *lambda = detail::max_eig(0.5 * (sum + sum.transpose()));
    c.lambda = Scalar(*lambda);
    return c;
  }

 private:
  State zero() const {
    State s;
    for (const auto& b : blocks_) {
      s.b.push_back(Mat::Zero(n_, n_));
      s.x.emplace_back();
      for (const auto& k : b.kept) {
        const auto m = static_cast<Index>(k.size());
        s.x.back().push_back(Mat::Zero(m, m));
      }
    }
    s.r = Mat::Zero(n_, n_);
    s.b0 = Mat::Zero(n_, n_);
    s.w = Vec::Zero(static_cast<Index>(that_.size()));
    return s;
  }

  static double norm(const State& s) {
    double acc = s.r.squaredNorm() + s.b0.squaredNorm() + s.w.squaredNorm();
    for (std::size_t i = 0; i < s.b.size(); ++i) {
      acc += s.b[i].squaredNorm();
      for (const auto& m : s.x[i]) acc += m.squaredNorm();
    }
    return std::sqrt(acc);
  }

  // Every eigen-clip is independent; the job list fixes the work split so
  // the result does not depend on the thread count.
  State project_cones(const State& v) const {
    State o = v;
    const auto jobs = static_cast<std::int64_t>(jobs_.size() + 1);
    parallel_for(jobs, exec_, [&](std::int64_t t) {
      if (t == static_cast<std::int64_t>(jobs_.size())) {
        detail::project_psd(o.r);
        return;
      }
      const auto [i, s] = jobs_[static_cast<std::size_t>(t)];
      detail::project_psd(o.x[i][s]);
    });
    if (with_b0_) o.b0 = o.b0.cwiseMax(0.0);
    o.w = o.w.cwiseMax(0.0);
    return o;
  }

  State project_affine(const State& v) const {
    State o = zero();
    std::vector<Mat> avg(blocks_.size());
    Mat e = target_ - v.r;
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
      avg[i] = v.b[i];
      for (std::size_t s = 0; s < blocks_[i].kept.size(); ++s) add_block(avg[i], blocks_[i].kept[s], v.x[i][s]);
      avg[i] = avg[i].cwiseQuotient(blocks_[i].count);
      e -= avg[i];
    }
    if (with_b0_) e -= v.b0;
    for (std::size_t d = 0; d < that_.size(); ++d) e -= v.w(static_cast<Index>(d)) * that_[d];

    Vec u;
    Mat g = e;
    if (!that_.empty()) {
      Vec rhs(static_cast<Index>(that_.size()));
      for (std::size_t d = 0; d < that_.size(); ++d) {
        rhs(static_cast<Index>(d)) = (e.array() * that_[d].array() / h_.array()).sum();
      }
      u = solver_.solve(rhs);
      for (std::size_t d = 0; d < that_.size(); ++d) g -= u(static_cast<Index>(d)) * that_[d];
    }
    g = g.cwiseQuotient(h_);

    for (std::size_t i = 0; i < blocks_.size(); ++i) {
      o.b[i] = avg[i] + g.cwiseQuotient(blocks_[i].count);
      for (std::size_t s = 0; s < blocks_[i].kept.size(); ++s) o.x[i][s] = gather(o.b[i], blocks_[i].kept[s]);
    }
    o.r = v.r + g;
    if (with_b0_) o.b0 = v.b0 + g;
    if (!that_.empty()) o.w = v.w + u;
    return o;
  }

  Index n_;
  Exec exec_;
  bool with_b0_;
  std::vector<PartitionSet> df_;
  std::vector<ConeBlock> blocks_;
  std::vector<std::pair<std::size_t, std::size_t>> jobs_;
  std::vector<Mat> that_;
  std::vector<double> tnorm_;
  Mat h_;
  Eigen::LDLT<Mat> solver_;
  Mat target_;
  State z_, y_;
};

void check_terms(const SiftingProblem& problem, const std::vector<PartitionSet>& list, const char* what) {
  std::set<std::uint64_t> seen;
  for (auto d : list) {
    if (!d.subset_of(problem.all())) {
      throw SieveError(ErrorCode::UnknownPartition, std::string(what) + " mentions an unknown partition");
    }
    if (!seen.insert(d.mask()).second) {
      throw SieveError(ErrorCode::DuplicateTerm, std::string(what) + " lists a set twice");
    }
  }
}

}  // namespace

SolveResult solve(const SiftingProblem& problem, const std::vector<PartitionSet>& ds,
                  const std::vector<PartitionSet>& df, bool with_b0, const SolveOptions& opts) {
  if (!(opts.feas_tol > 0) || !(opts.gap_tol > 0) || opts.max_outer < 0 || opts.max_inner < 1) {
    throw SieveError(ErrorCode::InvalidArgument, "solver tolerances must be positive");
  }
  if (ds.empty() && df.empty() && !with_b0) {
    throw SieveError(ErrorCode::InvalidArgument, "no terms to optimize over");
  }
  check_dim(problem.size(), "solve");
  check_terms(problem, ds, "D_s");
  check_terms(problem, df, "D_f");

  const double n = static_cast<double>(problem.size());
  SolveResult res;
  res.seed = opts.seed;
  res.lo = std::min(1.0, n);
  res.hi = n;
  Certificate best;
  best.lambda = Scalar(n);
  double best_lambda = n;

  Feasibility feas(problem, ds, df, with_b0, opts.selection_limit, opts.exec);
  int outer = 0;
  while (outer < opts.max_outer && res.hi - res.lo > opts.gap_tol) {
    ++outer;
    const double mid = 0.5 * (res.lo + res.hi);
    feas.reset(mid);
    BisectionStep step;
    step.lambda = mid;
    step.achieved = n;
    int stall = 0;
    for (int it = 1; it <= opts.max_inner; ++it) {
      feas.step();
      step.sweeps = it;
      if (it % kCheckEvery != 0 && it != opts.max_inner) continue;
      double lam = 0;
      Certificate c = feas.candidate(&lam);
      if (lam < step.achieved - 0.1 * opts.feas_tol) {
        stall = 0;
      } else {
        ++stall;
      }
      step.achieved = std::min(step.achieved, lam);
      if (lam < best_lambda) {
        best_lambda = lam;
        best = std::move(c);
      }
      if (lam <= mid + opts.feas_tol) {
        step.feasible = true;
        break;
      }
      if (stall >= kStallChecks) break;
    }
    if (step.feasible) {
      res.hi = mid;
    } else {
      res.lo = mid;
    }
    res.hi = std::max(res.lo, std::min(res.hi, best_lambda));
    res.trace.push_back(step);
  }

  VerifyOptions vo;
  vo.selection_limit = std::max<std::uint64_t>(opts.selection_limit, 1'000'000);
  vo.exec = opts.exec;
  res.report = verify(problem, best, vo);
  if (!res.report.verified()) {
    best = Certificate{};
    best.lambda = Scalar(n);
    res.report = verify(problem, best, vo);
    res.hi = n;
  }
  res.cert = std::move(best);
  res.lambda_hat = res.report.effective_bound.to_double();
  if (res.hi - res.lo <= opts.gap_tol) {
    res.status = SolveStatus::Optimal;
  } else {
    res.status = res.lambda_hat < n ? SolveStatus::Feasible : SolveStatus::IterLimit;
  }
  return res;
}

SolveResult solve_symmetric(const SiftingProblem& problem, const std::vector<PartitionSet>& df,
                            bool include_free_b1, const SolveOptions& opts) {
  if (!problem.is_interval() && !problem.is_orthogonal()) {
    throw SieveError(ErrorCode::NotAnInterval, "universe is neither an interval nor an orthogonal product");
  }
  std::vector<PartitionSet> ds;
  if (include_free_b1) ds.push_back(PartitionSet{});
  return solve(problem, ds, df, false, opts);
}

}  // namespace sievesdp

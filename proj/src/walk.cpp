#include "rgraph/walk.hpp"

#include "rgraph/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rgraph {
namespace {

constexpr long kRenormalizeEvery = 10000;
constexpr double kEarlyStopTol = 1e-12;
constexpr double kDistributionTol = 1e-12;

void check_distribution(const Eigen::VectorXd& pi0, Eigen::Index n) {
  if (pi0.size() != n) throw Error("walk", "InvalidDistribution", "initial distribution has wrong length");
  if ((pi0.array() < 0.0).any() || std::abs(pi0.sum() - 1.0) > kDistributionTol) {
    throw Error("walk", "InvalidDistribution", "initial distribution is not a probability vector");
  }
}

}  // namespace

namespace kernels {

void step_parallel(const Eigen::SparseMatrix<double, Eigen::ColMajor>& p_cols,
                   const Eigen::VectorXd& pi, Eigen::VectorXd& out) {
  const Eigen::Index n = p_cols.cols();
  const double* values = p_cols.valuePtr();
  const auto* rows = p_cols.innerIndexPtr();
  const auto* starts = p_cols.outerIndexPtr();
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < n; ++j) {
    double acc = 0.0;
    for (auto k = starts[j]; k < starts[j + 1]; ++k) acc += pi[rows[k]] * values[k];
    out[j] = acc;
  }
}

void step_serial(const Eigen::SparseMatrix<double, Eigen::RowMajor>& p_rows,
                 const Eigen::VectorXd& pi, Eigen::VectorXd& out) {
  out.setZero(p_rows.cols());
  for (Eigen::Index i = 0; i < p_rows.outerSize(); ++i) {
    const double w = pi[i];
    if (w == 0.0) continue;
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(p_rows, i); it; ++it) {
      out[it.col()] += w * it.value();
    }
  }
}

}  // namespace kernels

StateDistribution cesaro_scores(const TransitionMatrix& p, const WalkOptions& opts) {
  const Eigen::Index n = p.size();
  if (opts.steps <= 0) throw Error("walk", "InvalidSteps", "T must be positive");
  Eigen::VectorXd pi;
  if (opts.pi0) {
    check_distribution(*opts.pi0, n);
    pi = *opts.pi0;
  } else {
    pi = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  }

  Eigen::SparseMatrix<double, Eigen::ColMajor> p_cols;
  if (opts.exec == Execution::parallel) {
    p_cols = p.probs;
    p_cols.makeCompressed();
  }
  Eigen::VectorXd next(n);
  std::vector<long double> total(static_cast<std::size_t>(n), 0.0L);

  long t = 0;
  while (t < opts.steps) {
    if (opts.exec == Execution::parallel) {
      kernels::step_parallel(p_cols, pi, next);
    } else {
      kernels::step_serial(p.probs, pi, next);
    }
    pi.swap(next);
    ++t;
    if (t % kRenormalizeEvery == 0) pi /= pi.sum();

    if (opts.early_stop && t > 1) {
      // |mean_t - mean_{t-1}|_1 = |pi_t - mean_{t-1}|_1 / t
      long double diff = 0.0L;
      for (Eigen::Index j = 0; j < n; ++j) {
        diff += std::abs(static_cast<long double>(pi[j]) - total[j] / static_cast<long double>(t - 1));
      }
      for (Eigen::Index j = 0; j < n; ++j) total[j] += pi[j];
      if (diff / static_cast<long double>(t) < kEarlyStopTol) break;
    } else {
      for (Eigen::Index j = 0; j < n; ++j) total[j] += pi[j];
    }
  }

  StateDistribution out;
  out.steps = t;
  out.probs.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) out.probs[j] = static_cast<double>(total[j] / static_cast<long double>(t));
  return out;
}

StateDistribution cesaro_scores(const TransitionMatrix& p, long steps) {
  WalkOptions opts;
  opts.steps = steps;
  return cesaro_scores(p, opts);
}

std::vector<Verdict> threshold_outliers(const Eigen::VectorXd& scores, double epsilon) {
  std::vector<Verdict> out(static_cast<std::size_t>(scores.size()));
  for (Eigen::Index j = 0; j < scores.size(); ++j) {
    out[j] = scores[j] <= epsilon ? Verdict::outlier : Verdict::inlier;
  }
  return out;
}

std::vector<Verdict> threshold_outliers(const StateDistribution& dist, double epsilon) {
  return threshold_outliers(dist.probs, epsilon);
}

double auto_epsilon(const Eigen::VectorXd& scores) {
  std::vector<double> s(scores.data(), scores.data() + scores.size());
  std::sort(s.begin(), s.end());
  double best_gap = 0.0;
  double eps = 0.0;
  for (std::size_t k = 0; k + 1 < s.size(); ++k) {
    if (s[k + 1] == 0.0) continue;
    const double gap = (s[k + 1] - s[k]) / std::abs(s[k + 1]);
    if (gap > best_gap) {
      best_gap = gap;
      eps = s[k];
    }
  }
  return eps;
}

}  // namespace rgraph

#include "rgraph/baselines.hpp"

#include "rgraph/error.hpp"

#include <cmath>

namespace rgraph {

std::string to_string(Method m) {
  switch (m) {
    case Method::rgraph: return "rgraph";
    case Method::l1_thresholding: return "l1t";
    case Method::outrank: return "outrank";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  if (name == "rgraph") return Method::rgraph;
  if (name == "l1t" || name == "l1_thresholding") return Method::l1_thresholding;
  if (name == "outrank") return Method::outrank;
  throw Error("baselines", "UnknownMethod", "unknown method '" + name + "'");
}

BaselineScores l1_thresholding_scores(const RepresentationMatrix& r) {
  BaselineScores out{Method::l1_thresholding, Eigen::VectorXd::Zero(r.size()), {}, 0, 0.0};
  for (Eigen::Index j = 0; j < r.coeffs.outerSize(); ++j) {
    double norm = 0.0;
    for (Eigen::SparseMatrix<double>::InnerIterator it(r.coeffs, j); it; ++it) norm += std::abs(it.value());
    out.scores[j] = -norm;
  }
  return out;
}

BaselineScores outrank_scores(const DataMatrix& x, const OutRankOptions& opts) {
  if (!(opts.damping >= 0.0 && opts.damping < 1.0)) {
    throw Error("baselines", "InvalidParams", "damping must lie in [0, 1)");
  }
  const Eigen::Index n = x.size();
  BaselineScores out{Method::outrank, Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n)), {}, 0, 0.0};
  if (n < 2) return out;

  // Row-normalized |cosine| similarity, diagonal excluded. Rows are independent.
  Eigen::MatrixXd w(n, n);
  w.noalias() = x.values.transpose() * x.values;
  std::vector<char> zero_row(static_cast<std::size_t>(n), 0);
  const bool parallel = opts.exec == Execution::parallel;
#pragma omp parallel for schedule(static) if (parallel)
  for (Eigen::Index i = 0; i < n; ++i) {
    // w is symmetric, so work on column i (contiguous) and read it as row i.
    auto col = w.col(i);
    col = col.cwiseAbs();
    col[i] = 0.0;
    const double s = col.sum();
    if (s > 0.0) {
      col /= s;
    } else {
      col.setConstant(1.0 / static_cast<double>(n - 1));
      col[i] = 0.0;
      zero_row[i] = 1;
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (zero_row[i]) out.substituted_rows.push_back(i);
  }

  // Column i of w holds row i of the transition matrix; transpose once so
  // that (pi P)_j is a contiguous dot product with column j.
  const Eigen::MatrixXd p = w.transpose();
  Eigen::VectorXd pi = out.scores;
  Eigen::VectorXd next(n);
  const double restart = (1.0 - opts.damping) / static_cast<double>(n);
  double residual = 0.0;
  int it = 0;
  while (it < opts.max_iters) {
    ++it;
#pragma omp parallel for schedule(static) if (parallel)
    for (Eigen::Index j = 0; j < n; ++j) next[j] = opts.damping * p.col(j).dot(pi) + restart;
    residual = (next - pi).lpNorm<1>();
    pi.swap(next);
    if (residual < opts.tol) break;
  }
  out.scores = pi;
  out.iterations = it;
  out.final_residual = residual;
  return out;
}

}  // namespace rgraph

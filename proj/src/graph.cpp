#include "rgraph/graph.hpp"

#include <cmath>
#include <string>

namespace rgraph {

TransitionMatrix transition_matrix(const RepresentationMatrix& r, DanglingPolicy policy) {
  const Eigen::Index n = r.size();
  TransitionMatrix out;
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(r.coeffs.nonZeros()));

  for (Eigen::Index i = 0; i < n; ++i) {
    // Row i of P is column i of |R|, scaled to unit mass.
    double mass = 0.0;
    for (Eigen::SparseMatrix<double>::InnerIterator it(r.coeffs, i); it; ++it) {
      mass += std::abs(it.value());
    }
    if (mass > 0.0) {
      for (Eigen::SparseMatrix<double>::InnerIterator it(r.coeffs, i); it; ++it) {
        if (it.value() != 0.0) triplets.emplace_back(i, it.row(), std::abs(it.value()) / mass);
      }
      continue;
    }
    if (policy == DanglingPolicy::error) {
      throw Error("graph", "DanglingState",
                  "point " + std::to_string(i) +
                      " has an all-zero representation; the solution is nonzero only when alpha > 1");
    }
    out.dangling.push_back(i);
    if (n == 1) {
      triplets.emplace_back(0, 0, 1.0);
      continue;
    }
    const double p = 1.0 / static_cast<double>(n - 1);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i) triplets.emplace_back(i, j, p);
    }
  }
  out.probs.resize(n, n);
  out.probs.setFromTriplets(triplets.begin(), triplets.end());
  out.probs.makeCompressed();
  return out;
}

double max_row_sum_error(const TransitionMatrix& p) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < p.probs.outerSize(); ++i) {
    double s = 0.0;
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(p.probs, i); it; ++it) s += it.value();
    worst = std::max(worst, std::abs(s - 1.0));
  }
  return worst;
}

}  // namespace rgraph

namespace rgraph {

TransitionMatrix from_dense(const Eigen::MatrixXd& p) {
  TransitionMatrix out;
  out.probs = p.sparseView(0.0, 0.0);
  out.probs.makeCompressed();
  return out;
}

std::vector<std::vector<int>> adjacency(const TransitionMatrix& p) {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(p.size()));
  for (Eigen::Index i = 0; i < p.probs.outerSize(); ++i) {
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(p.probs, i); it; ++it) {
      if (it.value() > 0.0) adj[i].push_back(static_cast<int>(it.col()));
    }
  }
  return adj;
}

}  // namespace rgraph

#pragma once

#include "rgraph/elasticnet.hpp"

#include <Eigen/SparseCore>

#include <vector>

namespace rgraph {

// What to do with a state whose representation vector is entirely zero.
enum class DanglingPolicy {
  uniform,  // jump uniformly to every other state
  error,    // refuse to build P
};

// Row-stochastic random-walk matrix on the representation graph.
struct TransitionMatrix {
  Eigen::SparseMatrix<double, Eigen::RowMajor> probs;
  std::vector<Eigen::Index> dangling;

  Eigen::Index size() const { return probs.rows(); }
};

// p_ij = |r_ji| / ||r_i||_1. Edge j -> i exists iff r_ij != 0 (point j uses point i).
TransitionMatrix transition_matrix(const RepresentationMatrix& r,
                                   DanglingPolicy policy = DanglingPolicy::uniform);

// Largest |row sum - 1| over all rows.
double max_row_sum_error(const TransitionMatrix& p);

}  // namespace rgraph

namespace rgraph {

// Wraps a dense row-stochastic matrix; entries equal to zero are structural zeros.
TransitionMatrix from_dense(const Eigen::MatrixXd& p);

// Positive-probability digraph of P.
std::vector<std::vector<int>> adjacency(const TransitionMatrix& p);

}  // namespace rgraph

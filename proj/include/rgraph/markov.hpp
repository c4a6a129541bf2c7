#pragma once

#include "rgraph/graph.hpp"

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace rgraph {

// Partition of the states into closed communicating classes and the
// inessential remainder.
struct MarkovDecomposition {
  std::vector<std::vector<Eigen::Index>> closed_classes;  // sorted by smallest member
  std::vector<Eigen::Index> inessential;
  std::vector<int> class_of;  // class index per state, -1 when inessential

  bool is_essential(Eigen::Index state) const { return class_of[state] >= 0; }
};

struct AnalyticLimit {
  Eigen::VectorXd pi_star;
  std::vector<Eigen::VectorXd> class_stationaries;
  Eigen::MatrixXd hitting;  // |I| x n, rows follow decomposition.inessential
  MarkovDecomposition decomposition;
};

MarkovDecomposition decompose(const TransitionMatrix& p);

// Unique stationary distribution of P restricted to a closed class, from a
// dense LU solve of (P_EE^T - I) pi = 0 with one equation replaced by sum(pi) = 1.
Eigen::VectorXd stationary_distribution(const TransitionMatrix& p,
                                        const std::vector<Eigen::Index>& closed_class);

// f(i, l) = probability that the walk from inessential state i is absorbed in
// class l. Solves (I - P_II) F = P_IE 1 by dense LU.
Eigen::MatrixXd hitting_probabilities(const TransitionMatrix& p, const MarkovDecomposition& dec);

// lim_T (1/T) sum_{t=1..T} pi0 P^t, assembled from the class stationaries and
// the hitting probabilities. pi0 defaults to uniform.
AnalyticLimit analytic_cesaro_limit(const TransitionMatrix& p,
                                    const std::optional<Eigen::VectorXd>& pi0 = std::nullopt);

// The full limit matrix lim_T (1/T) sum_{t=1..T} P^t (row i starts at state i).
Eigen::MatrixXd cesaro_limit_matrix(const TransitionMatrix& p);

}  // namespace rgraph

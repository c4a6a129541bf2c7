#pragma once

#include "rgraph/dataset.hpp"
#include "rgraph/elasticnet.hpp"
#include "rgraph/execution.hpp"
#include "rgraph/scc.hpp"

#include <utility>
#include <vector>

namespace rgraph {

// Geometric sufficient conditions for subspace preservation at one inlier.
struct ConditionRecord {
  Eigen::Index j = 0;
  double inlier_term = 0.0;   // kappa_j = max_{k != j, same subspace} |<x_k, delta_unit>|
  double outlier_term = 0.0;  // max_{k outside the subspace} |<x_k, delta_unit>|
  double margin = 0.0;
  double threshold = 0.0;     // (1 - lambda) / lambda
  double delta_norm = 0.0;
  double outside_max_raw = 0.0;  // max_{k outside} |<x_k, delta>|
  bool eq6_holds = false;        // margin > threshold
  bool lemmaA1_holds = false;    // outside_max_raw < lambda
  bool kappa_bound_ok = false;   // ||delta|| <= (lambda kappa + 1 - lambda) / kappa^2
};

struct ConditionReport {
  std::vector<ConditionRecord> records;
  double fraction_passing = 0.0;  // share of inliers with eq6_holds
  bool all_pass() const;
};

struct SubspacePreservation {
  bool holds = true;
  std::vector<std::pair<Eigen::Index, Eigen::Index>> violations;  // (i, j): r_ij != 0 across subspaces
};

struct AssumptionReport {
  // Inlier subspaces whose induced representation subgraph is not strongly
  // connected (0-based).
  std::vector<int> disconnected_subspaces;
  int subspace_count = 0;
  // Sets of outliers with no edge leaving them.
  std::vector<std::vector<Eigen::Index>> closed_outlier_sets;
  SubspacePreservation preservation;

  bool assumption1() const { return disconnected_subspaces.empty(); }
  bool assumption2() const { return closed_outlier_sets.empty(); }
  bool all_hold() const { return assumption1() && assumption2() && preservation.holds; }
};

// Edge j -> i iff r_ij != 0 (point j uses point i).
Adjacency representation_graph(const RepresentationMatrix& r);

SubspacePreservation check_subspace_preserving(const RepresentationMatrix& r, const Labels& labels);

ConditionRecord check_theorem1_condition(const DataMatrix& x, const Labels& labels,
                                         const SolverParams& params, Eigen::Index j);

ConditionReport check_theorem1_all(const DataMatrix& x, const Labels& labels, const SolverParams& params,
                                   Execution exec = Execution::parallel);

// Assumption 1: every subspace's points are strongly connected among
// themselves (and, so that the walk is defined, each has an outgoing edge).
// Assumption 2: no closed strongly connected component of the representation
// graph consists of outliers only.
AssumptionReport check_assumptions(const RepresentationMatrix& r, const Labels& labels);

}  // namespace rgraph

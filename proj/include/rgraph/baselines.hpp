#pragma once

#include "rgraph/dataset.hpp"
#include "rgraph/elasticnet.hpp"
#include "rgraph/execution.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace rgraph {

enum class Method { rgraph, l1_thresholding, outrank };

std::string to_string(Method m);
Method parse_method(const std::string& name);

// Higher score = more inlier-like, for every method.
struct BaselineScores {
  Method method;
  Eigen::VectorXd scores;
  // OutRank only: points with zero similarity to all others (given a uniform row).
  std::vector<Eigen::Index> substituted_rows;
  int iterations = 0;
  double final_residual = 0.0;
};

// scores[j] = -||r_j||_1
BaselineScores l1_thresholding_scores(const RepresentationMatrix& r);

struct OutRankOptions {
  double damping = 0.85;
  double tol = 1e-12;
  int max_iters = 100000;
  Execution exec = Execution::parallel;
};

// PageRank with restart on the graph weighted by |<x_i, x_j>| (i != j).
BaselineScores outrank_scores(const DataMatrix& x, const OutRankOptions& opts = {});

}  // namespace rgraph

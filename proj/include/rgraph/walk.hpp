#pragma once

#include "rgraph/execution.hpp"
#include "rgraph/graph.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <optional>
#include <vector>

namespace rgraph {

// Cesaro mean (1/T) sum_{t=1..T} pi0 P^t.
struct StateDistribution {
  Eigen::VectorXd probs;
  long steps = 0;
};

struct WalkOptions {
  long steps = 1000;
  std::optional<Eigen::VectorXd> pi0;  // uniform when unset
  // Stop once successive Cesaro means differ by less than 1e-12 in l1.
  bool early_stop = false;
  Execution exec = Execution::parallel;
};

enum class Verdict : unsigned char { inlier, outlier };

StateDistribution cesaro_scores(const TransitionMatrix& p, const WalkOptions& opts);
StateDistribution cesaro_scores(const TransitionMatrix& p, long steps);

// x_j is an outlier iff probs[j] <= epsilon.
std::vector<Verdict> threshold_outliers(const StateDistribution& dist, double epsilon);
std::vector<Verdict> threshold_outliers(const Eigen::VectorXd& scores, double epsilon);

// Cut at the largest relative gap (s[k+1] - s[k]) / |s[k+1]| of the sorted
// scores; returns s[k]. Returns 0 when all scores are equal.
double auto_epsilon(const Eigen::VectorXd& scores);

namespace kernels {

// out = pi * P. The parallel kernel gathers over the columns of a
// column-major copy of P; the serial reference scatters over the rows.
void step_parallel(const Eigen::SparseMatrix<double, Eigen::ColMajor>& p_cols,
                   const Eigen::VectorXd& pi, Eigen::VectorXd& out);
void step_serial(const Eigen::SparseMatrix<double, Eigen::RowMajor>& p_rows,
                 const Eigen::VectorXd& pi, Eigen::VectorXd& out);

}  // namespace kernels
}  // namespace rgraph

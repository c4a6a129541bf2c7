#pragma once

#include "rgraph/baselines.hpp"
#include "rgraph/dataset.hpp"
#include "rgraph/elasticnet.hpp"
#include "rgraph/graph.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace rgraph {

// Outliers are the positive class and are expected to have LOW scores.
struct MetricReport {
  double auc = 0.0;
  double best_f1 = 0.0;
  double best_f1_threshold = 0.0;
  std::size_t n_inliers = 0;
  std::size_t n_outliers = 0;
};

// Probability that a random (outlier, inlier) pair has outlier score < inlier
// score, ties counting 1/2.
double auc(const Eigen::VectorXd& scores, const Labels& labels);

struct F1Result {
  double f1 = 0.0;
  double threshold = 0.0;
};

// Predict outlier for score <= threshold, sweep every distinct score, keep the
// smallest threshold reaching the maximum F1.
F1Result best_f1(const Eigen::VectorXd& scores, const Labels& labels);

MetricReport evaluate(const Eigen::VectorXd& scores, const Labels& labels);

struct ExperimentConfig {
  GenConfig generator;
  SolverParams solver;
  long steps = 1000;
  DanglingPolicy dangling = DanglingPolicy::uniform;
  double outrank_damping = 0.85;
  std::vector<Method> methods{Method::rgraph, Method::l1_thresholding, Method::outrank};
  int trials = 1;
  std::uint64_t base_seed = 0;
};

struct MethodSummary {
  std::vector<double> auc;  // per trial
  std::vector<double> f1;
  double auc_mean = 0.0, auc_std = 0.0;
  double f1_mean = 0.0, f1_std = 0.0;
};

struct TrialSummary {
  std::map<Method, MethodSummary> methods;
  std::vector<std::uint64_t> seeds;
  bool single_trial = false;
};

// Runs the whole pipeline for seeds base_seed + t, t < trials. Any trial
// failure aborts with an Error naming the trial.
TrialSummary run_trials(const ExperimentConfig& cfg);

// Sample mean and standard deviation (std = 0 for a single value).
std::pair<double, double> mean_std(const std::vector<double>& values);

}  // namespace rgraph

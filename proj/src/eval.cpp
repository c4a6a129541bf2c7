#include "rgraph/eval.hpp"

#include "rgraph/error.hpp"
#include "rgraph/walk.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rgraph {
namespace {

void check_labels(const Eigen::VectorXd& scores, const Labels& labels) {
  if (static_cast<Eigen::Index>(labels.size()) != scores.size()) {
    throw Error("eval", "InvalidInput", "scores and labels differ in length");
  }
  const std::size_t n_out = count_outliers(labels);
  if (n_out == 0 || n_out == labels.size()) {
    throw Error("eval", "DegenerateLabels", "need at least one inlier and one outlier");
  }
}

std::vector<Eigen::Index> ascending_order(const Eigen::VectorXd& scores) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(scores.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return scores[a] < scores[b]; });
  return order;
}

}  // namespace

double auc(const Eigen::VectorXd& scores, const Labels& labels) {
  check_labels(scores, labels);
  const auto order = ascending_order(scores);
  // Twice the Mann-Whitney count, so ties stay integral. Walking up the
  // sorted scores, each outlier beats every inlier strictly above it and
  // splits the credit with inliers tied to it.
  std::uint64_t twice_u = 0;
  std::uint64_t inliers_above = labels.size() - count_outliers(labels);
  std::size_t k = 0;
  while (k < order.size()) {
    std::size_t end = k;
    std::uint64_t tie_in = 0, tie_out = 0;
    while (end < order.size() && scores[order[end]] == scores[order[k]]) {
      (labels[order[end]].is_outlier() ? tie_out : tie_in) += 1;
      ++end;
    }
    inliers_above -= tie_in;
    twice_u += 2 * tie_out * inliers_above + tie_out * tie_in;
    k = end;
  }
  const std::uint64_t n_out = count_outliers(labels);
  const std::uint64_t n_in = labels.size() - n_out;
  return static_cast<double>(twice_u) / static_cast<double>(2 * n_in * n_out);
}

F1Result best_f1(const Eigen::VectorXd& scores, const Labels& labels) {
  check_labels(scores, labels);
  const auto order = ascending_order(scores);
  const std::uint64_t n_out = count_outliers(labels);
  std::uint64_t tp = 0, fp = 0;
  F1Result best{-1.0, 0.0};
  std::size_t k = 0;
  while (k < order.size()) {
    const double threshold = scores[order[k]];
    while (k < order.size() && scores[order[k]] == threshold) {
      (labels[order[k]].is_outlier() ? tp : fp) += 1;
      ++k;
    }
    const std::uint64_t fn = n_out - tp;
    const double f1 = tp == 0 ? 0.0 : static_cast<double>(2 * tp) / static_cast<double>(2 * tp + fp + fn);
    if (f1 > best.f1) best = {f1, threshold};
  }
  return best;
}

MetricReport evaluate(const Eigen::VectorXd& scores, const Labels& labels) {
  MetricReport m;
  m.auc = auc(scores, labels);
  const F1Result f = best_f1(scores, labels);
  m.best_f1 = f.f1;
  m.best_f1_threshold = f.threshold;
  m.n_outliers = count_outliers(labels);
  m.n_inliers = labels.size() - m.n_outliers;
  return m;
}

std::pair<double, double> mean_std(const std::vector<double>& values) {
  if (values.empty()) return {0.0, 0.0};
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() == 1) return {mean, 0.0};
  double ss = 0.0;
  for (const double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0))};
}

TrialSummary run_trials(const ExperimentConfig& cfg) {
  if (cfg.trials <= 0) throw Error("eval", "InvalidConfig", "trial count must be positive");
  TrialSummary summary;
  summary.single_trial = cfg.trials == 1;
  for (const Method m : cfg.methods) summary.methods[m];

  for (int t = 0; t < cfg.trials; ++t) {
    const std::uint64_t seed = cfg.base_seed + static_cast<std::uint64_t>(t);
    summary.seeds.push_back(seed);
    try {
      GenConfig gen = cfg.generator;
      gen.seed = seed;
      const LabeledDataset data = generate_synthetic(gen);
      const DataMatrix x = normalize_columns(data.data);
      const bool needs_r = std::any_of(cfg.methods.begin(), cfg.methods.end(),
                                       [](Method m) { return m != Method::outrank; });
      RepresentationMatrix r;
      if (needs_r) r = self_representation(x, cfg.solver);
      for (const Method m : cfg.methods) {
        Eigen::VectorXd scores;
        switch (m) {
          case Method::rgraph:
            scores = cesaro_scores(transition_matrix(r, cfg.dangling), cfg.steps).probs;
            break;
          case Method::l1_thresholding:
            scores = l1_thresholding_scores(r).scores;
            break;
          case Method::outrank: {
            OutRankOptions opts;
            opts.damping = cfg.outrank_damping;
            scores = outrank_scores(x, opts).scores;
            break;
          }
        }
        const MetricReport metrics = evaluate(scores, data.labels);
        summary.methods[m].auc.push_back(metrics.auc);
        summary.methods[m].f1.push_back(metrics.best_f1);
      }
    } catch (const Error& e) {
      throw Error("eval", "TrialFailed",
                  "trial " + std::to_string(t) + " (seed " + std::to_string(seed) + ") failed in " +
                      e.module() + ": " + e.code() + ": " + e.what());
    }
  }
  for (auto& [method, s] : summary.methods) {
    std::tie(s.auc_mean, s.auc_std) = mean_std(s.auc);
    std::tie(s.f1_mean, s.f1_std) = mean_std(s.f1);
  }
  return summary;
}

}  // namespace rgraph

#include "rgraph/pipeline.hpp"

#include "rgraph/error.hpp"
#include "rgraph/eval.hpp"
#include "rgraph/theory.hpp"
#include "rgraph/walk.hpp"

#include <algorithm>
#include <filesystem>

namespace rgraph {
namespace {

Error pipeline_error(const std::string& code, const std::string& msg) { return Error("cli", code, msg); }

std::string join(const std::string& dir, const std::string& file) {
  return (std::filesystem::path(dir) / file).string();
}

Json config_json(const PipelineConfig& cfg, const PipelineInput& in) {
  Json c;
  if (cfg.csv_path) {
    c["input"]["csv"] = *cfg.csv_path;
    c["input"]["points_as_rows"] = cfg.orientation == Orientation::points_as_rows;
    c["input"]["header"] = cfg.csv_header;
    c["input"]["labels"] = cfg.labels_path ? Json(*cfg.labels_path) : Json(nullptr);
  } else {
    c["input"]["generator"] = to_json(*in.generator);
  }
  c["normalize"] = cfg.normalize;
  c["solver"] = to_json(cfg.solver);
  c["walk"]["T"] = cfg.steps;
  c["walk"]["early_stop"] = cfg.early_stop;
  c["walk"]["epsilon"] = cfg.epsilon ? Json(*cfg.epsilon) : Json("auto");
  c["dangling"] = to_string(cfg.dangling);
  Json methods = Json::array();
  for (const Method m : cfg.methods) methods.push_back(to_string(m));
  c["methods"] = std::move(methods);
  c["outrank_damping"] = cfg.outrank_damping;
  return c;
}

}  // namespace

void validate(const PipelineConfig& cfg) {
  if (cfg.csv_path.has_value() == cfg.generator.has_value()) {
    throw pipeline_error("InvalidConfig", "exactly one input source (CSV or generator) is required");
  }
  if (cfg.methods.empty()) throw pipeline_error("InvalidConfig", "no method selected");
  if (cfg.steps <= 0) throw pipeline_error("InvalidConfig", "T must be positive");
  if (cfg.epsilon && *cfg.epsilon < 0.0) throw pipeline_error("InvalidConfig", "epsilon must be nonnegative");
  const bool needs_r = std::any_of(cfg.methods.begin(), cfg.methods.end(),
                                   [](Method m) { return m != Method::outrank; });
  if (needs_r) validate(cfg.solver);
  if (cfg.generator) validate(*cfg.generator);
}

PipelineInput load_input(const PipelineConfig& cfg) {
  validate(cfg);
  PipelineInput in;
  if (cfg.generator) {
    LabeledDataset ds = generate_synthetic(*cfg.generator);
    in.data = std::move(ds.data);
    in.labels = std::move(ds.labels);
    in.generator = cfg.generator;
  } else {
    in.data = load_csv(*cfg.csv_path, cfg.orientation, cfg.csv_header);
    if (cfg.labels_path) {
      in.labels = load_labels(*cfg.labels_path);
      if (static_cast<Eigen::Index>(in.labels->size()) != in.data.size()) {
        throw Error("dataset", "LabelMismatch",
                    "labels file has " + std::to_string(in.labels->size()) + " entries for " +
                        std::to_string(in.data.size()) + " points");
      }
    }
  }
  if (cfg.normalize) in.data = normalize_columns(in.data);
  return in;
}

Json run_pipeline(const PipelineConfig& cfg) {
  const PipelineInput in = load_input(cfg);
  std::filesystem::create_directories(cfg.out_dir);

  Json report;
  if (!cfg.timestamp.empty()) report["generated_at"] = cfg.timestamp;
  report["config"] = config_json(cfg, in);
  report["N"] = in.data.size();
  report["D"] = in.data.ambient_dim();

  const bool needs_r = std::any_of(cfg.methods.begin(), cfg.methods.end(),
                                   [](Method m) { return m != Method::outrank; });
  RepresentationMatrix r;
  if (needs_r) {
    r = self_representation(in.data, cfg.solver);
    report["representation"]["nnz"] = r.coeffs.nonZeros();
    if (cfg.write_matrices) {
      write_representation_coo(join(cfg.out_dir, "R.coo"), r);
      write_representation_sidecar(join(cfg.out_dir, "R.json"), r, cfg.solver);
    }
  }

  Json methods_json;
  for (std::size_t k = 0; k < cfg.methods.size(); ++k) {
    const Method m = cfg.methods[k];
    Json mj;
    Eigen::VectorXd scores;
    if (m == Method::rgraph) {
      const TransitionMatrix p = transition_matrix(r, cfg.dangling);
      if (cfg.write_matrices) write_transition_coo(join(cfg.out_dir, "P.coo"), p);
      WalkOptions opts;
      opts.steps = cfg.steps;
      opts.early_stop = cfg.early_stop;
      const StateDistribution dist = cesaro_scores(p, opts);
      scores = dist.probs;
      mj["dangling"] = p.dangling;
      mj["steps"] = dist.steps;
    } else if (m == Method::l1_thresholding) {
      scores = l1_thresholding_scores(r).scores;
    } else {
      OutRankOptions opts;
      opts.damping = cfg.outrank_damping;
      const BaselineScores s = outrank_scores(in.data, opts);
      scores = s.scores;
      mj["zero_similarity_rows"] = s.substituted_rows;
      mj["iterations"] = s.iterations;
    }
    const double eps = cfg.epsilon ? *cfg.epsilon : auto_epsilon(scores);
    const auto verdicts = threshold_outliers(scores, eps);
    mj["epsilon"] = eps;
    mj["epsilon_rule"] = cfg.epsilon ? "fixed" : "largest_relative_gap";
    mj["predicted_outliers"] =
        std::count(verdicts.begin(), verdicts.end(), Verdict::outlier);
    if (in.labels) mj["metrics"] = to_json(evaluate(scores, *in.labels));
    const std::string file = k == 0 ? "scores.csv" : "scores_" + to_string(m) + ".csv";
    write_scores_csv(join(cfg.out_dir, file), scores, verdicts);
    mj["scores_file"] = file;
    methods_json[to_string(m)] = std::move(mj);
  }
  report["methods"] = std::move(methods_json);
  write_json(join(cfg.out_dir, "report.json"), report);
  return report;
}

Json run_verify(const PipelineConfig& cfg) {
  const PipelineInput in = load_input(cfg);
  if (!in.labels) throw pipeline_error("MissingLabels", "verify needs ground-truth labels");
  if (!in.data.column_norms_unit) {
    throw pipeline_error("NotNormalized", "theory checks assume unit-norm columns");
  }
  std::filesystem::create_directories(cfg.out_dir);
  const RepresentationMatrix r = self_representation(in.data, cfg.solver);
  const ConditionReport conditions = check_theorem1_all(in.data, *in.labels, cfg.solver);
  const AssumptionReport assumptions = check_assumptions(r, *in.labels);
  const MarkovDecomposition dec = decompose(transition_matrix(r, cfg.dangling));

  std::size_t essential_mismatch = 0;
  for (std::size_t j = 0; j < in.labels->size(); ++j) {
    if (dec.is_essential(static_cast<Eigen::Index>(j)) != (*in.labels)[j].is_inlier()) ++essential_mismatch;
  }

  Json report;
  if (!cfg.timestamp.empty()) report["generated_at"] = cfg.timestamp;
  report["config"] = config_json(cfg, in);
  report["theorem1"] = to_json(conditions);
  report["assumptions"] = to_json(assumptions);
  report["decomposition"] = to_json(dec);
  report["essential_mismatches"] = essential_mismatch;
  write_json(join(cfg.out_dir, "verify.json"), report);
  return report;
}

}  // namespace rgraph

#pragma once

#include "rgraph/baselines.hpp"
#include "rgraph/dataset.hpp"
#include "rgraph/elasticnet.hpp"
#include "rgraph/graph.hpp"
#include "rgraph/io.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rgraph {

struct PipelineConfig {
  // Exactly one of csv_path / generator.
  std::optional<std::string> csv_path;
  Orientation orientation = Orientation::points_as_columns;
  bool csv_header = false;
  std::optional<std::string> labels_path;
  std::optional<GenConfig> generator;

  bool normalize = true;
  SolverParams solver;
  long steps = 1000;
  bool early_stop = false;
  std::optional<double> epsilon;  // largest relative gap when unset
  DanglingPolicy dangling = DanglingPolicy::uniform;
  // The first method drives scores.csv; all are scored in the report.
  std::vector<Method> methods{Method::rgraph};
  double outrank_damping = 0.85;

  std::string out_dir = ".";
  bool write_matrices = false;
  // Value of the report's single time-dependent field; empty omits it.
  std::string timestamp;
};

void validate(const PipelineConfig& cfg);

struct PipelineInput {
  DataMatrix data;
  std::optional<Labels> labels;
  std::optional<GenConfig> generator;
};

// Loads or generates the data, then normalizes unless disabled.
PipelineInput load_input(const PipelineConfig& cfg);

// Load/generate -> normalize -> R -> P -> Cesaro scores -> threshold, plus the
// selected baselines. Writes scores.csv (and scores_<method>.csv for extra
// methods), report.json and optionally R.coo / R.json / P.coo into out_dir.
// Returns the report.
Json run_pipeline(const PipelineConfig& cfg);

// Theory and assumption checks on labeled input; writes verify.json.
Json run_verify(const PipelineConfig& cfg);

}  // namespace rgraph

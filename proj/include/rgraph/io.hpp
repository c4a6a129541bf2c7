#pragma once

#include "rgraph/baselines.hpp"
#include "rgraph/elasticnet.hpp"
#include "rgraph/eval.hpp"
#include "rgraph/graph.hpp"
#include "rgraph/markov.hpp"
#include "rgraph/theory.hpp"
#include "rgraph/walk.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace rgraph {

using Json = nlohmann::ordered_json;

// R as `j,i,value` lines (column, row, coefficient); indices are 0-based.
void write_representation_coo(const std::string& path, const RepresentationMatrix& r);
// Sidecar with N, solver params and per-column gamma.
void write_representation_sidecar(const std::string& path, const RepresentationMatrix& r,
                                  const SolverParams& params);
RepresentationMatrix read_representation(const std::string& coo_path, const std::string& sidecar_path);

// P as a header `N,dangling_count` followed by `i,j,p` lines.
void write_transition_coo(const std::string& path, const TransitionMatrix& p);
TransitionMatrix read_transition_coo(const std::string& path);

// `index,score,label` with label in {inlier, outlier}.
void write_scores_csv(const std::string& path, const Eigen::VectorXd& scores,
                      const std::vector<Verdict>& verdicts);

std::string format_double(double v);
std::string to_string(Verdict v);
std::string to_string(DanglingPolicy p);
DanglingPolicy parse_dangling(const std::string& name);

Json to_json(const SolverParams& p);
Json to_json(const GenConfig& g);
Json to_json(const MetricReport& m);
Json to_json(const MarkovDecomposition& d);
Json to_json(const AnalyticLimit& a);
Json to_json(const ConditionRecord& r);
Json to_json(const ConditionReport& r);
Json to_json(const AssumptionReport& r);
Json to_json(const TrialSummary& s);
Json error_json(const Error& e);

void write_json(const std::string& path, const Json& j);
Json read_json(const std::string& path);

}  // namespace rgraph

#include "rgraph/theory.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

namespace rgraph {

bool ConditionReport::all_pass() const {
  return std::all_of(records.begin(), records.end(), [](const ConditionRecord& r) { return r.eq6_holds; });
}

Adjacency representation_graph(const RepresentationMatrix& r) {
  Adjacency adj(static_cast<std::size_t>(r.size()));
  for (Eigen::Index j = 0; j < r.coeffs.outerSize(); ++j) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(r.coeffs, j); it; ++it) {
      if (it.value() != 0.0) adj[j].push_back(static_cast<int>(it.row()));
    }
  }
  return adj;
}

SubspacePreservation check_subspace_preserving(const RepresentationMatrix& r, const Labels& labels) {
  SubspacePreservation out;
  for (Eigen::Index j = 0; j < r.coeffs.outerSize(); ++j) {
    if (labels[j].is_outlier()) continue;
    for (Eigen::SparseMatrix<double>::InnerIterator it(r.coeffs, j); it; ++it) {
      if (it.value() != 0.0 && !(labels[it.row()] == labels[j])) {
        out.violations.emplace_back(it.row(), j);
      }
    }
  }
  out.holds = out.violations.empty();
  return out;
}

ConditionRecord check_theorem1_condition(const DataMatrix& x, const Labels& labels,
                                         const SolverParams& params, Eigen::Index j) {
  const OracleSolution oracle = solve_oracle(x, labels, j, params);
  const Eigen::VectorXd unit_corr = x.values.transpose() * oracle.delta_unit;

  ConditionRecord rec;
  rec.j = j;
  rec.inlier_term = oracle.kappa;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    if (!(labels[k] == labels[j])) rec.outlier_term = std::max(rec.outlier_term, std::abs(unit_corr[k]));
  }
  rec.delta_norm = oracle.delta.norm();
  rec.outside_max_raw = rec.outlier_term * rec.delta_norm;
  rec.margin = rec.inlier_term - rec.outlier_term;
  rec.threshold = (1.0 - params.lambda) / params.lambda;
  rec.eq6_holds = rec.margin > rec.threshold;
  rec.lemmaA1_holds = rec.outside_max_raw < params.lambda;
  rec.kappa_bound_ok = oracle.kappa_bound_ok;
  return rec;
}

ConditionReport check_theorem1_all(const DataMatrix& x, const Labels& labels, const SolverParams& params,
                                   Execution exec) {
  std::vector<Eigen::Index> inliers;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    if (labels[j].is_inlier()) inliers.push_back(j);
  }
  ConditionReport report;
  report.records.resize(inliers.size());
  const auto n = static_cast<std::ptrdiff_t>(inliers.size());
  if (exec == Execution::parallel) {
    // Errors inside the region are collected and rethrown in order.
    std::vector<std::exception_ptr> errors(inliers.size());
#pragma omp parallel for schedule(dynamic, 4)
    for (std::ptrdiff_t k = 0; k < n; ++k) {
      try {
        report.records[k] = check_theorem1_condition(x, labels, params, inliers[k]);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  } else {
    for (std::ptrdiff_t k = 0; k < n; ++k) report.records[k] = check_theorem1_condition(x, labels, params, inliers[k]);
  }
  const auto passing = std::count_if(report.records.begin(), report.records.end(),
                                     [](const ConditionRecord& r) { return r.eq6_holds; });
  report.fraction_passing = inliers.empty() ? 1.0 : static_cast<double>(passing) / static_cast<double>(inliers.size());
  return report;
}

AssumptionReport check_assumptions(const RepresentationMatrix& r, const Labels& labels) {
  AssumptionReport out;
  const Adjacency graph = representation_graph(r);
  out.subspace_count = subspace_count(labels);
  out.preservation = check_subspace_preserving(r, labels);

  for (int l = 0; l < out.subspace_count; ++l) {
    std::vector<int> members;
    std::vector<int> local(graph.size(), -1);
    for (std::size_t v = 0; v < graph.size(); ++v) {
      if (labels[v].subspace() == l) {
        local[v] = static_cast<int>(members.size());
        members.push_back(static_cast<int>(v));
      }
    }
    if (members.empty()) continue;
    Adjacency induced(members.size());
    bool every_vertex_leaves = true;
    for (std::size_t k = 0; k < members.size(); ++k) {
      if (graph[members[k]].empty()) every_vertex_leaves = false;
      for (const int w : graph[members[k]]) {
        if (local[w] >= 0) induced[k].push_back(local[w]);
      }
    }
    const SccResult scc = strongly_connected_components(induced);
    if (scc.count != 1 || !every_vertex_leaves) out.disconnected_subspaces.push_back(l);
  }

  const SccResult scc = strongly_connected_components(graph);
  const std::vector<bool> sink = sink_components(graph, scc);
  std::vector<std::vector<Eigen::Index>> members(scc.count);
  std::vector<bool> outliers_only(scc.count, true);
  for (std::size_t v = 0; v < graph.size(); ++v) {
    members[scc.component[v]].push_back(static_cast<Eigen::Index>(v));
    if (!labels[v].is_outlier()) outliers_only[scc.component[v]] = false;
  }
  for (int c = 0; c < scc.count; ++c) {
    if (sink[c] && outliers_only[c]) out.closed_outlier_sets.push_back(members[c]);
  }
  std::sort(out.closed_outlier_sets.begin(), out.closed_outlier_sets.end());
  return out;
}

}  // namespace rgraph

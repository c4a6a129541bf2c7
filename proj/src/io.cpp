#include "rgraph/io.hpp"

#include "rgraph/error.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace rgraph {
namespace {

Error io_error(const std::string& code, const std::string& msg) { return Error("io", code, msg); }

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw io_error("IoError", "cannot write " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("IoError", "cannot open " + path);
  return in;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = line.find(',');
    out.push_back(line.substr(0, comma));
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  return out;
}

template <typename T>
T parse_field(std::string_view s, const std::string& where) {
  while (!s.empty() && (s.front() == ' ')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw io_error("ParseError", where + ": bad field '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string to_string(Verdict v) { return v == Verdict::outlier ? "outlier" : "inlier"; }

std::string to_string(DanglingPolicy p) { return p == DanglingPolicy::uniform ? "uniform" : "error"; }

DanglingPolicy parse_dangling(const std::string& name) {
  if (name == "uniform") return DanglingPolicy::uniform;
  if (name == "error") return DanglingPolicy::error;
  throw io_error("InvalidConfig", "unknown dangling policy '" + name + "'");
}

void write_representation_coo(const std::string& path, const RepresentationMatrix& r) {
  auto out = open_out(path);
  for (Eigen::Index j = 0; j < r.coeffs.outerSize(); ++j) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(r.coeffs, j); it; ++it) {
      out << j << ',' << it.row() << ',' << format_double(it.value()) << '\n';
    }
  }
}

void write_representation_sidecar(const std::string& path, const RepresentationMatrix& r,
                                  const SolverParams& params) {
  Json j;
  j["N"] = r.size();
  j["nnz"] = r.coeffs.nonZeros();
  j["params"] = to_json(params);
  j["gamma"] = r.gamma;
  write_json(path, j);
}

RepresentationMatrix read_representation(const std::string& coo_path, const std::string& sidecar_path) {
  const Json side = read_json(sidecar_path);
  const auto n = side.at("N").get<Eigen::Index>();
  RepresentationMatrix r;
  r.gamma = side.at("gamma").get<std::vector<double>>();
  if (n <= 0 || static_cast<Eigen::Index>(r.gamma.size()) != n) {
    throw io_error("ParseError", sidecar_path + ": gamma must have N entries");
  }
  std::vector<Eigen::Triplet<double>> triplets;
  auto in = open_in(coo_path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = coo_path + ":" + std::to_string(line_no);
    const auto f = split(line);
    if (f.size() != 3) throw io_error("ParseError", where + ": expected j,i,value");
    const auto j = parse_field<long>(f[0], where);
    const auto i = parse_field<long>(f[1], where);
    if (i < 0 || j < 0 || i >= n || j >= n) throw io_error("ParseError", where + ": index out of range");
    triplets.emplace_back(i, j, parse_field<double>(f[2], where));
  }
  r.coeffs.resize(n, n);
  r.coeffs.setFromTriplets(triplets.begin(), triplets.end());
  r.coeffs.makeCompressed();
  return r;
}

void write_transition_coo(const std::string& path, const TransitionMatrix& p) {
  auto out = open_out(path);
  out << p.size() << ',' << p.dangling.size() << '\n';
  for (Eigen::Index i = 0; i < p.probs.outerSize(); ++i) {
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(p.probs, i); it; ++it) {
      out << i << ',' << it.col() << ',' << format_double(it.value()) << '\n';
    }
  }
}

TransitionMatrix read_transition_coo(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw io_error("EmptyFile", path + " is empty");
  const auto header = split(line);
  if (header.size() != 2) throw io_error("ParseError", path + ":1: expected N,dangling_count");
  const auto n = parse_field<long>(header[0], path + ":1");
  if (n <= 0) throw io_error("ParseError", path + ":1: N must be positive");

  std::vector<Eigen::Triplet<double>> triplets;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = path + ":" + std::to_string(line_no);
    const auto f = split(line);
    if (f.size() != 3) throw io_error("ParseError", where + ": expected i,j,p");
    const auto i = parse_field<long>(f[0], where);
    const auto j = parse_field<long>(f[1], where);
    if (i < 0 || j < 0 || i >= n || j >= n) throw io_error("ParseError", where + ": index out of range");
    const double v = parse_field<double>(f[2], where);
    if (v < 0.0) throw io_error("ParseError", where + ": negative probability");
    triplets.emplace_back(i, j, v);
  }
  TransitionMatrix p;
  p.probs.resize(n, n);
  p.probs.setFromTriplets(triplets.begin(), triplets.end());
  p.probs.makeCompressed();
  if (max_row_sum_error(p) > 1e-12) throw io_error("NotStochastic", path + ": rows do not sum to 1");
  return p;
}

void write_scores_csv(const std::string& path, const Eigen::VectorXd& scores,
                      const std::vector<Verdict>& verdicts) {
  auto out = open_out(path);
  out << "index,score,label\n";
  for (Eigen::Index j = 0; j < scores.size(); ++j) {
    out << j << ',' << format_double(scores[j]) << ',' << to_string(verdicts[j]) << '\n';
  }
}

Json to_json(const SolverParams& p) {
  Json j;
  j["lambda"] = p.lambda;
  j["alpha"] = p.alpha;
  j["gamma"] = p.gamma_override ? Json(*p.gamma_override) : Json(nullptr);
  j["tol"] = p.tol;
  j["max_iters"] = p.max_iters;
  j["zero_threshold"] = p.zero_threshold;
  return j;
}

Json to_json(const GenConfig& g) {
  Json j;
  j["seed"] = g.seed;
  j["ambient_dim"] = g.ambient_dim;
  j["dims"] = g.subspace_dims;
  j["counts"] = g.points_per_subspace;
  j["outliers"] = g.outlier_count;
  return j;
}

Json to_json(const MetricReport& m) {
  Json j;
  j["auc"] = m.auc;
  j["best_f1"] = m.best_f1;
  j["best_f1_threshold"] = m.best_f1_threshold;
  j["n_inliers"] = m.n_inliers;
  j["n_outliers"] = m.n_outliers;
  return j;
}

Json to_json(const MarkovDecomposition& d) {
  Json j;
  j["closed_classes"] = d.closed_classes;
  j["inessential"] = d.inessential;
  return j;
}

Json to_json(const AnalyticLimit& a) {
  Json j = to_json(a.decomposition);
  Json stats = Json::array();
  for (const auto& s : a.class_stationaries) stats.push_back(std::vector<double>(s.data(), s.data() + s.size()));
  j["class_stationaries"] = std::move(stats);
  Json hitting = Json::array();
  for (Eigen::Index r = 0; r < a.hitting.rows(); ++r) {
    std::vector<double> row(a.hitting.cols());
    for (Eigen::Index c = 0; c < a.hitting.cols(); ++c) row[c] = a.hitting(r, c);
    hitting.push_back(row);
  }
  j["hitting"] = std::move(hitting);
  j["pi_star"] = std::vector<double>(a.pi_star.data(), a.pi_star.data() + a.pi_star.size());
  return j;
}

Json to_json(const ConditionRecord& r) {
  Json j;
  j["j"] = r.j;
  j["inlier_term"] = r.inlier_term;
  j["outlier_term"] = r.outlier_term;
  j["margin"] = r.margin;
  j["threshold"] = r.threshold;
  j["delta_norm"] = r.delta_norm;
  j["eq6_holds"] = r.eq6_holds;
  j["lemmaA1_holds"] = r.lemmaA1_holds;
  j["kappa_bound_ok"] = r.kappa_bound_ok;
  return j;
}

Json to_json(const ConditionReport& r) {
  Json j;
  j["fraction_passing"] = r.fraction_passing;
  Json records = Json::array();
  for (const auto& rec : r.records) records.push_back(to_json(rec));
  j["records"] = std::move(records);
  return j;
}

Json to_json(const AssumptionReport& r) {
  Json j;
  j["assumption1"] = r.assumption1();
  j["disconnected_subspaces"] = r.disconnected_subspaces;
  j["assumption2"] = r.assumption2();
  j["closed_outlier_sets"] = r.closed_outlier_sets;
  j["subspace_preserving"] = r.preservation.holds;
  Json v = Json::array();
  for (const auto& [i, col] : r.preservation.violations) v.push_back({i, col});
  j["violations"] = std::move(v);
  return j;
}

Json to_json(const TrialSummary& s) {
  Json j;
  j["seeds"] = s.seeds;
  j["single_trial"] = s.single_trial;
  Json methods;
  for (const auto& [m, sum] : s.methods) {
    Json e;
    e["auc_mean"] = sum.auc_mean;
    e["auc_std"] = sum.auc_std;
    e["f1_mean"] = sum.f1_mean;
    e["f1_std"] = sum.f1_std;
    e["auc"] = sum.auc;
    e["f1"] = sum.f1;
    methods[to_string(m)] = std::move(e);
  }
  j["methods"] = std::move(methods);
  return j;
}

Json error_json(const Error& e) {
  Json j;
  j["error"]["module"] = e.module();
  j["error"]["code"] = e.code();
  j["error"]["message"] = e.what();
  return j;
}

void write_json(const std::string& path, const Json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

Json read_json(const std::string& path) {
  auto in = open_in(path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw io_error("ParseError", path + ": " + e.what());
  }
}

}  // namespace rgraph

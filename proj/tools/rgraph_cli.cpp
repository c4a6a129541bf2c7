// Command-line front end: gen, detect, verify, eval, markov.

#include "rgraph/error.hpp"
#include "rgraph/eval.hpp"
#include "rgraph/io.hpp"
#include "rgraph/markov.hpp"
#include "rgraph/pipeline.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace {

using rgraph::Json;

// Raw flag values. Options that were not given on the command line fall back
// to the config file, then to the library defaults.
struct Flags {
  std::string config;
  std::string input, labels, out = ".";
  bool header = false, points_as_rows = false, no_normalize = false;
  double lambda = 0.95, alpha = 0.0, gamma = 0.0, epsilon = 0.0, damping = 0.85;
  double tol = 1e-8, zero_threshold = 1e-10;
  int max_iters = 10000;
  long steps = 1000;
  bool epsilon_from_config = false;
  bool epsilon_auto = false, early_stop = false, write_matrices = false, no_timestamp = false;
  std::string dangling = "uniform";
  std::vector<std::string> methods;
  std::uint64_t seed = 0;
  int ambient_dim = 0, outliers = 0, trials = 1;
  std::vector<int> dims, points;
};

struct Options {
  CLI::Option* config = nullptr;
  // The same key is registered once per subcommand.
  std::map<std::string, std::vector<CLI::Option*>> by_key;
  bool given(const std::string& key) const {
    auto it = by_key.find(key);
    if (it == by_key.end()) return false;
    for (const CLI::Option* opt : it->second) {
      if (opt->count() > 0) return true;
    }
    return false;
  }
};

std::string now_utc() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

void add_input_flags(CLI::App* app, Flags& f, Options& o) {
  o.by_key["input"].push_back(app->add_option("--input,-i", f.input, "CSV data file"));
  o.by_key["labels"].push_back(app->add_option("--labels", f.labels, "labels file (in:<l> / out per line)"));
  o.by_key["header"].push_back(app->add_flag("--header", f.header, "skip the first CSV line"));
  o.by_key["points_as_rows"].push_back(app->add_flag("--points-as-rows", f.points_as_rows, "CSV rows are points"));
  o.by_key["no_normalize"].push_back(app->add_flag("--no-normalize", f.no_normalize, "do not unit-normalize columns"));
}

void add_generator_flags(CLI::App* app, Flags& f, Options& o) {
  o.by_key["D"].push_back(app->add_option("--D", f.ambient_dim, "ambient dimension (synthetic data)"));
  o.by_key["dims"].push_back(app->add_option("--dims", f.dims, "subspace dimensions")->delimiter(','));
  o.by_key["points"].push_back(app->add_option("--points", f.points, "points per subspace")->delimiter(','));
  o.by_key["outliers"].push_back(app->add_option("--outliers", f.outliers, "number of outliers"));
  o.by_key["seed"].push_back(app->add_option("--seed", f.seed, "random seed"));
}

void add_solver_flags(CLI::App* app, Flags& f, Options& o) {
  o.by_key["lambda"].push_back(app->add_option("--lambda", f.lambda, "l1/l2 trade-off")->capture_default_str());
  o.by_key["alpha"].push_back(app->add_option("--alpha", f.alpha, "gamma multiplier (alpha > 1 for nonzero R)"));
  o.by_key["gamma"].push_back(app->add_option("--gamma", f.gamma, "explicit gamma (overrides alpha)"));
  o.by_key["tol"].push_back(app->add_option("--tol", f.tol, "KKT tolerance")->capture_default_str());
  o.by_key["zero_threshold"].push_back(app->add_option("--zero-threshold", f.zero_threshold)->capture_default_str());
  o.by_key["max_iters"].push_back(app->add_option("--max-iters", f.max_iters)->capture_default_str());
  o.by_key["dangling"].push_back(app->add_option("--dangling", f.dangling, "uniform | error")
                             ->check(CLI::IsMember({"uniform", "error"}))
                             ->capture_default_str());
}

void add_walk_flags(CLI::App* app, Flags& f, Options& o) {
  o.by_key["T"].push_back(app->add_option("--T", f.steps, "random-walk steps")->capture_default_str());
  o.by_key["epsilon"].push_back(app->add_option("--epsilon", f.epsilon, "outlier threshold"));
  o.by_key["epsilon_auto"].push_back(app->add_flag("--epsilon-auto", f.epsilon_auto, "cut at the largest relative gap"));
  o.by_key["early_stop"].push_back(app->add_flag("--early-stop", f.early_stop, "stop when the mean stops moving"));
  o.by_key["method"].push_back(app->add_option("--method", f.methods, "rgraph | l1t | outrank")->delimiter(','));
  o.by_key["damping"].push_back(app->add_option("--damping", f.damping, "OutRank damping")->capture_default_str());
}

void add_output_flags(CLI::App* app, Flags& f, Options& o) {
  o.config = app->add_option("--config", f.config, "flat JSON config; flags take precedence");
  o.by_key["out"].push_back(app->add_option("--out,-o", f.out, "output directory")->capture_default_str());
  o.by_key["write_matrices"].push_back(app->add_flag("--write-matrices", f.write_matrices, "also write R.coo, R.json, P.coo"));
  o.by_key["no_timestamp"].push_back(app->add_flag("--no-timestamp", f.no_timestamp, "omit generated_at"));
}

// Fills every flag that was not given explicitly from the config file.
void merge_config(Flags& f, const Options& o) {
  if (f.config.empty()) return;
  const Json j = rgraph::read_json(f.config);
  auto take = [&](const char* key, auto& target) {
    if (j.contains(key) && !o.given(key)) target = j.at(key).get<std::decay_t<decltype(target)>>();
  };
  take("input", f.input);
  take("labels", f.labels);
  take("header", f.header);
  take("points_as_rows", f.points_as_rows);
  take("no_normalize", f.no_normalize);
  take("D", f.ambient_dim);
  take("dims", f.dims);
  take("points", f.points);
  take("outliers", f.outliers);
  take("seed", f.seed);
  take("lambda", f.lambda);
  take("alpha", f.alpha);
  if (!o.given("alpha")) take("gamma", f.gamma);
  take("tol", f.tol);
  take("zero_threshold", f.zero_threshold);
  take("max_iters", f.max_iters);
  take("dangling", f.dangling);
  take("T", f.steps);
  if (j.contains("epsilon") && !o.given("epsilon")) {
    f.epsilon = j.at("epsilon").get<double>();
    f.epsilon_from_config = true;
  }
  take("epsilon_auto", f.epsilon_auto);
  take("early_stop", f.early_stop);
  take("method", f.methods);
  take("damping", f.damping);
  take("out", f.out);
  take("write_matrices", f.write_matrices);
  take("trials", f.trials);
}

rgraph::GenConfig generator_from(const Flags& f) {
  rgraph::GenConfig g;
  g.ambient_dim = f.ambient_dim;
  g.subspace_dims = f.dims;
  g.points_per_subspace = f.points;
  g.outlier_count = f.outliers;
  g.seed = f.seed;
  return g;
}

rgraph::SolverParams solver_from(const Flags& f) {
  rgraph::SolverParams p;
  p.lambda = f.lambda;
  p.alpha = f.alpha;
  if (f.gamma > 0.0) p.gamma_override = f.gamma;
  p.tol = f.tol;
  p.zero_threshold = f.zero_threshold;
  p.max_iters = f.max_iters;
  return p;
}

rgraph::PipelineConfig pipeline_from(const Flags& f, const Options& o) {
  rgraph::PipelineConfig cfg;
  if (!f.input.empty()) {
    cfg.csv_path = f.input;
    cfg.csv_header = f.header;
    cfg.orientation = f.points_as_rows ? rgraph::Orientation::points_as_rows : rgraph::Orientation::points_as_columns;
    if (!f.labels.empty()) cfg.labels_path = f.labels;
  } else if (f.ambient_dim > 0) {
    cfg.generator = generator_from(f);
  }
  cfg.normalize = !f.no_normalize;
  cfg.solver = solver_from(f);
  cfg.steps = f.steps;
  cfg.early_stop = f.early_stop;
  if ((o.given("epsilon") || f.epsilon_from_config) && !f.epsilon_auto) cfg.epsilon = f.epsilon;
  cfg.dangling = rgraph::parse_dangling(f.dangling);
  if (!f.methods.empty()) {
    cfg.methods.clear();
    for (const auto& m : f.methods) cfg.methods.push_back(rgraph::parse_method(m));
  }
  cfg.outrank_damping = f.damping;
  cfg.out_dir = f.out;
  cfg.write_matrices = f.write_matrices;
  if (!f.no_timestamp) cfg.timestamp = now_utc();
  return cfg;
}

int cmd_gen(const Flags& f) {
  const rgraph::GenConfig g = generator_from(f);
  const rgraph::LabeledDataset ds = rgraph::generate_synthetic(g);
  std::filesystem::create_directories(f.out);
  const auto dir = std::filesystem::path(f.out);
  const auto orientation = f.points_as_rows ? rgraph::Orientation::points_as_rows : rgraph::Orientation::points_as_columns;
  rgraph::write_csv((dir / "data.csv").string(), ds.data, orientation);
  rgraph::write_labels((dir / "labels.txt").string(), ds.labels);
  Json manifest = rgraph::to_json(g);
  manifest["points_as_rows"] = f.points_as_rows;
  manifest["N"] = ds.data.size();
  rgraph::write_json((dir / "manifest.json").string(), manifest);
  std::cout << "wrote " << ds.data.size() << " points (" << g.outlier_count << " outliers) to " << f.out << '\n';
  return 0;
}

int cmd_detect(const Flags& f, const Options& o) {
  const rgraph::PipelineConfig cfg = pipeline_from(f, o);
  const Json report = rgraph::run_pipeline(cfg);
  for (const auto& [name, m] : report["methods"].items()) {
    std::cout << name << ": " << m["predicted_outliers"].get<long>() << " predicted outliers (epsilon "
              << rgraph::format_double(m["epsilon"].get<double>()) << ")";
    if (m.contains("metrics")) {
      std::printf("  AUC %.4f  F1 %.4f", m["metrics"]["auc"].get<double>(), m["metrics"]["best_f1"].get<double>());
    }
    std::cout << '\n';
  }
  std::cout << "report: " << (std::filesystem::path(cfg.out_dir) / "report.json").string() << '\n';
  return 0;
}

int cmd_verify(const Flags& f, const Options& o) {
  const rgraph::PipelineConfig cfg = pipeline_from(f, o);
  const Json report = rgraph::run_verify(cfg);
  const auto& th = report["theorem1"];
  const auto& as = report["assumptions"];
  auto row = [](const char* name, bool ok, const std::string& detail) {
    std::printf("%-28s %-4s %s\n", name, ok ? "PASS" : "FAIL", detail.c_str());
  };
  std::size_t eq6 = 0, a1 = 0, kappa = 0, implied = 0;
  const auto& records = th["records"];
  for (const auto& r : records) {
    eq6 += r["eq6_holds"].get<bool>();
    a1 += r["lemmaA1_holds"].get<bool>();
    kappa += r["kappa_bound_ok"].get<bool>();
    implied += !r["eq6_holds"].get<bool>() || r["lemmaA1_holds"].get<bool>();
  }
  const std::string of = "/" + std::to_string(records.size()) + " inliers";
  row("oracle margin condition", eq6 == records.size(), std::to_string(eq6) + of);
  row("outside coherence < lambda", a1 == records.size(), std::to_string(a1) + of);
  row("oracle norm bound", kappa == records.size(), std::to_string(kappa) + of);
  row("margin => coherence", implied == records.size(), std::to_string(implied) + of);
  row("subspace preserving", as["subspace_preserving"].get<bool>(),
      std::to_string(as["violations"].size()) + " violating entries");
  row("inlier strong connectivity", as["assumption1"].get<bool>(),
      std::to_string(as["disconnected_subspaces"].size()) + " disconnected subspaces");
  row("outlier escape", as["assumption2"].get<bool>(),
      std::to_string(as["closed_outlier_sets"].size()) + " closed outlier sets");
  const auto mismatches = report["essential_mismatches"].get<std::size_t>();
  row("essential == inlier", mismatches == 0, std::to_string(mismatches) + " mismatches");
  return 0;
}

int cmd_eval(const Flags& f, const Options& o) {
  rgraph::ExperimentConfig cfg;
  cfg.generator = generator_from(f);
  cfg.solver = solver_from(f);
  cfg.steps = f.steps;
  cfg.dangling = rgraph::parse_dangling(f.dangling);
  cfg.outrank_damping = f.damping;
  if (!f.methods.empty()) {
    cfg.methods.clear();
    for (const auto& m : f.methods) cfg.methods.push_back(rgraph::parse_method(m));
  }
  cfg.trials = f.trials;
  cfg.base_seed = f.seed;
  const rgraph::TrialSummary summary = rgraph::run_trials(cfg);

  Json report;
  if (!f.no_timestamp) report["generated_at"] = now_utc();
  report["config"]["generator"] = rgraph::to_json(cfg.generator);
  report["config"]["solver"] = rgraph::to_json(cfg.solver);
  report["config"]["T"] = cfg.steps;
  report["config"]["dangling"] = rgraph::to_string(cfg.dangling);
  report["config"]["outrank_damping"] = cfg.outrank_damping;
  report["config"]["trials"] = cfg.trials;
  report["config"]["base_seed"] = cfg.base_seed;
  report["summary"] = rgraph::to_json(summary);
  std::filesystem::create_directories(f.out);
  rgraph::write_json((std::filesystem::path(f.out) / "summary.json").string(), report);

  (void)o;
  std::printf("%-8s %-17s %-17s\n", "method", "AUC mean (std)", "F1 mean (std)");
  for (const auto& [m, s] : summary.methods) {
    std::printf("%-8s %.4f (%.4f)   %.4f (%.4f)\n", rgraph::to_string(m).c_str(), s.auc_mean, s.auc_std,
                s.f1_mean, s.f1_std);
  }
  if (summary.single_trial) std::cout << "(single trial: std reported as 0)\n";
  return 0;
}

int cmd_markov(const std::string& p_path, const Flags& f) {
  const rgraph::TransitionMatrix p = rgraph::read_transition_coo(p_path);
  const rgraph::AnalyticLimit limit = rgraph::analytic_cesaro_limit(p);
  Json report = rgraph::to_json(limit);
  std::filesystem::create_directories(f.out);
  rgraph::write_json((std::filesystem::path(f.out) / "markov.json").string(), report);
  std::cout << limit.decomposition.closed_classes.size() << " closed classes, "
            << limit.decomposition.inessential.size() << " inessential states\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Outlier detection by random walks on the self-representation graph"};
  app.require_subcommand(1);

  Flags f;
  Options o;
  std::string p_path;

  auto* gen = app.add_subcommand("gen", "generate a synthetic union-of-subspaces dataset");
  add_generator_flags(gen, f, o);
  gen->add_flag("--points-as-rows", f.points_as_rows, "write points as CSV rows");
  gen->add_option("--out,-o", f.out, "output directory")->capture_default_str();

  auto* detect = app.add_subcommand("detect", "score points and flag outliers");
  auto* verify = app.add_subcommand("verify", "evaluate the subspace-preservation and connectivity conditions");
  for (auto* sub : {detect, verify}) {
    add_input_flags(sub, f, o);
    add_generator_flags(sub, f, o);
    add_solver_flags(sub, f, o);
    add_walk_flags(sub, f, o);
    add_output_flags(sub, f, o);
  }

  auto* eval = app.add_subcommand("eval", "multi-trial synthetic experiment");
  add_generator_flags(eval, f, o);
  add_solver_flags(eval, f, o);
  add_walk_flags(eval, f, o);
  add_output_flags(eval, f, o);
  o.by_key["trials"].push_back(eval->add_option("--trials", f.trials, "number of trials")->capture_default_str());

  auto* markov = app.add_subcommand("markov", "decompose a stored transition matrix");
  markov->add_option("--P", p_path, "transition matrix in COO form")->required();
  markov->add_option("--out,-o", f.out, "output directory")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return cmd_gen(f);
    merge_config(f, o);
    if (*detect) return cmd_detect(f, o);
    if (*verify) return cmd_verify(f, o);
    if (*eval) return cmd_eval(f, o);
    if (*markov) return cmd_markov(p_path, f);
  } catch (const rgraph::Error& e) {
    std::cout << rgraph::error_json(e).dump() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cout << rgraph::error_json(rgraph::Error("cli", "Unexpected", e.what())).dump() << '\n';
    return 1;
  }
  return 0;
}

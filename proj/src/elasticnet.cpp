#include "rgraph/elasticnet.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace rgraph {
namespace {

constexpr double kDegenerateCoherence = 1e-14;
constexpr int kStallSweeps = 200;
constexpr int kChunkSweeps = 10;
constexpr std::size_t kMinGrowth = 8;

Error solver_error(const std::string& code, const std::string& msg) {
  return Error("elasticnet", code, msg);
}

double soft_threshold(double v, double t) {
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// c = gamma * (corr - G r): the negative gradient of the smooth data term.
Eigen::VectorXd correlations(const Eigen::MatrixXd& gram, const Eigen::VectorXd& corr,
                             double gamma, const Eigen::VectorXd& r) {
  Eigen::VectorXd c = corr;
  for (Eigen::Index k = 0; k < r.size(); ++k) {
    if (r[k] != 0.0) c.noalias() -= r[k] * gram.col(k);
  }
  return gamma * c;
}

double coordinate_violation(double c, double r, double lambda) {
  if (r != 0.0) return std::abs(c - lambda * sign(r) - (1.0 - lambda) * r);
  return std::max(0.0, std::abs(c) - lambda);
}

double restricted_objective(const Eigen::MatrixXd& g_ss, const Eigen::VectorXd& corr_s, double gamma,
                            double lambda, const Eigen::VectorXd& x) {
  return lambda * x.lpNorm<1>() + 0.5 * (1.0 - lambda) * x.squaredNorm() +
         0.5 * gamma * x.dot(g_ss * x) - gamma * corr_s.dot(x);
}

// Feature-sign search: with the support and signs fixed the problem is a
// linear system. Each step solves it and line-searches back to the best
// sign change, so the objective decreases monotonically and the support
// sequence is finite. Used when coordinate descent stalls on nearly
// collinear columns.
bool feature_sign_search(const Eigen::MatrixXd& gram, const Eigen::VectorXd& corr, double gamma,
                         const SolverParams& params, const std::function<bool(Eigen::Index)>& is_free,
                         Eigen::VectorXd& r, int& steps) {
  const Eigen::Index n = r.size();
  const double lambda = params.lambda;
  Eigen::VectorXd theta = r.unaryExpr([](double v) { return sign(v); });
  while (steps < params.max_iters) {
    const Eigen::VectorXd c = correlations(gram, corr, gamma, r);
    bool active_ok = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (r[i] != 0.0 && coordinate_violation(c[i], r[i], lambda) > 0.25 * params.tol) active_ok = false;
    }
    if (active_ok) {
      Eigen::Index pick = -1;
      double worst = params.tol;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (r[i] == 0.0 && theta[i] == 0.0 && is_free(i) && std::abs(c[i]) - lambda > worst) {
          worst = std::abs(c[i]) - lambda;
          pick = i;
        }
      }
      if (pick < 0) return true;
      theta[pick] = sign(c[pick]);
    }
    ++steps;

    std::vector<Eigen::Index> support;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (theta[i] != 0.0) support.push_back(i);
    }
    const auto m = static_cast<Eigen::Index>(support.size());
    Eigen::MatrixXd g_ss(m, m);
    Eigen::VectorXd corr_s(m), x_old(m), rhs(m);
    for (Eigen::Index a = 0; a < m; ++a) {
      for (Eigen::Index b = 0; b < m; ++b) g_ss(a, b) = gram(support[a], support[b]);
      corr_s[a] = corr[support[a]];
      x_old[a] = r[support[a]];
      rhs[a] = gamma * corr_s[a] - lambda * theta[support[a]];
    }
    Eigen::MatrixXd lhs = gamma * g_ss;
    lhs.diagonal().array() += 1.0 - lambda;
    Eigen::VectorXd x_new;
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(lhs);
    if (lambda < 1.0 && ldlt.info() == Eigen::Success) {
      x_new = ldlt.solve(rhs);
    } else {
      x_new = lhs.completeOrthogonalDecomposition().solve(rhs);
    }
    if (!x_new.allFinite()) return false;

    // Candidate points: the full step and every zero crossing on the way.
    Eigen::VectorXd best = x_new;
    double best_value = restricted_objective(g_ss, corr_s, gamma, lambda, x_new);
    Eigen::Index best_zero = -1;
    for (Eigen::Index a = 0; a < m; ++a) {
      if (x_old[a] == 0.0 || sign(x_old[a]) == sign(x_new[a])) continue;
      const double t = x_old[a] / (x_old[a] - x_new[a]);
      Eigen::VectorXd point = x_old + t * (x_new - x_old);
      point[a] = 0.0;
      const double value = restricted_objective(g_ss, corr_s, gamma, lambda, point);
      if (value < best_value) {
        best_value = value;
        best = point;
        best_zero = a;
      }
    }
    for (Eigen::Index a = 0; a < m; ++a) {
      r[support[a]] = best[a];
      theta[support[a]] = a == best_zero ? 0.0 : sign(best[a]);
    }
  }
  return false;
}

}  // namespace

NotConverged::NotConverged(Eigen::Index column, int sweeps, Eigen::VectorXd best, double residual)
    : Error("elasticnet", "NotConverged",
            "column " + std::to_string(column) + " did not converge after " +
                std::to_string(sweeps) + " sweeps (KKT residual " + std::to_string(residual) + ")"),
      column_(column),
      best_(std::move(best)),
      residual_(residual) {}

void validate(const SolverParams& p) {
  if (!(p.lambda >= 0.0 && p.lambda <= 1.0)) throw solver_error("InvalidParams", "lambda must lie in [0, 1]");
  if (!(p.tol > 0.0)) throw solver_error("InvalidParams", "tol must be positive");
  if (p.max_iters <= 0) throw solver_error("InvalidParams", "max_iters must be positive");
  if (p.gamma_override) {
    if (!(*p.gamma_override > 0.0)) throw solver_error("InvalidParams", "gamma must be positive");
  } else if (!(p.alpha > 0.0)) {
    throw solver_error("InvalidParams", "alpha must be positive (or set gamma explicitly)");
  }
  if (!(p.zero_threshold >= 0.0)) throw solver_error("InvalidParams", "zero_threshold must be nonnegative");
}

Eigen::MatrixXd gram_matrix(const DataMatrix& x) {
  Eigen::MatrixXd g(x.size(), x.size());
  g.noalias() = x.values.transpose() * x.values;
  return g;
}

double compute_gamma(const Eigen::MatrixXd& gram, Eigen::Index j, const SolverParams& params) {
  if (params.gamma_override) return *params.gamma_override;
  const Eigen::Index n = gram.cols();
  if (n < 2) throw solver_error("InvalidInput", "need at least two points");
  double max_coh = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (i != j) max_coh = std::max(max_coh, std::abs(gram(i, j)));
  }
  if (max_coh < kDegenerateCoherence) {
    throw solver_error("DegenerateCoherence",
                       "point " + std::to_string(j) + " is orthogonal to every other point");
  }
  return params.alpha * params.lambda / max_coh;
}

double compute_gamma(const DataMatrix& x, Eigen::Index j, const SolverParams& params) {
  if (params.gamma_override) return *params.gamma_override;
  if (x.size() < 2) throw solver_error("InvalidInput", "need at least two points");
  const Eigen::VectorXd coh = x.values.transpose() * x.values.col(j);
  double max_coh = 0.0;
  for (Eigen::Index i = 0; i < coh.size(); ++i) {
    if (i != j) max_coh = std::max(max_coh, std::abs(coh[i]));
  }
  if (max_coh < kDegenerateCoherence) {
    throw solver_error("DegenerateCoherence",
                       "point " + std::to_string(j) + " is orthogonal to every other point");
  }
  return params.alpha * params.lambda / max_coh;
}

double kkt_residual(const Eigen::MatrixXd& gram, const Eigen::VectorXd& corr, double gamma,
                    double lambda, const Eigen::VectorXd& r, std::optional<Eigen::Index> excluded) {
  const Eigen::VectorXd c = correlations(gram, corr, gamma, r);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    if (excluded && *excluded == i) continue;
    worst = std::max(worst, coordinate_violation(c[i], r[i], lambda));
  }
  return worst;
}

double elastic_net_objective(const Eigen::MatrixXd& gram, const Eigen::VectorXd& corr,
                             double target_sq_norm, double gamma, double lambda,
                             const Eigen::VectorXd& r) {
  const double fit = target_sq_norm - 2.0 * corr.dot(r) + r.dot(gram * r);
  return lambda * r.lpNorm<1>() + 0.5 * (1.0 - lambda) * r.squaredNorm() +
         0.5 * gamma * std::max(fit, 0.0);
}

ColumnSolution solve_elastic_net(const Eigen::MatrixXd& gram, const Eigen::VectorXd& corr,
                                 double gamma, const SolverParams& params,
                                 std::optional<Eigen::Index> excluded, const Eigen::VectorXd* init) {
  const Eigen::Index n = corr.size();
  const double lambda = params.lambda;
  Eigen::VectorXd r = Eigen::VectorXd::Zero(n);
  if (init) {
    r = *init;
    if (excluded) r[*excluded] = 0.0;
  }
  const std::function<bool(Eigen::Index)> is_free = [&](Eigen::Index i) {
    return !(excluded && *excluded == i);
  };

  std::vector<Eigen::Index> active;
  std::vector<char> in_active(n, 0);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (r[i] != 0.0) {
      active.push_back(i);
      in_active[i] = 1;
    }
  }

  Eigen::VectorXd c = correlations(gram, corr, gamma, r);
  int sweeps = 0;
  double residual = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best = r;
  double best_residual = residual;

  const int cd_budget = std::min(params.max_iters, kStallSweeps);
  while (true) {
    // Coordinate descent restricted to the active set. r vanishes outside the
    // set, so each correlation only needs the working-set block of G.
    auto active_corr = [&](Eigen::Index i) {
      const auto gi = gram.col(i);
      double acc = corr[i];
      for (const Eigen::Index k : active) acc -= gi[k] * r[k];
      return gamma * acc;
    };
    for (int chunk = 0; chunk < kChunkSweeps && !active.empty() && sweeps < cd_budget; ++chunk) {
      ++sweeps;
      for (const Eigen::Index i : active) {
        const double gii = gram(i, i);
        const double rho = active_corr(i) + gamma * gii * r[i];
        r[i] = soft_threshold(rho, lambda) / (1.0 - lambda + gamma * gii);
      }
      double active_residual = 0.0;
      for (const Eigen::Index i : active)
        active_residual = std::max(active_residual, coordinate_violation(active_corr(i), r[i], lambda));
      if (active_residual <= 0.25 * params.tol) break;
    }

    // Refresh the correlations to shed accumulated rounding, then look for
    // coordinates outside the active set that violate optimality.
    c = correlations(gram, corr, gamma, r);
    residual = 0.0;
    std::vector<Eigen::Index> violators;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!is_free(i)) continue;
      residual = std::max(residual, coordinate_violation(c[i], r[i], lambda));
      if (!in_active[i] && std::abs(c[i]) > lambda) violators.push_back(i);
    }
    if (residual < best_residual) {
      best_residual = residual;
      best = r;
    }
    if (residual <= params.tol && violators.empty()) break;
    if (sweeps >= cd_budget || violators.empty()) {
      // The support has settled (or descent is crawling): finish with exact
      // sign-fixed solves.
      if (feature_sign_search(gram, corr, gamma, params, is_free, r, sweeps)) break;
      throw NotConverged(excluded.value_or(-1), sweeps, best, best_residual);
    }
    // Grow the working set by the strongest violators only.
    const std::size_t grow = std::min(violators.size(), std::max<std::size_t>(kMinGrowth, active.size()));
    std::partial_sort(violators.begin(), violators.begin() + static_cast<std::ptrdiff_t>(grow), violators.end(),
                      [&](Eigen::Index a, Eigen::Index b) { return std::abs(c[a]) > std::abs(c[b]); });
    for (std::size_t k = 0; k < grow; ++k) {
      active.push_back(violators[k]);
      in_active[violators[k]] = 1;
    }
    std::sort(active.begin(), active.end());
  }

  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(r[i]) < params.zero_threshold) r[i] = 0.0;
  }
  ColumnSolution out;
  out.gamma = gamma;
  out.sweeps = sweeps;
  out.kkt_residual = kkt_residual(gram, corr, gamma, lambda, r, excluded);
  out.coeffs = std::move(r);
  return out;
}

ColumnSolution solve_column(const Eigen::MatrixXd& gram, Eigen::Index j, const SolverParams& params,
                            const Eigen::VectorXd* init) {
  validate(params);
  const double gamma = compute_gamma(gram, j, params);
  const Eigen::VectorXd corr = gram.col(j);
  return solve_elastic_net(gram, corr, gamma, params, j, init);
}

ColumnSolution solve_column(const DataMatrix& x, Eigen::Index j, const SolverParams& params,
                            const Eigen::VectorXd* init) {
  return solve_column(gram_matrix(x), j, params, init);
}

RepresentationMatrix self_representation(const DataMatrix& x, const SolverParams& params,
                                         Execution exec) {
  validate(params);
  const Eigen::Index n = x.size();
  const Eigen::MatrixXd gram = gram_matrix(x);

  std::vector<ColumnSolution> columns(n);
  std::vector<std::string> failures(n);

  auto solve_one = [&](Eigen::Index j) {
    try {
      columns[j] = solve_column(gram, j, params);
    } catch (const Error& e) {
      failures[j] = e.code() + ": " + e.what();
    }
  };

  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 4)
    for (Eigen::Index j = 0; j < n; ++j) solve_one(j);
  } else {
    for (Eigen::Index j = 0; j < n; ++j) solve_one(j);
  }

  std::ostringstream failed;
  std::size_t n_failed = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (failures[j].empty()) continue;
    if (n_failed++ < 8) failed << "\n  column " << j << ": " << failures[j];
  }
  if (n_failed) {
    throw solver_error("ColumnFailures", std::to_string(n_failed) + " column(s) failed:" + failed.str());
  }

  RepresentationMatrix out;
  out.gamma.resize(n);
  std::vector<Eigen::Triplet<double>> triplets;
  for (Eigen::Index j = 0; j < n; ++j) {
    out.gamma[j] = columns[j].gamma;
    const Eigen::VectorXd& r = columns[j].coeffs;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i != j && r[i] != 0.0) triplets.emplace_back(i, j, r[i]);
    }
  }
  out.coeffs.resize(n, n);
  out.coeffs.setFromTriplets(triplets.begin(), triplets.end());
  out.coeffs.makeCompressed();
  return out;
}

OracleSolution solve_oracle(const DataMatrix& x, const Labels& labels, Eigen::Index j,
                            const SolverParams& params) {
  validate(params);
  if (static_cast<Eigen::Index>(labels.size()) != x.size()) {
    throw solver_error("InvalidInput", "label count does not match point count");
  }
  const Label own = labels.at(j);
  if (!own.is_inlier()) throw solver_error("NotAnInlier", "point " + std::to_string(j) + " is an outlier");

  OracleSolution out;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    if (k != j && labels[k] == own) out.dictionary.push_back(k);
  }
  if (out.dictionary.empty()) {
    throw solver_error("SingletonSubspace",
                       "subspace " + std::to_string(own.subspace() + 1) + " has a single point");
  }

  const auto m = static_cast<Eigen::Index>(out.dictionary.size());
  Eigen::MatrixXd dict(x.ambient_dim(), m);
  for (Eigen::Index k = 0; k < m; ++k) dict.col(k) = x.values.col(out.dictionary[k]);
  const Eigen::VectorXd& xj = x.values.col(j);
  const Eigen::MatrixXd gram = dict.transpose() * dict;
  const Eigen::VectorXd corr = dict.transpose() * xj;

  out.gamma = compute_gamma(x, j, params);
  ColumnSolution sol = solve_elastic_net(gram, corr, out.gamma, params);
  out.r_oracle = std::move(sol.coeffs);
  out.delta = out.gamma * (xj - dict * out.r_oracle);
  const double norm = out.delta.norm();
  if (!(norm > 0.0)) throw solver_error("DegenerateOracle", "oracle point is zero");
  out.delta_unit = out.delta / norm;
  out.kappa = (dict.transpose() * out.delta_unit).cwiseAbs().maxCoeff();
  const double lambda = params.lambda;
  const double bound = (lambda * out.kappa + 1.0 - lambda) / (out.kappa * out.kappa);
  out.kappa_bound_ok = norm <= bound * (1.0 + 1e-9);
  return out;
}

}  // namespace rgraph

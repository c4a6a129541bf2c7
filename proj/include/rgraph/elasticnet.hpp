#pragma once

#include "rgraph/dataset.hpp"
#include "rgraph/error.hpp"
#include "rgraph/execution.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <optional>
#include <vector>

namespace rgraph {

struct SolverParams {
  double lambda = 0.95;  // l1 / l2 trade-off
  double alpha = 0.0;    // gamma multiplier; must be > 0 unless gamma_override is set
  std::optional<double> gamma_override;
  double tol = 1e-8;     // KKT tolerance
  int max_iters = 10000; // sweeps plus active-set steps per column
  double zero_threshold = 1e-10;
};

void validate(const SolverParams& params);

// N x N column-major coefficient matrix R (column j represents point j) with
// zero diagonal, and the gamma used for each column.
struct RepresentationMatrix {
  Eigen::SparseMatrix<double> coeffs;
  std::vector<double> gamma;

  Eigen::Index size() const { return coeffs.cols(); }
};

struct ColumnSolution {
  Eigen::VectorXd coeffs;  // dense, entries below zero_threshold are exact zeros
  double gamma = 0.0;
  double kkt_residual = 0.0;
  int sweeps = 0;
};

struct OracleSolution {
  std::vector<Eigen::Index> dictionary;  // point indices of the restricted dictionary
  Eigen::VectorXd r_oracle;              // coefficients over `dictionary`
  Eigen::VectorXd delta;
  Eigen::VectorXd delta_unit;
  double gamma = 0.0;
  // max_{k in dictionary} |<x_k, delta_unit>|
  double kappa = 0.0;
  // ||delta|| <= (lambda * kappa + 1 - lambda) / kappa^2
  bool kappa_bound_ok = false;
};

class NotConverged : public Error {
 public:
  NotConverged(Eigen::Index column, int sweeps, Eigen::VectorXd best, double residual);

  Eigen::Index column() const { return column_; }
  const Eigen::VectorXd& best_iterate() const { return best_; }
  double residual() const { return residual_; }

 private:
  Eigen::Index column_;
  Eigen::VectorXd best_;
  double residual_;
};

// Dense Gram matrix X^T X.
Eigen::MatrixXd gram_matrix(const DataMatrix& x);

// gamma_j = alpha * lambda / max_{i != j} |<x_j, x_i>|, or the override.
double compute_gamma(const DataMatrix& x, Eigen::Index j, const SolverParams& params);
double compute_gamma(const Eigen::MatrixXd& gram, Eigen::Index j, const SolverParams& params);

// Generic elastic-net solve over a dictionary described by its Gram matrix
// and the correlations `corr` = dictionary^T target:
//   min lambda |r|_1 + (1 - lambda)/2 |r|^2 + gamma/2 |target - D r|^2
// with r[excluded] pinned to zero. Cyclic coordinate descent on an active set
// that grows with KKT violators until the full KKT residual is below tol.
ColumnSolution solve_elastic_net(const Eigen::MatrixXd& gram, const Eigen::VectorXd& corr,
                                 double gamma, const SolverParams& params,
                                 std::optional<Eigen::Index> excluded = std::nullopt,
                                 const Eigen::VectorXd* init = nullptr);

// Max stationarity violation of r for the problem above.
double kkt_residual(const Eigen::MatrixXd& gram, const Eigen::VectorXd& corr, double gamma,
                    double lambda, const Eigen::VectorXd& r,
                    std::optional<Eigen::Index> excluded = std::nullopt);

// Objective value; target_sq_norm is |target|^2.
double elastic_net_objective(const Eigen::MatrixXd& gram, const Eigen::VectorXd& corr,
                             double target_sq_norm, double gamma, double lambda,
                             const Eigen::VectorXd& r);

ColumnSolution solve_column(const DataMatrix& x, Eigen::Index j, const SolverParams& params,
                            const Eigen::VectorXd* init = nullptr);
ColumnSolution solve_column(const Eigen::MatrixXd& gram, Eigen::Index j, const SolverParams& params,
                            const Eigen::VectorXd* init = nullptr);

// Solves every column. Columns are independent; the parallel path distributes
// them over OpenMP threads and yields the same R as the serial path.
RepresentationMatrix self_representation(const DataMatrix& x, const SolverParams& params,
                                         Execution exec = Execution::parallel);

// Restricted problem over the other points of x_j's subspace. Uses the same
// per-column gamma as the full problem.
OracleSolution solve_oracle(const DataMatrix& x, const Labels& labels, Eigen::Index j,
                            const SolverParams& params);

}  // namespace rgraph

#include "rgraph/elasticnet.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>

using namespace rgraph;
using testing::Rng;

namespace {

DataMatrix unit_data(Eigen::MatrixXd values) {
  DataMatrix x{std::move(values), true};
  return normalize_columns(x);
}

// Golden-section minimization of a convex scalar function on [lo, hi].
template <typename F>
double argmin_scalar(F f, double lo, double hi) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  for (int it = 0; it < 300; ++it) {
    const double c = b - phi * (b - a);
    const double d = a + phi * (b - a);
    if (f(c) < f(d)) b = d; else a = c;
  }
  return 0.5 * (a + b);
}

// Unit-norm data drawn from a union of random subspaces plus a few outliers.
DataMatrix random_instance(Rng& rng, int n_max) {
  const int d = testing::uniform_int(rng, 4, 30);
  const int n = testing::uniform_int(rng, 3, n_max);
  if (testing::uniform_real(rng) < 0.5) return DataMatrix{testing::random_unit_columns(rng, d, n), true};
  GenConfig g;
  g.ambient_dim = d;
  const int subspaces = testing::uniform_int(rng, 1, 3);
  for (int l = 0; l < subspaces; ++l) {
    g.subspace_dims.push_back(testing::uniform_int(rng, 1, std::min(5, d - 1)));
    g.points_per_subspace.push_back(std::max(2, n / (subspaces + 1)));
  }
  g.outlier_count = testing::uniform_int(rng, 0, 3);
  g.seed = rng();
  return generate_synthetic(g).data;
}

}  // namespace

TEST_CASE("compute_gamma follows the per-column coherence rule") {
  // <x_0, x_1> = 0.5, <x_0, x_2> = 0
  Eigen::MatrixXd v(3, 3);
  v << 1, 0.5, 0, 0, std::sqrt(0.75), 0, 0, 0, 1;
  const DataMatrix x{v, true};
  SolverParams p;
  p.alpha = 5.0;
  p.lambda = 0.95;
  CHECK(compute_gamma(x, 0, p) == doctest::Approx(9.5).epsilon(1e-14));
  CHECK(compute_gamma(gram_matrix(x), 0, p) == doctest::Approx(9.5).epsilon(1e-14));

  p.gamma_override = 7.0;
  CHECK(compute_gamma(x, 2, p) == 7.0);

  p.gamma_override.reset();
  try {
    compute_gamma(x, 2, p);
    FAIL("expected DegenerateCoherence");
  } catch (const Error& e) {
    CHECK(e.code() == "DegenerateCoherence");
  }
}

TEST_CASE("duplicate atoms match the closed-form coefficient") {
  const double lambda = 0.95, gamma = 10.0;
  // Scalar oracle: minimize lambda|r| + (1-lambda)/2 r^2 + gamma/2 (1 - r)^2.
  const double oracle = argmin_scalar(
      [&](double r) { return lambda * std::abs(r) + 0.5 * (1 - lambda) * r * r + 0.5 * gamma * (1 - r) * (1 - r); },
      -2.0, 2.0);
  const double closed = (gamma - lambda) / (1.0 - lambda + gamma);
  CHECK(std::abs(closed - 9.05 / 10.05) < 1e-15);
  CHECK(std::abs(oracle - closed) < 1e-8);

  Eigen::MatrixXd v(2, 2);
  v << 1, 1, 0, 0;
  SolverParams p;
  p.lambda = lambda;
  p.gamma_override = gamma;
  const ColumnSolution sol = solve_column(DataMatrix{v, true}, 1, p);
  CHECK(sol.coeffs[1] == 0.0);
  CHECK(std::abs(sol.coeffs[0] - closed) < 1e-10);
}

TEST_CASE("alpha <= 1 gives the zero representation") {
  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const DataMatrix x = random_instance(rng, 30);
    SolverParams p;
    p.alpha = trial % 2 ? 1.0 : testing::uniform_real(rng, 0.1, 1.0);
    p.lambda = testing::uniform_real(rng, 0.5, 1.0);
    const RepresentationMatrix r = self_representation(x, p);
    CHECK(r.coeffs.nonZeros() == 0);
  }
}

TEST_CASE("lambda = 1 with an orthonormal dictionary is a soft threshold") {
  // Columns e_1, e_2, e_3 and a target correlated with them.
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(4, 4);
  v.block(0, 0, 3, 3).setIdentity();
  v.col(3) << 0.7, 0.5, 0.1, 0.5;
  const DataMatrix x = unit_data(v);
  SolverParams p;
  p.lambda = 1.0;
  p.gamma_override = 5.0;
  const ColumnSolution sol = solve_column(x, 3, p);
  for (int i = 0; i < 3; ++i) {
    const double c = x.values.col(i).dot(x.values.col(3));
    const double expected = std::max(5.0 * std::abs(c) - 1.0, 0.0) / 5.0 * (c < 0 ? -1.0 : 1.0);
    CHECK(std::abs(sol.coeffs[i] - expected) < 1e-10);
    if (std::abs(c) <= 1.0 / 5.0) CHECK(sol.coeffs[i] == 0.0);
  }
  CHECK(sol.coeffs[3] == 0.0);
}

TEST_CASE("every solution satisfies the KKT certificate") {
  Rng rng(33);
  for (int trial = 0; trial < 40; ++trial) {
    const DataMatrix x = random_instance(rng, 60);
    SolverParams p;
    p.alpha = testing::uniform_real(rng, 1.01, 20.0);
    p.lambda = testing::uniform_real(rng, 0.3, 1.0);
    const Eigen::MatrixXd g = gram_matrix(x);
    for (Eigen::Index j = 0; j < x.size(); ++j) {
      const ColumnSolution sol = solve_column(g, j, p);
      CHECK(sol.coeffs[j] == 0.0);
      CHECK(sol.kkt_residual <= p.tol);
      // Stationarity recomputed from the data, not from the solver's Gram.
      const Eigen::VectorXd resid = x.values.col(j) - x.values * sol.coeffs;
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (i == j) continue;
        const double c = sol.gamma * x.values.col(i).dot(resid);
        const double r = sol.coeffs[i];
        if (r != 0.0) {
          CHECK(std::abs(c - p.lambda * (r > 0 ? 1.0 : -1.0) - (1.0 - p.lambda) * r) <= 1e-7);
        } else {
          CHECK(std::abs(c) <= p.lambda + 1e-7);
        }
      }
    }
  }
}

TEST_CASE("objective is no worse than a long proximal-gradient reference") {
  Rng rng(44);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = testing::uniform_int(rng, 3, 12);
    const DataMatrix x{testing::random_unit_columns(rng, testing::uniform_int(rng, 2, 8), n), true};
    SolverParams p;
    p.alpha = testing::uniform_real(rng, 1.5, 10.0);
    p.lambda = testing::uniform_real(rng, 0.5, 1.0);
    const Eigen::MatrixXd g = gram_matrix(x);
    const int j = testing::uniform_int(rng, 0, n - 1);
    const ColumnSolution sol = solve_column(g, j, p);
    const Eigen::VectorXd corr = g.col(j);
    const double mine = elastic_net_objective(g, corr, 1.0, sol.gamma, p.lambda, sol.coeffs);

    double reference = elastic_net_objective(g, corr, 1.0, sol.gamma, p.lambda, Eigen::VectorXd::Zero(n));
    for (int start = 0; start < 3; ++start) {
      Eigen::VectorXd init = start == 0 ? Eigen::VectorXd::Zero(n) : Eigen::VectorXd(Eigen::VectorXd::Random(n));
      const Eigen::VectorXd ref =
          testing::proximal_gradient_reference(g, corr, sol.gamma, p.lambda, j, 20000, init);
      reference = std::min(reference, elastic_net_objective(g, corr, 1.0, sol.gamma, p.lambda, ref));
    }
    CHECK(mine <= reference + 1e-6);
  }
}

TEST_CASE("objective beats a dense grid on two free coordinates") {
  Rng rng(45);
  for (int trial = 0; trial < 10; ++trial) {
    const DataMatrix x{testing::random_unit_columns(rng, 3, 3), true};
    SolverParams p;
    p.alpha = 3.0;
    p.lambda = 0.9;
    const Eigen::MatrixXd g = gram_matrix(x);
    const ColumnSolution sol = solve_column(g, 2, p);
    const Eigen::VectorXd corr = g.col(2);
    const double mine = elastic_net_objective(g, corr, 1.0, sol.gamma, p.lambda, sol.coeffs);
    double best = 1e300;
    Eigen::VectorXd r = Eigen::VectorXd::Zero(3);
    for (int a = -400; a <= 400; ++a) {
      for (int b = -400; b <= 400; ++b) {
        r << a * 0.005, b * 0.005, 0.0;
        best = std::min(best, elastic_net_objective(g, corr, 1.0, sol.gamma, p.lambda, r));
      }
    }
    CHECK(mine <= best + 1e-6);
  }
}

TEST_CASE("strong convexity: different starting points agree") {
  Rng rng(55);
  for (int trial = 0; trial < 20; ++trial) {
    const DataMatrix x = random_instance(rng, 40);
    SolverParams p;
    p.alpha = testing::uniform_real(rng, 1.5, 15.0);
    p.lambda = testing::uniform_real(rng, 0.5, 0.99);
    p.tol = 1e-10;
    const Eigen::MatrixXd g = gram_matrix(x);
    const int j = testing::uniform_int(rng, 0, static_cast<int>(x.size()) - 1);
    const Eigen::VectorXd start = Eigen::VectorXd::Random(x.size());
    INFO("trial ", trial, " n=", x.size(), " lambda=", p.lambda, " alpha=", p.alpha, " j=", j);
    const ColumnSolution a = solve_column(g, j, p);
    const ColumnSolution b = solve_column(g, j, p, &start);
    CHECK((a.coeffs - b.coeffs).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("self_representation on duplicated points") {
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(3, 3);
  v.row(0).setOnes();
  SolverParams p;
  p.alpha = 5.0;
  p.tol = 1e-13;
  const RepresentationMatrix r = self_representation(DataMatrix{v, true}, p);
  const Eigen::MatrixXd dense(r.coeffs);
  for (int i = 0; i < 3; ++i) CHECK(dense(i, i) == 0.0);
  CHECK((dense - dense.transpose()).cwiseAbs().maxCoeff() < 1e-10);
  // Three identical problems: all off-diagonal coefficients agree.
  CHECK(std::abs(dense(0, 1) - dense(1, 2)) < 1e-10);
  CHECK(dense(0, 1) != 0.0);
}

TEST_CASE("self_representation is independent of execution and column order") {
  GenConfig g{30, {3, 3}, {25, 25}, 10, 8};
  const DataMatrix x = generate_synthetic(g).data;
  SolverParams p;
  p.alpha = 5.0;
  const RepresentationMatrix par = self_representation(x, p, Execution::parallel);
  const RepresentationMatrix ser = self_representation(x, p, Execution::serial);
  CHECK(Eigen::MatrixXd(par.coeffs) == Eigen::MatrixXd(ser.coeffs));
  CHECK(par.gamma == ser.gamma);

  const Eigen::MatrixXd gram = gram_matrix(x);
  for (Eigen::Index j = x.size() - 1; j >= 0; --j) {
    const ColumnSolution col = solve_column(gram, j, p);
    CHECK(Eigen::VectorXd(par.coeffs.col(j)) == col.coeffs);
    CHECK(par.gamma[j] == col.gamma);
    CHECK(par.coeffs.coeff(j, j) == 0.0);
  }
  for (Eigen::Index k = 0; k < par.coeffs.nonZeros(); ++k) CHECK(std::abs(par.coeffs.valuePtr()[k]) >= p.zero_threshold);
}

TEST_CASE("self_representation reports failing columns") {
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(3, 3);
  SolverParams p;
  p.alpha = 2.0;
  try {
    self_representation(DataMatrix{v, true}, p);
    FAIL("expected ColumnFailures");
  } catch (const Error& e) {
    CHECK(e.code() == "ColumnFailures");
    CHECK(std::string(e.what()).find("column 2") != std::string::npos);
  }
}

TEST_CASE("NotConverged carries the best iterate") {
  GenConfig g{20, {4}, {40}, 5, 1};
  const DataMatrix x = generate_synthetic(g).data;
  SolverParams p;
  p.alpha = 20.0;
  p.lambda = 0.5;
  p.max_iters = 1;
  p.tol = 1e-14;
  try {
    solve_column(x, 0, p);
    FAIL("expected NotConverged");
  } catch (const NotConverged& e) {
    CHECK(e.code() == "NotConverged");
    CHECK(e.column() == 0);
    CHECK(e.best_iterate().size() == x.size());
    CHECK(e.residual() > 0.0);
  }
}

TEST_CASE("oracle on a one-dimensional subspace") {
  // x_0 = e_1, x_1 = -e_1 (subspace 0), x_2 = e_2 (outlier)
  Eigen::MatrixXd v(2, 3);
  v << 1, -1, 0, 0, 0, 1;
  const DataMatrix x{v, true};
  const Labels labels = testing::make_labels({0, 0, -1});
  SolverParams p;
  p.lambda = 0.95;
  p.gamma_override = 10.0;
  const OracleSolution o = solve_oracle(x, labels, 0, p);
  REQUIRE(o.dictionary == std::vector<Eigen::Index>{1});
  CHECK(std::abs(o.r_oracle[0] + 9.05 / 10.05) < 1e-10);
  CHECK(std::abs(o.delta[0] - 10.0 / 10.05) < 1e-10);
  CHECK(std::abs(o.delta[1]) < 1e-15);
  CHECK(std::abs(o.delta_unit[0] - 1.0) < 1e-12);
  CHECK(o.kappa_bound_ok);
}

TEST_CASE("oracle errors") {
  Eigen::MatrixXd v(2, 3);
  v << 1, -1, 0, 0, 0, 1;
  const DataMatrix x{v, true};
  SolverParams p;
  p.gamma_override = 10.0;
  try {
    solve_oracle(x, testing::make_labels({0, 0, -1}), 2, p);
    FAIL("expected NotAnInlier");
  } catch (const Error& e) {
    CHECK(e.code() == "NotAnInlier");
  }
  try {
    solve_oracle(x, testing::make_labels({0, 1, -1}), 0, p);
    FAIL("expected SingletonSubspace");
  } catch (const Error& e) {
    CHECK(e.code() == "SingletonSubspace");
  }
}

TEST_CASE("oracle points stay in the subspace and respect the norm bound") {
  Rng rng(66);
  for (int trial = 0; trial < 10; ++trial) {
    GenConfig g{testing::uniform_int(rng, 10, 40), {3, 4}, {20, 20}, 8, rng()};
    const LabeledDataset ds = generate_synthetic(g);
    SolverParams p;
    p.alpha = testing::uniform_real(rng, 1.5, 20.0);
    p.lambda = testing::uniform_real(rng, 0.6, 1.0);
    for (Eigen::Index j = 0; j < ds.data.size(); ++j) {
      if (!ds.labels[j].is_inlier()) continue;
      const OracleSolution o = solve_oracle(ds.data, ds.labels, j, p);
      const Eigen::MatrixXd& b = ds.bases[ds.labels[j].subspace()];
      CHECK((o.delta - b * (b.transpose() * o.delta)).norm() < 1e-10 * std::max(1.0, o.delta.norm()));
      CHECK(std::abs(o.delta_unit.norm() - 1.0) < 1e-12);
      // delta = gamma (x_j - X_S r)
      Eigen::VectorXd rebuilt = ds.data.values.col(j);
      for (std::size_t k = 0; k < o.dictionary.size(); ++k) rebuilt -= o.r_oracle[k] * ds.data.values.col(o.dictionary[k]);
      CHECK((o.gamma * rebuilt - o.delta).norm() < 1e-10);
      CHECK(o.kappa_bound_ok);
    }
  }
}

TEST_CASE("invalid solver params") {
  SolverParams p;
  p.alpha = 2.0;
  p.lambda = 1.5;
  CHECK_THROWS_AS(validate(p), Error);
  p.lambda = 0.9;
  p.tol = 0.0;
  CHECK_THROWS_AS(validate(p), Error);
  p.tol = 1e-8;
  p.alpha = 0.0;
  CHECK_THROWS_AS(validate(p), Error);
  p.gamma_override = 3.0;
  CHECK_NOTHROW(validate(p));
}

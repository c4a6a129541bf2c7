#include "rgraph/markov.hpp"
#include "rgraph/scc.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <set>

using namespace rgraph;
using testing::Rng;

namespace {

using Index = Eigen::Index;

Eigen::MatrixXd feeder_chain() {
  Eigen::MatrixXd p(3, 3);
  p << 0, 1, 0, 1, 0, 0, 1, 0, 0;
  return p;
}

Eigen::MatrixXd two_absorbing_with_feeder() {
  Eigen::MatrixXd p(3, 3);
  p << 1, 0, 0, 0, 1, 0, 0.3, 0.7, 0;
  return p;
}

std::set<std::set<Index>> as_sets(const std::vector<std::vector<Index>>& classes) {
  std::set<std::set<Index>> out;
  for (const auto& c : classes) out.emplace(c.begin(), c.end());
  return out;
}

}  // namespace

TEST_CASE("decomposition examples") {
  const MarkovDecomposition id = decompose(from_dense(Eigen::MatrixXd::Identity(2, 2)));
  CHECK(id.closed_classes == std::vector<std::vector<Index>>{{0}, {1}});
  CHECK(id.inessential.empty());

  const MarkovDecomposition f = decompose(from_dense(feeder_chain()));
  CHECK(f.closed_classes == std::vector<std::vector<Index>>{{0, 1}});
  CHECK(f.inessential == std::vector<Index>{2});
  CHECK(f.class_of == std::vector<int>{0, 0, -1});
  CHECK(!f.is_essential(2));
}

TEST_CASE("stationary distribution examples") {
  Eigen::MatrixXd swap(2, 2);
  swap << 0, 1, 1, 0;
  const Eigen::VectorXd a = stationary_distribution(from_dense(swap), {0, 1});
  CHECK(std::abs(a[0] - 0.5) < 1e-15);
  CHECK(std::abs(a[1] - 0.5) < 1e-15);

  Eigen::MatrixXd lazy(2, 2);
  lazy << 0.9, 0.1, 0.5, 0.5;
  const Eigen::VectorXd b = stationary_distribution(from_dense(lazy), {0, 1});
  CHECK(std::abs(b[0] - 5.0 / 6.0) < 1e-14);
  CHECK(std::abs(b[1] - 1.0 / 6.0) < 1e-14);

  const Eigen::VectorXd c = stationary_distribution(from_dense(two_absorbing_with_feeder()), {1});
  CHECK(c.size() == 1);
  CHECK(c[0] == 1.0);
}

TEST_CASE("stationary distribution rejects open sets") {
  try {
    stationary_distribution(from_dense(feeder_chain()), {1, 2});
    FAIL("expected NotClosedClass");
  } catch (const Error& e) {
    CHECK(e.code() == "NotClosedClass");
  }
}

TEST_CASE("hitting probability examples") {
  const TransitionMatrix p = from_dense(two_absorbing_with_feeder());
  const MarkovDecomposition dec = decompose(p);
  const Eigen::MatrixXd f = hitting_probabilities(p, dec);
  REQUIRE(f.rows() == 1);
  REQUIRE(f.cols() == 2);
  CHECK(std::abs(f(0, 0) - 0.3) < 1e-15);
  CHECK(std::abs(f(0, 1) - 0.7) < 1e-15);

  // 3 -> 2 -> {0, 1}
  Eigen::MatrixXd chain(4, 4);
  chain << 0, 1, 0, 0, 1, 0, 0, 0, 0.5, 0, 0.5, 0, 0, 0, 1, 0;
  const TransitionMatrix q = from_dense(chain);
  const Eigen::MatrixXd g = hitting_probabilities(q, decompose(q));
  REQUIRE(g.rows() == 2);
  CHECK(std::abs(g(0, 0) - 1.0) < 1e-14);
  CHECK(std::abs(g(1, 0) - 1.0) < 1e-14);
}

TEST_CASE("analytic limit examples") {
  const AnalyticLimit a = analytic_cesaro_limit(from_dense(feeder_chain()));
  CHECK(std::abs(a.pi_star[0] - 0.5) < 1e-15);
  CHECK(std::abs(a.pi_star[1] - 0.5) < 1e-15);
  CHECK(a.pi_star[2] == 0.0);

  const AnalyticLimit b = analytic_cesaro_limit(from_dense(two_absorbing_with_feeder()));
  CHECK(std::abs(b.pi_star[0] - 1.3 / 3.0) < 1e-15);
  CHECK(std::abs(b.pi_star[1] - 1.7 / 3.0) < 1e-15);
  CHECK(b.pi_star[2] == 0.0);

  Eigen::MatrixXd lazy = Eigen::MatrixXd::Zero(4, 4);
  lazy.block(0, 0, 2, 2) << 0.9, 0.1, 0.5, 0.5;
  lazy.block(2, 2, 2, 2) << 0, 1, 1, 0;
  Eigen::VectorXd pi0(4);
  pi0 << 0.25, 0.75, 0, 0;
  const AnalyticLimit c = analytic_cesaro_limit(from_dense(lazy), pi0);
  CHECK(std::abs(c.pi_star[0] - 5.0 / 6.0) < 1e-14);
  CHECK(std::abs(c.pi_star[1] - 1.0 / 6.0) < 1e-14);
  CHECK(c.pi_star.tail(2).isZero(0.0));
}

TEST_CASE("classification matches brute-force reachability") {
  Rng rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = testing::uniform_int(rng, 1, 12);
    const Eigen::MatrixXd m = testing::random_chain(rng, n, testing::uniform_real(rng, 0.05, 0.5));
    const TransitionMatrix p = from_dense(m);
    const MarkovDecomposition dec = decompose(p);
    const auto essential = testing::essential_by_reachability(m);
    const auto reach = testing::reachability(m);
    for (int i = 0; i < n; ++i) CHECK(dec.is_essential(i) == essential[i]);
    // Two essential states share a class iff they communicate.
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (essential[i] && essential[j] && i != j)
          CHECK((dec.class_of[i] == dec.class_of[j]) == (reach[i][j] && reach[j][i]));
    const AnalyticLimit lim = analytic_cesaro_limit(p);
    for (int i = 0; i < n; ++i) CHECK((lim.pi_star[i] == 0.0) == !essential[i]);
    CHECK(std::abs(lim.pi_star.sum() - 1.0) < 1e-12);
  }
}

TEST_CASE("structured chains recover their construction") {
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const int classes = testing::uniform_int(rng, 1, 3);
    const int n = testing::uniform_int(rng, classes + 1, 40);
    const auto chain = testing::structured_chain(rng, n, classes, testing::uniform_int(rng, 1, n - classes));
    const MarkovDecomposition dec = decompose(from_dense(chain.p));
    std::vector<std::vector<Index>> truth(chain.classes);
    for (int i = 0; i < n; ++i)
      if (chain.class_of[i] >= 0) truth[chain.class_of[i]].push_back(i);
    CHECK(as_sets(dec.closed_classes) == as_sets(truth));
    for (std::size_t k = 1; k < dec.closed_classes.size(); ++k)
      CHECK(dec.closed_classes[k - 1].front() < dec.closed_classes[k].front());
  }
}

TEST_CASE("hitting probabilities agree with simulated walks") {
  Rng rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    const auto chain = testing::structured_chain(rng, 12, 2, 5);
    const TransitionMatrix p = from_dense(chain.p);
    const MarkovDecomposition dec = decompose(p);
    const Eigen::MatrixXd f = hitting_probabilities(p, dec);
    CHECK((f.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-10);
    const int walks = 20000;
    for (std::size_t k = 0; k < dec.inessential.size(); ++k) {
      std::vector<int> absorbed(dec.closed_classes.size(), 0);
      for (int w = 0; w < walks; ++w) {
        int s = static_cast<int>(dec.inessential[k]);
        while (!dec.is_essential(s)) s = testing::sample_row(rng, chain.p, s);
        ++absorbed[dec.class_of[s]];
      }
      for (std::size_t l = 0; l < absorbed.size(); ++l) {
        const double q = f(static_cast<Index>(k), static_cast<Index>(l));
        const double se = std::sqrt(std::max(q * (1 - q), 1e-12) / walks);
        CHECK(std::abs(absorbed[l] / static_cast<double>(walks) - q) <= 4.0 * se + 1e-12);
      }
    }
  }
}

TEST_CASE("mean return times match the stationary distribution") {
  Rng rng(6);
  for (int trial = 0; trial < 5; ++trial) {
    const auto chain = testing::structured_chain(rng, 10, 1, 3);
    const TransitionMatrix p = from_dense(chain.p);
    const MarkovDecomposition dec = decompose(p);
    const auto& cls = dec.closed_classes[0];
    const Eigen::VectorXd pi = stationary_distribution(p, cls);
    CHECK(pi.minCoeff() > 0.0);
    const int start = static_cast<int>(cls[0]);
    const int returns = 20000;
    double total = 0.0, total_sq = 0.0;
    int s = start;
    for (int r = 0; r < returns; ++r) {
      long len = 0;
      do {
        s = testing::sample_row(rng, chain.p, s);
        ++len;
      } while (s != start);
      total += static_cast<double>(len);
      total_sq += static_cast<double>(len) * static_cast<double>(len);
    }
    const double mean = total / returns;
    const double var = total_sq / returns - mean * mean;
    CHECK(std::abs(mean - 1.0 / pi[0]) <= 4.0 * std::sqrt(var / returns));
  }
}

TEST_CASE("limit matrix matches long dense averages") {
  Rng rng(7);
  for (int trial = 0; trial < 4; ++trial) {
    const int n = testing::uniform_int(rng, 3, 20);
    const Eigen::MatrixXd m = testing::random_chain(rng, n, 0.2);
    const Eigen::MatrixXd lim = cesaro_limit_matrix(from_dense(m));
    Eigen::MatrixXd power = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n, n);
    const long steps = 100000;
    for (long t = 0; t < steps; ++t) {
      power = power * m;
      sum += power;
    }
    CHECK((sum / static_cast<double>(steps) - lim).cwiseAbs().maxCoeff() <= 1e-3);
    CHECK((lim.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-12);
    // Uniform start recovers the analytic vector.
    const Eigen::VectorXd from_matrix = lim.transpose() * Eigen::VectorXd::Constant(n, 1.0 / n);
    CHECK((from_matrix - analytic_cesaro_limit(from_dense(m)).pi_star).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("scc components are reverse topological") {
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = testing::uniform_int(rng, 1, 30);
    const Eigen::MatrixXd m = testing::random_chain(rng, n, 0.1);
    const Adjacency adj = adjacency(from_dense(m));
    const SccResult scc = strongly_connected_components(adj);
    const auto reach = testing::reachability(m);
    for (int u = 0; u < n; ++u) {
      for (const int v : adj[u]) CHECK(scc.component[u] >= scc.component[v]);
      for (int v = 0; v < n; ++v)
        if (u != v) CHECK((scc.component[u] == scc.component[v]) == (reach[u][v] && reach[v][u]));
    }
  }
}

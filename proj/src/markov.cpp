#include "rgraph/markov.hpp"

#include "rgraph/error.hpp"
#include "rgraph/scc.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <string>

namespace rgraph {
namespace {

constexpr double kRowSumTol = 1e-12;
constexpr double kSingularRcond = 1e-14;

using RowIter = Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator;

// Dense block P[rows, cols]; also returns, per row, the mass that falls outside `cols`.
Eigen::MatrixXd dense_block(const TransitionMatrix& p, const std::vector<Eigen::Index>& rows,
                            const std::vector<Eigen::Index>& cols, Eigen::VectorXd* escaped = nullptr) {
  std::vector<Eigen::Index> position(static_cast<std::size_t>(p.size()), -1);
  for (std::size_t k = 0; k < cols.size(); ++k) position[cols[k]] = static_cast<Eigen::Index>(k);
  Eigen::MatrixXd block = Eigen::MatrixXd::Zero(rows.size(), cols.size());
  if (escaped) escaped->setZero(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (RowIter it(p.probs, rows[r]); it; ++it) {
      const Eigen::Index c = position[it.col()];
      if (c >= 0) {
        block(r, c) += it.value();
      } else if (escaped) {
        (*escaped)[r] += it.value();
      }
    }
  }
  return block;
}

}  // namespace

MarkovDecomposition decompose(const TransitionMatrix& p) {
  const auto adj = adjacency(p);
  const SccResult scc = strongly_connected_components(adj);
  const std::vector<bool> closed = sink_components(adj, scc);

  MarkovDecomposition out;
  out.class_of.assign(adj.size(), -1);
  std::vector<std::vector<Eigen::Index>> members(scc.count);
  for (std::size_t v = 0; v < adj.size(); ++v) members[scc.component[v]].push_back(static_cast<Eigen::Index>(v));

  for (int c = 0; c < scc.count; ++c) {
    if (closed[c]) {
      out.closed_classes.push_back(members[c]);
    }
  }
  std::sort(out.closed_classes.begin(), out.closed_classes.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  for (std::size_t l = 0; l < out.closed_classes.size(); ++l) {
    for (const Eigen::Index s : out.closed_classes[l]) out.class_of[s] = static_cast<int>(l);
  }
  for (std::size_t v = 0; v < adj.size(); ++v) {
    if (out.class_of[v] < 0) out.inessential.push_back(static_cast<Eigen::Index>(v));
  }
  return out;
}

Eigen::VectorXd stationary_distribution(const TransitionMatrix& p,
                                        const std::vector<Eigen::Index>& closed_class) {
  const auto m = static_cast<Eigen::Index>(closed_class.size());
  if (m == 0) throw Error("markov", "NotClosedClass", "empty class");
  Eigen::VectorXd escaped;
  const Eigen::MatrixXd q = dense_block(p, closed_class, closed_class, &escaped);
  for (Eigen::Index r = 0; r < m; ++r) {
    if (std::abs(q.row(r).sum() - 1.0) > kRowSumTol) {
      throw Error("markov", "NotClosedClass",
                  "state " + std::to_string(closed_class[r]) + " leaks mass " +
                      std::to_string(escaped[r]) + " out of the class");
    }
  }
  Eigen::MatrixXd a = q.transpose() - Eigen::MatrixXd::Identity(m, m);
  a.row(m - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
  b[m - 1] = 1.0;
  return a.partialPivLu().solve(b);
}

Eigen::MatrixXd hitting_probabilities(const TransitionMatrix& p, const MarkovDecomposition& dec) {
  const auto n_in = static_cast<Eigen::Index>(dec.inessential.size());
  const auto n_classes = static_cast<Eigen::Index>(dec.closed_classes.size());
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n_in, n_classes);
  if (n_in == 0) return rhs;

  const Eigen::MatrixXd p_ii = dense_block(p, dec.inessential, dec.inessential);
  for (Eigen::Index r = 0; r < n_in; ++r) {
    for (RowIter it(p.probs, dec.inessential[r]); it; ++it) {
      const int cls = dec.class_of[it.col()];
      if (cls >= 0) rhs(r, cls) += it.value();
    }
  }
  const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n_in, n_in) - p_ii;
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  if (!(lu.rcond() > kSingularRcond)) {
    throw Error("markov", "SingularSystem", "I - P_II is singular; decomposition is inconsistent");
  }
  return lu.solve(rhs);
}

AnalyticLimit analytic_cesaro_limit(const TransitionMatrix& p, const std::optional<Eigen::VectorXd>& pi0) {
  const Eigen::Index n = p.size();
  Eigen::VectorXd start = pi0 ? *pi0 : Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  if (start.size() != n || (start.array() < 0.0).any() || std::abs(start.sum() - 1.0) > 1e-12) {
    throw Error("markov", "InvalidDistribution", "initial distribution is not a probability vector");
  }

  AnalyticLimit out;
  out.decomposition = decompose(p);
  const auto& dec = out.decomposition;
  out.hitting = hitting_probabilities(p, dec);
  out.pi_star = Eigen::VectorXd::Zero(n);

  for (std::size_t l = 0; l < dec.closed_classes.size(); ++l) {
    const auto& cls = dec.closed_classes[l];
    Eigen::VectorXd stat = stationary_distribution(p, cls);
    double weight = 0.0;
    for (const Eigen::Index s : cls) weight += start[s];
    for (std::size_t r = 0; r < dec.inessential.size(); ++r) {
      weight += start[dec.inessential[r]] * out.hitting(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(l));
    }
    for (std::size_t k = 0; k < cls.size(); ++k) out.pi_star[cls[k]] = weight * stat[static_cast<Eigen::Index>(k)];
    out.class_stationaries.push_back(std::move(stat));
  }
  return out;
}

Eigen::MatrixXd cesaro_limit_matrix(const TransitionMatrix& p) {
  const Eigen::Index n = p.size();
  const MarkovDecomposition dec = decompose(p);
  const Eigen::MatrixXd f = hitting_probabilities(p, dec);
  Eigen::MatrixXd limit = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t l = 0; l < dec.closed_classes.size(); ++l) {
    const auto& cls = dec.closed_classes[l];
    const Eigen::VectorXd stat = stationary_distribution(p, cls);
    for (std::size_t k = 0; k < cls.size(); ++k) {
      const double s = stat[static_cast<Eigen::Index>(k)];
      for (const Eigen::Index from : cls) limit(from, cls[k]) = s;
      for (std::size_t r = 0; r < dec.inessential.size(); ++r) {
        limit(dec.inessential[r], cls[k]) =
            f(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(l)) * s;
      }
    }
  }
  return limit;
}

}  // namespace rgraph

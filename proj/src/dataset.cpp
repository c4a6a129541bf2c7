#include "rgraph/dataset.hpp"

#include "rgraph/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

namespace rgraph {
namespace {

constexpr double kZeroColumnNorm = 1e-14;

Error dataset_error(const std::string& code, const std::string& msg) {
  return Error("dataset", code, msg);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

DataMatrix normalize_columns(const DataMatrix& x) {
  DataMatrix out{x.values, true};
  for (Eigen::Index j = 0; j < out.values.cols(); ++j) {
    const double norm = out.values.col(j).norm();
    if (!(norm >= kZeroColumnNorm)) {
      throw dataset_error("ZeroColumn", "column " + std::to_string(j) + " has zero norm");
    }
    out.values.col(j) /= norm;
  }
  return out;
}

void validate(const GenConfig& cfg) {
  if (cfg.ambient_dim <= 0) throw dataset_error("InvalidConfig", "ambient dimension must be positive");
  if (cfg.subspace_dims.size() != cfg.points_per_subspace.size()) {
    throw dataset_error("InvalidConfig", "subspace_dims and points_per_subspace differ in length");
  }
  if (cfg.outlier_count < 0) throw dataset_error("InvalidConfig", "outlier_count must be nonnegative");
  for (std::size_t l = 0; l < cfg.subspace_dims.size(); ++l) {
    if (cfg.subspace_dims[l] <= 0 || cfg.subspace_dims[l] >= cfg.ambient_dim) {
      throw dataset_error("InvalidConfig", "subspace " + std::to_string(l + 1) +
                                               " dimension must lie in [1, D)");
    }
    if (cfg.points_per_subspace[l] <= 0) {
      throw dataset_error("InvalidConfig", "subspace " + std::to_string(l + 1) + " needs points");
    }
  }
}

LabeledDataset generate_synthetic(const GenConfig& cfg) {
  validate(cfg);
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto gaussian = [&](Eigen::Index rows, Eigen::Index cols) {
    Eigen::MatrixXd m(rows, cols);
    // Fill column by column so the draw order is fixed.
    for (Eigen::Index c = 0; c < cols; ++c)
      for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = gauss(rng);
    return m;
  };

  const int d_amb = cfg.ambient_dim;
  int total = cfg.outlier_count;
  for (int n : cfg.points_per_subspace) total += n;

  LabeledDataset out;
  out.data.values.resize(d_amb, total);
  out.data.column_norms_unit = true;
  out.labels.reserve(total);

  Eigen::Index col = 0;
  for (std::size_t l = 0; l < cfg.subspace_dims.size(); ++l) {
    const int d = cfg.subspace_dims[l];
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian(d_amb, d));
    Eigen::MatrixXd basis = qr.householderQ() * Eigen::MatrixXd::Identity(d_amb, d);
    const Eigen::MatrixXd coeffs = gaussian(d, cfg.points_per_subspace[l]);
    for (Eigen::Index k = 0; k < coeffs.cols(); ++k, ++col) {
      Eigen::VectorXd p = basis * coeffs.col(k);
      out.data.values.col(col) = p / p.norm();
      out.labels.push_back(Label::inlier(static_cast<int>(l)));
    }
    out.bases.push_back(std::move(basis));
  }
  const Eigen::MatrixXd raw = gaussian(d_amb, cfg.outlier_count);
  for (Eigen::Index k = 0; k < raw.cols(); ++k, ++col) {
    out.data.values.col(col) = raw.col(k) / raw.col(k).norm();
    out.labels.push_back(Label::outlier());
  }
  return out;
}

std::size_t count_outliers(const Labels& labels) {
  return static_cast<std::size_t>(
      std::count_if(labels.begin(), labels.end(), [](const Label& l) { return l.is_outlier(); }));
}

int subspace_count(const Labels& labels) {
  int n = 0;
  for (const auto& l : labels) n = std::max(n, l.subspace() + 1);
  return n;
}

DataMatrix load_csv(const std::string& path, Orientation orientation, bool skip_header) {
  std::ifstream in(path);
  if (!in) throw dataset_error("IoError", "cannot open " + path);

  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skip_header && line_no == 1) continue;
    if (trim(line).empty()) continue;
    std::vector<double> row;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      const std::string_view cell = trim(rest.substr(0, comma));
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw dataset_error("ParseError", path + ":" + std::to_string(line_no) +
                                              ": not a number: '" + std::string(cell) + "'");
      }
      row.push_back(v);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw dataset_error("RaggedRows", path + ":" + std::to_string(line_no) + ": expected " +
                                            std::to_string(rows.front().size()) + " fields, got " +
                                            std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw dataset_error("EmptyFile", path + " contains no data");

  const auto n_rows = static_cast<Eigen::Index>(rows.size());
  const auto n_cols = static_cast<Eigen::Index>(rows.front().size());
  DataMatrix out;
  if (orientation == Orientation::points_as_columns) {
    out.values.resize(n_rows, n_cols);
    for (Eigen::Index r = 0; r < n_rows; ++r)
      for (Eigen::Index c = 0; c < n_cols; ++c) out.values(r, c) = rows[r][c];
  } else {
    out.values.resize(n_cols, n_rows);
    for (Eigen::Index r = 0; r < n_rows; ++r)
      for (Eigen::Index c = 0; c < n_cols; ++c) out.values(c, r) = rows[r][c];
  }
  return out;
}

void write_csv(const std::string& path, const DataMatrix& x, Orientation orientation) {
  std::ofstream out(path);
  if (!out) throw dataset_error("IoError", "cannot write " + path);
  Eigen::MatrixXd m = x.values;
  if (orientation == Orientation::points_as_rows) m.transposeInPlace();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out << ',';
      out << format_double(m(r, c));
    }
    out << '\n';
  }
}

Labels load_labels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw dataset_error("IoError", "cannot open " + path);
  Labels labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view tok = trim(line);
    if (tok.empty()) continue;
    if (tok == "out") {
      labels.push_back(Label::outlier());
      continue;
    }
    int l = 0;
    if (tok.substr(0, 3) == "in:") {
      const auto digits = tok.substr(3);
      const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), l);
      if (ec == std::errc() && ptr == digits.data() + digits.size() && l >= 1) {
        labels.push_back(Label::inlier(l - 1));
        continue;
      }
    }
    throw dataset_error("ParseError", path + ":" + std::to_string(line_no) + ": bad label '" +
                                          std::string(tok) + "'");
  }
  return labels;
}

void write_labels(const std::string& path, const Labels& labels) {
  std::ofstream out(path);
  if (!out) throw dataset_error("IoError", "cannot write " + path);
  for (const auto& l : labels) {
    if (l.is_outlier()) {
      out << "out\n";
    } else {
      out << "in:" << l.subspace() + 1 << '\n';
    }
  }
}

}  // namespace rgraph

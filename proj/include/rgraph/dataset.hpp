#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rgraph {

// D x N matrix whose columns are the data points.
struct DataMatrix {
  Eigen::MatrixXd values;
  bool column_norms_unit = false;

  Eigen::Index ambient_dim() const { return values.rows(); }
  Eigen::Index size() const { return values.cols(); }
};

// Ground-truth tag of a point: inlier of subspace `subspace` (0-based) or outlier.
class Label {
 public:
  static Label inlier(int subspace) { return Label(subspace); }
  static Label outlier() { return Label(-1); }

  bool is_outlier() const { return subspace_ < 0; }
  bool is_inlier() const { return subspace_ >= 0; }
  int subspace() const { return subspace_; }

  friend bool operator==(const Label&, const Label&) = default;

 private:
  explicit Label(int subspace) : subspace_(subspace) {}
  int subspace_;
};

using Labels = std::vector<Label>;

struct LabeledDataset {
  DataMatrix data;
  Labels labels;
  // Orthonormal D x d_l bases of the generating subspaces (synthetic data only).
  std::vector<Eigen::MatrixXd> bases;
};

struct GenConfig {
  int ambient_dim = 0;
  std::vector<int> subspace_dims;
  std::vector<int> points_per_subspace;
  int outlier_count = 0;
  std::uint64_t seed = 0;
};

enum class Orientation { points_as_columns, points_as_rows };

// Divides each column by its l2 norm. Throws Error{ZeroColumn} if a column
// norm is below 1e-14.
DataMatrix normalize_columns(const DataMatrix& x);

// Inliers are Gaussian combinations of a random orthonormal basis per
// subspace, outliers are uniform on the unit sphere. Points are ordered by
// subspace, outliers last. Deterministic in cfg.seed.
LabeledDataset generate_synthetic(const GenConfig& cfg);

void validate(const GenConfig& cfg);

// Number of inliers / outliers in a label vector.
std::size_t count_outliers(const Labels& labels);
int subspace_count(const Labels& labels);

DataMatrix load_csv(const std::string& path, Orientation orientation, bool skip_header = false);
void write_csv(const std::string& path, const DataMatrix& x, Orientation orientation);

// Labels file: one token per line, `in:<l>` with 1-based l, or `out`.
Labels load_labels(const std::string& path);
void write_labels(const std::string& path, const Labels& labels);

}  // namespace rgraph

#pragma once

#include "softhash/types.hpp"

#include <vector>

namespace softhash {

// Items live in columns: features are d x N, labels are C x N.
struct DatasetBundle {
  MatrixF features;
  LabelMatrix labels;

  Eigen::Index size() const { return features.cols(); }
  Eigen::Index feature_dim() const { return features.rows(); }
  Eigen::Index num_classes() const { return labels.rows(); }
};

struct SyntheticSpec {
  int num_items = 2000;
  int num_classes = 8;
  int feature_dim = 32;
  double label_density = 0.25;  // per-class membership probability
  double noise = 0.25;          // stddev of isotropic feature noise
  std::uint64_t seed = 1;

  void validate() const;
};

// Label sets are independent Bernoulli draws, resampled while empty. Each
// class owns a Gaussian prototype vector; an item's features are the sum of
// its classes' prototypes plus noise, so label overlap shows up as feature
// proximity. Values are snapped to f32 so the in-memory bundle matches a
// file round trip exactly.
DatasetBundle generate_synthetic(const SyntheticSpec& spec);

struct SplitSpec {
  double query_frac = 0.1;
  double train_frac = 0.4;
  bool db_exclude_query = false;
  bool db_exclude_train = false;
  std::uint64_t seed = 1;

  void validate() const;
};

// Disjoint query/train assignments drawn by seeded shuffle; the retrieval
// database defaults to every item and can drop either group. All id lists
// are ascending.
struct Split {
  std::vector<int> query_ids;
  std::vector<int> train_ids;
  std::vector<int> database_ids;
};

Split make_split(Eigen::Index num_items, const SplitSpec& spec);

// Loads and cross-checks a feature/label file pair.
DatasetBundle ingest(const std::string& features_path, const std::string& labels_path);

// Column gather helpers for split subsets.
Matrix gather_features(const MatrixF& features, const std::vector<int>& ids);
LabelMatrix gather_labels(const LabelMatrix& labels, const std::vector<int>& ids);

}  // namespace softhash

#include "softhash/dataset.hpp"

#include "softhash/io.hpp"
#include "softhash/label_similarity.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace softhash {

namespace {

constexpr std::uint64_t kSyntheticStream = 0x5;
constexpr std::uint64_t kSplitStream = 0x11;

}  // namespace

void SyntheticSpec::validate() const {
  if (num_items < 1) throw ValidationError("num-items must be >= 1");
  if (num_classes < 2) throw ValidationError("num-classes must be >= 2");
  if (feature_dim < 1) throw ValidationError("feature-dim must be >= 1");
  if (!(label_density > 0.0 && label_density < 1.0)) {
    throw ValidationError("label-density must lie in (0, 1)");
  }
  if (noise < 0.0) throw ValidationError("noise must be >= 0");
}

DatasetBundle generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(derive_seed(spec.seed, kSyntheticStream));
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  Matrix prototypes(spec.feature_dim, spec.num_classes);
  for (int c = 0; c < spec.num_classes; ++c) {
    for (int k = 0; k < spec.feature_dim; ++k) prototypes(k, c) = gauss(rng);
  }

  DatasetBundle bundle;
  bundle.labels.resize(spec.num_classes, spec.num_items);
  bundle.features.resize(spec.feature_dim, spec.num_items);
  for (int i = 0; i < spec.num_items; ++i) {
    int set = 0;
    do {
      set = 0;
      for (int c = 0; c < spec.num_classes; ++c) {
        const int on = unit(rng) < spec.label_density ? 1 : 0;
        bundle.labels(c, i) = on;
        set += on;
      }
    } while (set == 0);

    Vector x = prototypes * bundle.labels.col(i).cast<double>();
    for (int k = 0; k < spec.feature_dim; ++k) x[k] += spec.noise * gauss(rng);
    bundle.features.col(i) = x.cast<float>();
  }
  return bundle;
}

void SplitSpec::validate() const {
  if (!(query_frac >= 0.0 && query_frac <= 1.0)) {
    throw ValidationError("query-frac must lie in [0, 1]");
  }
  if (!(train_frac >= 0.0 && train_frac <= 1.0)) {
    throw ValidationError("train-frac must lie in [0, 1]");
  }
  if (query_frac + train_frac > 1.0) {
    throw ValidationError("query-frac + train-frac must not exceed 1");
  }
}

Split make_split(Eigen::Index num_items, const SplitSpec& spec) {
  spec.validate();
  if (num_items < 1) throw ValidationError("cannot split an empty dataset");

  std::vector<int> order(std::size_t(num_items));
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(derive_seed(spec.seed, kSplitStream));
  std::shuffle(order.begin(), order.end(), rng);

  const std::size_t nq = std::size_t(double(num_items) * spec.query_frac);
  const std::size_t nt = std::size_t(double(num_items) * spec.train_frac);

  Split split;
  split.query_ids.assign(order.begin(), order.begin() + std::ptrdiff_t(nq));
  split.train_ids.assign(order.begin() + std::ptrdiff_t(nq),
                         order.begin() + std::ptrdiff_t(nq + nt));
  std::sort(split.query_ids.begin(), split.query_ids.end());
  std::sort(split.train_ids.begin(), split.train_ids.end());

  std::vector<bool> in_query(std::size_t(num_items), false);
  std::vector<bool> in_train(std::size_t(num_items), false);
  for (int id : split.query_ids) in_query[std::size_t(id)] = true;
  for (int id : split.train_ids) in_train[std::size_t(id)] = true;
  for (int id = 0; id < int(num_items); ++id) {
    if (spec.db_exclude_query && in_query[std::size_t(id)]) continue;
    if (spec.db_exclude_train && in_train[std::size_t(id)]) continue;
    split.database_ids.push_back(id);
  }
  if (split.database_ids.empty()) {
    throw ValidationError("database is empty under the requested exclusions");
  }
  return split;
}

DatasetBundle ingest(const std::string& features_path, const std::string& labels_path) {
  DatasetBundle bundle;
  bundle.features = load_features(features_path);
  bundle.labels = load_labels(labels_path);
  if (bundle.features.cols() != bundle.labels.cols()) {
    throw ValidationError("feature/label record counts differ: " +
                          std::to_string(bundle.features.cols()) + " vs " +
                          std::to_string(bundle.labels.cols()));
  }
  return bundle;
}

Matrix gather_features(const MatrixF& features, const std::vector<int>& ids) {
  Matrix out(features.rows(), Eigen::Index(ids.size()));
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] < 0 || ids[i] >= features.cols()) {
      throw ValidationError("item id out of range: " + std::to_string(ids[i]));
    }
    out.col(Eigen::Index(i)) = features.col(ids[i]).cast<double>();
  }
  return out;
}

LabelMatrix gather_labels(const LabelMatrix& labels, const std::vector<int>& ids) {
  LabelMatrix out(labels.rows(), Eigen::Index(ids.size()));
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] < 0 || ids[i] >= labels.cols()) {
      throw ValidationError("item id out of range: " + std::to_string(ids[i]));
    }
    out.col(Eigen::Index(i)) = labels.col(ids[i]);
  }
  return out;
}

}  // namespace softhash

#include "softhash/label_similarity.hpp"

#include <cmath>
#include <cstdint>

namespace softhash {

namespace {

void check_pair(const Eigen::Ref<const LabelVector>& a,
                const Eigen::Ref<const LabelVector>& b) {
  if (a.size() != b.size()) {
    throw ValidationError("label dimension mismatch: " + std::to_string(a.size()) +
                          " vs " + std::to_string(b.size()));
  }
  if (a.size() == 0) throw ValidationError("empty label vectors");
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    if ((a[k] != 0 && a[k] != 1) || (b[k] != 0 && b[k] != 1)) {
      throw ValidationError("label vectors must be multi-hot (entries 0/1)");
    }
  }
  if (a.sum() == 0 || b.sum() == 0) {
    throw ValidationError("all-zero label vector: similarity undefined");
  }
}

// For 0/1 vectors the squared norm equals the number of set flags, so the
// whole classification runs on three integers.
struct PairCounts {
  std::int64_t inner;
  std::int64_t na;
  std::int64_t nb;
};

PairCounts pair_counts(const Eigen::Ref<const LabelVector>& a,
                       const Eigen::Ref<const LabelVector>& b) {
  std::int64_t inner = 0, na = 0, nb = 0;
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    inner += std::int64_t(a[k]) * b[k];
    na += a[k];
    nb += b[k];
  }
  return {inner, na, nb};
}

PairSimilarity classify_counts(const PairCounts& c) {
  if (c.inner == 0) return {0.0, SimilarityMode::Hard};
  // Cauchy-Schwarz holds with equality iff the two sets coincide.
  if (c.inner * c.inner == c.na * c.nb) return {1.0, SimilarityMode::Hard};
  double value = double(c.inner) / std::sqrt(double(c.na) * double(c.nb));
  return {value, SimilarityMode::Soft};
}

}  // namespace

double cosine_label_similarity(const Eigen::Ref<const LabelVector>& a,
                               const Eigen::Ref<const LabelVector>& b) {
  check_pair(a, b);
  return classify_counts(pair_counts(a, b)).value;
}

PairSimilarity classify_pair(const Eigen::Ref<const LabelVector>& a,
                             const Eigen::Ref<const LabelVector>& b) {
  check_pair(a, b);
  return classify_counts(pair_counts(a, b));
}

void validate_labels(const Eigen::Ref<const LabelMatrix>& labels, const std::string& what) {
  if (labels.cols() == 0 || labels.rows() == 0) {
    throw ValidationError(what + ": empty label matrix");
  }
  for (Eigen::Index i = 0; i < labels.cols(); ++i) {
    int set = 0;
    for (Eigen::Index c = 0; c < labels.rows(); ++c) {
      int v = labels(c, i);
      if (v != 0 && v != 1) {
        throw ValidationError(what + ": non-binary label entry at record " +
                              std::to_string(i));
      }
      set += v;
    }
    if (set == 0) {
      throw ValidationError(what + ": record " + std::to_string(i) +
                            " has no labels");
    }
  }
}

SimilarityMatrix similarity_matrix(const Eigen::Ref<const LabelMatrix>& labels) {
  validate_labels(labels, "similarity_matrix");
  const Eigen::Index n = labels.cols();
  SimilarityMatrix out;
  out.values.resize(n, n);
  out.hard.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i, i) = 1.0;
    out.hard(i, i) = true;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      PairSimilarity s = classify_counts(pair_counts(labels.col(i), labels.col(j)));
      out.values(i, j) = out.values(j, i) = s.value;
      out.hard(i, j) = out.hard(j, i) = is_hard(s);
    }
  }
  return out;
}

}  // namespace softhash

#pragma once

#include "softhash/types.hpp"

namespace softhash {

enum class SimilarityMode { Hard, Soft };

// Quantified pairwise similarity. Hard means the label sets are exactly
// identical (value 1) or exactly disjoint (value 0); everything in between
// is Soft. The classification is decided in integer arithmetic, never by
// floating-point comparison.
struct PairSimilarity {
  double value = 1.0;
  SimilarityMode mode = SimilarityMode::Hard;
};

inline bool is_hard(const PairSimilarity& s) { return s.mode == SimilarityMode::Hard; }

// Cosine similarity of two multi-hot label vectors. Exact 0.0 for disjoint
// sets and exact 1.0 for identical sets; in (0,1) otherwise.
double cosine_label_similarity(const Eigen::Ref<const LabelVector>& a,
                               const Eigen::Ref<const LabelVector>& b);

PairSimilarity classify_pair(const Eigen::Ref<const LabelVector>& a,
                             const Eigen::Ref<const LabelVector>& b);

// Dense pairwise similarity over a label matrix (classes x items).
struct SimilarityMatrix {
  Matrix values;  // symmetric, entries in [0,1], unit diagonal
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> hard;

  PairSimilarity at(Eigen::Index i, Eigen::Index j) const {
    return PairSimilarity{values(i, j),
                          hard(i, j) ? SimilarityMode::Hard : SimilarityMode::Soft};
  }
  Eigen::Index size() const { return values.rows(); }
};

SimilarityMatrix similarity_matrix(const Eigen::Ref<const LabelMatrix>& labels);

// Throws ValidationError unless every entry is 0/1 and every column has at
// least one set flag. `what` names the offending input in diagnostics.
void validate_labels(const Eigen::Ref<const LabelMatrix>& labels, const std::string& what);

}  // namespace softhash

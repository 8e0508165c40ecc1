#pragma once

#include "softhash/label_similarity.hpp"
#include "softhash/types.hpp"

#include <vector>

namespace softhash {

// Joint trains hard pairs with cross-entropy and soft pairs with the squared
// inner-product error. CoarseCe collapses every similarity to 0/1 and uses
// cross-entropy throughout; MseOnly keeps the quantified similarity but uses
// the squared error for every pair. The last two exist for ablation runs.
enum class LossMode { Joint, CoarseCe, MseOnly };

struct LossConfig {
  int code_bits = 16;
  double alpha = 5.0 / 16;   // bandwidth of the cross-entropy logit
  double gamma = 0.1 / 16;   // weight of the squared-error term
  double lambda = 0.1;       // weight of the quantization penalty
  LossMode mode = LossMode::Joint;

  static LossConfig defaults(int q) {
    return LossConfig{q, 5.0 / q, 0.1 / q, 0.1, LossMode::Joint};
  }
  void validate() const;
};

struct LabeledPair {
  int i = 0;
  int j = 0;
  PairSimilarity sim;
};

// Relaxed codes are columns of `codes`; pair indices address those columns.
struct PairBatch {
  Matrix codes;  // q x B
  std::vector<LabeledPair> pairs;
};

// Numerically stable 1 / (1 + e^-x).
double logistic(double x);

// alpha * <u_i, u_j>; with alpha = 5/q and entries in (-1,1) stays in (-5,5).
double inner_product_logit(const Eigen::Ref<const Vector>& u_i,
                           const Eigen::Ref<const Vector>& u_j, double alpha);

// log(1 + e^omega) - s*omega for s in {0,1}, overflow-safe for large |omega|.
double hard_pair_loss(double omega, double s);

// ((<u_i,u_j> + q)/2 - s*q)^2, the squared miss from the target inner product.
double soft_pair_loss(const Eigen::Ref<const Vector>& u_i,
                      const Eigen::Ref<const Vector>& u_j, double s, int q);

// L1 distance of both codes from exact +-1 entries.
double quantization_loss(const Eigen::Ref<const Vector>& u_i,
                         const Eigen::Ref<const Vector>& u_j);

// How a pair's similarity is presented to the loss under a given mode.
PairSimilarity apply_loss_mode(const PairSimilarity& fine, LossMode mode);

// Dispatches on the (mode-adjusted) Hard/Soft tag; soft pairs are weighted by
// gamma except in MseOnly mode where the squared error is the whole loss.
double pair_loss(const Eigen::Ref<const Vector>& u_i,
                 const Eigen::Ref<const Vector>& u_j, const PairSimilarity& sim,
                 const LossConfig& cfg);

struct CostBreakdown {
  double total = 0.0;         // similarity + lambda * quantization
  double similarity = 0.0;    // mean pairwise similarity loss
  double quantization = 0.0;  // mean pairwise quantization loss, unweighted
};

CostBreakdown cost_terms(const PairBatch& batch, const LossConfig& cfg);
double total_cost(const PairBatch& batch, const LossConfig& cfg);

// Exact gradient of total_cost with respect to every code entry (q x B).
Matrix cost_gradient(const PairBatch& batch, const LossConfig& cfg);

}  // namespace softhash

#include "softhash/objective.hpp"

#include <cmath>
#include <string>

namespace softhash {

namespace {

double soft_weight(const LossConfig& cfg) {
  return cfg.mode == LossMode::MseOnly ? 1.0 : cfg.gamma;
}

void check_batch(const PairBatch& batch, const LossConfig& cfg) {
  cfg.validate();
  if (batch.pairs.empty()) throw ValidationError("empty pair batch");
  if (batch.codes.rows() != cfg.code_bits) {
    throw ValidationError("code length " + std::to_string(batch.codes.rows()) +
                          " does not match configured " + std::to_string(cfg.code_bits));
  }
  const int n = int(batch.codes.cols());
  for (const LabeledPair& p : batch.pairs) {
    if (p.i < 0 || p.j < 0 || p.i >= n || p.j >= n) {
      throw ValidationError("pair index out of range");
    }
    if (p.i == p.j) throw ValidationError("self-pair in batch");
  }
}

// d|1 - |u||/du on (-1, 1); the kink at 0 takes the negative branch.
double quantization_subgradient(double u) { return u < 0.0 ? 1.0 : -1.0; }

}  // namespace

void LossConfig::validate() const {
  if (code_bits < 1) throw ValidationError("code length must be >= 1");
  if (!(alpha > 0.0)) throw ValidationError("alpha must be > 0");
  if (gamma < 0.0) throw ValidationError("gamma must be >= 0");
  if (lambda < 0.0) throw ValidationError("lambda must be >= 0");
}

double logistic(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double inner_product_logit(const Eigen::Ref<const Vector>& u_i,
                           const Eigen::Ref<const Vector>& u_j, double alpha) {
  if (u_i.size() != u_j.size()) throw ValidationError("code length mismatch");
  return alpha * u_i.dot(u_j);
}

double hard_pair_loss(double omega, double s) {
  if (s != 0.0 && s != 1.0) {
    throw ValidationError("hard pair similarity must be exactly 0 or 1");
  }
  const double softplus = omega > 0.0 ? omega + std::log1p(std::exp(-omega))
                                      : std::log1p(std::exp(omega));
  return softplus - s * omega;
}

double soft_pair_loss(const Eigen::Ref<const Vector>& u_i,
                      const Eigen::Ref<const Vector>& u_j, double s, int q) {
  if (u_i.size() != u_j.size()) throw ValidationError("code length mismatch");
  const double miss = 0.5 * (u_i.dot(u_j) + q) - s * q;
  return miss * miss;
}

PairSimilarity apply_loss_mode(const PairSimilarity& fine, LossMode mode) {
  switch (mode) {
    case LossMode::Joint:
      return fine;
    case LossMode::CoarseCe:
      return PairSimilarity{fine.value > 0.0 ? 1.0 : 0.0, SimilarityMode::Hard};
    case LossMode::MseOnly:
      return PairSimilarity{fine.value, SimilarityMode::Soft};
  }
  throw ValidationError("unknown loss mode");
}

double pair_loss(const Eigen::Ref<const Vector>& u_i,
                 const Eigen::Ref<const Vector>& u_j, const PairSimilarity& sim,
                 const LossConfig& cfg) {
  cfg.validate();
  const PairSimilarity s = apply_loss_mode(sim, cfg.mode);
  if (is_hard(s)) {
    return hard_pair_loss(inner_product_logit(u_i, u_j, cfg.alpha), s.value);
  }
  return soft_weight(cfg) * soft_pair_loss(u_i, u_j, s.value, cfg.code_bits);
}

double quantization_loss(const Eigen::Ref<const Vector>& u_i,
                         const Eigen::Ref<const Vector>& u_j) {
  if (u_i.size() != u_j.size()) throw ValidationError("code length mismatch");
  return (u_i.array().abs() - 1.0).abs().sum() + (u_j.array().abs() - 1.0).abs().sum();
}

CostBreakdown cost_terms(const PairBatch& batch, const LossConfig& cfg) {
  check_batch(batch, cfg);
  const Matrix& u = batch.codes;
  const Matrix gram = u.transpose() * u;
  const Vector binary_gap =
      (u.array().abs() - 1.0).abs().colwise().sum().transpose();

  double sim_sum = 0.0;
  double quant_sum = 0.0;
  for (const LabeledPair& p : batch.pairs) {
    const PairSimilarity s = apply_loss_mode(p.sim, cfg.mode);
    if (is_hard(s)) {
      sim_sum += hard_pair_loss(cfg.alpha * gram(p.i, p.j), s.value);
    } else {
      const double miss = 0.5 * (gram(p.i, p.j) + cfg.code_bits) - s.value * cfg.code_bits;
      sim_sum += soft_weight(cfg) * miss * miss;
    }
    quant_sum += binary_gap[p.i] + binary_gap[p.j];
  }

  const double pairs = double(batch.pairs.size());
  CostBreakdown out;
  out.similarity = sim_sum / pairs;
  out.quantization = quant_sum / pairs;
  out.total = out.similarity + cfg.lambda * out.quantization;
  return out;
}

double total_cost(const PairBatch& batch, const LossConfig& cfg) {
  return cost_terms(batch, cfg).total;
}

Matrix cost_gradient(const PairBatch& batch, const LossConfig& cfg) {
  check_batch(batch, cfg);
  const Matrix& u = batch.codes;
  const Eigen::Index n = u.cols();
  const Matrix gram = u.transpose() * u;

  // Every pair contributes weight * u_j to item i's gradient and vice versa,
  // so the similarity part collapses to one matrix product U * W.
  Matrix pair_weight = Matrix::Zero(n, n);
  Eigen::VectorXi pair_count = Eigen::VectorXi::Zero(n);
  for (const LabeledPair& p : batch.pairs) {
    const PairSimilarity s = apply_loss_mode(p.sim, cfg.mode);
    double w;
    if (is_hard(s)) {
      w = cfg.alpha * (logistic(cfg.alpha * gram(p.i, p.j)) - s.value);
    } else {
      w = soft_weight(cfg) *
          (0.5 * (gram(p.i, p.j) + cfg.code_bits) - s.value * cfg.code_bits);
    }
    pair_weight(p.i, p.j) += w;
    pair_weight(p.j, p.i) += w;
    pair_count[p.i] += 1;
    pair_count[p.j] += 1;
  }

  Matrix grad = u * pair_weight;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (pair_count[i] == 0) continue;
    grad.col(i) += (cfg.lambda * pair_count[i]) *
                   u.col(i).unaryExpr([](double x) { return quantization_subgradient(x); });
  }
  grad /= double(batch.pairs.size());
  return grad;
}

}  // namespace softhash

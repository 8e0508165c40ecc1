#include "softhash/trainer.hpp"

#include "softhash/io.hpp"
#include "softhash/label_similarity.hpp"

#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

namespace softhash {

void TrainConfig::validate() const {
  if (batch_size < 2) throw ValidationError("batch size must be >= 2");
  if (!(base_lr > 0.0)) throw ValidationError("learning rate must be > 0");
  if (decay_every < 1) throw ValidationError("decay-every must be >= 1");
  if (!(decay_rate > 0.0 && decay_rate <= 1.0)) {
    throw ValidationError("decay-rate must lie in (0, 1]");
  }
  if (max_iterations < 0) throw ValidationError("max-iterations must be >= 0");
  if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0) ||
      !(adam_beta2 >= 0.0 && adam_beta2 < 1.0)) {
    throw ValidationError("Adam betas must lie in [0, 1)");
  }
  if (!(adam_epsilon > 0.0)) throw ValidationError("Adam epsilon must be > 0");
}

double lr_at(long iteration, const TrainConfig& cfg) {
  if (iteration < 0) throw ValidationError("iteration must be >= 0");
  return cfg.base_lr * std::pow(cfg.decay_rate, double(iteration / cfg.decay_every));
}

AdamState make_adam_state(const HashModel& model) {
  AdamState state;
  for (const DenseLayer& layer : model.layers) {
    state.m_weights.push_back(Matrix::Zero(layer.weights.rows(), layer.weights.cols()));
    state.v_weights.push_back(Matrix::Zero(layer.weights.rows(), layer.weights.cols()));
    state.m_bias.push_back(Vector::Zero(layer.bias.size()));
    state.v_bias.push_back(Vector::Zero(layer.bias.size()));
  }
  return state;
}

namespace {

template <typename Param>
void adam_update(Param& param, const Param& grad, Param& m, Param& v, double lr,
                 const TrainConfig& cfg, double bias1, double bias2) {
  m = cfg.adam_beta1 * m + (1.0 - cfg.adam_beta1) * grad;
  v = cfg.adam_beta2 * v + (1.0 - cfg.adam_beta2) * grad.cwiseProduct(grad);
  param.array() -=
      lr * (m.array() / bias1) / ((v.array() / bias2).sqrt() + cfg.adam_epsilon);
}

}  // namespace

void adam_step(HashModel& model, const ModelGrad& grad, AdamState& state, double lr,
               const TrainConfig& cfg) {
  cfg.validate();
  if (!(lr > 0.0)) throw ValidationError("learning rate must be > 0");
  if (grad.weights.size() != model.layers.size() ||
      grad.bias.size() != model.layers.size()) {
    throw ValidationError("gradient does not match model depth");
  }
  state.step_count += 1;
  const double bias1 = 1.0 - std::pow(cfg.adam_beta1, double(state.step_count));
  const double bias2 = 1.0 - std::pow(cfg.adam_beta2, double(state.step_count));
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    DenseLayer& layer = model.layers[l];
    if (grad.weights[l].rows() != layer.weights.rows() ||
        grad.weights[l].cols() != layer.weights.cols() ||
        grad.bias[l].size() != layer.bias.size()) {
      throw ValidationError("gradient shape mismatch at layer " + std::to_string(l));
    }
    adam_update(layer.weights, grad.weights[l], state.m_weights[l], state.v_weights[l],
                lr, cfg, bias1, bias2);
    adam_update(layer.bias, grad.bias[l], state.m_bias[l], state.v_bias[l], lr, cfg,
                bias1, bias2);
  }
}

BatchPlan sample_batch(const Eigen::Ref<const LabelMatrix>& labels, int batch_size,
                       std::mt19937_64& rng) {
  const Eigen::Index n = labels.cols();
  if (batch_size < 2) throw ValidationError("batch size must be >= 2");
  if (n < batch_size) {
    throw ValidationError("dataset of " + std::to_string(n) +
                          " items cannot fill a batch of " + std::to_string(batch_size));
  }

  // partial Fisher-Yates: the first batch_size slots become the sample
  std::vector<int> pool(std::size_t(n));
  std::iota(pool.begin(), pool.end(), 0);
  BatchPlan plan;
  plan.items.reserve(std::size_t(batch_size));
  for (int k = 0; k < batch_size; ++k) {
    std::uniform_int_distribution<Eigen::Index> pick(k, n - 1);
    std::swap(pool[std::size_t(k)], pool[std::size_t(pick(rng))]);
    plan.items.push_back(pool[std::size_t(k)]);
  }

  plan.pairs.reserve(std::size_t(batch_size) * std::size_t(batch_size - 1) / 2);
  for (int i = 0; i < batch_size; ++i) {
    for (int j = i + 1; j < batch_size; ++j) {
      plan.pairs.push_back(LabeledPair{
          i, j, classify_pair(labels.col(plan.items[std::size_t(i)]),
                              labels.col(plan.items[std::size_t(j)]))});
    }
  }
  return plan;
}

void write_train_report_csv(const TrainReport& report, std::ostream& out) {
  out << "iteration,lr,total_cost,sim_loss,quant_loss\n";
  for (const TrainRow& row : report) {
    out << row.iteration << ',' << format_double(row.lr) << ','
        << format_double(row.total_cost) << ',' << format_double(row.sim_loss) << ','
        << format_double(row.quant_loss) << '\n';
  }
}

TrainReport train(const Eigen::Ref<const Matrix>& features,
                  const Eigen::Ref<const LabelMatrix>& labels, HashModel& model,
                  const TrainConfig& train_cfg, const LossConfig& loss_cfg,
                  std::ostream* csv_stream) {
  train_cfg.validate();
  loss_cfg.validate();
  if (features.cols() != labels.cols()) {
    throw ValidationError("feature/label item counts differ");
  }
  if (features.rows() != model.input_dim()) {
    throw ValidationError("feature dimension does not match model input width");
  }
  if (model.code_bits() != loss_cfg.code_bits) {
    throw ValidationError("model code length does not match loss configuration");
  }
  if (train_cfg.max_iterations > 0 && features.cols() < train_cfg.batch_size) {
    throw ValidationError("training set of " + std::to_string(features.cols()) +
                          " items cannot fill a batch of " +
                          std::to_string(train_cfg.batch_size));
  }

  std::mt19937_64 rng(train_cfg.seed);
  AdamState adam = make_adam_state(model);
  TrainReport report;
  report.reserve(std::size_t(train_cfg.max_iterations));
  if (csv_stream) *csv_stream << "iteration,lr,total_cost,sim_loss,quant_loss\n";

  for (long it = 0; it < train_cfg.max_iterations; ++it) {
    const double lr = lr_at(it, train_cfg);
    BatchPlan plan = sample_batch(labels, train_cfg.batch_size, rng);

    Matrix batch(features.rows(), Eigen::Index(plan.items.size()));
    for (std::size_t k = 0; k < plan.items.size(); ++k) {
      batch.col(Eigen::Index(k)) = features.col(plan.items[k]);
    }

    ForwardTrace trace;
    Matrix codes = forward(model, batch, &trace);
    PairBatch pair_batch{std::move(codes), std::move(plan.pairs)};
    const CostBreakdown cost = cost_terms(pair_batch, loss_cfg);
    if (!std::isfinite(cost.total)) {
      throw std::runtime_error("training aborted: non-finite cost at iteration " +
                               std::to_string(it));
    }

    const Matrix code_grad = cost_gradient(pair_batch, loss_cfg);
    const ModelGrad grad = backward(model, trace, code_grad);
    adam_step(model, grad, adam, lr, train_cfg);

    TrainRow row{it, lr, cost.total, cost.similarity, cost.quantization};
    if (csv_stream) {
      *csv_stream << row.iteration << ',' << format_double(row.lr) << ','
                  << format_double(row.total_cost) << ','
                  << format_double(row.sim_loss) << ','
                  << format_double(row.quant_loss) << '\n';
    }
    report.push_back(row);
  }
  return report;
}

}  // namespace softhash

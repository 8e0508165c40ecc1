#pragma once

#include "softhash/hash_model.hpp"
#include "softhash/objective.hpp"
#include "softhash/types.hpp"

#include <iosfwd>
#include <random>
#include <vector>

namespace softhash {

struct TrainConfig {
  int batch_size = 128;
  double base_lr = 0.01;
  int decay_every = 500;   // iterations between learning-rate halvings
  double decay_rate = 0.5;
  int max_iterations = 1000;
  std::uint64_t seed = 1;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;

  void validate() const;
};

// base_lr * decay_rate^floor(iteration / decay_every)
double lr_at(long iteration, const TrainConfig& cfg);

struct AdamState {
  std::vector<Matrix> m_weights, v_weights;
  std::vector<Vector> m_bias, v_bias;
  long step_count = 0;
};

AdamState make_adam_state(const HashModel& model);

// Standard bias-corrected element-wise update; increments step_count.
void adam_step(HashModel& model, const ModelGrad& grad, AdamState& state, double lr,
               const TrainConfig& cfg);

// A sampled mini-batch before any forward pass: distinct item positions plus
// every unordered pair among them, tagged with its label similarity.
struct BatchPlan {
  std::vector<int> items;
  std::vector<LabeledPair> pairs;
};

BatchPlan sample_batch(const Eigen::Ref<const LabelMatrix>& labels, int batch_size,
                       std::mt19937_64& rng);

struct TrainRow {
  long iteration = 0;
  double lr = 0.0;
  double total_cost = 0.0;
  double sim_loss = 0.0;
  double quant_loss = 0.0;
};

using TrainReport = std::vector<TrainRow>;

void write_train_report_csv(const TrainReport& report, std::ostream& out);

// Mini-batch loop: sample, forward, pairwise cost gradient, backprop, Adam.
// Deterministic for a fixed seed. Aborts with the iteration number if the
// cost stops being finite. When csv_stream is given, rows are also emitted
// as they are produced.
TrainReport train(const Eigen::Ref<const Matrix>& features,
                  const Eigen::Ref<const LabelMatrix>& labels, HashModel& model,
                  const TrainConfig& train_cfg, const LossConfig& loss_cfg,
                  std::ostream* csv_stream = nullptr);

}  // namespace softhash

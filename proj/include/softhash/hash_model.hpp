#pragma once

#include "softhash/types.hpp"

#include <cmath>
#include <vector>

namespace softhash {

// Bounded activation of the hash layer, maps the reals onto (-1, 1).
inline double hash_activation(double x) { return x / (std::abs(x) + 1.0); }

// True analytic derivative of hash_activation; even and strictly positive.
inline double hash_activation_derivative(double x) {
  const double t = std::abs(x) + 1.0;
  return 1.0 / (t * t);
}

struct DenseLayer {
  Matrix weights;  // out x in
  Vector bias;     // out
};

// Fully-connected hash head. Hidden layers use tanh, the final layer uses
// hash_activation, so relaxed codes always land strictly inside (-1, 1)^q.
struct HashModel {
  std::vector<DenseLayer> layers;

  Eigen::Index input_dim() const { return layers.front().weights.cols(); }
  Eigen::Index code_bits() const { return layers.back().weights.rows(); }
};

// Uniform init in [-r, r] with r = sqrt(6 / (fan_in + fan_out)), zero biases.
HashModel make_hash_model(Eigen::Index input_dim, const std::vector<Eigen::Index>& hidden,
                          Eigen::Index code_bits, std::uint64_t seed);

// Per-layer pre-activations and activations retained for the backward pass.
struct ForwardTrace {
  Matrix input;                         // d x B
  std::vector<Matrix> pre_activations;  // layer width x B
  std::vector<Matrix> activations;

  const Matrix& codes() const { return activations.back(); }
};

// Inputs are columns (d x B); returns relaxed codes (q x B).
Matrix forward(const HashModel& model, const Eigen::Ref<const Matrix>& inputs,
               ForwardTrace* trace = nullptr);
Vector forward(const HashModel& model, const Eigen::Ref<const Vector>& input);

struct ModelGrad {
  std::vector<Matrix> weights;
  std::vector<Vector> bias;
};

ModelGrad zeros_like(const HashModel& model);

// Chain rule from dC/dU (q x B) down to every weight and bias, summed over
// the batch columns. input_grad (d x B) is filled when requested.
ModelGrad backward(const HashModel& model, const ForwardTrace& trace,
                   const Eigen::Ref<const Matrix>& code_grad,
                   Matrix* input_grad = nullptr);

}  // namespace softhash

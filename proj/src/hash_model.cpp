#include "softhash/hash_model.hpp"

#include <random>
#include <string>

namespace softhash {

namespace {

void check_chain(const HashModel& model) {
  if (model.layers.empty()) throw ValidationError("hash model has no layers");
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    const DenseLayer& layer = model.layers[l];
    if (layer.weights.rows() != layer.bias.size()) {
      throw ValidationError("layer " + std::to_string(l) + ": bias size " +
                            std::to_string(layer.bias.size()) + " does not match " +
                            std::to_string(layer.weights.rows()) + " outputs");
    }
    if (l > 0 && layer.weights.cols() != model.layers[l - 1].weights.rows()) {
      throw ValidationError("layer " + std::to_string(l) + ": input width " +
                            std::to_string(layer.weights.cols()) +
                            " does not chain with previous layer");
    }
  }
}

}  // namespace

HashModel make_hash_model(Eigen::Index input_dim, const std::vector<Eigen::Index>& hidden,
                          Eigen::Index code_bits, std::uint64_t seed) {
  if (input_dim < 1) throw ValidationError("input dimension must be >= 1");
  if (code_bits < 1) throw ValidationError("code length must be >= 1");
  for (Eigen::Index h : hidden) {
    if (h < 1) throw ValidationError("hidden layer width must be >= 1");
  }

  std::mt19937_64 rng(seed);
  HashModel model;
  Eigen::Index fan_in = input_dim;
  std::vector<Eigen::Index> widths(hidden);
  widths.push_back(code_bits);
  for (Eigen::Index out : widths) {
    const double r = std::sqrt(6.0 / double(fan_in + out));
    std::uniform_real_distribution<double> dist(-r, r);
    DenseLayer layer;
    layer.weights = Matrix::NullaryExpr(out, fan_in, [&] { return dist(rng); });
    layer.bias = Vector::Zero(out);
    model.layers.push_back(std::move(layer));
    fan_in = out;
  }
  return model;
}

Matrix forward(const HashModel& model, const Eigen::Ref<const Matrix>& inputs,
               ForwardTrace* trace) {
  check_chain(model);
  if (inputs.rows() != model.input_dim()) {
    throw ValidationError("input dimension " + std::to_string(inputs.rows()) +
                          " does not match model input width " +
                          std::to_string(model.input_dim()));
  }
  if (trace) {
    trace->input = inputs;
    trace->pre_activations.clear();
    trace->activations.clear();
  }

  const std::size_t last = model.layers.size() - 1;
  Matrix z = inputs;
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    const DenseLayer& layer = model.layers[l];
    Matrix pre = (layer.weights * z).colwise() + layer.bias;
    if (!pre.allFinite()) {
      throw std::runtime_error("non-finite pre-activation in layer " + std::to_string(l));
    }
    z = (l == last) ? pre.unaryExpr([](double x) { return hash_activation(x); })
                    : pre.array().tanh().matrix();
    if (trace) {
      trace->pre_activations.push_back(std::move(pre));
      trace->activations.push_back(z);
    }
  }
  return z;
}

Vector forward(const HashModel& model, const Eigen::Ref<const Vector>& input) {
  return forward(model, Matrix(input), nullptr).col(0);
}

ModelGrad zeros_like(const HashModel& model) {
  ModelGrad grad;
  for (const DenseLayer& layer : model.layers) {
    grad.weights.push_back(Matrix::Zero(layer.weights.rows(), layer.weights.cols()));
    grad.bias.push_back(Vector::Zero(layer.bias.size()));
  }
  return grad;
}

ModelGrad backward(const HashModel& model, const ForwardTrace& trace,
                   const Eigen::Ref<const Matrix>& code_grad, Matrix* input_grad) {
  check_chain(model);
  if (trace.activations.size() != model.layers.size()) {
    throw ValidationError("forward trace does not match model depth");
  }
  if (code_grad.rows() != model.code_bits() || code_grad.cols() != trace.input.cols()) {
    throw ValidationError("code gradient shape mismatch");
  }

  ModelGrad grad = zeros_like(model);
  const std::size_t last = model.layers.size() - 1;

  Matrix delta;  // dC/d(pre-activation) of the current layer
  for (std::size_t l = last + 1; l-- > 0;) {
    if (l == last) {
      delta = code_grad.cwiseProduct(trace.pre_activations[l].unaryExpr(
          [](double x) { return hash_activation_derivative(x); }));
    } else {
      // tanh'(z_hat) = 1 - tanh(z_hat)^2, and the activation is the tanh value.
      delta = (model.layers[l + 1].weights.transpose() * delta)
                  .cwiseProduct((1.0 - trace.activations[l].array().square()).matrix());
    }
    const Matrix& below = (l == 0) ? trace.input : trace.activations[l - 1];
    grad.weights[l] = delta * below.transpose();
    grad.bias[l] = delta.rowwise().sum();
  }
  if (input_grad) *input_grad = model.layers.front().weights.transpose() * delta;
  return grad;
}

}  // namespace softhash

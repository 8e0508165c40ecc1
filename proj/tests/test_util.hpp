#pragma once

// Test-only helpers: independent finite-difference oracles and random input
// generators. Nothing here may call back into the gradient paths it checks.

#include "softhash/hash_model.hpp"
#include "softhash/label_similarity.hpp"
#include "softhash/objective.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace testutil {

// |a - b| relative to the larger magnitude, with an absolute floor so
// near-zero gradients compare by absolute error.
inline double rel_err(double a, double b, double floor_ = 1e-3) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor_});
}

// Central finite difference of `cost` w.r.t. every parameter of `model`.
// Mutates entries in place and restores them.
inline softhash::ModelGrad fd_model_grad(softhash::HashModel& model,
                                         const std::function<double()>& cost,
                                         double h = 1e-5) {
  softhash::ModelGrad grad = softhash::zeros_like(model);
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    softhash::Matrix& w = model.layers[l].weights;
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) {
        const double keep = w(r, c);
        w(r, c) = keep + h;
        const double up = cost();
        w(r, c) = keep - h;
        const double down = cost();
        w(r, c) = keep;
        grad.weights[l](r, c) = (up - down) / (2.0 * h);
      }
    }
    softhash::Vector& b = model.layers[l].bias;
    for (Eigen::Index r = 0; r < b.size(); ++r) {
      const double keep = b[r];
      b[r] = keep + h;
      const double up = cost();
      b[r] = keep - h;
      const double down = cost();
      b[r] = keep;
      grad.bias[l][r] = (up - down) / (2.0 * h);
    }
  }
  return grad;
}

// Central finite difference of `cost` w.r.t. every entry of `codes`.
inline softhash::Matrix fd_code_grad(softhash::Matrix& codes,
                                     const std::function<double()>& cost,
                                     double h = 1e-5) {
  softhash::Matrix grad(codes.rows(), codes.cols());
  for (Eigen::Index i = 0; i < codes.cols(); ++i) {
    for (Eigen::Index k = 0; k < codes.rows(); ++k) {
      const double keep = codes(k, i);
      codes(k, i) = keep + h;
      const double up = cost();
      codes(k, i) = keep - h;
      const double down = cost();
      codes(k, i) = keep;
      grad(k, i) = (up - down) / (2.0 * h);
    }
  }
  return grad;
}

inline double max_param_rel_err(const softhash::ModelGrad& a,
                                const softhash::ModelGrad& b) {
  double worst = 0.0;
  for (std::size_t l = 0; l < a.weights.size(); ++l) {
    for (Eigen::Index r = 0; r < a.weights[l].rows(); ++r) {
      for (Eigen::Index c = 0; c < a.weights[l].cols(); ++c) {
        worst = std::max(worst, rel_err(a.weights[l](r, c), b.weights[l](r, c)));
      }
    }
    for (Eigen::Index r = 0; r < a.bias[l].size(); ++r) {
      worst = std::max(worst, rel_err(a.bias[l][r], b.bias[l][r]));
    }
  }
  return worst;
}

// Random multi-hot label vector with at least one set flag.
inline softhash::LabelVector random_labels(int classes, std::mt19937_64& rng,
                                           double density = 0.4) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  softhash::LabelVector v(classes);
  do {
    for (int c = 0; c < classes; ++c) v[c] = unit(rng) < density ? 1 : 0;
  } while (v.sum() == 0);
  return v;
}

// All unordered pairs over `items` random label vectors.
inline std::vector<softhash::LabeledPair> random_pairs(int items, int classes,
                                                       std::mt19937_64& rng) {
  std::vector<softhash::LabelVector> labels;
  for (int i = 0; i < items; ++i) labels.push_back(random_labels(classes, rng));
  std::vector<softhash::LabeledPair> pairs;
  for (int i = 0; i < items; ++i) {
    for (int j = i + 1; j < items; ++j) {
      pairs.push_back({i, j, softhash::classify_pair(labels[std::size_t(i)],
                                                     labels[std::size_t(j)])});
    }
  }
  return pairs;
}

// Codes away from the quantization kink: every |entry| >= kink_floor.
inline softhash::Matrix random_codes(int bits, int items, std::mt19937_64& rng,
                                     double kink_floor = 1e-3) {
  std::uniform_real_distribution<double> unit(-0.95, 0.95);
  softhash::Matrix codes(bits, items);
  for (Eigen::Index i = 0; i < codes.size(); ++i) {
    double v;
    do {
      v = unit(rng);
    } while (std::abs(v) < kink_floor);
    codes(Eigen::Index(i)) = v;
  }
  return codes;
}

}  // namespace testutil

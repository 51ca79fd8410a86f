/*
 * Copyright 2026 The TwinForge Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "twinforge/rng.hpp"

namespace twinforge::tabular {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class HiddenActivation { kRelu, kLeakyRelu };

struct AdamConfig {
  double learning_rate = 2e-4;
  double beta1 = 0.5;
  double beta2 = 0.9;
  double epsilon = 1e-8;
};

// Fully connected layer y = x W^T + b over a batch (rows are samples).
struct DenseLayer {
  Matrix weight;  // out x in
  Vector bias;    // out

  Matrix grad_weight;
  Vector grad_bias;
  Matrix m_weight, v_weight;
  Vector m_bias, v_bias;

  DenseLayer() = default;
  DenseLayer(std::size_t in, std::size_t out, Rng& rng);

  std::size_t inputs() const { return static_cast<std::size_t>(weight.cols()); }
  std::size_t outputs() const { return static_cast<std::size_t>(weight.rows()); }

  void reset_state();
};

// Feed-forward stack: hidden layers share one activation, the last layer is
// linear. Forward caches what backward needs, so one forward must precede
// each backward.
class Mlp {
 public:
  Mlp() = default;
  Mlp(const std::vector<std::size_t>& sizes, HiddenActivation activation,
      Rng& rng);

  Matrix forward(const Matrix& x);
  // Forward pass without caching; safe on a shared, immutable network.
  Matrix predict(const Matrix& x) const;
  // Accumulates parameter gradients and returns d loss / d input.
  Matrix backward(const Matrix& grad_out);
  // Input gradient only; parameter gradients are left untouched.
  Matrix backward_input(const Matrix& grad_out);

  void zero_grad();
  void adam_step(const AdamConfig& cfg);

  const std::vector<DenseLayer>& layers() const { return layers_; }
  std::vector<DenseLayer>& layers() { return layers_; }
  HiddenActivation activation() const { return activation_; }
  long step_count() const { return steps_; }

  // Rebuilds from stored weights (optimizer state is reset).
  static Mlp from_layers(std::vector<DenseLayer> layers,
                         HiddenActivation activation);

 private:
  Matrix backward_impl(const Matrix& grad_out, bool accumulate);

  std::vector<DenseLayer> layers_;
  HiddenActivation activation_ = HiddenActivation::kRelu;
  std::vector<Matrix> inputs_;       // input to each layer
  std::vector<Matrix> pre_activation_;  // layer output before activation
  long steps_ = 0;
};

inline constexpr double kLeakySlope = 0.2;

}  // namespace twinforge::tabular

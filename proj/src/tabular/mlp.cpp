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

#include "twinforge/tabular/mlp.hpp"

#include <cmath>

#include "twinforge/error.hpp"

namespace twinforge::tabular {

DenseLayer::DenseLayer(std::size_t in, std::size_t out, Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(in));
  weight.resize(static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(in));
  bias.resize(static_cast<Eigen::Index>(out));
  for (Eigen::Index r = 0; r < weight.rows(); ++r) {
    for (Eigen::Index c = 0; c < weight.cols(); ++c) {
      weight(r, c) = (2.0 * rng.uniform() - 1.0) * bound;
    }
  }
  for (Eigen::Index r = 0; r < bias.size(); ++r) {
    bias(r) = (2.0 * rng.uniform() - 1.0) * bound;
  }
  reset_state();
}

void DenseLayer::reset_state() {
  grad_weight = Matrix::Zero(weight.rows(), weight.cols());
  m_weight = grad_weight;
  v_weight = grad_weight;
  grad_bias = Vector::Zero(bias.size());
  m_bias = grad_bias;
  v_bias = grad_bias;
}

Mlp::Mlp(const std::vector<std::size_t>& sizes, HiddenActivation activation,
         Rng& rng)
    : activation_(activation) {
  if (sizes.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "an MLP needs at least 2 sizes");
  }
  for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
    layers_.emplace_back(sizes[i], sizes[i + 1], rng);
  }
}

Mlp Mlp::from_layers(std::vector<DenseLayer> layers,
                     HiddenActivation activation) {
  Mlp m;
  m.layers_ = std::move(layers);
  m.activation_ = activation;
  for (auto& l : m.layers_) l.reset_state();
  return m;
}

Matrix Mlp::forward(const Matrix& x) {
  inputs_.clear();
  pre_activation_.clear();
  Matrix h = x;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const DenseLayer& l = layers_[i];
    inputs_.push_back(h);
    Matrix z = h * l.weight.transpose();
    z.rowwise() += l.bias.transpose();
    pre_activation_.push_back(z);
    if (i + 1 < layers_.size()) {
      if (activation_ == HiddenActivation::kRelu) {
        h = z.cwiseMax(0.0);
      } else {
        h = z.unaryExpr([](double v) { return v > 0.0 ? v : kLeakySlope * v; });
      }
    } else {
      h = std::move(z);
    }
  }
  return h;
}

Matrix Mlp::predict(const Matrix& x) const {
  Matrix h = x;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const DenseLayer& l = layers_[i];
    Matrix z = h * l.weight.transpose();
    z.rowwise() += l.bias.transpose();
    if (i + 1 < layers_.size()) {
      if (activation_ == HiddenActivation::kRelu) {
        h = z.cwiseMax(0.0);
      } else {
        h = z.unaryExpr([](double v) { return v > 0.0 ? v : kLeakySlope * v; });
      }
    } else {
      h = std::move(z);
    }
  }
  return h;
}

Matrix Mlp::backward_impl(const Matrix& grad_out, bool accumulate) {
  Matrix g = grad_out;
  for (std::size_t i = layers_.size(); i-- > 0;) {
    DenseLayer& l = layers_[i];
    if (i + 1 < layers_.size()) {
      const Matrix& z = pre_activation_[i];
      if (activation_ == HiddenActivation::kRelu) {
        g = g.cwiseProduct(
            z.unaryExpr([](double v) { return v > 0.0 ? 1.0 : 0.0; }));
      } else {
        g = g.cwiseProduct(
            z.unaryExpr([](double v) { return v > 0.0 ? 1.0 : kLeakySlope; }));
      }
    }
    if (accumulate) {
      l.grad_weight += g.transpose() * inputs_[i];
      l.grad_bias += g.colwise().sum().transpose();
    }
    g = g * l.weight;
  }
  return g;
}

Matrix Mlp::backward(const Matrix& grad_out) {
  return backward_impl(grad_out, true);
}

Matrix Mlp::backward_input(const Matrix& grad_out) {
  return backward_impl(grad_out, false);
}

void Mlp::zero_grad() {
  for (auto& l : layers_) {
    l.grad_weight.setZero();
    l.grad_bias.setZero();
  }
}

void Mlp::adam_step(const AdamConfig& cfg) {
  ++steps_;
  const double t = static_cast<double>(steps_);
  const double c1 = 1.0 - std::pow(cfg.beta1, t);
  const double c2 = 1.0 - std::pow(cfg.beta2, t);
  const auto update = [&](auto& param, auto& grad, auto& m, auto& v) {
    m = cfg.beta1 * m + (1.0 - cfg.beta1) * grad;
    v = cfg.beta2 * v + (1.0 - cfg.beta2) * grad.cwiseProduct(grad);
    param.array() -= cfg.learning_rate * (m.array() / c1) /
                     ((v.array() / c2).sqrt() + cfg.epsilon);
  };
  for (auto& l : layers_) {
    update(l.weight, l.grad_weight, l.m_weight, l.v_weight);
    update(l.bias, l.grad_bias, l.m_bias, l.v_bias);
  }
}

}  // namespace twinforge::tabular

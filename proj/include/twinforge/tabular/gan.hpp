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

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "twinforge/ingest/dataset.hpp"
#include "twinforge/rng.hpp"
#include "twinforge/tabular/encoding.hpp"
#include "twinforge/tabular/mlp.hpp"

namespace twinforge::tabular {

struct GanConfig {
  int epochs = 300;
  std::size_t batch = 32;
  std::size_t noise_dim = 32;
  std::size_t hidden = 128;
  std::size_t max_modes = kMaxModes;
  double learning_rate = 2e-4;
  double beta1 = 0.5;
  double beta2 = 0.9;
  // Temperature of the relaxed one-hot heads fed to the discriminator.
  double gumbel_tau = 0.2;

  void validate() const;
  bool operator==(const GanConfig&) const = default;
};

struct TrainingHistory {
  // Per-epoch means.
  std::vector<double> generator_loss;
  std::vector<double> discriminator_loss;

  bool operator==(const TrainingHistory&) const = default;
};

// Trained conditional generator plus everything needed to sample from it.
// Immutable after training; generation does not modify it.
struct GanModel {
  RowEncoder encoder;
  GanConfig config;
  std::uint64_t seed = 0;
  Mlp generator;
  Mlp discriminator;
  TrainingHistory history;

  bool conditional() const { return encoder.condition_width() > 0; }
};

// Fits one mode normalizer per continuous column (independently, possibly in
// parallel) and the category tables of the discrete columns.
RowEncoder fit_encoder(const ingest::TabularDataset& dataset,
                       std::size_t max_modes, std::uint64_t seed);

// Adversarial training with training-by-sampling. The discriminator sees hard
// one-hot flags (straight-through gradients), and the returned generator holds
// an exponential moving average of its weights. Deterministic given seed.
// Throws TooFewRows when the dataset has fewer rows than a batch and
// NonFiniteLoss(step) if a loss diverges.
GanModel train_gan(const ingest::TabularDataset& dataset,
                   const GanConfig& config, std::uint64_t seed);

// n synthetic rows; row ids are 1..n.
ingest::TabularDataset generate_rows(const GanModel& model, std::size_t n,
                                     Rng& rng);

inline constexpr int kModelFormatVersion = 1;

nlohmann::json model_to_json(const GanModel& model);
GanModel model_from_json(const nlohmann::json& doc);
void save_model(const GanModel& model, const std::string& path);
GanModel load_model(const std::string& path);

}  // namespace twinforge::tabular

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
#include <map>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "twinforge/ingest/macro.hpp"

namespace twinforge::seq {

using Tokens = std::vector<std::string>;

struct GenRequest {
  Tokens prompt;  // at least one token
  double temperature = 0.8;
  std::size_t max_len = 200;
  std::uint64_t seed = 0;

  void validate() const;
};

// Backoff n-gram model over whole-command tokens. The next-token
// distribution comes from the longest context of length < order that was
// seen in training, add-delta smoothed over every token except BOS, so all
// probabilities are positive.
class NgramModel {
 public:
  NgramModel() = default;

  int order() const { return order_; }
  double delta() const { return delta_; }
  std::uint64_t seed() const { return seed_; }
  // Sorted; includes BOS and EOS.
  const Tokens& vocabulary() const { return vocabulary_; }
  // Tokens that can be predicted: the vocabulary without BOS, sorted.
  const Tokens& outcomes() const { return outcomes_; }

  // Distribution over outcomes() given everything emitted so far (history
  // starts with BOS).
  std::vector<double> next_distribution(std::span<const std::string> history) const;
  // Log probability of a BOS/EOS-wrapped sequence.
  double sequence_log_prob(std::span<const std::string> sequence) const;

  nlohmann::json to_json() const;
  static NgramModel from_json(const nlohmann::json& doc);

  friend NgramModel train_ngram(const std::vector<Tokens>& corpus, int order,
                                double delta, std::uint64_t seed);

  bool operator==(const NgramModel&) const = default;

 private:
  int order_ = 3;
  double delta_ = 0.01;
  std::uint64_t seed_ = 0;
  Tokens vocabulary_;
  Tokens outcomes_;
  // context -> (next token -> count); contexts of length 0..order-1.
  std::map<Tokens, std::map<std::string, double>> counts_;
  std::map<Tokens, double> totals_;
};

inline constexpr int kDefaultOrder = 3;
inline constexpr double kDefaultDelta = 0.01;

// Every sequence must start with BOS and end with EOS. Throws EmptyCorpus.
NgramModel train_ngram(const std::vector<Tokens>& corpus,
                       int order = kDefaultOrder, double delta = kDefaultDelta,
                       std::uint64_t seed = 0);

// Autoregressive sampling. The output starts with the prompt and ends at EOS
// (included) or at max_len tokens. Temperature 0 takes the most likely token,
// lexicographically smallest on ties. Prompt tokens never seen in training
// simply make the model back off to shorter contexts.
Tokens generate_sequence(const NgramModel& model, const GenRequest& request);

// Drops BOS/EOS and parses each remaining token as a command line. Parser
// errors carry the token index.
ingest::MacroScript sequence_to_script(std::span<const std::string> tokens,
                                       std::string name);

void save_ngram(const NgramModel& model, const std::string& path);
NgramModel load_ngram(const std::string& path);

}  // namespace twinforge::seq

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

#include "twinforge/seq/ngram.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "twinforge/error.hpp"
#include "twinforge/rng.hpp"
#include "twinforge/text.hpp"

namespace twinforge::seq {

using ingest::kBos;
using ingest::kEos;

void GenRequest::validate() const {
  if (prompt.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "prompt needs at least one token");
  }
  if (!(temperature >= 0.0) || !std::isfinite(temperature)) {
    throw Error(ErrorCode::kInvalidArgument, "temperature must be >= 0");
  }
  if (max_len < 1) throw Error(ErrorCode::kInvalidArgument, "max_len must be >= 1");
}

NgramModel train_ngram(const std::vector<Tokens>& corpus, int order,
                       double delta, std::uint64_t seed) {
  if (corpus.empty()) throw Error(ErrorCode::kEmptyCorpus, "no sequences");
  if (order < 1) throw Error(ErrorCode::kInvalidArgument, "order must be >= 1");
  if (!(delta > 0.0)) throw Error(ErrorCode::kInvalidArgument, "delta must be > 0");

  NgramModel m;
  m.order_ = order;
  m.delta_ = delta;
  m.seed_ = seed;
  std::set<std::string> vocab{std::string(kBos), std::string(kEos)};
  for (std::size_t s = 0; s < corpus.size(); ++s) {
    const Tokens& seq = corpus[s];
    if (seq.size() < 2 || seq.front() != kBos || seq.back() != kEos) {
      throw Error(ErrorCode::kInvalidArgument,
                  "sequence is not BOS/EOS wrapped", s);
    }
    for (std::size_t i = 1; i < seq.size(); ++i) {
      vocab.insert(seq[i]);
      for (int len = 0; len < order; ++len) {
        if (static_cast<std::size_t>(len) > i) break;
        Tokens ctx(seq.begin() + static_cast<std::ptrdiff_t>(i) - len,
                   seq.begin() + static_cast<std::ptrdiff_t>(i));
        m.counts_[ctx][seq[i]] += 1.0;
        m.totals_[ctx] += 1.0;
      }
    }
  }
  m.vocabulary_.assign(vocab.begin(), vocab.end());
  for (const auto& t : m.vocabulary_) {
    if (t != kBos) m.outcomes_.push_back(t);
  }
  return m;
}

std::vector<double> NgramModel::next_distribution(
    std::span<const std::string> history) const {
  const double v = static_cast<double>(outcomes_.size());
  std::vector<double> p(outcomes_.size());
  for (int len = order_ - 1; len >= 0; --len) {
    if (static_cast<std::size_t>(len) > history.size()) continue;
    const Tokens ctx(history.end() - len, history.end());
    const auto total = totals_.find(ctx);
    if (total == totals_.end()) continue;
    const auto& next = counts_.at(ctx);
    const double denom = total->second + delta_ * v;
    for (std::size_t i = 0; i < outcomes_.size(); ++i) {
      const auto it = next.find(outcomes_[i]);
      p[i] = ((it == next.end() ? 0.0 : it->second) + delta_) / denom;
    }
    return p;
  }
  // Unreachable after training (the empty context is always seen); kept for
  // default-constructed models.
  std::fill(p.begin(), p.end(), 1.0 / v);
  return p;
}

double NgramModel::sequence_log_prob(std::span<const std::string> sequence) const {
  double lp = 0.0;
  for (std::size_t i = 1; i < sequence.size(); ++i) {
    const auto dist = next_distribution(sequence.first(i));
    const auto it =
        std::lower_bound(outcomes_.begin(), outcomes_.end(), sequence[i]);
    if (it == outcomes_.end() || *it != sequence[i]) {
      return -INFINITY;
    }
    lp += std::log(dist[static_cast<std::size_t>(it - outcomes_.begin())]);
  }
  return lp;
}

Tokens generate_sequence(const NgramModel& model, const GenRequest& request) {
  request.validate();
  if (model.outcomes().empty()) {
    throw Error(ErrorCode::kInvalidArgument, "model is untrained");
  }
  Tokens history;
  if (request.prompt.front() != kBos) history.emplace_back(kBos);
  history.insert(history.end(), request.prompt.begin(), request.prompt.end());
  Tokens out = request.prompt;
  Rng rng(request.seed);
  const auto& outcomes = model.outcomes();

  while (out.size() < request.max_len && out.back() != kEos) {
    std::vector<double> p = model.next_distribution(history);
    std::size_t pick = 0;
    if (request.temperature == 0.0) {
      // outcomes are sorted, so the first maximum is the lexicographic one.
      for (std::size_t i = 1; i < p.size(); ++i) {
        if (p[i] > p[pick]) pick = i;
      }
    } else {
      const double inv_t = 1.0 / request.temperature;
      double hi = 0.0;
      for (double x : p) hi = std::max(hi, std::log(x));
      for (double& x : p) x = std::exp((std::log(x) - hi) * inv_t);
      pick = rng.categorical(p);
    }
    history.push_back(outcomes[pick]);
    out.push_back(outcomes[pick]);
  }
  return out;
}

ingest::MacroScript sequence_to_script(std::span<const std::string> tokens,
                                       std::string name) {
  ingest::MacroScript script;
  script.name = std::move(name);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i] == kBos || tokens[i] == kEos) continue;
    script.commands.push_back(ingest::parse_macro_command(tokens[i], i));
  }
  if (script.commands.empty()) {
    throw Error(ErrorCode::kEmptyScript, "sequence has no commands");
  }
  return script;
}

nlohmann::json NgramModel::to_json() const {
  nlohmann::json contexts = nlohmann::json::array();
  for (const auto& [ctx, next] : counts_) {
    contexts.push_back({{"context", ctx}, {"next", next}});
  }
  return {{"format_version", 1},
          {"kind", "ngram"},
          {"order", order_},
          {"delta", delta_},
          {"seed", seed_},
          {"vocabulary", vocabulary_},
          {"contexts", std::move(contexts)}};
}

NgramModel NgramModel::from_json(const nlohmann::json& doc) {
  try {
    if (doc.at("format_version").get<int>() != 1 ||
        doc.at("kind").get<std::string>() != "ngram") {
      throw Error(ErrorCode::kMalformedModel, "unsupported model format");
    }
    NgramModel m;
    m.order_ = doc.at("order").get<int>();
    m.delta_ = doc.at("delta").get<double>();
    m.seed_ = doc.at("seed").get<std::uint64_t>();
    m.vocabulary_ = doc.at("vocabulary").get<Tokens>();
    if (m.order_ < 1 || !(m.delta_ > 0.0) ||
        !std::is_sorted(m.vocabulary_.begin(), m.vocabulary_.end()) ||
        !std::binary_search(m.vocabulary_.begin(), m.vocabulary_.end(), kBos) ||
        !std::binary_search(m.vocabulary_.begin(), m.vocabulary_.end(), kEos)) {
      throw Error(ErrorCode::kMalformedModel, "bad n-gram header");
    }
    for (const auto& t : m.vocabulary_) {
      if (t != kBos) m.outcomes_.push_back(t);
    }
    for (const auto& cj : doc.at("contexts")) {
      Tokens ctx = cj.at("context").get<Tokens>();
      auto next = cj.at("next").get<std::map<std::string, double>>();
      double total = 0.0;
      for (const auto& [tok, n] : next) {
        if (!(n >= 0.0)) throw Error(ErrorCode::kMalformedModel, "negative count");
        total += n;
      }
      m.totals_[ctx] = total;
      m.counts_[std::move(ctx)] = std::move(next);
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedModel, e.what());
  }
}

void save_ngram(const NgramModel& model, const std::string& path) {
  text::write_file(path, model.to_json().dump(1) + "\n");
}

NgramModel load_ngram(const std::string& path) {
  try {
    return NgramModel::from_json(nlohmann::json::parse(text::read_file(path)));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedModel, e.what());
  }
}

}  // namespace twinforge::seq

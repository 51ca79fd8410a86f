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

#include "twinforge/validate/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "twinforge/error.hpp"

namespace twinforge::validate {

using ingest::ColumnKind;

SummaryStats summary_stats(const ingest::TabularDataset& dataset) {
  if (dataset.rows.empty()) {
    throw Error(ErrorCode::kEmptyDataset, "no rows to summarise");
  }
  SummaryStats s;
  s.rows = dataset.rows.size();
  for (std::size_t c = 0; c < dataset.schema.size(); ++c) {
    ColumnSummary col;
    col.column = dataset.schema[c].name;
    col.kind = dataset.schema[c].kind;
    if (col.kind == ColumnKind::kContinuous) {
      double sum = 0.0;
      for (const auto& row : dataset.rows) sum += std::get<double>(row[c]);
      col.mean = sum / static_cast<double>(s.rows);
    } else {
      std::map<std::string, std::size_t> counts;
      for (const auto& row : dataset.rows) ++counts[std::get<std::string>(row[c])];
      // std::map iterates in lexicographic order; strict > keeps the first.
      for (const auto& [cat, n] : counts) {
        if (n > col.modal_count) {
          col.modal_count = n;
          col.modal_category = cat;
        }
      }
    }
    s.columns.push_back(std::move(col));
  }
  return s;
}

std::vector<FieldDelta> compare_stats(const SummaryStats& real,
                                      const SummaryStats& synth) {
  if (real.columns.size() != synth.columns.size()) {
    throw Error(ErrorCode::kInvalidArgument, "summaries have different columns");
  }
  std::vector<FieldDelta> out;
  for (std::size_t i = 0; i < real.columns.size(); ++i) {
    const ColumnSummary& r = real.columns[i];
    const ColumnSummary& s = synth.columns[i];
    if (r.column != s.column || r.kind != s.kind) {
      throw Error(ErrorCode::kInvalidArgument,
                  "column mismatch: " + r.column + " vs " + s.column);
    }
    FieldDelta d;
    d.column = r.column;
    d.kind = r.kind;
    if (r.kind == ColumnKind::kContinuous) {
      d.real_mean = r.mean;
      d.synth_mean = s.mean;
      d.abs_delta = std::abs(r.mean - s.mean);
      d.rel_delta = d.abs_delta / std::max(std::abs(r.mean), kRelativeEpsilon);
      d.modal_match = true;
    } else {
      d.real_modal = r.modal_category;
      d.synth_modal = s.modal_category;
      d.modal_match = r.modal_category == s.modal_category;
    }
    out.push_back(std::move(d));
  }
  return out;
}

double cosine_similarity(const ingest::MacroScript& a,
                         const ingest::MacroScript& b) {
  if (a.commands.empty() || b.commands.empty()) {
    throw Error(ErrorCode::kEmptyScript, "cosine needs two non-empty scripts");
  }
  std::map<std::string, std::pair<double, double>> counts;
  for (const auto& c : a.commands) counts[ingest::emit_macro_command(c)].first += 1.0;
  for (const auto& c : b.commands) counts[ingest::emit_macro_command(c)].second += 1.0;
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (const auto& [tok, v] : counts) {
    dot += v.first * v.second;
    na += v.first * v.first;
    nb += v.second * v.second;
  }
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), 0.0, 1.0);
}

namespace {

using NgramCounts = std::map<std::vector<std::string>, std::size_t>;

NgramCounts ngrams(std::span<const std::string> tokens, std::size_t n) {
  NgramCounts out;
  if (tokens.size() < n) return out;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++out[std::vector<std::string>(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                   tokens.begin() + static_cast<std::ptrdiff_t>(i + n))];
  }
  return out;
}

}  // namespace

double bleu(std::span<const std::string> candidate,
            const std::vector<std::vector<std::string>>& references) {
  if (candidate.empty()) throw Error(ErrorCode::kEmptyCandidate, "empty candidate");
  if (references.empty()) throw Error(ErrorCode::kNoReferences, "no references");

  constexpr std::size_t kMaxOrder = 4;
  double log_sum = 0.0;
  for (std::size_t n = 1; n <= kMaxOrder; ++n) {
    const NgramCounts cand = ngrams(candidate, n);
    NgramCounts max_ref;
    for (const auto& ref : references) {
      for (const auto& [g, c] : ngrams(ref, n)) {
        max_ref[g] = std::max(max_ref[g], c);
      }
    }
    double matched = 0.0, total = 0.0;
    for (const auto& [g, c] : cand) {
      total += static_cast<double>(c);
      const auto it = max_ref.find(g);
      if (it != max_ref.end()) matched += static_cast<double>(std::min(c, it->second));
    }
    double precision;
    if (n == 1) {
      if (matched == 0.0) return 0.0;
      precision = matched / total;
    } else {
      precision = (matched + 1.0) / (total + 1.0);
    }
    log_sum += std::log(precision) / static_cast<double>(kMaxOrder);
  }

  // Closest reference length, shorter on ties.
  const double c = static_cast<double>(candidate.size());
  double r = static_cast<double>(references.front().size());
  for (const auto& ref : references) {
    const double len = static_cast<double>(ref.size());
    if (std::abs(len - c) < std::abs(r - c) ||
        (std::abs(len - c) == std::abs(r - c) && len < r)) {
      r = len;
    }
  }
  const double brevity = c < r ? std::exp(1.0 - r / c) : 1.0;
  return std::clamp(brevity * std::exp(log_sum), 0.0, 1.0);
}

}  // namespace twinforge::validate

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

#include "twinforge/tabular/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "twinforge/error.hpp"

namespace twinforge::tabular {

using ingest::ColumnKind;

std::size_t FrequencyTable::index_of(const std::string& category) const {
  const auto it =
      std::lower_bound(categories.begin(), categories.end(), category);
  if (it == categories.end() || *it != category) return std::string::npos;
  return static_cast<std::size_t>(it - categories.begin());
}

FrequencyTable count_categories(const std::vector<std::string>& values) {
  std::map<std::string, double> counts;
  for (const auto& v : values) counts[v] += 1.0;
  FrequencyTable t;
  for (const auto& [cat, n] : counts) {
    t.categories.push_back(cat);
    t.counts.push_back(n);
  }
  return t;
}

RowEncoder::RowEncoder(ingest::Schema schema,
                       std::vector<ModeNormalizer> normalizers,
                       std::vector<FrequencyTable> tables)
    : schema_(std::move(schema)),
      normalizers_(std::move(normalizers)),
      tables_(std::move(tables)) {
  std::size_t cont = 0, disc = 0;
  for (std::size_t c = 0; c < schema_.size(); ++c) {
    ColumnSpan span;
    span.column = c;
    span.kind = schema_[c].kind;
    span.offset = width_;
    if (span.kind == ColumnKind::kContinuous) {
      if (cont >= normalizers_.size() || normalizers_[cont].modes.empty()) {
        throw Error(ErrorCode::kInvalidArgument,
                    "missing normalizer for column '" + schema_[c].name + "'");
      }
      span.model_index = cont;
      span.width = 1 + normalizers_[cont].size();
      ++cont;
    } else {
      if (disc >= tables_.size() || tables_[disc].size() == 0) {
        throw Error(ErrorCode::kInvalidArgument,
                    "missing categories for column '" + schema_[c].name + "'");
      }
      span.model_index = disc;
      span.width = tables_[disc].size();
      condition_offsets_.push_back(condition_width_);
      condition_width_ += span.width;
      ++disc;
    }
    width_ += span.width;
    spans_.push_back(span);
  }
  if (cont != normalizers_.size() || disc != tables_.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "normalizer/table count does not match schema");
  }
}

EncodedRow encode_row(const ingest::Row& row, const RowEncoder& encoder,
                      Rng& rng) {
  const auto& schema = encoder.schema();
  if (row.size() != schema.size()) {
    throw Error(ErrorCode::kRaggedRows, "row arity does not match schema");
  }
  EncodedRow out(encoder.width(), 0.0);
  for (const auto& span : encoder.spans()) {
    const ingest::Cell& cell = row[span.column];
    if (span.kind == ColumnKind::kContinuous) {
      const double x = std::get<double>(cell);
      const ModeNormalizer& norm = encoder.normalizers()[span.model_index];
      const std::vector<double> resp = norm.responsibilities(x);
      const std::size_t k = rng.categorical(resp);
      const GaussianMode& m = norm.modes[k];
      out[span.offset] =
          std::clamp((x - m.mean) / (kAlphaScale * m.stdev), -1.0, 1.0);
      out[span.offset + 1 + k] = 1.0;
    } else {
      const std::string& v = std::get<std::string>(cell);
      const std::size_t idx = encoder.tables()[span.model_index].index_of(v);
      if (idx == std::string::npos) {
        throw Error(ErrorCode::kUnknownCategory,
                    "column '" + schema[span.column].name + "' value '" + v +
                        "'");
      }
      out[span.offset + idx] = 1.0;
    }
  }
  return out;
}

namespace {
std::size_t argmax(const double* v, std::size_t n) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}
}  // namespace

ingest::Row decode_row(const EncodedRow& encoded, const RowEncoder& encoder) {
  if (encoded.size() != encoder.width()) {
    throw Error(ErrorCode::kInvalidArgument, "encoded width mismatch");
  }
  ingest::Row row(encoder.schema().size());
  for (const auto& span : encoder.spans()) {
    const std::size_t k =
        argmax(encoded.data() + span.flag_offset(), span.flag_count());
    if (span.kind == ColumnKind::kContinuous) {
      const GaussianMode& m = encoder.normalizers()[span.model_index].modes[k];
      const double alpha = std::clamp(encoded[span.offset], -1.0, 1.0);
      row[span.column] = alpha * kAlphaScale * m.stdev + m.mean;
    } else {
      row[span.column] = encoder.tables()[span.model_index].categories[k];
    }
  }
  return row;
}

std::vector<double> condition_vector(const Condition& c,
                                     const RowEncoder& encoder) {
  std::vector<double> v(encoder.condition_width(), 0.0);
  if (!v.empty()) v[encoder.condition_offset(c.table) + c.category] = 1.0;
  return v;
}

Condition sample_condition(const std::vector<FrequencyTable>& tables,
                           Rng& rng) {
  if (tables.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no discrete columns");
  }
  Condition c;
  c.table = static_cast<std::size_t>(rng.below(tables.size()));
  const auto& counts = tables[c.table].counts;
  std::vector<double> w(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) w[i] = std::log1p(counts[i]);
  c.category = rng.categorical(w);
  return c;
}

Condition sample_condition_by_frequency(
    const std::vector<FrequencyTable>& tables, Rng& rng) {
  if (tables.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no discrete columns");
  }
  Condition c;
  c.table = static_cast<std::size_t>(rng.below(tables.size()));
  c.category = rng.categorical(tables[c.table].counts);
  return c;
}

}  // namespace twinforge::tabular

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

#include <cstddef>
#include <string>
#include <vector>

#include "twinforge/ingest/dataset.hpp"
#include "twinforge/rng.hpp"
#include "twinforge/tabular/mode_normalizer.hpp"

namespace twinforge::tabular {

// Scale of the normalised scalar: alpha = (x - mean) / (kAlphaScale * stdev).
inline constexpr double kAlphaScale = 4.0;

// Observed categories of one discrete column, sorted lexicographically.
// Counts are stored as doubles so fractional weights can be expressed.
struct FrequencyTable {
  std::vector<std::string> categories;
  std::vector<double> counts;

  std::size_t size() const { return categories.size(); }
  std::size_t index_of(const std::string& category) const;  // npos if absent
  bool operator==(const FrequencyTable&) const = default;
};

FrequencyTable count_categories(const std::vector<std::string>& values);

// Where one column lives inside an encoded row. Continuous columns occupy
// 1 + K slots (alpha, then K mode flags); discrete columns occupy one flag per
// category.
struct ColumnSpan {
  std::size_t column = 0;  // schema index
  ingest::ColumnKind kind = ingest::ColumnKind::kDiscrete;
  std::size_t offset = 0;
  std::size_t width = 0;
  // Index into the normalizer list (continuous) or frequency tables (discrete).
  std::size_t model_index = 0;

  std::size_t flag_offset() const {
    return kind == ingest::ColumnKind::kContinuous ? offset + 1 : offset;
  }
  std::size_t flag_count() const {
    return kind == ingest::ColumnKind::kContinuous ? width - 1 : width;
  }
};

// Fitted per-column transforms for one schema.
class RowEncoder {
 public:
  RowEncoder() = default;
  // normalizers: one per continuous column in schema order; tables: one per
  // discrete column in schema order.
  RowEncoder(ingest::Schema schema, std::vector<ModeNormalizer> normalizers,
             std::vector<FrequencyTable> tables);

  const ingest::Schema& schema() const { return schema_; }
  const std::vector<ModeNormalizer>& normalizers() const { return normalizers_; }
  const std::vector<FrequencyTable>& tables() const { return tables_; }
  const std::vector<ColumnSpan>& spans() const { return spans_; }
  std::size_t width() const { return width_; }
  // Length of a condition vector: total number of categories.
  std::size_t condition_width() const { return condition_width_; }
  // Offset of discrete column `d` (by table index) in a condition vector.
  std::size_t condition_offset(std::size_t d) const {
    return condition_offsets_[d];
  }

 private:
  ingest::Schema schema_;
  std::vector<ModeNormalizer> normalizers_;
  std::vector<FrequencyTable> tables_;
  std::vector<ColumnSpan> spans_;
  std::vector<std::size_t> condition_offsets_;
  std::size_t width_ = 0;
  std::size_t condition_width_ = 0;
};

using EncodedRow = std::vector<double>;

// Mode is sampled from the posterior responsibilities; alpha is clipped to
// [-1, 1]. Throws UnknownCategory for a category outside the table.
EncodedRow encode_row(const ingest::Row& row, const RowEncoder& encoder,
                      Rng& rng);

// Reads the flagged mode / category of each span (argmax of the flag slots,
// lowest index on ties).
ingest::Row decode_row(const EncodedRow& encoded, const RowEncoder& encoder);

// One-hot selection of a (discrete column, category) pair.
struct Condition {
  std::size_t table = 0;     // index of the discrete column among tables
  std::size_t category = 0;  // index into that table

  bool operator==(const Condition&) const = default;
};

std::vector<double> condition_vector(const Condition& c,
                                     const RowEncoder& encoder);

// Training-by-sampling: column uniformly, category with probability
// proportional to log(1 + count).
Condition sample_condition(const std::vector<FrequencyTable>& tables,
                           Rng& rng);

// Column uniformly, category proportional to its observed count.
Condition sample_condition_by_frequency(
    const std::vector<FrequencyTable>& tables, Rng& rng);

}  // namespace twinforge::tabular

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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace twinforge::ingest {

enum class ColumnKind { kContinuous, kDiscrete };

std::string_view to_string(ColumnKind kind);
ColumnKind column_kind_from_string(std::string_view s);

struct Column {
  std::string name;
  ColumnKind kind = ColumnKind::kDiscrete;

  bool operator==(const Column&) const = default;
};

// Ordered, uniquely named columns. Construction validates.
class Schema {
 public:
  Schema() = default;
  explicit Schema(std::vector<Column> columns);

  const std::vector<Column>& columns() const { return columns_; }
  std::size_t size() const { return columns_.size(); }
  const Column& operator[](std::size_t i) const { return columns_[i]; }
  std::optional<std::size_t> index_of(std::string_view name) const;

  std::vector<std::size_t> indices_of(ColumnKind kind) const;

  bool operator==(const Schema&) const = default;

 private:
  std::vector<Column> columns_;
};

// Continuous cells hold doubles, discrete cells hold strings.
using Cell = std::variant<double, std::string>;
using Row = std::vector<Cell>;

struct TabularDataset {
  Schema schema;
  std::vector<Row> rows;
  // Optional per-row identifier (process id). Empty, or one per row. Not a
  // modelled column.
  std::vector<long long> row_ids;

  // Throws RaggedRows / InvalidArgument when the invariants do not hold.
  void validate() const;

  std::vector<double> continuous_column(std::size_t col) const;
  std::vector<std::string> discrete_column(std::size_t col) const;

  bool operator==(const TabularDataset&) const = default;
};

using KindOverrides = std::map<std::string, ColumnKind, std::less<>>;

// Distinct-value threshold above which an all-numeric column is continuous.
inline constexpr std::size_t kContinuousDistinctThreshold = 10;

// A column is continuous iff every cell parses as a finite number and it has
// more than kContinuousDistinctThreshold distinct values. Overrides win.
Schema infer_schema(const std::vector<std::string>& names,
                    const std::vector<std::vector<std::string>>& rows,
                    const KindOverrides& overrides = {});

// Types raw string cells according to schema. Continuous cells must parse as
// finite numbers.
TabularDataset make_dataset(Schema schema,
                            const std::vector<std::vector<std::string>>& rows,
                            std::vector<long long> row_ids = {});

// RFC-4180 CSV. A leading integer column named "pid" is read back as row ids.
std::string format_dataset_csv(const TabularDataset& dataset);
TabularDataset parse_dataset_csv(std::string_view text,
                                 const KindOverrides& overrides = {});

TabularDataset read_dataset_csv(const std::string& path,
                                const KindOverrides& overrides = {});
void write_dataset_csv(const TabularDataset& dataset, const std::string& path);

// Low-level record reader, exposed for tests.
std::vector<std::vector<std::string>> parse_csv_records(std::string_view text);

}  // namespace twinforge::ingest

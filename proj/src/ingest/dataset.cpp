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

#include "twinforge/ingest/dataset.hpp"

#include <cmath>
#include <set>
#include <unordered_set>

#include "twinforge/error.hpp"
#include "twinforge/text.hpp"

namespace twinforge::ingest {

std::string_view to_string(ColumnKind kind) {
  return kind == ColumnKind::kContinuous ? "continuous" : "discrete";
}

ColumnKind column_kind_from_string(std::string_view s) {
  if (s == "continuous") return ColumnKind::kContinuous;
  if (s == "discrete") return ColumnKind::kDiscrete;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown column kind '" + std::string(s) + "'");
}

Schema::Schema(std::vector<Column> columns) : columns_(std::move(columns)) {
  if (columns_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "schema needs at least one column");
  }
  std::unordered_set<std::string> seen;
  for (const auto& c : columns_) {
    if (c.name.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "empty column name");
    }
    if (!seen.insert(c.name).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "duplicate column name '" + c.name + "'");
    }
  }
}

std::optional<std::size_t> Schema::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].name == name) return i;
  }
  return std::nullopt;
}

std::vector<std::size_t> Schema::indices_of(ColumnKind kind) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].kind == kind) out.push_back(i);
  }
  return out;
}

void TabularDataset::validate() const {
  if (!row_ids.empty() && row_ids.size() != rows.size()) {
    throw Error(ErrorCode::kInvalidArgument, "row id count != row count");
  }
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const Row& row = rows[r];
    if (row.size() != schema.size()) {
      throw Error(ErrorCode::kRaggedRows,
                  "row has " + std::to_string(row.size()) + " cells, expected " +
                      std::to_string(schema.size()),
                  r);
    }
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (schema[c].kind == ColumnKind::kContinuous) {
        const double* v = std::get_if<double>(&row[c]);
        if (v == nullptr || !std::isfinite(*v)) {
          throw Error(ErrorCode::kInvalidArgument,
                      "column '" + schema[c].name + "' needs a finite number",
                      r);
        }
      } else if (!std::holds_alternative<std::string>(row[c])) {
        throw Error(ErrorCode::kInvalidArgument,
                    "column '" + schema[c].name + "' needs a category", r);
      }
    }
  }
}

std::vector<double> TabularDataset::continuous_column(std::size_t col) const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(std::get<double>(row[col]));
  return out;
}

std::vector<std::string> TabularDataset::discrete_column(std::size_t col) const {
  std::vector<std::string> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(std::get<std::string>(row[col]));
  return out;
}

Schema infer_schema(const std::vector<std::string>& names,
                    const std::vector<std::vector<std::string>>& rows,
                    const KindOverrides& overrides) {
  if (rows.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "cannot infer schema of no rows");
  }
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != names.size()) {
      throw Error(ErrorCode::kRaggedRows,
                  "row has " + std::to_string(rows[r].size()) +
                      " cells, expected " + std::to_string(names.size()),
                  r);
    }
  }
  std::vector<Column> columns;
  columns.reserve(names.size());
  for (std::size_t c = 0; c < names.size(); ++c) {
    if (auto it = overrides.find(names[c]); it != overrides.end()) {
      columns.push_back({names[c], it->second});
      continue;
    }
    bool numeric = true;
    std::set<double> distinct;
    for (const auto& row : rows) {
      auto v = text::parse_finite(text::trim(row[c]));
      if (!v) {
        numeric = false;
        break;
      }
      distinct.insert(*v);
    }
    const bool continuous =
        numeric && distinct.size() > kContinuousDistinctThreshold;
    columns.push_back(
        {names[c], continuous ? ColumnKind::kContinuous : ColumnKind::kDiscrete});
  }
  return Schema(std::move(columns));
}

TabularDataset make_dataset(Schema schema,
                            const std::vector<std::vector<std::string>>& rows,
                            std::vector<long long> row_ids) {
  TabularDataset ds;
  ds.rows.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != schema.size()) {
      throw Error(ErrorCode::kRaggedRows, "ragged row", r);
    }
    Row row;
    row.reserve(schema.size());
    for (std::size_t c = 0; c < schema.size(); ++c) {
      if (schema[c].kind == ColumnKind::kContinuous) {
        auto v = text::parse_finite(text::trim(rows[r][c]));
        if (!v) {
          throw Error(ErrorCode::kInvalidArgument,
                      "column '" + schema[c].name + "': '" + rows[r][c] +
                          "' is not a finite number",
                      r);
        }
        row.emplace_back(*v);
      } else {
        row.emplace_back(rows[r][c]);
      }
    }
    ds.rows.push_back(std::move(row));
  }
  ds.schema = std::move(schema);
  ds.row_ids = std::move(row_ids);
  ds.validate();
  return ds;
}

namespace {

bool needs_quotes(std::string_view field) {
  return field.find_first_of(",\"\r\n") != std::string_view::npos ||
         (!field.empty() && (field.front() == ' ' || field.back() == ' '));
}

void append_field(std::string& out, std::string_view field) {
  if (!needs_quotes(field)) {
    out.append(field);
    return;
  }
  out.push_back('"');
  for (char ch : field) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
}

}  // namespace

std::vector<std::vector<std::string>> parse_csv_records(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_was_quoted = false;
  std::size_t line = 1;
  auto end_record = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_was_quoted = false;
    // A lone empty field is a blank line.
    if (!(record.size() == 1 && record[0].empty())) {
      records.push_back(std::move(record));
    }
    record.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (in_quotes) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (ch == '\n') ++line;
        field.push_back(ch);
      }
      continue;
    }
    switch (ch) {
      case '"':
        if (!field.empty() || field_was_quoted) {
          throw Error(ErrorCode::kMalformedCsv, "stray quote", line);
        }
        in_quotes = true;
        field_was_quoted = true;
        break;
      case ',':
        record.push_back(std::move(field));
        field.clear();
        field_was_quoted = false;
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') break;
        end_record();
        ++line;
        break;
      case '\n':
        end_record();
        ++line;
        break;
      default:
        if (field_was_quoted) {
          throw Error(ErrorCode::kMalformedCsv, "text after closing quote",
                      line);
        }
        field.push_back(ch);
    }
  }
  if (in_quotes) throw Error(ErrorCode::kMalformedCsv, "unterminated quote", line);
  if (!field.empty() || field_was_quoted || !record.empty()) end_record();
  return records;
}

std::string format_dataset_csv(const TabularDataset& dataset) {
  dataset.validate();
  const bool with_ids = !dataset.row_ids.empty();
  std::string out;
  if (with_ids) out += "pid,";
  for (std::size_t c = 0; c < dataset.schema.size(); ++c) {
    if (c > 0) out.push_back(',');
    append_field(out, dataset.schema[c].name);
  }
  out.push_back('\n');
  for (std::size_t r = 0; r < dataset.rows.size(); ++r) {
    if (with_ids) out += std::to_string(dataset.row_ids[r]) + ",";
    const Row& row = dataset.rows[r];
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) out.push_back(',');
      if (const double* v = std::get_if<double>(&row[c])) {
        out += text::format_double(*v);
      } else {
        append_field(out, std::get<std::string>(row[c]));
      }
    }
    out.push_back('\n');
  }
  return out;
}

TabularDataset parse_dataset_csv(std::string_view text,
                                 const KindOverrides& overrides) {
  auto records = parse_csv_records(text);
  if (records.empty()) throw Error(ErrorCode::kMalformedCsv, "missing header");
  std::vector<std::string> header = std::move(records.front());
  records.erase(records.begin());
  std::unordered_set<std::string> seen;
  for (const auto& name : header) {
    // A numeric "name" means the first row is data, not a header.
    if (name.empty() || text::parse_finite(name)) {
      throw Error(ErrorCode::kMalformedCsv, "missing header", 1);
    }
    if (!seen.insert(name).second) {
      throw Error(ErrorCode::kMalformedCsv, "duplicate column '" + name + "'", 1);
    }
  }
  for (std::size_t r = 0; r < records.size(); ++r) {
    if (records[r].size() != header.size()) {
      throw Error(ErrorCode::kMalformedCsv, "wrong field count", r + 2);
    }
  }

  std::vector<long long> ids;
  if (header.size() > 1 && header.front() == "pid") {
    bool all_int = !records.empty();
    for (const auto& rec : records) {
      if (!text::parse_integer(rec.front())) {
        all_int = false;
        break;
      }
    }
    if (all_int) {
      for (auto& rec : records) {
        ids.push_back(*text::parse_integer(rec.front()));
        rec.erase(rec.begin());
      }
      header.erase(header.begin());
    }
  }
  if (records.empty()) {
    // Header-only file: every column defaults to discrete unless overridden.
    std::vector<Column> cols;
    for (const auto& name : header) {
      auto it = overrides.find(name);
      cols.push_back({name, it == overrides.end() ? ColumnKind::kDiscrete
                                                  : it->second});
    }
    TabularDataset ds;
    ds.schema = Schema(std::move(cols));
    return ds;
  }
  Schema schema = infer_schema(header, records, overrides);
  try {
    return make_dataset(std::move(schema), records, std::move(ids));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kInvalidArgument) {
      throw Error(ErrorCode::kMalformedCsv, e.what());
    }
    throw;
  }
}

TabularDataset read_dataset_csv(const std::string& path,
                                const KindOverrides& overrides) {
  return parse_dataset_csv(text::read_file(path), overrides);
}

void write_dataset_csv(const TabularDataset& dataset, const std::string& path) {
  text::write_file(path, format_dataset_csv(dataset));
}

}  // namespace twinforge::ingest

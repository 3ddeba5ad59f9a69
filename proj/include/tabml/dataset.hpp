#pragma once

#include <cmath>
#include <cstdlib>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "tabml/csv.hpp"
#include "tabml/error.hpp"
#include "tabml/schema.hpp"

namespace tabml {

// One column of a Dataset. `values` holds the numeric view (meaningful where
// the cell is neither missing nor an unencoded category string); `raw` keeps
// the original cell text for encoding, decoding and error messages.
struct Column {
  std::vector<double> values;
  std::vector<std::string> raw;
  std::vector<char> missing;
};

// Column-major typed table. Immutable by convention: every operation returns
// a new Dataset.
struct Dataset {
  Schema schema;
  std::vector<Column> columns;  // parallel to schema
  std::size_t n = 0;

  std::size_t feature_index(const std::string& name) const {
    for (std::size_t i = 0; i < schema.size(); ++i)
      if (schema[i].name == name) return i;
    throw LookupError("no feature named '" + name + "' in schema");
  }

  std::size_t target_index() const {
    for (std::size_t i = 0; i < schema.size(); ++i)
      if (schema[i].role == FeatureRole::target) return i;
    throw SchemaError("schema has no target feature");
  }

  bool row_complete(std::size_t r) const {
    for (const auto& col : columns)
      if (col.missing[r]) return false;
    return true;
  }

  bool complete() const {
    for (std::size_t r = 0; r < n; ++r)
      if (!row_complete(r)) return false;
    return true;
  }

  // Labels of the target column; requires the target to be complete.
  std::vector<int> target_labels() const {
    const auto& col = columns[target_index()];
    std::vector<int> y(n);
    for (std::size_t r = 0; r < n; ++r) {
      if (col.missing[r])
        throw IncompleteDataError("target column has a missing value at row " + std::to_string(r));
      const double v = col.values[r];
      if (v != 0.0 && v != 1.0)
        throw SchemaError("target value at row " + std::to_string(r) + " is not 0/1");
      y[r] = static_cast<int>(v);
    }
    return y;
  }
};

// Dense observation matrix plus its class labels; the shape every
// statistical routine and model consumes.
struct FeatureMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;  // row-major
  std::vector<std::string> feature_names;
  std::string target_name;
  std::vector<int> target;

  double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
  double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }

  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(values.data() + r * cols, cols);
  }

  std::vector<double> column(std::size_t c) const {
    std::vector<double> out(rows);
    for (std::size_t r = 0; r < rows; ++r) out[r] = at(r, c);
    return out;
  }

  std::size_t column_index(const std::string& name) const {
    for (std::size_t i = 0; i < feature_names.size(); ++i)
      if (feature_names[i] == name) return i;
    throw LookupError("no feature named '" + name + "' in matrix");
  }
};

namespace detail {

inline bool parse_number(const std::string& cell, double& out) {
  const char* begin = cell.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin) return false;
  while (*end) {
    if (!std::isspace(static_cast<unsigned char>(*end))) return false;
    ++end;
  }
  out = v;
  return true;
}

inline std::size_t find_header_column(const std::vector<std::string>& header,
                                      const std::string& name) {
  const std::string want = normalize_category(name);
  for (std::size_t i = 0; i < header.size(); ++i)
    if (normalize_category(header[i]) == want) return i;
  throw SchemaError("schema column '" + name + "' is absent from the CSV header");
}

}  // namespace detail

// Builds a Dataset from CSV. Header names are matched case-insensitively and
// may be a superset of the schema; column order follows the schema. Cells
// that are empty, missing markers, or unparseable numbers become missing
// cells rather than load failures.
inline Dataset load_csv(std::istream& in, const Schema& schema) {
  validate_schema(schema);
  const CsvTable table = read_csv(in);
  if (table.header.empty()) throw SchemaError("CSV has no header row");

  std::vector<std::size_t> source(schema.size());
  for (std::size_t i = 0; i < schema.size(); ++i)
    source[i] = detail::find_header_column(table.header, schema[i].name);

  Dataset ds;
  ds.schema = schema;
  ds.n = table.rows.size();
  ds.columns.resize(schema.size());
  for (std::size_t i = 0; i < schema.size(); ++i) {
    Column& col = ds.columns[i];
    col.values.assign(ds.n, std::numeric_limits<double>::quiet_NaN());
    col.raw.assign(ds.n, std::string());
    col.missing.assign(ds.n, 0);
    const bool has_map = schema[i].has_encoding();
    for (std::size_t r = 0; r < ds.n; ++r) {
      const auto& row = table.rows[r];
      const std::string cell = source[i] < row.size() ? row[source[i]] : std::string();
      col.raw[r] = cell;
      if (is_missing_marker(cell)) {
        col.missing[r] = 1;
        continue;
      }
      double v;
      if (detail::parse_number(cell, v)) {
        col.values[r] = v;
      } else if (!has_map) {
        // Non-numeric text in a plain numeric column: flagged missing.
        col.missing[r] = 1;
      }
      // Non-numeric text in an encoded column stays raw until encode().
    }
  }
  return ds;
}

inline Dataset load_csv(const std::string& path, const Schema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open dataset file: " + path);
  return load_csv(in, schema);
}

// Replaces category strings with their integer codes for every column that
// carries an encoding. Numeric cells already inside the codomain pass
// through; anything else is an error naming the feature, row and value.
inline Dataset encode(const Dataset& dataset) {
  Dataset out = dataset;
  for (std::size_t i = 0; i < out.schema.size(); ++i) {
    const FeatureSpec& spec = out.schema[i];
    if (!spec.has_encoding()) continue;
    Column& col = out.columns[i];
    for (std::size_t r = 0; r < out.n; ++r) {
      if (col.missing[r]) continue;
      if (std::isfinite(col.values[r])) {
        if (!spec.code_in_codomain(col.values[r]))
          throw EncodingError("feature '" + spec.name + "' row " + std::to_string(r) +
                              ": numeric value " + format_full(col.values[r]) +
                              " is not a code of its encoding");
        continue;
      }
      const auto code = spec.encode_category(col.raw[r]);
      if (!code)
        throw EncodingError("feature '" + spec.name + "' row " + std::to_string(r) +
                            ": unknown category '" + col.raw[r] + "'");
      col.values[r] = static_cast<double>(*code);
    }
  }
  return out;
}

// Inverse of encode() for encoded columns: restores category strings from
// codes via the encoding's inverse map.
inline Dataset decode(const Dataset& dataset) {
  Dataset out = dataset;
  for (std::size_t i = 0; i < out.schema.size(); ++i) {
    const FeatureSpec& spec = out.schema[i];
    if (!spec.has_encoding()) continue;
    Column& col = out.columns[i];
    for (std::size_t r = 0; r < out.n; ++r) {
      if (col.missing[r] || !std::isfinite(col.values[r])) continue;
      const auto cat = spec.decode_code(static_cast<int>(col.values[r]));
      if (!cat)
        throw EncodingError("feature '" + spec.name + "' row " + std::to_string(r) +
                            ": code " + format_full(col.values[r]) + " has no category");
      col.raw[r] = *cat;
    }
  }
  return out;
}

// Extracts the dense p x q matrix of input features plus the target vector.
// Requires a complete, encoded dataset.
inline FeatureMatrix feature_matrix(const Dataset& dataset) {
  const std::size_t target = dataset.target_index();

  FeatureMatrix m;
  m.rows = dataset.n;
  m.target_name = dataset.schema[target].name;
  std::vector<std::size_t> inputs;
  for (std::size_t i = 0; i < dataset.schema.size(); ++i) {
    if (dataset.schema[i].role != FeatureRole::input) continue;
    inputs.push_back(i);
    m.feature_names.push_back(dataset.schema[i].name);
  }
  m.cols = inputs.size();
  m.values.assign(m.rows * m.cols, 0.0);
  m.target.assign(m.rows, 0);

  for (std::size_t r = 0; r < dataset.n; ++r) {
    for (std::size_t c = 0; c < inputs.size(); ++c) {
      const Column& col = dataset.columns[inputs[c]];
      const FeatureSpec& spec = dataset.schema[inputs[c]];
      if (col.missing[r])
        throw IncompleteDataError("feature '" + spec.name + "' row " + std::to_string(r) +
                                  " is missing; run drop_missing first");
      const double v = col.values[r];
      if (!std::isfinite(v))
        throw EncodingError("feature '" + spec.name + "' row " + std::to_string(r) +
                            " holds unencoded text '" + col.raw[r] + "'; run encode first");
      if (spec.has_encoding() && !spec.code_in_codomain(v))
        throw EncodingError("feature '" + spec.name + "' row " + std::to_string(r) +
                            ": value outside encoding codomain");
      m.at(r, c) = v;
    }
    const Column& tcol = dataset.columns[target];
    if (tcol.missing[r])
      throw IncompleteDataError("target row " + std::to_string(r) +
                                " is missing; run drop_missing first");
    const double t = tcol.values[r];
    if (t != 0.0 && t != 1.0)
      throw SchemaError("target value at row " + std::to_string(r) + " is not 0/1");
    m.target[r] = static_cast<int>(t);
  }
  return m;
}

// Writes a dataset back out as CSV in schema column order. Numeric cells are
// written at full precision; missing cells become empty fields.
inline void write_dataset_csv(std::ostream& out, const Dataset& dataset) {
  std::vector<std::string> header;
  for (const auto& spec : dataset.schema) header.push_back(spec.name);
  write_csv_row(out, header);
  std::vector<std::string> cells(dataset.schema.size());
  for (std::size_t r = 0; r < dataset.n; ++r) {
    for (std::size_t c = 0; c < dataset.columns.size(); ++c) {
      const Column& col = dataset.columns[c];
      if (col.missing[r]) cells[c].clear();
      else if (std::isfinite(col.values[r])) cells[c] = format_full(col.values[r]);
      else cells[c] = col.raw[r];
    }
    write_csv_row(out, cells);
  }
}

// Row subset in the given order; shared by the preprocessing operations.
inline Dataset take_rows(const Dataset& dataset, const std::vector<std::size_t>& rows) {
  Dataset out;
  out.schema = dataset.schema;
  out.n = rows.size();
  out.columns.resize(dataset.columns.size());
  for (std::size_t i = 0; i < dataset.columns.size(); ++i) {
    const Column& src = dataset.columns[i];
    Column& dst = out.columns[i];
    dst.values.reserve(rows.size());
    dst.raw.reserve(rows.size());
    dst.missing.reserve(rows.size());
    for (std::size_t r : rows) {
      dst.values.push_back(src.values[r]);
      dst.raw.push_back(src.raw[r]);
      dst.missing.push_back(src.missing[r]);
    }
  }
  return out;
}

}  // namespace tabml

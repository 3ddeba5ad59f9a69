#pragma once

#include <algorithm>
#include <cctype>
#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tabml/error.hpp"

namespace tabml {

enum class FeatureKind { continuous, binary, categorical };
enum class FeatureRole { input, target, ignore };

inline std::string to_string(FeatureKind k) {
  switch (k) {
    case FeatureKind::continuous: return "continuous";
    case FeatureKind::binary: return "binary";
    case FeatureKind::categorical: return "categorical";
  }
  return "?";
}

inline std::string to_string(FeatureRole r) {
  switch (r) {
    case FeatureRole::input: return "input";
    case FeatureRole::target: return "target";
    case FeatureRole::ignore: return "ignore";
  }
  return "?";
}

// Lowercases, trims, and maps '-' to '_' so that category strings match
// regardless of the cosmetic differences between dataset exports
// ("Self-employed" vs "self_employed", "Male" vs "male").
inline std::string normalize_category(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  std::string out;
  out.reserve(e - b);
  for (std::size_t i = b; i < e; ++i) {
    char c = s[i];
    if (c == '-') c = '_';
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

// Cell strings treated as absent values. Dataset exports are inconsistent
// about how they spell a hole.
inline bool is_missing_marker(const std::string& cell) {
  const std::string n = normalize_category(cell);
  return n.empty() || n == "na" || n == "n/a" || n == "null" || n == "nan";
}

struct FeatureSpec {
  std::string name;
  FeatureKind kind = FeatureKind::continuous;
  FeatureRole role = FeatureRole::input;
  // Ordered category -> code map; empty when the column is plain numeric.
  std::vector<std::pair<std::string, int>> encoding;

  bool has_encoding() const { return !encoding.empty(); }

  std::optional<int> encode_category(const std::string& raw) const {
    const std::string key = normalize_category(raw);
    for (const auto& [cat, code] : encoding) {
      if (cat == key) return code;
    }
    return std::nullopt;
  }

  std::optional<std::string> decode_code(int code) const {
    for (const auto& [cat, c] : encoding) {
      if (c == code) return cat;
    }
    return std::nullopt;
  }

  bool code_in_codomain(double v) const {
    for (const auto& [cat, code] : encoding) {
      if (static_cast<double>(code) == v) return true;
    }
    return false;
  }
};

using Schema = std::vector<FeatureSpec>;

// Checks the schema invariants: unique names, injective encodings, and
// exactly one binary target.
inline void validate_schema(const Schema& schema) {
  if (schema.empty()) throw SchemaError("schema is empty");
  std::size_t targets = 0;
  for (const auto& spec : schema) {
    if (spec.name.empty()) throw SchemaError("schema has a feature with an empty name");
    for (const auto& other : schema) {
      if (&other != &spec && other.name == spec.name)
        throw SchemaError("duplicate feature name in schema: " + spec.name);
    }
    for (std::size_t i = 0; i < spec.encoding.size(); ++i) {
      for (std::size_t j = i + 1; j < spec.encoding.size(); ++j) {
        if (spec.encoding[i].second == spec.encoding[j].second)
          throw SchemaError("encoding for '" + spec.name + "' is not injective: categories '" +
                            spec.encoding[i].first + "' and '" + spec.encoding[j].first +
                            "' share a code");
        if (spec.encoding[i].first == spec.encoding[j].first)
          throw SchemaError("encoding for '" + spec.name + "' repeats category '" +
                            spec.encoding[i].first + "'");
      }
    }
    if (spec.role == FeatureRole::target) {
      ++targets;
      if (spec.kind != FeatureKind::binary)
        throw SchemaError("target feature '" + spec.name + "' must be binary");
    }
  }
  if (targets != 1)
    throw SchemaError("schema must have exactly one target feature, found " +
                      std::to_string(targets));
}

inline std::size_t input_feature_count(const Schema& schema) {
  std::size_t q = 0;
  for (const auto& s : schema)
    if (s.role == FeatureRole::input) ++q;
  return q;
}

namespace detail {
inline std::vector<std::pair<std::string, int>> yes_no() {
  return {{"no", 0}, {"yes", 1}};
}
}  // namespace detail

// Stroke dataset schema: eleven clinical input features, binary target
// "stroke", and a patient id column that never reaches the feature matrix.
inline const Schema& cvd_schema() {
  static const Schema schema = [] {
    Schema s;
    s.push_back({"id", FeatureKind::continuous, FeatureRole::ignore, {}});
    s.push_back({"gender", FeatureKind::categorical, FeatureRole::input,
                 {{"male", 0}, {"female", 1}, {"other", 2}}});
    s.push_back({"age", FeatureKind::continuous, FeatureRole::input, {}});
    s.push_back({"hypertension", FeatureKind::binary, FeatureRole::input, detail::yes_no()});
    s.push_back({"heart_disease", FeatureKind::binary, FeatureRole::input, detail::yes_no()});
    s.push_back({"ever_married", FeatureKind::binary, FeatureRole::input, detail::yes_no()});
    s.push_back({"work_type", FeatureKind::categorical, FeatureRole::input,
                 {{"children", 0},
                  {"govt_job", 1},
                  {"never_worked", 2},
                  {"private", 3},
                  {"self_employed", 4}}});
    s.push_back({"residence_type", FeatureKind::binary, FeatureRole::input,
                 {{"rural", 0}, {"urban", 1}}});
    s.push_back({"avg_glucose_level", FeatureKind::continuous, FeatureRole::input, {}});
    s.push_back({"bmi", FeatureKind::continuous, FeatureRole::input, {}});
    s.push_back({"smoking_status", FeatureKind::categorical, FeatureRole::input,
                 {{"never smoked", 0}, {"formerly smoked", 1}, {"smokes", 2}}});
    s.push_back({"stroke", FeatureKind::binary, FeatureRole::target, detail::yes_no()});
    validate_schema(s);
    return s;
  }();
  return schema;
}

// Framingham cohort schema: fifteen numeric input features and the binary
// ten-year coronary heart disease target.
inline const Schema& framingham_schema() {
  static const Schema schema = [] {
    Schema s;
    s.push_back({"male", FeatureKind::binary, FeatureRole::input, {}});
    s.push_back({"age", FeatureKind::continuous, FeatureRole::input, {}});
    s.push_back({"education", FeatureKind::continuous, FeatureRole::input, {}});
    s.push_back({"currentSmoker", FeatureKind::binary, FeatureRole::input, {}});
    s.push_back({"cigsPerDay", FeatureKind::continuous, FeatureRole::input, {}});
    s.push_back({"BPMeds", FeatureKind::binary, FeatureRole::input, {}});
    s.push_back({"prevalentStroke", FeatureKind::binary, FeatureRole::input, {}});
    s.push_back({"prevalentHyp", FeatureKind::binary, FeatureRole::input, {}});
    s.push_back({"diabetes", FeatureKind::binary, FeatureRole::input, {}});
    s.push_back({"totChol", FeatureKind::continuous, FeatureRole::input, {}});
    s.push_back({"sysBP", FeatureKind::continuous, FeatureRole::input, {}});
    s.push_back({"diaBP", FeatureKind::continuous, FeatureRole::input, {}});
    s.push_back({"BMI", FeatureKind::continuous, FeatureRole::input, {}});
    s.push_back({"heartRate", FeatureKind::continuous, FeatureRole::input, {}});
    s.push_back({"glucose", FeatureKind::continuous, FeatureRole::input, {}});
    s.push_back({"TenYearCHD", FeatureKind::binary, FeatureRole::target, detail::yes_no()});
    validate_schema(s);
    return s;
  }();
  return schema;
}

inline std::optional<Schema> preset_schema(const std::string& name) {
  const std::string n = normalize_category(name);
  if (n == "cvd") return cvd_schema();
  if (n == "framingham") return framingham_schema();
  return std::nullopt;
}

// --- schema file format (versioned JSON) ---
//
// {
//   "version": 1,
//   "features": [
//     {"name": "age", "kind": "continuous", "role": "input"},
//     {"name": "gender", "kind": "categorical", "role": "input",
//      "encoding": [["male", 0], ["female", 1]]}
//   ]
// }

inline Schema schema_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("version") || !doc.contains("features"))
    throw SchemaError("schema file must be an object with 'version' and 'features'");
  if (doc.at("version").get<int>() != 1)
    throw SchemaError("unsupported schema file version " + doc.at("version").dump());
  Schema schema;
  for (const auto& f : doc.at("features")) {
    FeatureSpec spec;
    spec.name = f.at("name").get<std::string>();
    const std::string kind = f.at("kind").get<std::string>();
    if (kind == "continuous") spec.kind = FeatureKind::continuous;
    else if (kind == "binary") spec.kind = FeatureKind::binary;
    else if (kind == "categorical") spec.kind = FeatureKind::categorical;
    else throw SchemaError("unknown feature kind '" + kind + "' for '" + spec.name + "'");
    const std::string role = f.value("role", std::string("input"));
    if (role == "input") spec.role = FeatureRole::input;
    else if (role == "target") spec.role = FeatureRole::target;
    else if (role == "ignore") spec.role = FeatureRole::ignore;
    else throw SchemaError("unknown feature role '" + role + "' for '" + spec.name + "'");
    if (f.contains("encoding")) {
      for (const auto& pair : f.at("encoding")) {
        spec.encoding.emplace_back(normalize_category(pair.at(0).get<std::string>()),
                                   pair.at(1).get<int>());
      }
    }
    schema.push_back(std::move(spec));
  }
  validate_schema(schema);
  return schema;
}

inline nlohmann::json schema_to_json(const Schema& schema) {
  nlohmann::json features = nlohmann::json::array();
  for (const auto& spec : schema) {
    nlohmann::json f;
    f["name"] = spec.name;
    f["kind"] = to_string(spec.kind);
    f["role"] = to_string(spec.role);
    if (spec.has_encoding()) {
      nlohmann::json enc = nlohmann::json::array();
      for (const auto& [cat, code] : spec.encoding) enc.push_back({cat, code});
      f["encoding"] = enc;
    }
    features.push_back(std::move(f));
  }
  return nlohmann::json{{"version", 1}, {"features", features}};
}

inline Schema load_schema_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open schema file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError("schema file " + path + " is not valid JSON: " + e.what());
  }
  return schema_from_json(doc);
}

inline void save_schema_file(const std::string& path, const Schema& schema) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write schema file: " + path);
  out << schema_to_json(schema).dump(2) << '\n';
}

}  // namespace tabml

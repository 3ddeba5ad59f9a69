#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "tabml/csv.hpp"
#include "tabml/dataset.hpp"
#include "tabml/error.hpp"
#include "tabml/featstats.hpp"
#include "tabml/metrics.hpp"
#include "tabml/models/registry.hpp"
#include "tabml/preprocess.hpp"
#include "tabml/synthetic.hpp"

namespace tabml::bench {

enum class FeatureMode { full, reduced, both };

inline std::string to_string(FeatureMode m) {
  switch (m) {
    case FeatureMode::full: return "full";
    case FeatureMode::reduced: return "reduced";
    case FeatureMode::both: return "both";
  }
  return "?";
}

inline FeatureMode feature_mode_from(const std::string& s) {
  if (s == "full") return FeatureMode::full;
  if (s == "reduced") return FeatureMode::reduced;
  if (s == "both") return FeatureMode::both;
  throw ParameterError("unknown feature mode '" + s + "' (full, reduced, both)");
}

struct ExperimentConfig {
  std::string dataset;   // preset name, or a label for custom files
  std::string csv_path;  // empty when synthetic
  Schema schema;
  bool synthetic = false;
  std::uint64_t seed = 42;
  double split_ratio = 0.8;
  std::size_t k = 0;  // 0 picks the preset default (cvd 4, framingham 5)
  FeatureMode feature_mode = FeatureMode::full;
  bool select_on_train = false;
  std::vector<std::string> models = models::core_model_names();
  std::map<std::string, models::Hyperparams> overrides;
  int jobs = 1;  // worker threads for model fitting; 0 = hardware
  bool keep_predictions = false;  // retain per-model test predictions/scores
};

struct EvalRow {
  std::string model;
  double accuracy = 0.0;
  double balanced_accuracy = 0.0;
  double roc_auc = 0.0;        // from decision scores
  double roc_auc_label = 0.0;  // from hard predictions
  double f1 = 0.0;
  double fit_seconds = 0.0;
  double predict_seconds = 0.0;
  std::string score_kind;
  std::vector<std::string> flags;
  std::string status = "ok";
  // Filled only when the config asks for prediction retention.
  std::vector<int> predictions;
  std::vector<double> scores;

  bool ok() const { return status == "ok"; }
};

struct ReportMeta {
  std::string dataset;
  std::string feature_mode;
  std::uint64_t seed = 0;
  double split_ratio = 0.0;
  std::size_t k = 0;
  bool select_on_train = false;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  std::vector<std::string> feature_names;
  double total_wall_seconds = 0.0;
  double models_per_second = 0.0;
};

struct EvalReport {
  ReportMeta meta;
  std::vector<EvalRow> rows;
};

struct ComparisonRow {
  std::string model;
  std::optional<EvalRow> full;
  std::optional<EvalRow> reduced;
};

struct ComparisonReport {
  std::string dataset;
  std::uint64_t seed = 0;
  std::vector<ComparisonRow> rows;
  double best_full_accuracy = 0.0;
  std::string best_full_model;
  double best_reduced_accuracy = 0.0;
  std::string best_reduced_model;
  double total_fit_seconds_full = 0.0;
  double total_fit_seconds_reduced = 0.0;
};

inline std::size_t default_k_for(const std::string& dataset, std::size_t q) {
  const std::string n = normalize_category(dataset);
  if (n == "cvd") return 4;
  if (n == "framingham") return 5;
  return std::max<std::size_t>(1, q / 2);
}

namespace detail {

inline std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

inline EvalRow evaluate_model(const std::string& name, const ExperimentConfig& config,
                              const FeatureMatrix& train, const FeatureMatrix& test) {
  EvalRow row;
  row.model = name;
  try {
    models::Hyperparams overrides;
    const auto it = config.overrides.find(name);
    if (it != config.overrides.end()) overrides = it->second;
    const models::ModelSpec spec = models::make_spec(name, overrides, config.seed);
    const models::RegistryEntry& entry = models::registry_entry(name);

    const models::TrainedModel model = models::fit(spec, train);
    row.fit_seconds = model.fit_seconds;
    row.score_kind = model.score_kind;

    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<int> preds = model.predict(test);
    row.predict_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::vector<double> scores;
    if (entry.supports_scores) {
      scores = model.decision_scores(test);
    } else {
      scores.assign(preds.begin(), preds.end());
      row.flags.push_back("score_fallback");
    }

    const ConfusionMatrix cm = confusion(test.target, preds);
    row.accuracy = accuracy(cm);
    const MetricValue bal = balanced_accuracy(cm);
    row.balanced_accuracy = bal.value;
    if (bal.degenerate) row.flags.push_back("degenerate_balanced_accuracy");
    const MetricValue f = f1(cm);
    row.f1 = f.value;
    if (f.degenerate) row.flags.push_back("degenerate_f1");
    if (precision(cm).degenerate) row.flags.push_back("degenerate_precision");
    if (recall(cm).degenerate) row.flags.push_back("degenerate_recall");

    row.roc_auc = roc_auc(test.target, scores);
    const std::vector<double> label_scores(preds.begin(), preds.end());
    row.roc_auc_label = roc_auc(test.target, label_scores);
  } catch (const std::exception& e) {
    row.status = e.what();
  }
  return row;
}

}  // namespace detail

// Runs the experiment pipeline for one feature mode: load, encode, drop
// nulls, seeded down-sampling to balance, optional ANOVA-F selection
// (computed on the balanced set before splitting, like the original
// procedure; select_on_train switches to leakage-free selection on the
// training rows only), stratified 80/20 split, then fit/predict/score every
// requested model. A failing model is recorded in its row; the run goes on.
inline EvalReport run_experiment(const ExperimentConfig& config) {
  if (config.feature_mode == FeatureMode::both)
    throw ParameterError("run_experiment handles one mode; use run_both for 'both'");
  if (config.models.empty()) throw ConfigError("experiment model list is empty");
  if (config.dataset.empty()) throw ConfigError("experiment has no dataset");

  const auto wall0 = std::chrono::steady_clock::now();

  Dataset raw;
  if (config.synthetic) {
    raw = synthetic::dataset_for_preset(config.dataset, derive_seed(config.seed, 0x5d));
  } else {
    Schema schema = config.schema;
    if (schema.empty()) {
      const auto preset = preset_schema(config.dataset);
      if (!preset) throw ConfigError("no schema for dataset '" + config.dataset + "'");
      schema = *preset;
    }
    raw = load_csv(config.csv_path, schema);
  }

  const Dataset complete = drop_missing(encode(raw));
  const Dataset balanced = downsample_balance(complete, config.seed);
  const SplitPair split = stratified_split(balanced, config.split_ratio, config.seed);

  FeatureMatrix train = feature_matrix(split.train);
  FeatureMatrix test = feature_matrix(split.test);

  EvalReport report;
  report.meta.dataset = config.dataset;
  report.meta.feature_mode = to_string(config.feature_mode);
  report.meta.seed = config.seed;
  report.meta.split_ratio = config.split_ratio;
  report.meta.select_on_train = config.select_on_train;

  if (config.feature_mode == FeatureMode::reduced) {
    const std::size_t q = train.cols;
    const std::size_t k = config.k ? config.k : default_k_for(config.dataset, q);
    const FeatureScores scores = config.select_on_train
                                     ? select_k_best(train, k)
                                     : select_k_best(feature_matrix(balanced), k);
    train = project(train, scores.selected);
    test = project(test, scores.selected);
    report.meta.k = k;
  }

  report.meta.n_train = train.rows;
  report.meta.n_test = test.rows;
  report.meta.feature_names = train.feature_names;

  report.rows.resize(config.models.size());
  const std::size_t jobs =
      config.jobs > 0 ? static_cast<std::size_t>(config.jobs)
                      : std::max<std::size_t>(1, std::thread::hardware_concurrency());
  if (jobs <= 1 || config.models.size() <= 1) {
    for (std::size_t i = 0; i < config.models.size(); ++i)
      report.rows[i] = detail::evaluate_model(config.models[i], config, train, test);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    const std::size_t worker_count = std::min(jobs, config.models.size());
    workers.reserve(worker_count);
    for (std::size_t w = 0; w < worker_count; ++w) {
      workers.emplace_back([&] {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= config.models.size()) return;
          report.rows[i] = detail::evaluate_model(config.models[i], config, train, test);
        }
      });
    }
    for (auto& t : workers) t.join();
  }

  std::sort(report.rows.begin(), report.rows.end(), [](const EvalRow& a, const EvalRow& b) {
    if (a.ok() != b.ok()) return a.ok();
    if (a.accuracy != b.accuracy) return a.accuracy > b.accuracy;
    return a.model < b.model;
  });

  report.meta.total_wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
  if (report.meta.total_wall_seconds > 0.0)
    report.meta.models_per_second =
        static_cast<double>(report.rows.size()) / report.meta.total_wall_seconds;
  return report;
}

// Pairs a full run with a reduced run over the same data and seed.
inline ComparisonReport compare(const EvalReport& full, const EvalReport& reduced) {
  if (full.meta.dataset != reduced.meta.dataset)
    throw ComparisonError("reports cover different datasets: '" + full.meta.dataset + "' vs '" +
                          reduced.meta.dataset + "'");
  if (full.meta.seed != reduced.meta.seed)
    throw ComparisonError("reports used different seeds");

  ComparisonReport cmp;
  cmp.dataset = full.meta.dataset;
  cmp.seed = full.meta.seed;

  std::vector<std::string> order;
  for (const auto& row : full.rows) order.push_back(row.model);
  for (const auto& row : reduced.rows)
    if (std::find(order.begin(), order.end(), row.model) == order.end())
      order.push_back(row.model);

  const auto find_row = [](const EvalReport& report,
                           const std::string& name) -> std::optional<EvalRow> {
    for (const auto& row : report.rows)
      if (row.model == name) return row;
    return std::nullopt;
  };

  for (const auto& name : order) {
    ComparisonRow row;
    row.model = name;
    row.full = find_row(full, name);
    row.reduced = find_row(reduced, name);
    cmp.rows.push_back(std::move(row));
  }

  for (const auto& row : full.rows) {
    if (!row.ok()) continue;
    cmp.total_fit_seconds_full += row.fit_seconds;
    if (row.accuracy > cmp.best_full_accuracy) {
      cmp.best_full_accuracy = row.accuracy;
      cmp.best_full_model = row.model;
    }
  }
  for (const auto& row : reduced.rows) {
    if (!row.ok()) continue;
    cmp.total_fit_seconds_reduced += row.fit_seconds;
    if (row.accuracy > cmp.best_reduced_accuracy) {
      cmp.best_reduced_accuracy = row.accuracy;
      cmp.best_reduced_model = row.model;
    }
  }
  return cmp;
}

// --- report emission ---

inline const std::vector<std::string>& report_header() {
  static const std::vector<std::string> header = {
      "Model",          "Accuracy",    "Balanced Accuracy", "ROC AUC",
      "F1-Score",       "ROC AUC Label", "Fit Seconds",     "Predict Seconds",
      "Score Kind",     "Flags",       "Status"};
  return header;
}

// Column indices of the wall-clock fields, excluded from determinism diffs.
inline const std::vector<std::size_t>& report_timing_columns() {
  static const std::vector<std::size_t> cols = {6, 7};
  return cols;
}

inline CsvTable report_to_csv(const EvalReport& report) {
  CsvTable table;
  table.header = report_header();
  for (const auto& row : report.rows) {
    table.rows.push_back({row.model, format_full(row.accuracy),
                          format_full(row.balanced_accuracy), format_full(row.roc_auc),
                          format_full(row.f1), format_full(row.roc_auc_label),
                          format_full(row.fit_seconds), format_full(row.predict_seconds),
                          row.score_kind, detail::join(row.flags, ";"), row.status});
  }
  return table;
}

inline EvalReport report_from_csv(const CsvTable& table) {
  if (table.header != report_header()) throw ParameterError("not a benchmark report CSV");
  EvalReport report;
  for (const auto& cells : table.rows) {
    if (cells.size() != report_header().size())
      throw ParameterError("malformed benchmark report row");
    EvalRow row;
    row.model = cells[0];
    row.accuracy = std::strtod(cells[1].c_str(), nullptr);
    row.balanced_accuracy = std::strtod(cells[2].c_str(), nullptr);
    row.roc_auc = std::strtod(cells[3].c_str(), nullptr);
    row.f1 = std::strtod(cells[4].c_str(), nullptr);
    row.roc_auc_label = std::strtod(cells[5].c_str(), nullptr);
    row.fit_seconds = std::strtod(cells[6].c_str(), nullptr);
    row.predict_seconds = std::strtod(cells[7].c_str(), nullptr);
    row.score_kind = cells[8];
    std::istringstream flags(cells[9]);
    std::string flag;
    while (std::getline(flags, flag, ';'))
      if (!flag.empty()) row.flags.push_back(flag);
    row.status = cells[10];
    report.rows.push_back(std::move(row));
  }
  return report;
}

inline std::string report_to_markdown(const EvalReport& report) {
  std::ostringstream out;
  out << "| Model | Accuracy | Balanced Accuracy | ROC AUC | F1-Score | ROC AUC Label "
         "| Fit Seconds | Predict Seconds | Score Kind | Flags | Status |\n";
  out << "|---|---|---|---|---|---|---|---|---|---|---|\n";
  for (const auto& row : report.rows) {
    out << "| " << row.model << " | " << format_fixed(row.accuracy, 2) << " | "
        << format_fixed(row.balanced_accuracy, 2) << " | " << format_fixed(row.roc_auc, 2)
        << " | " << format_fixed(row.f1, 2) << " | " << format_fixed(row.roc_auc_label, 2)
        << " | " << format_fixed(row.fit_seconds, 4) << " | "
        << format_fixed(row.predict_seconds, 4) << " | " << row.score_kind << " | "
        << detail::join(row.flags, ";") << " | " << row.status << " |\n";
  }
  return out.str();
}

namespace detail {

inline std::vector<std::vector<std::string>> comparison_table_rows(const ComparisonReport& cmp) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& row : cmp.rows) {
    const bool both = row.full && row.reduced && row.full->ok() && row.reduced->ok();
    std::string status = "ok";
    if (!row.full) status = "absent from full run";
    else if (!row.reduced) status = "absent from reduced run";
    else if (!row.full->ok()) status = "full: " + row.full->status;
    else if (!row.reduced->ok()) status = "reduced: " + row.reduced->status;
    rows.push_back(
        {row.model, row.full && row.full->ok() ? format_full(row.full->accuracy) : "",
         row.reduced && row.reduced->ok() ? format_full(row.reduced->accuracy) : "",
         both ? format_full(row.reduced->accuracy - row.full->accuracy) : "",
         row.full && row.full->ok() ? format_full(row.full->f1) : "",
         row.reduced && row.reduced->ok() ? format_full(row.reduced->f1) : "",
         row.full && row.full->ok() ? format_full(row.full->roc_auc) : "",
         row.reduced && row.reduced->ok() ? format_full(row.reduced->roc_auc) : "",
         row.full && row.full->ok() ? format_full(row.full->fit_seconds) : "",
         row.reduced && row.reduced->ok() ? format_full(row.reduced->fit_seconds) : "", status});
  }
  return rows;
}

}  // namespace detail

inline CsvTable comparison_to_csv(const ComparisonReport& cmp) {
  CsvTable table;
  table.header = {"Model",        "Accuracy Full", "Accuracy Reduced", "Accuracy Delta",
                  "F1 Full",      "F1 Reduced",    "ROC AUC Full",     "ROC AUC Reduced",
                  "Fit Seconds Full", "Fit Seconds Reduced", "Status"};
  table.rows = detail::comparison_table_rows(cmp);
  return table;
}

inline std::string comparison_to_markdown(const ComparisonReport& cmp) {
  std::ostringstream out;
  out << "# Feature-selection comparison: " << cmp.dataset << " (seed " << cmp.seed << ")\n\n";
  out << "| Model | Acc full | Acc reduced | Delta | F1 full | F1 reduced | AUC full | "
         "AUC reduced | Fit s full | Fit s reduced |\n";
  out << "|---|---|---|---|---|---|---|---|---|---|\n";
  for (const auto& row : cmp.rows) {
    const auto cell = [](const std::optional<EvalRow>& r, double EvalRow::* field) {
      return r && r->ok() ? format_fixed((*r).*field, 2) : std::string("-");
    };
    const bool both = row.full && row.reduced && row.full->ok() && row.reduced->ok();
    out << "| " << row.model << " | " << cell(row.full, &EvalRow::accuracy) << " | "
        << cell(row.reduced, &EvalRow::accuracy) << " | "
        << (both ? format_fixed(row.reduced->accuracy - row.full->accuracy, 2) : "-") << " | "
        << cell(row.full, &EvalRow::f1) << " | " << cell(row.reduced, &EvalRow::f1) << " | "
        << cell(row.full, &EvalRow::roc_auc) << " | " << cell(row.reduced, &EvalRow::roc_auc)
        << " | "
        << (row.full && row.full->ok() ? format_fixed(row.full->fit_seconds, 4) : "-") << " | "
        << (row.reduced && row.reduced->ok() ? format_fixed(row.reduced->fit_seconds, 4) : "-")
        << " |\n";
  }
  out << "\n";
  out << "Best full-set accuracy: " << format_fixed(cmp.best_full_accuracy, 2) << " ("
      << cmp.best_full_model << ")\n\n";
  out << "Best reduced-set accuracy: " << format_fixed(cmp.best_reduced_accuracy, 2) << " ("
      << cmp.best_reduced_model << ")\n\n";
  out << "Total fit time: " << format_fixed(cmp.total_fit_seconds_full, 4) << " s (full) vs "
      << format_fixed(cmp.total_fit_seconds_reduced, 4) << " s (reduced)\n";
  return out.str();
}

// Renders a report in the requested format ("csv" or "markdown").
inline std::string emit_report(const EvalReport& report, const std::string& format) {
  if (format == "csv") {
    std::ostringstream out;
    write_csv(out, report_to_csv(report));
    return out.str();
  }
  if (format == "markdown") return report_to_markdown(report);
  throw ParameterError("unknown report format '" + format + "' (csv, markdown)");
}

inline std::string emit_report(const ComparisonReport& report, const std::string& format) {
  if (format == "csv") {
    std::ostringstream out;
    write_csv(out, comparison_to_csv(report));
    return out.str();
  }
  if (format == "markdown") return comparison_to_markdown(report);
  throw ParameterError("unknown report format '" + format + "' (csv, markdown)");
}

struct BothRuns {
  EvalReport full;
  EvalReport reduced;
  ComparisonReport comparison;
};

inline BothRuns run_both(const ExperimentConfig& config) {
  ExperimentConfig full_config = config;
  full_config.feature_mode = FeatureMode::full;
  ExperimentConfig reduced_config = config;
  reduced_config.feature_mode = FeatureMode::reduced;
  BothRuns runs;
  runs.full = run_experiment(full_config);
  runs.reduced = run_experiment(reduced_config);
  runs.comparison = compare(runs.full, runs.reduced);
  return runs;
}

}  // namespace tabml::bench

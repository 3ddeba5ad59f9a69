#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tabml/bench.hpp"
#include "tabml/dataset.hpp"
#include "tabml/featstats.hpp"
#include "tabml/preprocess.hpp"
#include "tabml/synthetic.hpp"

namespace tabml::cli {

inline constexpr const char* kVersion = "1.0.0";

// Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.
enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kInternal = 3 };

namespace detail {

inline std::string env_or(const char* name, const std::string& fallback) {
  const char* v = std::getenv(name);
  return v && *v ? v : fallback;
}

struct Options {
  std::string subcommand;
  std::uint64_t seed = 42;
  std::string config_path;
  std::string out_dir = env_or("TABML_OUT_DIR", "tabml_out");
  std::string data_dir = env_or("TABML_DATA_DIR", "data");
  std::string dataset = "cvd";
  std::string schema_path;
  bool synthetic = false;
  bool quiet = false;

  std::size_t k = 0;  // 0 = preset default
  double split_ratio = 0.8;
  std::string mode = "both";
  std::vector<std::string> models;
  std::vector<std::string> params;  // model.key=value
  bool select_on_train = false;
  bool serial = false;
  int jobs = 0;
  bool list_models = false;

  std::string run_dir;           // report subcommand
  std::string format = "markdown";
};

inline void log(const Options& opt, std::ostream& err, const std::string& message) {
  if (!opt.quiet) err << "[tabml] " << message << "\n";
}

inline models::HyperValue parse_hyper_value(const std::string& text) {
  if (text == "true") return true;
  if (text == "false") return false;
  const char* begin = text.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end != begin && *end == '\0') return v;
  return text;
}

inline std::map<std::string, models::Hyperparams> parse_param_flags(
    const std::vector<std::string>& params) {
  std::map<std::string, models::Hyperparams> overrides;
  for (const auto& p : params) {
    const auto eq = p.find('=');
    const auto dot = p.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq || dot == 0)
      throw ParameterError("bad --param '" + p + "', expected model.key=value");
    const std::string model = p.substr(0, dot);
    const std::string key = p.substr(dot + 1, eq - dot - 1);
    overrides[model][key] = parse_hyper_value(p.substr(eq + 1));
  }
  return overrides;
}

// The structured config file overrides any flag of the same meaning.
inline void apply_config_file(Options& opt) {
  if (opt.config_path.empty()) return;
  std::ifstream in(opt.config_path);
  if (!in) throw IoError("cannot open config file: " + opt.config_path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError("config file " + opt.config_path + " is not valid JSON: " + e.what());
  }
  if (!doc.is_object()) throw ParameterError("config file must hold a JSON object");

  if (doc.contains("seed")) opt.seed = doc["seed"].get<std::uint64_t>();
  if (doc.contains("out_dir")) opt.out_dir = doc["out_dir"].get<std::string>();
  if (doc.contains("data_dir")) opt.data_dir = doc["data_dir"].get<std::string>();
  if (doc.contains("dataset")) opt.dataset = doc["dataset"].get<std::string>();
  if (doc.contains("schema")) opt.schema_path = doc["schema"].get<std::string>();
  if (doc.contains("synthetic")) opt.synthetic = doc["synthetic"].get<bool>();
  if (doc.contains("quiet")) opt.quiet = doc["quiet"].get<bool>();
  if (doc.contains("k")) opt.k = doc["k"].get<std::size_t>();
  if (doc.contains("split_ratio")) opt.split_ratio = doc["split_ratio"].get<double>();
  if (doc.contains("mode")) opt.mode = doc["mode"].get<std::string>();
  if (doc.contains("select_on_train")) opt.select_on_train = doc["select_on_train"].get<bool>();
  if (doc.contains("serial")) opt.serial = doc["serial"].get<bool>();
  if (doc.contains("jobs")) opt.jobs = doc["jobs"].get<int>();
  if (doc.contains("format")) opt.format = doc["format"].get<std::string>();
  if (doc.contains("models")) {
    opt.models.clear();
    for (const auto& m : doc["models"]) opt.models.push_back(m.get<std::string>());
  }
  if (doc.contains("params")) {
    opt.params.clear();
    for (const auto& [model, kv] : doc["params"].items())
      for (const auto& [key, value] : kv.items()) {
        std::string text;
        if (value.is_string()) text = value.get<std::string>();
        else text = value.dump();
        opt.params.push_back(model + "." + key + "=" + text);
      }
  }
}

struct ResolvedData {
  std::string label;
  std::string csv_path;  // empty when synthetic
  Schema schema;
  bool synthetic = false;
};

inline std::string preset_filename(const std::string& preset) {
  const std::string n = normalize_category(preset);
  if (n == "cvd") return "healthcare-dataset-stroke-data.csv";
  if (n == "framingham") return "framingham.csv";
  return "";
}

inline ResolvedData resolve_dataset(const Options& opt) {
  ResolvedData data;
  const auto preset = preset_schema(opt.dataset);
  if (opt.synthetic) {
    if (!preset)
      throw ParameterError("--synthetic requires a preset dataset (cvd or framingham), got '" +
                           opt.dataset + "'");
    data.label = normalize_category(opt.dataset);
    data.schema = *preset;
    data.synthetic = true;
    return data;
  }
  if (preset) {
    data.label = normalize_category(opt.dataset);
    data.schema = *preset;
    const std::filesystem::path path =
        std::filesystem::path(opt.data_dir) / preset_filename(opt.dataset);
    if (!std::filesystem::exists(path)) {
      const std::string kaggle = data.label == "cvd"
                                     ? "the Kaggle healthcare stroke dataset "
                                       "(healthcare-dataset-stroke-data.csv)"
                                     : "the Kaggle Framingham heart study export "
                                       "(framingham.csv)";
      throw IoError("dataset file not found: " + path.string() + "\nDownload " + kaggle +
                    " and place it there (or set --data-dir / TABML_DATA_DIR), or pass "
                    "--synthetic to run on a generated surrogate.");
    }
    data.csv_path = path.string();
    return data;
  }
  // A path to a custom CSV; a schema file is required.
  if (opt.schema_path.empty())
    throw ParameterError("custom dataset '" + opt.dataset + "' needs --schema <file>");
  if (!std::filesystem::exists(opt.dataset))
    throw IoError("dataset file not found: " + opt.dataset);
  data.label = std::filesystem::path(opt.dataset).stem().string();
  data.csv_path = opt.dataset;
  data.schema = load_schema_file(opt.schema_path);
  return data;
}

inline Dataset load_raw(const ResolvedData& data, std::uint64_t seed) {
  if (data.synthetic)
    return synthetic::dataset_for_preset(data.label, derive_seed(seed, 0x5d));
  return load_csv(data.csv_path, data.schema);
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
}

inline nlohmann::json options_json(const Options& opt, const ResolvedData& data) {
  nlohmann::json j;
  j["tool"] = "tabml";
  j["version"] = kVersion;
  j["command"] = opt.subcommand;
  j["dataset"] = data.label;
  j["csv_path"] = data.csv_path;
  j["synthetic"] = data.synthetic;
  j["seed"] = opt.seed;
  j["k"] = opt.k;
  j["split_ratio"] = opt.split_ratio;
  j["mode"] = opt.mode;
  j["models"] = opt.models.empty() ? models::core_model_names() : opt.models;
  j["params"] = nlohmann::json::object();
  for (const auto& [model, kv] : parse_param_flags(opt.params)) {
    nlohmann::json m;
    for (const auto& [key, value] : kv) m[key] = models::hyper_to_string(value);
    j["params"][model] = m;
  }
  j["select_on_train"] = opt.select_on_train;
  j["serial"] = opt.serial;
  j["quiet"] = opt.quiet;
  return j;
}

// run_meta.json records everything needed to reproduce the run; wall-clock
// readings live under "timing" so reproducibility diffs can drop them.
inline void write_run_meta(const Options& opt, const ResolvedData& data,
                           const nlohmann::json& extra, const nlohmann::json& timing) {
  nlohmann::json j = options_json(opt, data);
  for (const auto& [key, value] : extra.items()) j[key] = value;
  j["timing"] = timing;
  write_text_file(std::filesystem::path(opt.out_dir) / "run_meta.json", j.dump(2) + "\n");
}

inline bench::ExperimentConfig experiment_config(const Options& opt, const ResolvedData& data) {
  bench::ExperimentConfig config;
  config.dataset = data.label;
  config.csv_path = data.csv_path;
  config.schema = data.schema;
  config.synthetic = data.synthetic;
  config.seed = opt.seed;
  config.split_ratio = opt.split_ratio;
  config.k = opt.k;
  config.select_on_train = opt.select_on_train;
  if (!opt.models.empty()) config.models = opt.models;
  config.overrides = parse_param_flags(opt.params);
  config.jobs = opt.serial ? 1 : opt.jobs;
  return config;
}

// Balanced pipeline shared by correlate and select.
inline FeatureMatrix balanced_matrix(const Options& opt, const ResolvedData& data,
                                     std::ostream& err) {
  const Dataset raw = load_raw(data, opt.seed);
  const Dataset complete = drop_missing(encode(raw));
  log(opt, err,
      "loaded " + std::to_string(raw.n) + " rows, " + std::to_string(complete.n) +
          " complete after dropping nulls");
  if (complete.n == 0) log(opt, err, "warning: no complete rows remain");
  const Dataset balanced = downsample_balance(complete, opt.seed);
  log(opt, err, "balanced to " + std::to_string(balanced.n) + " rows");
  return feature_matrix(balanced);
}

inline std::string correlations_csv_text(const CorrelationMatrix& cm) {
  CsvTable table;
  table.header.push_back("");
  for (const auto& name : cm.names) table.header.push_back(name);
  for (std::size_t i = 0; i < cm.size; ++i) {
    std::vector<std::string> row;
    row.push_back(cm.names[i]);
    for (std::size_t j = 0; j < cm.size; ++j) row.push_back(format_full(cm.at(i, j)));
    table.rows.push_back(std::move(row));
  }
  std::ostringstream out;
  write_csv(out, table);
  return out.str();
}

inline std::string feature_scores_csv_text(const FeatureScores& scores,
                                           const std::vector<std::string>& names) {
  CsvTable table;
  table.header = {"feature", "f_value"};
  for (std::size_t idx : scores.ranking)
    table.rows.push_back({names[idx], format_full(scores.f_values[idx])});
  std::ostringstream out;
  write_csv(out, table);
  return out.str();
}

inline int cmd_ingest(const Options& opt, std::ostream& out, std::ostream& err) {
  const ResolvedData data = resolve_dataset(opt);
  const Dataset raw = load_raw(data, opt.seed);
  const Dataset complete = drop_missing(encode(raw));
  if (complete.n == 0) log(opt, err, "warning: no complete rows remain");

  std::filesystem::create_directories(opt.out_dir);
  std::ostringstream clean;
  write_dataset_csv(clean, complete);
  write_text_file(std::filesystem::path(opt.out_dir) / "dataset_clean.csv", clean.str());

  std::size_t positives = 0;
  const auto labels = complete.target_labels();
  for (int y : labels) positives += y == 1;
  out << "rows: " << raw.n << "\n";
  out << "complete rows: " << complete.n << "\n";
  out << "class 1: " << positives << "\n";
  out << "class 0: " << complete.n - positives << "\n";

  write_run_meta(opt, data,
                 {{"rows", raw.n},
                  {"complete_rows", complete.n},
                  {"class1", positives},
                  {"class0", complete.n - positives}},
                 nlohmann::json::object());
  log(opt, err, "wrote " + opt.out_dir + "/dataset_clean.csv");
  return kOk;
}

inline int cmd_correlate(const Options& opt, std::ostream& out, std::ostream& err) {
  const ResolvedData data = resolve_dataset(opt);
  const FeatureMatrix fm = balanced_matrix(opt, data, err);
  const CorrelationMatrix cm = pearson_correlation(fm);

  std::filesystem::create_directories(opt.out_dir);
  write_text_file(std::filesystem::path(opt.out_dir) / "correlations.csv",
                  correlations_csv_text(cm));
  for (std::size_t i = 0; i + 1 < cm.size; ++i)
    out << cm.names[i] << "," << format_full(cm.at(i, cm.size - 1)) << "\n";

  write_run_meta(opt, data, {{"n_balanced", fm.rows}}, nlohmann::json::object());
  log(opt, err, "wrote " + opt.out_dir + "/correlations.csv");
  return kOk;
}

inline int cmd_select(const Options& opt, std::ostream& out, std::ostream& err) {
  const ResolvedData data = resolve_dataset(opt);
  const FeatureMatrix fm = balanced_matrix(opt, data, err);
  const std::size_t k = opt.k ? opt.k : bench::default_k_for(data.label, fm.cols);
  const FeatureScores scores = select_k_best(fm, k);

  std::filesystem::create_directories(opt.out_dir);
  write_text_file(std::filesystem::path(opt.out_dir) / "feature_scores.csv",
                  feature_scores_csv_text(scores, fm.feature_names));
  for (const auto& name : scores.selected) out << name << "\n";

  write_run_meta(opt, data, {{"k", k}, {"selected_features", scores.selected}},
                 nlohmann::json::object());
  log(opt, err, "wrote " + opt.out_dir + "/feature_scores.csv");
  return kOk;
}

inline int cmd_bench(const Options& opt, std::ostream& out, std::ostream& err) {
  if (opt.list_models) {
    out << "name,core,supports_scores,score_kind,defaults\n";
    for (const auto& entry : models::registry()) {
      std::string defaults;
      for (const auto& [key, value] : entry.defaults) {
        if (!defaults.empty()) defaults += " ";
        defaults += key + "=" + models::hyper_to_string(value);
      }
      out << entry.name << "," << (entry.core ? "yes" : "no") << ","
          << (entry.supports_scores ? "yes" : "no") << "," << entry.score_kind << ","
          << csv_escape(defaults) << "\n";
    }
    return kOk;
  }

  const ResolvedData data = resolve_dataset(opt);
  const bench::FeatureMode mode = bench::feature_mode_from(opt.mode);
  bench::ExperimentConfig config = experiment_config(opt, data);

  std::filesystem::create_directories(opt.out_dir);
  const std::filesystem::path dir(opt.out_dir);

  // Feature statistics artifacts accompany every benchmark run.
  const FeatureMatrix fm = balanced_matrix(opt, data, err);
  write_text_file(dir / "correlations.csv", correlations_csv_text(pearson_correlation(fm)));
  const std::size_t k = opt.k ? opt.k : bench::default_k_for(data.label, fm.cols);
  const FeatureScores scores = select_k_best(fm, k);
  write_text_file(dir / "feature_scores.csv",
                  feature_scores_csv_text(scores, fm.feature_names));

  nlohmann::json extra;
  nlohmann::json timing = nlohmann::json::object();
  extra["k"] = k;
  extra["selected_features"] = scores.selected;

  if (mode == bench::FeatureMode::both) {
    const bench::BothRuns runs = bench::run_both(config);
    write_text_file(dir / "report_full.csv", bench::emit_report(runs.full, "csv"));
    write_text_file(dir / "report_reduced.csv", bench::emit_report(runs.reduced, "csv"));
    write_text_file(dir / "comparison.md", bench::emit_report(runs.comparison, "markdown"));
    out << "best full accuracy: " << format_fixed(runs.comparison.best_full_accuracy, 4) << " ("
        << runs.comparison.best_full_model << ")\n";
    out << "best reduced accuracy: " << format_fixed(runs.comparison.best_reduced_accuracy, 4)
        << " (" << runs.comparison.best_reduced_model << ")\n";
    extra["n_train"] = runs.full.meta.n_train;
    extra["n_test"] = runs.full.meta.n_test;
    extra["reduced_features"] = runs.reduced.meta.feature_names;
    timing["full_wall_seconds"] = runs.full.meta.total_wall_seconds;
    timing["reduced_wall_seconds"] = runs.reduced.meta.total_wall_seconds;
    timing["full_models_per_second"] = runs.full.meta.models_per_second;
    timing["reduced_models_per_second"] = runs.reduced.meta.models_per_second;
    log(opt, err, "wrote report_full.csv, report_reduced.csv, comparison.md");
  } else {
    config.feature_mode = mode;
    const bench::EvalReport report = bench::run_experiment(config);
    const std::string file =
        mode == bench::FeatureMode::full ? "report_full.csv" : "report_reduced.csv";
    write_text_file(dir / file, bench::emit_report(report, "csv"));
    if (!report.rows.empty())
      out << "best accuracy: " << format_fixed(report.rows.front().accuracy, 4) << " ("
          << report.rows.front().model << ")\n";
    extra["n_train"] = report.meta.n_train;
    extra["n_test"] = report.meta.n_test;
    extra["used_features"] = report.meta.feature_names;
    timing["wall_seconds"] = report.meta.total_wall_seconds;
    timing["models_per_second"] = report.meta.models_per_second;
    log(opt, err, "wrote " + file);
  }
  write_run_meta(opt, data, extra, timing);
  return kOk;
}

inline int cmd_report(const Options& opt, std::ostream& out, std::ostream&) {
  const std::filesystem::path dir(opt.run_dir.empty() ? opt.out_dir : opt.run_dir);
  bool any = false;
  for (const char* file : {"report_full.csv", "report_reduced.csv"}) {
    const auto path = dir / file;
    if (!std::filesystem::exists(path)) continue;
    any = true;
    const bench::EvalReport report = bench::report_from_csv(read_csv_file(path.string()));
    if (opt.format == "markdown") out << "## " << file << "\n\n";
    out << bench::emit_report(report, opt.format) << "\n";
  }
  if (!any)
    throw IoError("no report_full.csv or report_reduced.csv under " + dir.string());
  return kOk;
}

}  // namespace detail

// Parses arguments (program name excluded) and runs one subcommand.
// Diagnostics go to err, data to out and files.
inline int dispatch(const std::vector<std::string>& args, std::ostream& out = std::cout,
                    std::ostream& err = std::cerr) {
  detail::Options opt;

  CLI::App app{"tabml: feature selection and classifier benchmarking for tabular "
               "heart-disease data"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  app.add_option("--seed", opt.seed, "seed for sampling, splitting and models");
  app.add_option("--config", opt.config_path, "JSON config file; overrides flags");
  app.add_option("--out-dir", opt.out_dir, "output directory (env TABML_OUT_DIR)");
  app.add_option("--data-dir", opt.data_dir, "directory with dataset files (env TABML_DATA_DIR)");
  app.add_option("--dataset", opt.dataset, "preset name (cvd, framingham) or a CSV path");
  app.add_option("--schema", opt.schema_path, "schema JSON for a custom CSV dataset");
  app.add_flag("--synthetic", opt.synthetic, "use the seeded surrogate generator");
  app.add_flag("--quiet", opt.quiet, "suppress progress logging (never affects artifacts)");

  CLI::App* ingest = app.add_subcommand("ingest", "load, encode and drop incomplete rows");
  CLI::App* correlate = app.add_subcommand("correlate", "Pearson correlation matrix");
  CLI::App* select = app.add_subcommand("select", "ANOVA-F scores and top-k selection");
  CLI::App* bench_cmd = app.add_subcommand("bench", "benchmark the model registry");
  CLI::App* report = app.add_subcommand("report", "re-render stored reports");
  for (CLI::App* sub : {ingest, correlate, select, bench_cmd, report}) sub->fallthrough();

  for (CLI::App* sub : {correlate, select, bench_cmd})
    sub->add_option("--k", opt.k, "number of features to select");
  bench_cmd->add_option("--split-ratio", opt.split_ratio, "train fraction, default 0.8");
  bench_cmd->add_option("--mode", opt.mode, "full, reduced, or both");
  bench_cmd->add_option("--models", opt.models, "model names (default: core registry)")
      ->delimiter(',');
  bench_cmd->add_option("--param", opt.params, "hyperparameter override model.key=value");
  bench_cmd->add_flag("--select-on-train", opt.select_on_train,
                      "select features on the training rows only (no leakage)");
  bench_cmd->add_flag("--serial", opt.serial, "fit models one at a time for clean timing");
  bench_cmd->add_option("--jobs", opt.jobs, "worker threads (0 = hardware)");
  bench_cmd->add_flag("--list-models", opt.list_models, "print the registry and exit");
  report->add_option("--run-dir", opt.run_dir, "directory holding report CSVs");
  report->add_option("--format", opt.format, "markdown or csv");

  std::vector<std::string> argv_like = args;
  std::vector<const char*> argv;
  argv.push_back("tabml");
  for (const auto& a : argv_like) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    err << app.help();
    return kUsage;
  }

  try {
    detail::apply_config_file(opt);
    if (ingest->parsed()) opt.subcommand = "ingest";
    else if (correlate->parsed()) opt.subcommand = "correlate";
    else if (select->parsed()) opt.subcommand = "select";
    else if (bench_cmd->parsed()) opt.subcommand = "bench";
    else opt.subcommand = "report";

    if (opt.subcommand == "ingest") return detail::cmd_ingest(opt, out, err);
    if (opt.subcommand == "correlate") return detail::cmd_correlate(opt, out, err);
    if (opt.subcommand == "select") return detail::cmd_select(opt, out, err);
    if (opt.subcommand == "bench") return detail::cmd_bench(opt, out, err);
    return detail::cmd_report(opt, out, err);
  } catch (const ConfigError& e) {
    err << "error (" << opt.subcommand << "): " << e.what() << "\n";
    return kUsage;
  } catch (const ParameterError& e) {
    err << "error (" << opt.subcommand << "): " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "error (" << opt.subcommand << "): " << e.what() << "\n";
    return kData;
  } catch (const std::exception& e) {
    err << "internal error (" << opt.subcommand << "): " << e.what() << "\n";
    return kInternal;
  }
}

}  // namespace tabml::cli

// jsvp: command-line driver for the vulnerability-prediction pipeline.
//
// Each subcommand reads the files written by the previous stage and writes
// its own outputs plus the resolved configuration it ran with.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "jsvp/common/config.hpp"
#include "jsvp/common/csv.hpp"
#include "jsvp/dataset/dataset.hpp"
#include "jsvp/dataset/labeling.hpp"
#include "jsvp/dataset/resample.hpp"
#include "jsvp/dataset/split.hpp"
#include "jsvp/eval/grid_search.hpp"
#include "jsvp/eval/mcnemar.hpp"
#include "jsvp/eval/report.hpp"
#include "jsvp/history/miner.hpp"
#include "jsvp/learn/model.hpp"
#include "jsvp/metrics/lint.hpp"
#include "jsvp/metrics/static_metrics.hpp"

namespace fs = std::filesystem;
using namespace jsvp;

namespace {

constexpr const char* kConfigDirEnv = "JSVP_CONFIG_DIR";

int exit_code(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::Usage: return 2;
    case ErrorCategory::Io: return 3;
    case ErrorCategory::Config: return 4;
    case ErrorCategory::Data: return 5;
    case ErrorCategory::Repository: return 6;
    case ErrorCategory::Model: return 7;
  }
  return 1;
}

std::optional<fs::path> config_dir() {
  const char* dir = std::getenv(kConfigDirEnv);
  if (dir == nullptr || *dir == '\0') return std::nullopt;
  return fs::path(dir);
}

// Every key the pipeline reads, with its built-in default.
std::map<std::string, std::string> default_settings() {
  std::map<std::string, std::string> d = {
      {"clones.normalization", "type2"},
      {"clones.window", "50"},
      {"history.min_body_tokens", "10"},
      {"history.similarity_threshold", "0.8"},
      {"inventory.exclude_dirs", "node_modules,.git"},
      {"inventory.exclude_partial", "off"},
      {"mccc.case", "on"},
      {"mccc.catch", "on"},
      {"mccc.logical", "off"},
      {"mccc.ternary", "on"},
      {"resample.mode", "none"},
      {"resample.ratio", "1"},
      {"resample.ratio_of", "negatives"},
      {"run.threads", "0"},
      {"split.dev", "0.1"},
      {"split.k", "10"},
      {"split.seed", "1"},
      {"split.test", "0.1"},
      {"split.train", "0.8"},
      {"train.cv", "0"},
      {"train.features", "all"},
      {"train.objective", "f_measure"},
      {"train.seed", "1"},
      {"mcnemar.alpha", "0.05"},
      {"mcnemar.method", "chi2"},
  };
  for (const auto& [rule, sev] : metrics::LintRuleset{}.severity) d["lint." + rule] = std::string(metrics::to_string(sev));
  return d;
}

struct Settings {
  Config cfg;
  std::vector<std::string> sources;  // config files that were read

  std::string get(const std::string& key) const { return cfg.get_or(key, default_settings().at(key)); }
  double number(const std::string& key) const { return cfg.get_number(key, parse_number(default_settings().at(key))); }

  // Defaults overlaid with everything that was set, one key per line.
  std::string resolved(const std::string& command, const std::map<std::string, std::string>& args) const {
    auto all = default_settings();
    for (const auto& k : cfg.keys()) all[k] = *cfg.get(k);
    std::string out = "# jsvp " + command + "\n";
    for (const auto& s : sources) out += "# config: " + s + "\n";
    out += "[args]\n";
    for (const auto& [k, v] : args) out += k + " = " + v + "\n";
    std::string section;
    for (const auto& [k, v] : all) {
      const auto dot = k.find('.');
      const auto sec = k.substr(0, dot);
      if (sec != section) {
        out += "[" + sec + "]\n";
        section = sec;
      }
      out += k.substr(dot + 1) + " = " + v + "\n";
    }
    return out;
  }
};

Settings load_settings(const std::string& config_file, const std::vector<std::string>& overrides) {
  Settings s;
  std::string path = config_file;
  if (path.empty()) {
    if (auto dir = config_dir(); dir && fs::exists(*dir / "jsvp.ini")) path = (*dir / "jsvp.ini").string();
  }
  if (!path.empty()) {
    // A run.ini sidecar can be replayed; its [args] section is a record, not settings.
    const auto file = Config::parse(read_file(path), path);
    for (const auto& k : file.keys()) {
      if (k.rfind("args.", 0) != 0) s.cfg.set(k, *file.get(k));
    }
    s.sources.push_back(path);
  }
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::Usage, "--set expects key=value, got '" + o + "'");
    s.cfg.set(trim(o.substr(0, eq)), trim(o.substr(eq + 1)));
  }
  const auto defaults = default_settings();
  for (const auto& k : s.cfg.keys()) {
    const bool free_form = k.rfind("columns.", 0) == 0;
    if (!free_form && !defaults.count(k)) throw Error(ErrorCode::Config, "unknown configuration key '" + k + "'");
  }
  return s;
}

void ensure_parent(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

void write_output(const fs::path& p, const std::string& content) {
  ensure_parent(p);
  write_file(p.string(), content);
}

void write_run_config(const fs::path& output, const Settings& s, const std::string& command,
                      const std::map<std::string, std::string>& args) {
  write_output(fs::path(output.string() + ".run.ini"), s.resolved(command, args));
}

std::string generic(const fs::path& p) { return p.generic_string(); }

// ---- extract-static ----

std::vector<metrics::SourceFile> collect_sources(const fs::path& root, const std::set<std::string>& excluded) {
  if (!fs::is_directory(root)) throw Error(ErrorCode::Io, "not a directory: " + root.string());
  std::vector<metrics::SourceFile> files;
  for (auto it = fs::recursive_directory_iterator(root); it != fs::recursive_directory_iterator(); ++it) {
    if (it->is_directory() && excluded.count(it->path().filename().string())) {
      it.disable_recursion_pending();
      continue;
    }
    if (!it->is_regular_file() || it->path().extension() != ".js") continue;
    files.push_back({generic(fs::relative(it->path(), root)), read_file(it->path().string())});
  }
  std::sort(files.begin(), files.end(), [](const auto& a, const auto& b) { return a.path < b.path; });
  return files;
}

int extract_static(const Settings& s, const std::string& src, const std::string& out) {
  const auto list = split_list(s.get("inventory.exclude_dirs"));
  const auto files = collect_sources(src, {list.begin(), list.end()});
  const auto cfg_view = [&] {
    Config c = s.cfg;
    return metrics::StaticConfig::from_config(c);
  }();
  const auto result = metrics::analyze_project(files, cfg_view);
  write_output(out, metrics::static_table(result.rows).to_string());
  write_run_config(out, s, "extract-static", {{"src", src}, {"out", out}});
  for (const auto& p : result.skipped) std::cerr << "skipped partial file: " << p << "\n";
  std::cerr << files.size() << " files, " << result.rows.size() << " functions\n";
  return 0;
}

// ---- mine-history ----

int mine_history(const Settings& s, const std::string& repo, const std::optional<std::string>& until,
                 const std::string& out) {
  const auto result = history::walk_history(repo, until, history::MinerOptions::from_config(s.cfg));
  write_output(out, history::process_table(result.rows).to_string());
  std::map<std::string, std::string> args = {{"repo", repo}, {"out", out}};
  if (until) args["until"] = *until;
  write_run_config(out, s, "mine-history", args);
  for (const auto& d : result.diagnostics) std::cerr << d.commit << " " << d.path << ": " << d.message << "\n";
  std::cerr << result.commits.size() << " commits, " << result.rows.size() << " functions\n";
  return 0;
}

// ---- label ----

int label(const Settings& s, const std::string& repo, const std::string& fixes_file, const std::string& out) {
  history::GitRepo git(repo);
  const auto fixes = dataset::load_fixes(read_csv(fixes_file));
  std::vector<dataset::FixLabels> all;
  const auto threads = static_cast<unsigned>(s.number("run.threads"));
  for (const auto& f : fixes) {
    all.push_back(dataset::label_fix_commit(git, f, threads));
    if (all.back().empty_patch) std::cerr << "empty patch: " << f.fix_commit << " (" << f.advisory_id << ")\n";
  }
  write_output(out, dataset::labels_table(all).to_string());
  write_run_config(out, s, "label", {{"repo", repo}, {"fixes", fixes_file}, {"out", out}});
  return 0;
}

// ---- assemble ----

int assemble(const Settings& s, const std::string& project, const std::string& static_csv,
             const std::string& process_csv, const std::string& labels_csv, const std::string& into,
             const std::string& out) {
  dataset::JoinReport report;
  auto d = dataset::join(project, read_csv(static_csv), read_csv(process_csv),
                         dataset::vulnerable_keys(read_csv(labels_csv)), &report);
  if (!into.empty()) {
    auto base = dataset::load_dataset(read_csv(into));
    std::set<dataset::SampleKey> seen(base.keys.begin(), base.keys.end());
    for (const auto& k : d.keys) {
      if (seen.count(k)) throw Error(ErrorCode::DuplicateKey, "sample already present: " + k.project + " " + k.key.qualified_name);
    }
    base.append(d);
    d = std::move(base);
  }
  write_output(out, dataset::dataset_table(d).to_string());
  write_run_config(out, s, "assemble",
                   {{"project", project}, {"static", static_csv}, {"process", process_csv}, {"labels", labels_csv},
                    {"into", into}, {"out", out}});
  std::cerr << report.joined << " joined, " << report.missing_process.size() << " without process row, "
            << report.missing_static.size() << " without static row\n";
  return 0;
}

// ---- train / evaluate ----

dataset::Dataset load_training_data(const Settings& s, const std::string& file) {
  auto d = dataset::load_dataset(read_csv(file), dataset::all_feature_names(), dataset::ColumnMap::from_config(s.cfg));
  const auto which = s.get("train.features");
  if (which == "static") return d.select_columns(dataset::static_feature_names());
  if (which == "process") return d.select_columns(dataset::process_feature_names());
  if (which != "all") throw Error(ErrorCode::Config, "train.features must be all, static or process");
  return d;
}

std::vector<std::size_t> partition_rows(const dataset::Partition& p, const std::string& name, std::size_t n) {
  if (name == "train") return p.train;
  if (name == "dev") return p.dev;
  if (name == "test") return p.test;
  if (name == "all") {
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    return all;
  }
  throw Error(ErrorCode::Usage, "unknown partition '" + name + "'");
}

learn::HyperGrid load_grid(const std::string& grid_file, learn::Algorithm algo, std::string* source) {
  std::string path = grid_file;
  if (path.empty()) {
    if (auto dir = config_dir(); dir && fs::exists(*dir / "grid.ini")) path = (*dir / "grid.ini").string();
  }
  if (path.empty()) return {algo, {}};
  const auto cfg = Config::parse(read_file(path), path);
  learn::validate_grid_file(cfg);
  *source = path;
  return learn::grid_for(cfg, algo);
}

CsvTable predictions_table(const dataset::Dataset& d, const std::vector<int>& pred, const std::vector<double>& score) {
  CsvTable t;
  t.header = {"project", "path", "name", "start_line", "end_line", "label", "prediction", "score"};
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto& k = d.keys[i];
    t.rows.push_back({k.project, k.key.file_path, k.key.qualified_name, std::to_string(k.key.span.start_line),
                      std::to_string(k.key.span.end_line), std::to_string(d.y[i]), std::to_string(pred[i]),
                      format_number(score[i])});
  }
  return t;
}

int train(const Settings& s, const std::string& algo_name, const std::string& grid_file, const std::string& data_file,
          const std::string& out_dir) {
  const auto algo = learn::parse_algorithm(algo_name);
  std::string grid_source = "(defaults)";
  const auto grid = load_grid(grid_file, algo, &grid_source);
  const auto data = load_training_data(s, data_file);
  const auto spec = dataset::SplitSpec::from_config(s.cfg);
  const auto parts = dataset::split(data.y, spec);
  const auto train_set = data.subset(parts.train), dev_set = data.subset(parts.dev), test_set = data.subset(parts.test);

  eval::SweepSpec sweep;
  sweep.objective = eval::parse_measure(s.get("train.objective"));
  sweep.resample = dataset::ResamplePlan::from_config(s.cfg);
  sweep.seed = static_cast<std::uint64_t>(s.number("train.seed"));
  sweep.threads = static_cast<unsigned>(s.number("run.threads"));
  sweep.folds = static_cast<int>(s.number("train.cv"));
  const auto results = eval::grid_search(grid, train_set, &dev_set, sweep);
  if (results.empty() || results.front().error) {
    throw Error(ErrorCode::Model, "no configuration could be trained" +
                                      (results.empty() ? std::string() : ": " + *results.front().error));
  }
  const auto& best = results.front();
  const auto fit_set = eval::resampled(train_set, sweep.resample, sweep.seed);
  const auto model = learn::train(algo, best.params, fit_set, sweep.seed, &dev_set);

  const fs::path dir(out_dir);
  fs::create_directories(dir);
  write_output(dir / "grid.csv", eval::grid_table(algo_name, results).to_string());
  write_output(dir / "model.json", model.to_json().dump(1) + "\n");
  const auto pred = model.predict(test_set);
  write_output(dir / "predictions.csv", predictions_table(test_set, pred, model.scores(test_set.X)).to_string());
  const auto table = eval::results_table({{algo_name, learn::params_string(model.params), eval::confusion(test_set.y, pred)}});
  write_output(dir / "results.csv", table.to_string());
  write_output(dir / "run.ini", s.resolved("train", {{"algo", algo_name},
                                                    {"grid", grid_source},
                                                    {"dataset", data_file},
                                                    {"out", out_dir}}));
  std::cout << eval::aligned_text(table);
  return 0;
}

int evaluate(const Settings& s, const std::string& model_file, const std::string& data_file,
             const std::string& partition, const std::string& name, const std::string& out_dir) {
  learn::TrainedModel model;
  try {
    model = learn::TrainedModel::from_json(learn::Json::parse(read_file(model_file)));
  } catch (const learn::Json::exception& e) {
    throw Error(ErrorCode::Model, model_file + ": " + e.what());
  }
  auto data = load_training_data(s, data_file);
  if (!model.features.empty() && data.columns != model.features) data = data.select_columns(model.features);
  const auto parts = dataset::split(data.y, dataset::SplitSpec::from_config(s.cfg));
  const auto subset = data.subset(partition_rows(parts, partition, data.size()));
  const auto pred = model.predict(subset);
  const fs::path dir(out_dir);
  fs::create_directories(dir);
  write_output(dir / "predictions.csv", predictions_table(subset, pred, model.scores(subset.X)).to_string());
  const auto label = name.empty() ? learn::algorithm_name(model.algorithm) : name;
  const auto table = eval::results_table({{label, learn::params_string(model.params), eval::confusion(subset.y, pred)}});
  write_output(dir / "results.csv", table.to_string());
  write_output(dir / "run.ini", s.resolved("evaluate", {{"model", model_file},
                                                       {"dataset", data_file},
                                                       {"partition", partition},
                                                       {"out", out_dir}}));
  std::cout << eval::aligned_text(table);
  return 0;
}

// ---- mcnemar ----

std::vector<int> label_column(const CsvTable& t, const std::string& column, const std::string& file) {
  const auto c = t.column(column);
  if (c == static_cast<std::size_t>(-1)) throw Error(ErrorCode::MissingFeature, file + " has no '" + column + "' column");
  std::vector<int> out;
  for (const auto& row : t.rows) out.push_back(dataset::parse_label(row[c]));
  return out;
}

// Rows of two prediction files must describe the same functions.
void check_aligned(const CsvTable& a, const CsvTable& b) {
  for (const auto* col : {"project", "path", "name", "start_line"}) {
    const auto ca = a.column(col), cb = b.column(col);
    if (ca == static_cast<std::size_t>(-1) || cb == static_cast<std::size_t>(-1)) continue;
    for (std::size_t r = 0; r < std::min(a.rows.size(), b.rows.size()); ++r) {
      if (a.rows[r][ca] != b.rows[r][cb]) {
        throw Error(ErrorCode::LengthMismatch, "prediction files disagree on row " + std::to_string(r + 1));
      }
    }
  }
}

int mcnemar(const Settings& s, const std::string& a_file, const std::string& b_file, const std::string& truth_file,
            const std::string& name, const std::string& out) {
  const auto a = read_csv(a_file), b = read_csv(b_file), truth = read_csv(truth_file);
  check_aligned(a, b);
  check_aligned(a, truth);
  const auto table = eval::build_contingency(label_column(truth, "label", truth_file),
                                             label_column(a, "prediction", a_file), label_column(b, "prediction", b_file));
  const auto method_name = s.get("mcnemar.method");
  if (method_name != "chi2" && method_name != "exact") throw Error(ErrorCode::Config, "mcnemar.method must be chi2 or exact");
  const auto method = method_name == "exact" ? eval::McNemarMethod::Exact : eval::McNemarMethod::ChiSquare;
  const auto r = eval::mcnemar(table, s.number("mcnemar.alpha"), method);
  CsvTable t;
  t.header = eval::mcnemar_header();
  t.rows.push_back(eval::mcnemar_fields(name, table, r));
  write_output(out, t.to_string());
  write_run_config(out, s, "mcnemar", {{"a", a_file}, {"b", b_file}, {"truth", truth_file}, {"out", out}});
  std::cout << eval::aligned_text(t);
  return 0;
}

// ---- report ----

int report(const Settings& s, const std::vector<std::string>& inputs, const std::string& out, const std::string& text) {
  CsvTable merged;
  for (const auto& f : inputs) {
    const auto t = read_csv(f);
    if (merged.header.empty()) merged.header = t.header;
    if (t.header != merged.header) throw Error(ErrorCode::Parse, f + ": header differs from " + inputs.front());
    merged.rows.insert(merged.rows.end(), t.rows.begin(), t.rows.end());
  }
  const auto rendered = eval::aligned_text(merged);
  write_output(out, merged.to_string());
  if (!text.empty()) write_output(text, rendered);
  std::map<std::string, std::string> args = {{"out", out}, {"text", text}};
  for (std::size_t i = 0; i < inputs.size(); ++i) args["input" + std::to_string(i + 1)] = inputs[i];
  write_run_config(out, s, "report", args);
  std::cout << rendered;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"JavaScript function-level vulnerability prediction pipeline"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_file;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  app.add_option("--config", config_file, "INI configuration file (default: $JSVP_CONFIG_DIR/jsvp.ini)")
      ->check(CLI::ExistingFile);
  app.add_option("--set", overrides, "Override a configuration key, key=value");
  app.add_option("--seed", seed, "Seed for splitting, resampling and training");
  app.add_option("--threads", threads, "Worker threads (0: all cores)");

  std::string src, repo, out, fixes, until_hash, project, static_csv, process_csv, labels_csv, into, algo, grid,
      data_file, model_file, partition = "test", name, pair_name = "A-vs-B", a_file, b_file, truth_file, text;
  std::vector<std::string> inputs;

  auto* ex = app.add_subcommand("extract-static", "Static metrics of every function under a source tree");
  ex->add_option("src", src, "Source directory")->required();
  ex->add_option("-o,--out", out, "Output CSV")->required();

  auto* mh = app.add_subcommand("mine-history", "Process metrics from the first-parent history");
  mh->add_option("repo", repo, "Git repository")->required();
  mh->add_option("--until", until_hash, "Stop at this commit");
  mh->add_option("-o,--out", out, "Output CSV")->required();

  auto* lb = app.add_subcommand("label", "Label pre-fix functions from fix commits");
  lb->add_option("repo", repo, "Git repository")->required();
  lb->add_option("--fixes", fixes, "CSV with repo, fix_commit, advisory_id")->required()->check(CLI::ExistingFile);
  lb->add_option("-o,--out", out, "Output CSV")->required();

  auto* as = app.add_subcommand("assemble", "Join static, process and label tables into a dataset");
  as->add_option("--project", project, "Project id")->required();
  as->add_option("--static", static_csv, "Static metrics CSV")->required()->check(CLI::ExistingFile);
  as->add_option("--process", process_csv, "Process metrics CSV")->required()->check(CLI::ExistingFile);
  as->add_option("--labels", labels_csv, "Labels CSV")->required()->check(CLI::ExistingFile);
  as->add_option("--into", into, "Existing dataset to extend")->check(CLI::ExistingFile);
  as->add_option("-o,--out", out, "Output dataset CSV")->required();

  auto* tr = app.add_subcommand("train", "Grid-search, fit and test one algorithm");
  tr->add_option("--algo", algo, "RFC, DT, KNN, SVM, LinReg, LogReg, NB, ZeroR, SDNN or CDNN")->required();
  tr->add_option("--grid", grid, "Grid file (default: $JSVP_CONFIG_DIR/grid.ini)")->check(CLI::ExistingFile);
  tr->add_option("--dataset", data_file, "Dataset CSV")->required()->check(CLI::ExistingFile);
  tr->add_option("-o,--out", out, "Output directory")->required();

  auto* ev = app.add_subcommand("evaluate", "Predict a dataset partition with a trained model");
  ev->add_option("--model", model_file, "Model JSON")->required()->check(CLI::ExistingFile);
  ev->add_option("--dataset", data_file, "Dataset CSV")->required()->check(CLI::ExistingFile);
  ev->add_option("--partition", partition, "train, dev, test or all");
  ev->add_option("--name", name, "Row label in the results table");
  ev->add_option("-o,--out", out, "Output directory")->required();

  auto* mc = app.add_subcommand("mcnemar", "Compare two prediction files");
  mc->add_option("--a", a_file, "Predictions of model A")->required()->check(CLI::ExistingFile);
  mc->add_option("--b", b_file, "Predictions of model B")->required()->check(CLI::ExistingFile);
  mc->add_option("--truth", truth_file, "File with a label column")->required()->check(CLI::ExistingFile);
  mc->add_option("--name", pair_name, "Row label");
  std::optional<double> alpha;
  bool exact = false;
  mc->add_option("--alpha", alpha, "Significance level");
  mc->add_flag("--exact", exact, "Exact binomial test instead of chi-square");
  mc->add_option("-o,--out", out, "Output CSV")->required();

  auto* rp = app.add_subcommand("report", "Merge result tables into one CSV and an aligned text table");
  rp->add_option("inputs", inputs, "Result or McNemar CSV files")->required()->check(CLI::ExistingFile);
  rp->add_option("-o,--out", out, "Output CSV")->required();
  rp->add_option("--text", text, "Also write the aligned table here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (seed) {
      overrides.push_back("split.seed=" + std::to_string(*seed));
      overrides.push_back("train.seed=" + std::to_string(*seed));
    }
    if (alpha) overrides.push_back("mcnemar.alpha=" + format_number(*alpha));
    if (exact) overrides.push_back("mcnemar.method=exact");
    if (threads) overrides.push_back("run.threads=" + std::to_string(*threads));
    const auto settings = load_settings(config_file, overrides);
    if (*ex) return extract_static(settings, src, out);
    if (*mh) {
      return mine_history(settings, repo, until_hash.empty() ? std::nullopt : std::optional<std::string>(until_hash), out);
    }
    if (*lb) return label(settings, repo, fixes, out);
    if (*as) return assemble(settings, project, static_csv, process_csv, labels_csv, into, out);
    if (*tr) return train(settings, algo, grid, data_file, out);
    if (*ev) return evaluate(settings, model_file, data_file, partition, name, out);
    if (*mc) return mcnemar(settings, a_file, b_file, truth_file, pair_name, out);
    if (*rp) return report(settings, inputs, out, text);
  } catch (const Error& e) {
    std::cerr << "jsvp: " << e.what() << "\n";
    return exit_code(e.category());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "jsvp: Io: " << e.what() << "\n";
    return exit_code(ErrorCategory::Io);
  } catch (const std::exception& e) {
    std::cerr << "jsvp: internal error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

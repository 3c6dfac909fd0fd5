// b12scope command-line front end.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "b12scope/classifier.hpp"
#include "b12scope/config.hpp"
#include "b12scope/csv.hpp"
#include "b12scope/pipeline.hpp"
#include "b12scope/stats.hpp"
#include "b12scope/version.hpp"

namespace fs = std::filesystem;
using namespace b12scope;

namespace {

struct Globals {
  std::string config;
  std::string data_dir = B12SCOPE_DEFAULT_DATA_DIR;
  std::optional<unsigned> threads;
  std::optional<std::uint64_t> seed;
};

PipelineConfig resolve(const Globals& g) {
  PipelineConfig c = g.config.empty() ? default_config(g.data_dir) : load_config(g.config, g.data_dir);
  if (g.threads) c.run.threads = *g.threads == 0 ? 1 : *g.threads;
  if (g.seed) {
    c.run.seed = *g.seed;
    c.synth.world.seed = *g.seed;
  }
  return c;
}

template <typename E, typename Parse>
void apply_choice(const std::string& value, E& out, Parse parse, std::string_view flag) {
  if (value.empty()) return;
  auto v = parse(value);
  if (!v) throw ConfigError(fmt::format("--{}: unknown value '{}'", flag, value));
  out = *v;
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) fmt::print(stderr, "warning: {}\n", w);
}

// Loads inputs, then runs one stage with partial-output handling.
template <typename Body>
void standalone(const std::string& name, const PipelineConfig& config, Body&& body) {
  OutputLog log;
  std::optional<PipelineInputs> inputs;
  ReportStamp stamp;
  run_stage("load", log, [&] {
    inputs.emplace(load_inputs(config));
    stamp = make_stamp(config);
  });
  StageContext ctx{config, *inputs, stamp, log, {}};
  run_stage(name, log, [&] { body(ctx); });
  print_warnings(ctx.warnings);
  for (const auto& p : log.written()) fmt::print("wrote {}\n", p.string());
}

std::vector<double> parse_numbers(const std::string& list) {
  std::vector<double> out;
  for (const auto& field : split_csv_line(list)) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(field, &used));
      if (used != field.size()) throw std::invalid_argument(field);
    } catch (const std::exception&) {
      throw FormatError(fmt::format("not a number: '{}'", field));
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Diet and medical-query analysis over search logs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersionString));
  Globals g;
  app.add_option("--config", g.config, "TOML configuration file");
  app.add_option("--data-dir", g.data_dir, "Directory with the reference tables")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads for classify, profiles and fit");
  app.add_option("--seed", g.seed, "Random seed for synthetic worlds");

  auto* synth = app.add_subcommand("synth", "Generate a synthetic query log with ground truth");
  std::string out_log = "log.jsonl", out_truth = "truth.jsonl", expected;
  std::optional<std::size_t> n_users;
  synth->add_option("--out-log", out_log)->capture_default_str();
  synth->add_option("--out-truth", out_truth)->capture_default_str();
  synth->add_option("--expected", expected, "Also write oracle expectations as JSON");
  synth->add_option("--n-users", n_users);

  auto* classify = app.add_subcommand("classify", "Classify queries of a log");
  std::string log_in, log_format, classified_out = "classified.jsonl", labeled;
  std::optional<double> theta;
  classify->add_option("--log", log_in, "Query log (defaults to paths.log)");
  classify->add_option("--format", log_format, "tsv or jsonl");
  classify->add_option("--out", classified_out)->capture_default_str();
  classify->add_option("--theta", theta, "Title coverage threshold");
  classify->add_option("--labeled", labeled, "Evaluate matcher precision on a labeled CSV instead");

  auto* profiles = app.add_subcommand("profiles", "Aggregate classified queries into user profiles");
  std::string classified_in = "classified.jsonl", profiles_out = "profiles.jsonl";
  profiles->add_option("--classified", classified_in)->capture_default_str();
  profiles->add_option("--out", profiles_out)->capture_default_str();

  auto* validate = app.add_subcommand("validate", "Regional shares against expenditure");
  std::string profiles_in = "profiles.jsonl", validation_out = "validation.csv";
  validate->add_option("--profiles", profiles_in)->capture_default_str();
  validate->add_option("--out", validation_out)->capture_default_str();

  auto* fit = app.add_subcommand("fit", "Per-term models on food-search counts");
  std::string results_out = "results.csv", cohort_filter, cob12_method, model_kind;
  std::optional<std::size_t> threshold;
  fit->add_option("--profiles", profiles_in)->capture_default_str();
  fit->add_option("--threshold", threshold, "Minimum askers per term");
  fit->add_option("--cohort-filter", cohort_filter, "unaware or all");
  fit->add_option("--cob12", cob12_method, "pearson or spearman");
  fit->add_option("--kind", model_kind, "linear or logistic");
  fit->add_option("--out", results_out)->capture_default_str();

  auto* report = app.add_subcommand("report", "Render Markdown reports");
  std::string results_in = "results.csv", report_dir = ".";
  bool with_interaction = false;
  std::optional<std::size_t> top_k;
  report->add_option("--profiles", profiles_in)->capture_default_str();
  report->add_option("--results", results_in)->capture_default_str();
  report->add_option("--out-dir", report_dir)->capture_default_str();
  report->add_flag("--with-interaction", with_interaction, "Add the indications x pain rank product");
  report->add_option("--top-k", top_k);
  report->add_option("--cob12", cob12_method, "pearson or spearman");

  auto* run = app.add_subcommand("run", "All stages from one config");
  std::string run_out;
  run->add_option("--out-dir", run_out, "Overrides paths.out_dir");

  auto* stats_cmd = app.add_subcommand("stats", "Correlation and rank-sum tests on two number lists");
  std::string list_a, list_b;
  stats_cmd->add_option("--a", list_a, "Comma-separated numbers")->required();
  stats_cmd->add_option("--b", list_b, "Comma-separated numbers")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    PipelineConfig config = resolve(g);
    if (n_users) config.synth.world.n_users = *n_users;
    if (theta) config.classifier.theta = *theta;
    apply_choice(log_format, config.paths.log_format, parse_log_format, "format");
    if (threshold) config.models.threshold = *threshold;
    if (top_k) config.models.top_k = *top_k;
    if (with_interaction) config.models.with_interaction = true;
    apply_choice(cohort_filter, config.models.filter, parse_cohort_filter, "cohort-filter");
    apply_choice(cob12_method, config.models.method, parse_correlation_method, "cob12");
    apply_choice(model_kind, config.models.kind, parse_model_kind, "kind");

    if (*synth) {
      config.synth.enabled = true;
      config.synth.world.validate();
      standalone("synth", config, [&](StageContext& ctx) {
        const fs::path exp = expected.empty() ? fs::path(out_truth).replace_extension(".expected.json") : fs::path(expected);
        stage_synth(ctx, out_log, out_truth, exp);
      });
    } else if (*classify) {
      if (!labeled.empty()) {
        const auto synonyms = load_synonym_table(config.paths.synonyms);
        const auto corpus = load_recipe_corpus(config.paths.recipes, synonyms);
        const RecipeMatcher matcher(corpus, config.classifier);
        const auto r = evaluate_matcher_precision(fs::path(labeled), matcher, corpus);
        fmt::print("pairs={} gold_positive={} emitted={} correct={}\n", r.pairs, r.gold_positive, r.emitted,
                   r.correct);
        fmt::print("precision={:.4f} recall={:.4f}\n", r.precision, r.recall);
        for (const auto& m : r.errors) fmt::print("miss: '{}' gold='{}' got='{}'\n", m.query, m.gold, m.predicted);
        return 0;
      }
      fs::path log = log_in;
      if (log.empty()) {
        if (!config.paths.log) throw ConfigError("classify: give --log or set paths.log");
        log = *config.paths.log;
      }
      standalone("classify", config, [&](StageContext& ctx) { stage_classify(ctx, log, classified_out); });
    } else if (*profiles) {
      standalone("profiles", config, [&](StageContext& ctx) { stage_profiles(ctx, classified_in, profiles_out); });
    } else if (*validate) {
      standalone("validate", config, [&](StageContext& ctx) { stage_validate(ctx, profiles_in, validation_out); });
    } else if (*fit) {
      standalone("fit", config, [&](StageContext& ctx) { stage_fit(ctx, profiles_in, results_out); });
    } else if (*report) {
      standalone("report", config, [&](StageContext& ctx) { stage_report(ctx, profiles_in, results_in, report_dir); });
    } else if (*run) {
      if (!run_out.empty()) config.paths.out_dir = run_out;
      const auto summary = run_pipeline(config);
      print_warnings(summary.warnings);
      fmt::print("config hash {}\n", summary.config_hash);
      for (const auto& p : summary.outputs) fmt::print("wrote {}\n", p.string());
    } else if (*stats_cmd) {
      const auto a = parse_numbers(list_a);
      const auto b = parse_numbers(list_b);
      if (a.size() == b.size()) {
        const auto p = stats::pearson(a, b);
        const auto s = stats::spearman(a, b);
        fmt::print("pearson r={:.6g} p={:.6g} n={}\n", p.coefficient, p.p_value, p.n);
        fmt::print("spearman rho={:.6g} p={:.6g} n={}{}\n", s.coefficient, s.p_value, s.n,
                   s.exact_p ? " exact" : "");
      }
      const auto r = stats::ranksum(a, b);
      fmt::print("ranksum W={:.6g} z={:.6g} p={:.6g}{}\n", r.statistic, r.z, r.p_value, r.exact ? " exact" : "");
    }
  } catch (const StageError& e) {
    fmt::print(stderr, "error in stage '{}': {}\n", e.stage(), e.what());
    return e.exit_code();
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return exit_code_for(e);
  }
  return 0;
}

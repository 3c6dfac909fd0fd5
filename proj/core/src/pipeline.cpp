#include "b12scope/pipeline.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "b12scope/classifier.hpp"
#include "b12scope/profiles.hpp"
#include "b12scope/regional.hpp"
#include "b12scope/synth.hpp"
#include "b12scope/term_models.hpp"
#include "b12scope/version.hpp"

namespace b12scope {

namespace fs = std::filesystem;

int exit_code_for(const std::exception& e) {
  if (const auto* s = dynamic_cast<const StageError*>(&e)) return s->exit_code();
  if (dynamic_cast<const ConfigError*>(&e)) return 2;
  if (dynamic_cast<const IoError*>(&e)) return 3;
  if (dynamic_cast<const FormatError*>(&e)) return 4;
  if (dynamic_cast<const DataError*>(&e)) return 5;
  if (dynamic_cast<const StatError*>(&e)) return 6;
  return 1;
}

void OutputLog::mark_partial() const {
  for (const auto& p : written_) {
    std::error_code ec;
    if (fs::exists(p, ec)) fs::rename(p, fs::path(p.string() + ".partial"), ec);
  }
}

PipelineInputs load_inputs(const PipelineConfig& c) {
  check_inputs(c);
  const auto& p = c.paths;
  auto synonyms = load_synonym_table(p.synonyms);
  auto corpus = load_recipe_corpus(p.recipes, synonyms);
  return PipelineInputs{load_nutrient_table(p.nutrients),
                        std::move(synonyms),
                        std::move(corpus),
                        load_term_lexicon(p.targets, TermKind::Target),
                        load_term_lexicon(p.controls, TermKind::Control),
                        load_zip_regions(p.zip_regions),
                        load_reference_tables(p.references())};
}

ReportStamp make_stamp(const PipelineConfig& config) { return ReportStamp{kVersionString, config_hash(config)}; }

namespace {

std::ofstream open_output(const fs::path& path, OutputLog& log) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError(fmt::format("cannot create directory {}: {}", path.parent_path().string(), ec.message()));
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot write {}", path.string()));
  log.add(path);
  return out;
}

void close_output(std::ofstream& out, const fs::path& path) {
  out.close();
  if (!out) throw IoError(fmt::format("error writing {}", path.string()));
}

void write_text(const fs::path& path, const std::string& text, OutputLog& log) {
  auto out = open_output(path, log);
  out << text;
  close_output(out, path);
}

std::vector<std::string> fit_comments(const StageContext& ctx) {
  auto lines = ctx.stamp.csv_comments();
  const auto& m = ctx.config.models;
  lines.push_back(fmt::format("threshold={}", m.threshold));
  lines.push_back(fmt::format("cohort_filter={}", cohort_filter_name(m.filter)));
  lines.push_back(fmt::format("cob12={}", correlation_method_name(m.method)));
  lines.push_back(fmt::format("kind={}", model_kind_name(m.kind)));
  return lines;
}

}  // namespace

void stage_synth(StageContext& ctx, const fs::path& out_log, const fs::path& out_truth, const fs::path& out_expected) {
  const auto& in = ctx.inputs;
  SynthConfig world = ctx.config.synth.world;
  world.terms = planted_terms(ctx.config.synth, in.targets, in.controls);
  const SynthInputs inputs{&in.corpus, &in.zips, &in.nutrients, &in.references};
  const auto generated = generate(world, inputs);
  for (const auto& w : generated.truth.warnings) ctx.warnings.push_back(w);

  write_text(out_log, generated.log_text, ctx.log);
  {
    auto out = open_output(out_truth, ctx.log);
    write_truth(out, generated.truth);
    close_output(out, out_truth);
  }
  const auto expected = oracle_expected_effects(generated.truth, std::string_view(generated.log_text),
                                                in.references.costs, in.references.food_groups);
  write_text(out_expected, oracle_to_json(expected) + "\n", ctx.log);
}

void stage_classify(StageContext& ctx, const fs::path& log, const fs::path& out_path) {
  ParseStats stats;
  const auto records = read_log_file(log, ctx.config.paths.log_format, &stats);
  if (stats.malformed || stats.invalid_zip) {
    ctx.warnings.push_back(fmt::format("{}: {} malformed lines skipped, {} invalid zips dropped", log.string(),
                                       stats.malformed, stats.invalid_zip));
  }
  TermMatcher terms;
  terms.add(ctx.inputs.targets);
  terms.add(ctx.inputs.controls);
  const QueryClassifier classifier(ctx.inputs.corpus, terms, ctx.config.classifier);
  const auto classified = classify_all(records, classifier, ctx.config.run.threads);
  auto out = open_output(out_path, ctx.log);
  write_classified(out, classified);
  close_output(out, out_path);
}

void stage_profiles(StageContext& ctx, const fs::path& classified, const fs::path& out_path) {
  const auto records = read_classified_file(classified);
  const auto store = build_profiles(records, ctx.inputs.zips, ctx.config.run.threads);
  auto out = open_output(out_path, ctx.log);
  write_profiles(out, store);
  close_output(out, out_path);
}

void stage_validate(StageContext& ctx, const fs::path& profiles, const fs::path& out_path) {
  const auto store = read_profiles_file(profiles);
  const auto& refs = ctx.inputs.references;
  const auto shares = regional_recipe_shares(store, refs.costs, refs.food_groups);
  const auto validation = validate_against_expenditure(shares, refs.expenditure);
  const auto consumption = consumption_check(shares, refs.consumption);
  auto out = open_output(out_path, ctx.log);
  write_validation_csv(out, validation, consumption, ctx.stamp);
  close_output(out, out_path);
}

void stage_fit(StageContext& ctx, const fs::path& profiles, const fs::path& out_path) {
  const auto store = read_profiles_file(profiles);
  const auto& m = ctx.config.models;
  auto terms = select_modeled_terms(store, ctx.inputs.targets, m.threshold);
  const auto controls = select_modeled_terms(store, ctx.inputs.controls, m.threshold);
  terms.insert(terms.end(), controls.begin(), controls.end());
  const FitOptions options{m.filter, m.method, m.kind, ctx.config.run.threads};
  const auto results = fit_all_terms(store, terms, ctx.inputs.nutrients, options);
  auto out = open_output(out_path, ctx.log);
  write_results_csv(out, results, fit_comments(ctx));
  close_output(out, out_path);
}

void stage_report(StageContext& ctx, const fs::path& profiles, const fs::path& results_path, const fs::path& out_dir) {
  const auto store = read_profiles_file(profiles);
  const auto results = read_results_file(results_path);
  const auto& m = ctx.config.models;

  const std::string table2 = render_table2(results, m.method, m.top_k, ctx.stamp);

  std::vector<TermModelResult> targets, controls;
  for (const auto& r : results) (r.kind == TermKind::Target ? targets : controls).push_back(r);
  std::optional<TargetControlComparison> comparison;
  std::string comparison_why;
  try {
    comparison = target_vs_control(targets, controls, m.top_k);
  } catch (const StatError& e) {
    comparison_why = e.what();
  }

  std::optional<IndicationsModelResult> indications;
  std::string indications_why;
  try {
    indications = indications_model(results, ctx.inputs.references.indications, m.with_interaction);
  } catch (const StatError& e) {
    indications_why = e.what();
  }

  const auto awareness = awareness_stats(store);
  std::vector<CohortOutcome> cohorts;
  for (const auto mode : {EstimateMode::Mean, EstimateMode::Sum}) {
    CohortOutcome c;
    c.mode = mode;
    try {
      c.comparison = cohort_compare(store, ctx.inputs.nutrients, mode,
                                    [](const UserProfile& p) { return p.asked_b12_deficiency; },
                                    "b12_deficiency");
    } catch (const StatError& e) {
      c.why = e.what();
    }
    cohorts.push_back(std::move(c));
  }

  write_text(out_dir / outputs::kTable2, table2, ctx.log);
  write_text(out_dir / outputs::kComparison, render_comparison(comparison, comparison_why, m.method, ctx.stamp),
             ctx.log);
  write_text(out_dir / outputs::kIndications,
             render_indications(indications, indications_why, m.with_interaction, ctx.stamp), ctx.log);
  write_text(out_dir / outputs::kAwareness, render_awareness(awareness, cohorts, ctx.config.estimate_mode, ctx.stamp),
             ctx.log);
}

RunSummary run_pipeline(const PipelineConfig& config) {
  const fs::path dir = config.paths.out_dir;
  OutputLog log;
  const std::vector<const char*> all = {outputs::kLog,        outputs::kTruth,      outputs::kExpected,
                                        outputs::kClassified, outputs::kProfiles,   outputs::kValidation,
                                        outputs::kResults,    outputs::kTable2,     outputs::kComparison,
                                        outputs::kIndications, outputs::kAwareness};
  std::optional<PipelineInputs> inputs;
  ReportStamp stamp;
  run_stage("load", log, [&] {
    if (config.synth.enabled && config.paths.log) {
      throw ConfigError("paths.log and a [synth] section are mutually exclusive");
    }
    if (!config.synth.enabled && !config.paths.log) {
      throw ConfigError("no query log: set paths.log or add a [synth] section");
    }
    inputs.emplace(load_inputs(config));
    stamp = make_stamp(config);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError(fmt::format("cannot create output directory {}: {}", dir.string(), ec.message()));
    for (const auto* name : all) fs::remove(dir / (std::string(name) + ".partial"), ec);
  });

  StageContext ctx{config, *inputs, stamp, log, {}};
  fs::path log_path = config.paths.log.value_or(dir / outputs::kLog);
  if (config.synth.enabled) {
    run_stage("synth", log, [&] {
      stage_synth(ctx, dir / outputs::kLog, dir / outputs::kTruth, dir / outputs::kExpected);
    });
  }
  run_stage("classify", log, [&] { stage_classify(ctx, log_path, dir / outputs::kClassified); });
  run_stage("profiles", log, [&] { stage_profiles(ctx, dir / outputs::kClassified, dir / outputs::kProfiles); });
  run_stage("validate", log, [&] { stage_validate(ctx, dir / outputs::kProfiles, dir / outputs::kValidation); });
  run_stage("fit", log, [&] { stage_fit(ctx, dir / outputs::kProfiles, dir / outputs::kResults); });
  run_stage("report", log, [&] { stage_report(ctx, dir / outputs::kProfiles, dir / outputs::kResults, dir); });

  RunSummary summary;
  summary.outputs = log.written();
  summary.config_hash = stamp.config_hash;
  summary.warnings = std::move(ctx.warnings);
  return summary;
}

}  // namespace b12scope

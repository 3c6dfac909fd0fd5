#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "b12scope/config.hpp"
#include "b12scope/error.hpp"
#include "b12scope/lexicon.hpp"
#include "b12scope/querylog.hpp"
#include "b12scope/report.hpp"

namespace b12scope {

namespace outputs {
inline constexpr const char* kLog = "log.jsonl";
inline constexpr const char* kTruth = "truth.jsonl";
inline constexpr const char* kExpected = "expected.json";
inline constexpr const char* kClassified = "classified.jsonl";
inline constexpr const char* kProfiles = "profiles.jsonl";
inline constexpr const char* kValidation = "validation.csv";
inline constexpr const char* kResults = "results.csv";
inline constexpr const char* kTable2 = "table2.md";
inline constexpr const char* kComparison = "comparison.md";
inline constexpr const char* kIndications = "indications.md";
inline constexpr const char* kAwareness = "awareness.md";
}  // namespace outputs

// Carries the name of the stage that failed; the cause is in what().
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& message, int exit_code)
      : Error(message), stage_(std::move(stage)), exit_code_(exit_code) {}
  const std::string& stage() const { return stage_; }
  int exit_code() const { return exit_code_; }

 private:
  std::string stage_;
  int exit_code_;
};

// Process exit code for an error category.
int exit_code_for(const std::exception& e);

struct PipelineInputs {
  NutrientTable nutrients;
  SynonymTable synonyms;
  RecipeCorpus corpus;
  TermLexicon targets;
  TermLexicon controls;
  ZipRegionTable zips;
  ReferenceTables references;
};

PipelineInputs load_inputs(const PipelineConfig& config);

// Files written so far; on failure they are renamed with a `.partial` suffix.
class OutputLog {
 public:
  void add(const std::filesystem::path& p) { written_.push_back(p); }
  void mark_partial() const;
  const std::vector<std::filesystem::path>& written() const { return written_; }

 private:
  std::vector<std::filesystem::path> written_;
};

struct StageContext {
  const PipelineConfig& config;
  const PipelineInputs& inputs;
  ReportStamp stamp;
  OutputLog& log;
  std::vector<std::string> warnings;
};

ReportStamp make_stamp(const PipelineConfig& config);

// Each stage reads only the files named by its arguments and writes into out_dir.
void stage_synth(StageContext& ctx, const std::filesystem::path& out_log, const std::filesystem::path& out_truth,
                 const std::filesystem::path& out_expected);
void stage_classify(StageContext& ctx, const std::filesystem::path& log, const std::filesystem::path& out);
void stage_profiles(StageContext& ctx, const std::filesystem::path& classified, const std::filesystem::path& out);
void stage_validate(StageContext& ctx, const std::filesystem::path& profiles, const std::filesystem::path& out);
void stage_fit(StageContext& ctx, const std::filesystem::path& profiles, const std::filesystem::path& out);
void stage_report(StageContext& ctx, const std::filesystem::path& profiles, const std::filesystem::path& results,
                  const std::filesystem::path& out_dir);

// Runs `body` as the named stage: errors become StageError and written files are
// marked partial.
template <typename Body>
void run_stage(const std::string& name, OutputLog& log, Body&& body);

struct RunSummary {
  std::vector<std::filesystem::path> outputs;
  std::string config_hash;
  std::vector<std::string> warnings;
};

// All stages in order. The log is synthesized when the config enables it.
RunSummary run_pipeline(const PipelineConfig& config);

template <typename Body>
void run_stage(const std::string& name, OutputLog& log, Body&& body) {
  try {
    body();
  } catch (const StageError&) {
    log.mark_partial();
    throw;
  } catch (const std::exception& e) {
    log.mark_partial();
    throw StageError(name, e.what(), exit_code_for(e));
  }
}

}  // namespace b12scope

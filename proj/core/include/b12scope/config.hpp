#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "b12scope/classifier.hpp"
#include "b12scope/lexicon.hpp"
#include "b12scope/profiles.hpp"
#include "b12scope/querylog.hpp"
#include "b12scope/synth.hpp"
#include "b12scope/term_models.hpp"

namespace b12scope {

struct PathsConfig {
  std::filesystem::path nutrients;
  std::filesystem::path synonyms;
  std::filesystem::path recipes;
  std::filesystem::path targets;
  std::filesystem::path controls;
  std::filesystem::path zip_regions;
  std::filesystem::path expenditure;
  std::filesystem::path costs;
  std::filesystem::path consumption;
  std::filesystem::path indications;
  std::filesystem::path food_groups;
  std::optional<std::filesystem::path> log;  // absent: the log is synthesized
  LogFormat log_format = LogFormat::Jsonl;
  std::filesystem::path out_dir = "out";

  ReferencePaths references() const;
};

struct SynthSection {
  bool enabled = false;
  SynthConfig world;  // seed comes from RunSection
  std::size_t planted_targets = 0;
  std::size_t planted_controls = 0;
  double target_effect = 0.0;
  double control_effect = 0.0;
  double base_rate = 0.05;
};

struct ModelsSection {
  std::size_t threshold = 1000;
  CohortFilter filter = CohortFilter::Unaware;
  CorrelationMethod method = CorrelationMethod::Pearson;
  TermModelKind kind = TermModelKind::Linear;
  bool with_interaction = false;
  std::size_t top_k = 10;
};

struct RunSection {
  unsigned threads = 1;
  std::uint64_t seed = 1;
};

struct PipelineConfig {
  PathsConfig paths;
  SynthSection synth;
  ClassifierConfig classifier;
  EstimateMode estimate_mode = EstimateMode::Mean;
  ModelsSection models;
  RunSection run;
};

// Every input path points into `data_dir`; the output directory is `out`.
PipelineConfig default_config(const std::filesystem::path& data_dir);

// TOML text. Relative paths resolve against `base_dir`; inputs not named fall back
// to `data_dir` (itself overridable by paths.data_dir). Unknown keys are errors.
PipelineConfig parse_config(std::string_view toml_text, const std::filesystem::path& base_dir,
                            const std::filesystem::path& data_dir);
PipelineConfig load_config(const std::filesystem::path& path, const std::filesystem::path& data_dir);

// Raises IoError naming the first missing input.
void check_inputs(const PipelineConfig& config);

// Canonical JSON of everything that can change results: thread count and the
// output directory are left out, input paths are replaced by content hashes.
std::string canonical_config(const PipelineConfig& config);
std::string config_hash(const PipelineConfig& config);

// Planted terms of the configured synthetic world, drawn from the two lexicons.
std::vector<PlantedTerm> planted_terms(const SynthSection& synth, const TermLexicon& targets,
                                       const TermLexicon& controls);

}  // namespace b12scope

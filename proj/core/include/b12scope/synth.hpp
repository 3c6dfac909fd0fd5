#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "b12scope/lexicon.hpp"
#include "b12scope/querylog.hpp"
#include "b12scope/term_models.hpp"
#include "b12scope/types.hpp"

namespace b12scope {

enum class PlantShape : std::uint8_t { Linear, Logistic };
enum class PlantIntake : std::uint8_t { Mean, Sum };
enum class PreferenceSource : std::uint8_t { National, Regional };

std::string_view plant_shape_name(PlantShape s);
std::optional<PlantShape> parse_plant_shape(std::string_view s);
std::string_view plant_intake_name(PlantIntake s);
std::optional<PlantIntake> parse_plant_intake(std::string_view s);
std::string_view preference_source_name(PreferenceSource s);
std::optional<PreferenceSource> parse_preference_source(std::string_view s);

struct PlantedTerm {
  std::string term;
  TermKind kind = TermKind::Target;
  double base_rate = 0.05;  // ask probability at the reference intake
  double effect = 0.0;      // probability change per mcg of intake above the reference
};

struct SynthConfig {
  std::size_t n_users = 10000;
  std::uint64_t seed = 1;

  std::array<double, kRegionCount> region_weights = {0.17, 0.21, 0.38, 0.24};
  double missing_zip_rate = 0.02;

  PreferenceSource preference = PreferenceSource::National;
  FoodVector food_weights = {0.03, 0.02, 0.03, 0.08, 0.06, 0.12,
                             0.18, 0.07, 0.22, 0.08, 0.06, 0.05};
  double concentration = 5.0;          // Dirichlet concentration around the base vector
  double regional_noise_sigma = 0.1;   // lognormal noise on expenditure-derived weights
  double regional_tomato_weight = 0.05;

  double recipe_rate = 6.0;        // Poisson mean of recipe searches per user
  bool single_ingredient = false;  // draw only recipes containing exactly the chosen food
  double filler_rate = 1.0;        // Poisson mean of unrelated queries

  std::vector<PlantedTerm> terms;
  PlantShape shape = PlantShape::Linear;
  PlantIntake intake = PlantIntake::Mean;

  double b12_rate = 0.03;         // general B12 question without a deficiency cue
  double deficiency_rate = 0.05;  // asks about B12 deficiency
  double deficiency_gap = 0.0;    // preference mass moved to tomatoes for that cohort
  double supplement_rate_aware = 0.04;
  double supplement_rate_unaware = 0.0004;

  double noise_rate = 0.0;  // fraction of recipe queries garbled

  std::int64_t start_time = 1500000000;

  // Raises ConfigError on out-of-range values.
  void validate() const;
};

struct TruthUser {
  std::string user_id;
  Region region = Region::Unknown;
  std::optional<std::string> zip;
  FoodCounts food_counts{};
  std::int64_t recipe_searches = 0;
  std::vector<std::string> terms;  // planted askers, sorted
  bool deficiency_aware = false;
  bool general_b12 = false;
  bool supplement = false;
};

struct TruthTerm {
  PlantedTerm plant;
  std::size_t n_askers = 0;
  double clamped_fraction = 0.0;  // users whose probability left [0,1] before clamping
};

struct GroundTruth {
  std::string log_sha256;
  std::uint64_t seed = 0;
  std::size_t n_users = 0;
  double reference_intake = 0.0;  // population mean of the plant's intake measure
  PlantIntake intake = PlantIntake::Mean;
  FoodVector nutrient_values{};
  bool regional_plant = false;
  RegionGroupMatrix planted_shares{};  // cost-weighted group shares implied by the plant
  std::vector<TruthUser> users;
  std::vector<TruthTerm> terms;
  std::vector<std::string> warnings;
};

struct SynthInputs {
  const RecipeCorpus* corpus = nullptr;
  const ZipRegionTable* zips = nullptr;
  const NutrientTable* nutrients = nullptr;
  const ReferenceTables* references = nullptr;  // required for regional preferences
};

struct SynthWorld {
  std::vector<QueryRecord> records;
  std::string log_text;  // JSONL, byte-identical for a given config and seed
  GroundTruth truth;
};

SynthWorld generate(const SynthConfig& config, const SynthInputs& inputs);

// First `count` terms of the lexicon that neither contain nor are contained in
// another term of `all_terms`, so planted askers are not double counted.
std::vector<PlantedTerm> plant_terms(const TermLexicon& lexicon, const std::vector<std::string>& all_terms,
                                     std::size_t count, double base_rate, double effect);

void write_truth(std::ostream& out, const GroundTruth& truth);
GroundTruth read_truth(std::istream& in);
GroundTruth read_truth_file(const std::filesystem::path& path);

struct OracleTerm {
  std::string term;
  double planted_effect = 0.0;
  std::size_t n_askers = 0;
  // Pearson correlation between the plant's intake measure and the asked flag
  // over all users; its sign is the sign of the diet dependence.
  std::optional<double> intake_correlation;
};

struct OracleExpectations {
  RegionGroupMatrix true_shares{};
  std::array<bool, kRegionCount> active{};
  std::optional<double> mean_intake_aware;  // mean-mode, deficiency-aware users
  std::optional<double> mean_intake_other;
  std::optional<double> relative_gap;
  std::vector<OracleTerm> terms;
};

// Recomputes expectations directly from the truth file. Fails with DataError if the
// log's SHA-256 differs from the one recorded in the truth.
OracleExpectations oracle_expected_effects(const GroundTruth& truth, const std::filesystem::path& log_path,
                                           const CostTable& costs, const FoodGroupMap& groups);
OracleExpectations oracle_expected_effects(const GroundTruth& truth, std::string_view log_bytes,
                                           const CostTable& costs, const FoodGroupMap& groups);

std::string oracle_to_json(const OracleExpectations& o);

// Term-level world for the indications model: drug terms with asker counts,
// indication counts and CoB12 values built as
//   cob12 = -0.3 + indications_effect * (rank(n_indications)/N - 1/2)
//               + pain_effect * (pain share - 0.4) + noise.
struct IndicationsWorldConfig {
  std::size_t n_drugs = 49;
  std::uint64_t seed = 1;
  double indications_effect = -0.6;
  double pain_effect = 0.6;
  double noise_sd = 0.05;
};

struct IndicationsWorld {
  std::vector<TermModelResult> results;
  IndicationsTable indications;
};

IndicationsWorld generate_indications_world(const IndicationsWorldConfig& config);

}  // namespace b12scope

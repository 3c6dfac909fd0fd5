#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "b12scope/types.hpp"

namespace b12scope {

// B12 content per food in mcg, one value per FoodItem in canonical order.
class NutrientTable {
 public:
  NutrientTable() = default;
  explicit NutrientTable(const FoodVector& mcg);

  double operator[](FoodItem f) const { return values_[index_of(f)]; }
  const FoodVector& values() const { return values_; }

  // Every entry multiplied by c > 0.
  NutrientTable scaled(double c) const;

 private:
  FoodVector values_{};
};

// Reads food,mcg_per_100g. All twelve foods must appear exactly once. Values are
// converted to `serving_grams` portions. Tomatoes is forced to zero.
NutrientTable load_nutrient_table(const std::filesystem::path& path, double serving_grams = 100.0);

// Maps free-text ingredient phrases to foods. A phrase mapped to no food ("coconut
// milk") shadows the shorter phrases it contains.
class SynonymTable {
 public:
  void add(std::string_view phrase, std::optional<FoodItem> food);
  FoodSet match(std::string_view ingredient) const;
  std::size_t size() const { return phrases_.size(); }

 private:
  std::unordered_map<std::string, std::optional<FoodItem>> phrases_;
  std::size_t max_tokens_ = 0;
};

SynonymTable load_synonym_table(const std::filesystem::path& path);

struct RecipeDoc {
  std::string title;  // normalized
  std::vector<std::string> title_tokens;
  FoodSet ingredients;
};

struct CorpusLoadStats {
  std::size_t lines = 0;
  std::size_t loaded = 0;
  std::size_t excluded_untracked = 0;
  std::size_t skipped_empty_title = 0;
  std::size_t duplicate_titles = 0;  // same normalized token set as an earlier recipe
};

class RecipeCorpus {
 public:
  // Adds a recipe unless its title token set is already present. Returns its index.
  std::optional<std::size_t> add(RecipeDoc doc);

  const std::vector<RecipeDoc>& docs() const { return docs_; }
  std::size_t size() const { return docs_.size(); }
  const RecipeDoc& operator[](std::size_t i) const { return docs_[i]; }

  // Recipes whose title contains `token`, ascending index order.
  const std::vector<std::uint32_t>& postings(const std::string& token) const;
  std::optional<std::size_t> find_title(const std::string& normalized_title) const;

  CorpusLoadStats stats;

 private:
  std::vector<RecipeDoc> docs_;
  std::unordered_map<std::string, std::vector<std::uint32_t>> index_;
  std::unordered_map<std::string, std::size_t> by_title_;
  std::unordered_map<std::string, std::size_t> by_token_set_;
};

RecipeCorpus load_recipe_corpus(std::istream& in, const SynonymTable& synonyms);
RecipeCorpus load_recipe_corpus(const std::filesystem::path& path, const SynonymTable& synonyms);

enum class TermKind : std::uint8_t { Target, Control };

enum class TermCategory : std::uint8_t {
  Antidepressants,
  NeuropathicDrugs,
  OtherPharmaceuticals,
  PainDescriptions,
  AcidDisorders,
  OtcAntacids,
  Psychotherapy,
  MedicalCannabis,
  Control,
};

std::string_view term_kind_name(TermKind k);
std::optional<TermKind> parse_term_kind(std::string_view s);
std::string_view category_name(TermCategory c);
std::optional<TermCategory> parse_category(std::string_view s);

struct TermEntry {
  std::string term;  // normalized phrase
  TermCategory category = TermCategory::Control;
};

struct TermLexicon {
  TermKind kind = TermKind::Target;
  std::vector<TermEntry> entries;  // file order, first occurrence wins
  std::vector<std::string> warnings;

  const TermEntry* find(std::string_view term) const;
};

// CSV term,category. Unknown categories raise ConfigError.
TermLexicon load_term_lexicon(std::istream& in, TermKind kind);
TermLexicon load_term_lexicon(const std::filesystem::path& path, TermKind kind);

struct Indications {
  std::int64_t n_indications = 0;
  std::int64_t n_pain_indications = 0;
};

using IndicationsTable = std::map<std::string, Indications>;

// FoodItem -> FoodGroup; Tomatoes and any other unmapped food carry no group.
using FoodGroupMap = std::array<std::optional<FoodGroup>, kFoodCount>;

using ExpenditureTable = RegionGroupMatrix;                  // dollars
using CostTable = std::array<double, kGroupCount>;         // dollars per unit
using ConsumptionTable = std::array<double, kGroupCount>;  // per-capita quantity

IndicationsTable load_indications(const std::filesystem::path& path);
FoodGroupMap load_food_groups(const std::filesystem::path& path);
ExpenditureTable load_expenditure(const std::filesystem::path& path);
CostTable load_costs(const std::filesystem::path& path);
ConsumptionTable load_consumption(const std::filesystem::path& path);

struct ReferencePaths {
  std::filesystem::path expenditure;
  std::filesystem::path costs;
  std::filesystem::path consumption;
  std::filesystem::path indications;
  std::filesystem::path food_groups;
};

struct ReferenceTables {
  ExpenditureTable expenditure{};
  CostTable costs{};
  ConsumptionTable consumption{};
  IndicationsTable indications;
  FoodGroupMap food_groups{};
};

ReferenceTables load_reference_tables(const ReferencePaths& paths);

}  // namespace b12scope

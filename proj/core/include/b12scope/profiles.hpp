#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "b12scope/classifier.hpp"
#include "b12scope/lexicon.hpp"
#include "b12scope/querylog.hpp"
#include "b12scope/types.hpp"

namespace b12scope {

struct UserProfile {
  std::string user_id;
  FoodCounts food_counts{};              // recipe searches containing each food
  std::vector<std::string> term_flags;   // sorted, unique
  bool asked_b12 = false;
  bool asked_b12_deficiency = false;
  bool asked_b12_supplement = false;
  Region region = Region::Unknown;
  std::int64_t queries = 0;
  std::int64_t recipe_searches = 0;  // queries resolved to a corpus recipe

  bool has_term(std::string_view term) const;
  bool b12_aware() const { return asked_b12 || asked_b12_deficiency || asked_b12_supplement; }
  std::int64_t total_food_count() const;

  bool operator==(const UserProfile&) const = default;
};

struct ProfileStore {
  std::vector<UserProfile> users;  // ascending user_id

  const UserProfile* find(std::string_view user_id) const;
  std::size_t size() const { return users.size(); }
};

// Region is the most frequent known region among the user's zips, ties going to
// the region seen first. Unknown wins only when no zip maps to a region.
ProfileStore build_profiles(const std::vector<ClassifiedRecord>& records, const ZipRegionTable& zips,
                            unsigned threads = 1);

enum class EstimateMode : std::uint8_t { Sum, Mean };

std::string_view estimate_mode_name(EstimateMode m);
std::optional<EstimateMode> parse_estimate_mode(std::string_view s);

// Sum: sum of content x count. Mean: that sum over the total count; nullopt when
// the user made no food searches.
std::optional<double> estimate_b12(const UserProfile& profile, const NutrientTable& table,
                                   EstimateMode mode);

struct CohortComparison {
  std::string predicate;
  EstimateMode mode = EstimateMode::Mean;
  std::size_t n_a = 0;  // users satisfying the predicate with a defined estimate
  std::size_t n_b = 0;
  std::size_t excluded = 0;  // users without a defined estimate
  double mean_a = 0.0;
  double mean_b = 0.0;
  double relative_diff = 0.0;  // |mean_a - mean_b| / mean_b
  double ranksum_p = 1.0;
};

using ProfilePredicate = std::function<bool(const UserProfile&)>;

CohortComparison cohort_compare(const ProfileStore& store, const NutrientTable& table,
                                EstimateMode mode, const ProfilePredicate& predicate,
                                std::string_view predicate_name);

struct AwarenessReport {
  std::size_t users = 0;
  std::size_t unaware = 0;  // no B12-related query of any kind
  double unaware_fraction = 0.0;
  std::size_t deficiency_aware = 0;
  std::size_t supplement_within = 0;  // deficiency-aware users asking about supplements
  std::size_t supplement_without = 0;
  std::optional<double> rate_within;
  std::optional<double> rate_without;
  std::optional<double> ratio;  // rate_within / rate_without
};

AwarenessReport awareness_stats(const ProfileStore& store);

std::string profile_to_json(const UserProfile& p);
UserProfile profile_from_json(std::string_view line);
void write_profiles(std::ostream& out, const ProfileStore& store);
ProfileStore read_profiles(std::istream& in);
ProfileStore read_profiles_file(const std::filesystem::path& path);

}  // namespace b12scope

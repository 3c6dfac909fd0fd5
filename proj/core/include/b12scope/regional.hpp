#pragma once

#include <array>
#include <optional>
#include <vector>

#include "b12scope/lexicon.hpp"
#include "b12scope/profiles.hpp"
#include "b12scope/stats.hpp"
#include "b12scope/types.hpp"

namespace b12scope {

struct RegionalShareMatrix {
  RegionGroupMatrix queries{};  // raw recipe-search counts per region and group
  RegionGroupMatrix shares{};   // cost-weighted, each active row sums to 1
  std::array<bool, kRegionCount> active{};  // false: no weighted activity, row left at zero
};

// Shares from already-aggregated per-region group counts.
RegionalShareMatrix shares_from_queries(const RegionGroupMatrix& queries, const CostTable& costs);

// Aggregates food counts of users with a known region into groups, then weights by cost.
RegionalShareMatrix regional_recipe_shares(const ProfileStore& store, const CostTable& costs,
                                           const FoodGroupMap& groups);

// Row-normalized expenditure.
RegionGroupMatrix expenditure_fractions(const ExpenditureTable& expenditure);

struct ValidationRow {
  Region region = Region::Unknown;
  FoodGroup group = FoodGroup::Beef;
  double share = 0.0;
  double expenditure_fraction = 0.0;
};

struct ValidationResult {
  stats::CorrelationResult correlation;  // Spearman over active cells
  std::vector<ValidationRow> rows;       // active cells, region-major
  std::vector<Region> excluded_regions;
};

ValidationResult validate_against_expenditure(const RegionalShareMatrix& shares,
                                              const ExpenditureTable& expenditure);

// Secondary check: national unweighted query fractions per group against
// per-capita consumption fractions. nullopt when undefined (constant input).
std::optional<stats::CorrelationResult> consumption_check(const RegionalShareMatrix& shares,
                                                          const ConsumptionTable& consumption);

}  // namespace b12scope

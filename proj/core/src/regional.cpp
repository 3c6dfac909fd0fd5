#include "b12scope/regional.hpp"

#include <cmath>

#include "b12scope/error.hpp"
#include "b12scope/numeric.hpp"

namespace b12scope {

RegionalShareMatrix shares_from_queries(const RegionGroupMatrix& queries, const CostTable& costs) {
  for (double c : costs) {
    if (!(c > 0.0) || !std::isfinite(c)) throw DataError("costs must be positive and finite");
  }
  RegionalShareMatrix m;
  m.queries = queries;
  for (std::size_t r = 0; r < kRegionCount; ++r) {
    std::array<double, kGroupCount> weighted{};
    CompensatedSum total;
    for (std::size_t g = 0; g < kGroupCount; ++g) {
      weighted[g] = costs[g] * queries[r][g];
      total.add(weighted[g]);
    }
    const double t = total.value();
    if (!(t > 0.0)) continue;
    m.active[r] = true;
    for (std::size_t g = 0; g < kGroupCount; ++g) m.shares[r][g] = weighted[g] / t;
  }
  return m;
}

RegionalShareMatrix regional_recipe_shares(const ProfileStore& store, const CostTable& costs,
                                           const FoodGroupMap& groups) {
  RegionGroupMatrix queries{};
  for (const auto& p : store.users) {
    if (p.region == Region::Unknown) continue;
    const auto r = static_cast<std::size_t>(p.region);
    for (std::size_t f = 0; f < kFoodCount; ++f) {
      if (!groups[f] || p.food_counts[f] == 0) continue;
      queries[r][static_cast<std::size_t>(*groups[f])] += static_cast<double>(p.food_counts[f]);
    }
  }
  return shares_from_queries(queries, costs);
}

RegionGroupMatrix expenditure_fractions(const ExpenditureTable& expenditure) {
  RegionGroupMatrix out{};
  for (std::size_t r = 0; r < kRegionCount; ++r) {
    const double total = compensated_sum(expenditure[r]);
    if (!(total > 0.0)) throw DataError("expenditure row sums to zero");
    for (std::size_t g = 0; g < kGroupCount; ++g) out[r][g] = expenditure[r][g] / total;
  }
  return out;
}

ValidationResult validate_against_expenditure(const RegionalShareMatrix& shares,
                                              const ExpenditureTable& expenditure) {
  const auto fractions = expenditure_fractions(expenditure);
  ValidationResult out;
  std::vector<double> x, y;
  for (std::size_t r = 0; r < kRegionCount; ++r) {
    if (!shares.active[r]) {
      out.excluded_regions.push_back(kRegions[r]);
      continue;
    }
    for (std::size_t g = 0; g < kGroupCount; ++g) {
      out.rows.push_back({kRegions[r], kGroups[g], shares.shares[r][g], fractions[r][g]});
      x.push_back(shares.shares[r][g]);
      y.push_back(fractions[r][g]);
    }
  }
  if (x.empty()) throw StatError("no region has recipe activity; nothing to validate");
  out.correlation = stats::spearman(x, y);
  return out;
}

std::optional<stats::CorrelationResult> consumption_check(const RegionalShareMatrix& shares,
                                                          const ConsumptionTable& consumption) {
  std::vector<double> q(kGroupCount, 0.0);
  std::vector<double> c(consumption.begin(), consumption.end());
  for (std::size_t r = 0; r < kRegionCount; ++r) {
    for (std::size_t g = 0; g < kGroupCount; ++g) q[g] += shares.queries[r][g];
  }
  try {
    return stats::spearman(q, c);
  } catch (const StatError&) {
    return std::nullopt;
  }
}

}  // namespace b12scope

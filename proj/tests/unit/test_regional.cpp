#include <gtest/gtest.h>

#include "b12scope/error.hpp"
#include "b12scope/regional.hpp"
#include "b12scope/synth.hpp"
#include "oracles.hpp"
#include "test_paths.hpp"

using namespace b12scope;
using testing_support::data_path;

namespace {

const ReferenceTables& refs() {
  static const ReferenceTables t = load_reference_tables(
      {data_path("expenditure.csv"), data_path("costs.csv"), data_path("consumption.csv"),
       data_path("indications.csv"), data_path("food_groups.csv")});
  return t;
}

std::size_t g(FoodGroup x) { return static_cast<std::size_t>(x); }
std::size_t r(Region x) { return static_cast<std::size_t>(x); }

}  // namespace

TEST(Shares, SingleGroupTakesEverything) {
  ProfileStore store;
  UserProfile p;
  p.user_id = "u1";
  p.region = Region::Northeast;
  p.food_counts[index_of(FoodItem::Beef)] = 3;
  p.food_counts[index_of(FoodItem::Tomatoes)] = 3;
  store.users.push_back(p);
  const auto m = regional_recipe_shares(store, refs().costs, refs().food_groups);
  EXPECT_TRUE(m.active[r(Region::Northeast)]);
  EXPECT_FALSE(m.active[r(Region::West)]);
  EXPECT_EQ(m.shares[r(Region::Northeast)][g(FoodGroup::Beef)], 1.0);
  EXPECT_EQ(m.queries[r(Region::Northeast)][g(FoodGroup::Beef)], 3.0);
}

TEST(Shares, UnknownRegionAndUngroupedFoodsIgnored) {
  ProfileStore store;
  UserProfile p;
  p.user_id = "u1";
  p.food_counts[index_of(FoodItem::Beef)] = 3;
  store.users.push_back(p);
  const auto m = regional_recipe_shares(store, refs().costs, refs().food_groups);
  for (bool a : m.active) EXPECT_FALSE(a);
  EXPECT_THROW(validate_against_expenditure(m, refs().expenditure), StatError);
}

TEST(Shares, CostWeightingEvensOut) {
  RegionGroupMatrix q{};
  for (std::size_t i = 0; i < kGroupCount; ++i) q[r(Region::South)][i] = 12.0 / refs().costs[i];
  const auto m = shares_from_queries(q, refs().costs);
  for (double s : m.shares[r(Region::South)]) EXPECT_NEAR(s, 1.0 / 6.0, 1e-15);
}

TEST(Shares, RowsSumToOne) {
  RegionGroupMatrix q{};
  for (std::size_t i = 0; i < kRegionCount; ++i) {
    for (std::size_t j = 0; j < kGroupCount; ++j) q[i][j] = static_cast<double>((i * 7 + j * 3) % 5 + 1);
  }
  const auto m = shares_from_queries(q, refs().costs);
  for (const auto& row : m.shares) {
    double s = 0;
    for (double v : row) {
      EXPECT_GE(v, 0.0);
      s += v;
    }
    EXPECT_NEAR(s, 1.0, 1e-12);
  }
}

TEST(Shares, NonPositiveCostIsDataError) {
  CostTable c = refs().costs;
  c[2] = 0.0;
  EXPECT_THROW(shares_from_queries(RegionGroupMatrix{}, c), DataError);
}

TEST(Validate, SharesEqualToExpenditureGiveRhoOne) {
  const auto f = expenditure_fractions(refs().expenditure);
  RegionGroupMatrix q{};
  for (std::size_t i = 0; i < kRegionCount; ++i) {
    for (std::size_t j = 0; j < kGroupCount; ++j) q[i][j] = 1000.0 * f[i][j] / refs().costs[j];
  }
  const auto v = validate_against_expenditure(shares_from_queries(q, refs().costs), refs().expenditure);
  EXPECT_EQ(v.correlation.n, 24u);
  EXPECT_NEAR(v.correlation.coefficient, 1.0, 1e-12);
  EXPECT_LT(v.correlation.p_value, 1e-6);
  EXPECT_TRUE(v.excluded_regions.empty());
}

TEST(Validate, ReversedOrderGivesMinusOne) {
  const auto f = expenditure_fractions(refs().expenditure);
  RegionGroupMatrix q{};
  // each weighted row sums to 5, so shares are (1 - f) / 5: strictly reversed
  for (std::size_t i = 0; i < kRegionCount; ++i) {
    for (std::size_t j = 0; j < kGroupCount; ++j) q[i][j] = (1.0 - f[i][j]) / refs().costs[j];
  }
  const auto v = validate_against_expenditure(shares_from_queries(q, refs().costs), refs().expenditure);
  EXPECT_NEAR(v.correlation.coefficient, -1.0, 1e-12);
}

TEST(Validate, InactiveRegionIsExcluded) {
  RegionGroupMatrix q{};
  for (std::size_t j = 0; j < kGroupCount; ++j) {
    q[r(Region::Northeast)][j] = static_cast<double>(j + 1);
    q[r(Region::South)][j] = static_cast<double>(6 - j);
  }
  const auto v = validate_against_expenditure(shares_from_queries(q, refs().costs), refs().expenditure);
  EXPECT_EQ(v.correlation.n, 12u);
  EXPECT_EQ(v.excluded_regions, (std::vector<Region>{Region::Midwest, Region::West}));
  std::vector<double> x, y;
  for (const auto& row : v.rows) {
    x.push_back(row.share);
    y.push_back(row.expenditure_fraction);
  }
  EXPECT_NEAR(v.correlation.coefficient, static_cast<double>(oracle::spearman_rho(x, y)), 1e-12);
}

TEST(Validate, PipelineSharesMatchTruth) {
  const auto zips = load_zip_regions(data_path("zip_regions.csv"));
  const auto nutrients = load_nutrient_table(data_path("nutrients.csv"));
  const auto synonyms = load_synonym_table(data_path("ingredient_synonyms.csv"));
  const auto corpus = load_recipe_corpus(data_path("recipes.jsonl"), synonyms);
  SynthConfig cfg;
  cfg.n_users = 2000;
  cfg.seed = 11;
  cfg.preference = PreferenceSource::Regional;
  const auto world = generate(cfg, {&corpus, &zips, &nutrients, &refs()});
  ASSERT_TRUE(world.truth.regional_plant);

  TermMatcher none;
  const ClassifierConfig ccfg;
  const QueryClassifier classifier(corpus, none, ccfg);
  const auto store = build_profiles(classify_all(world.records, classifier, 1), zips);
  const auto got = regional_recipe_shares(store, refs().costs, refs().food_groups);
  const auto want = oracle_expected_effects(world.truth, std::string_view(world.log_text), refs().costs,
                                            refs().food_groups);
  for (std::size_t i = 0; i < kRegionCount; ++i) {
    EXPECT_EQ(got.active[i], want.active[i]);
    for (std::size_t j = 0; j < kGroupCount; ++j) EXPECT_NEAR(got.shares[i][j], want.true_shares[i][j], 1e-12);
  }
}

TEST(Validate, SingleIngredientSharesApproachPlant) {
  const auto zips = load_zip_regions(data_path("zip_regions.csv"));
  const auto nutrients = load_nutrient_table(data_path("nutrients.csv"));
  const auto synonyms = load_synonym_table(data_path("ingredient_synonyms.csv"));
  const auto corpus = load_recipe_corpus(data_path("recipes.jsonl"), synonyms);
  SynthConfig cfg;
  cfg.n_users = 20000;
  cfg.seed = 12;
  cfg.preference = PreferenceSource::Regional;
  cfg.single_ingredient = true;
  const auto world = generate(cfg, {&corpus, &zips, &nutrients, &refs()});
  const auto want = oracle_expected_effects(world.truth, std::string_view(world.log_text), refs().costs,
                                            refs().food_groups);
  // planted shares are expectations; with one food per recipe the sample converges to them
  for (std::size_t i = 0; i < kRegionCount; ++i) {
    for (std::size_t j = 0; j < kGroupCount; ++j) {
      EXPECT_NEAR(want.true_shares[i][j], world.truth.planted_shares[i][j], 0.02) << i << ',' << j;
    }
  }
}

TEST(Consumption, ConstantQueriesAreUndefined) {
  RegionGroupMatrix q{};
  for (auto& row : q) row.fill(1.0);
  EXPECT_FALSE(consumption_check(shares_from_queries(q, refs().costs), refs().consumption));
}

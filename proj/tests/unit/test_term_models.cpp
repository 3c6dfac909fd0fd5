#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include <fmt/format.h>

#include "b12scope/error.hpp"
#include "b12scope/term_models.hpp"
#include "oracles.hpp"
#include "test_paths.hpp"

using namespace b12scope;
using testing_support::data_path;

namespace {

const NutrientTable& nutrients() {
  static const NutrientTable t = load_nutrient_table(data_path("nutrients.csv"));
  return t;
}

// Users with Poisson food counts; "alpha" is asked more by heavy beef searchers,
// "beta" at random, "gamma" by nobody.
ProfileStore random_store(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::poisson_distribution<int> counts(1.5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ProfileStore store;
  for (std::size_t i = 0; i < n; ++i) {
    UserProfile p;
    p.user_id = fmt::format("u{:05}", i);
    for (auto& c : p.food_counts) c = counts(rng);
    if (u(rng) < 0.05 + 0.05 * static_cast<double>(p.food_counts[index_of(FoodItem::Beef)])) {
      p.term_flags.push_back("alpha");
    }
    if (u(rng) < 0.2) p.term_flags.push_back("beta");
    p.asked_b12 = u(rng) < 0.1;
    store.users.push_back(std::move(p));
  }
  return store;
}

TermModelResult result(std::string term, double r2, std::size_t askers, std::optional<double> cob) {
  TermModelResult r;
  r.term = std::move(term);
  r.r2_i = r2;
  r.n_askers = askers;
  r.cob12 = cob;
  r.cob12_pearson = cob;
  return r;
}

TermSelection sel(std::string term) { return {std::move(term), TermKind::Target, TermCategory::Control, 0}; }

}  // namespace

TEST(Select, ThresholdIsInclusive) {
  ProfileStore store;
  for (int i = 0; i < 5; ++i) {
    UserProfile p;
    p.user_id = "u" + std::to_string(i);
    if (i < 3) p.term_flags.push_back("gabapentin");
    if (i < 2) p.term_flags.push_back("tramadol");
    store.users.push_back(p);
  }
  std::istringstream in("term,category\ngabapentin,neuropathic drugs\ntramadol,neuropathic drugs\n");
  const auto lex = load_term_lexicon(in, TermKind::Target);
  const auto s3 = select_modeled_terms(store, lex, 3);
  ASSERT_EQ(s3.size(), 1u);
  EXPECT_EQ(s3[0].term, "gabapentin");
  EXPECT_EQ(s3[0].n_askers, 3u);
  EXPECT_EQ(select_modeled_terms(store, lex, 2).size(), 2u);
  EXPECT_TRUE(select_modeled_terms(store, lex, 4).empty());
}

TEST(CoB12, SelfCorrelationIsOne) {
  const auto& v = nutrients().values();
  EXPECT_NEAR(*cob12(v, nutrients(), CorrelationMethod::Pearson), 1.0, 1e-12);
  FoodVector neg;
  for (std::size_t i = 0; i < kFoodCount; ++i) neg[i] = -3.0 * v[i];
  EXPECT_NEAR(*cob12(neg, nutrients(), CorrelationMethod::Pearson), -1.0, 1e-12);
  EXPECT_NEAR(*cob12(neg, nutrients(), CorrelationMethod::Spearman), -1.0, 1e-12);
  FoodVector flat;
  flat.fill(0.25);
  EXPECT_FALSE(cob12(flat, nutrients(), CorrelationMethod::Pearson));
}

TEST(Fit, MatchesExtendedPrecisionOls) {
  const auto store = random_store(400, 3);
  const auto r = fit_term_model(store, sel("alpha"), nutrients(), {CohortFilter::All});
  ASSERT_FALSE(r.degenerate) << r.reason;
  std::vector<std::vector<double>> x;
  std::vector<double> y;
  for (const auto& p : store.users) {
    x.emplace_back(p.food_counts.begin(), p.food_counts.end());
    y.push_back(p.has_term("alpha") ? 1.0 : 0.0);
  }
  const auto want = oracle::ols(x, y);
  EXPECT_NEAR(r.intercept, want[0], 1e-9);
  for (std::size_t f = 0; f < kFoodCount; ++f) EXPECT_NEAR(r.coefficients[f], want[f + 1], 1e-9);
  EXPECT_GT(r.coefficients[index_of(FoodItem::Beef)], 0.0);
  EXPECT_EQ(r.n_users_fit, 400u);
  EXPECT_NEAR(*r.cob12_pearson, oracle::pearson({r.coefficients.begin(), r.coefficients.end()},
                                                {nutrients().values().begin(), nutrients().values().end()}),
              1e-12);
}

TEST(Fit, UnawareFilterDropsB12Askers) {
  const auto store = random_store(400, 5);
  std::size_t unaware = 0, askers = 0;
  for (const auto& p : store.users) {
    unaware += p.b12_aware() ? 0 : 1;
    askers += p.has_term("beta") ? 1 : 0;
  }
  const auto r = fit_term_model(store, sel("beta"), nutrients(), {});
  EXPECT_EQ(r.n_users_fit, unaware);
  EXPECT_EQ(r.n_askers, askers);
  EXPECT_LT(r.n_positive, askers);
}

TEST(Fit, NoAskersIsDegenerate) {
  const auto store = random_store(200, 7);
  const auto r = fit_term_model(store, sel("gamma"), nutrients(), {});
  EXPECT_TRUE(r.degenerate);
  EXPECT_FALSE(r.reason.empty());
  EXPECT_FALSE(r.cob12);
}

TEST(Fit, NeverSearchedFoodIsDegenerate) {
  auto store = random_store(200, 8);
  for (auto& p : store.users) p.food_counts[index_of(FoodItem::Trout)] = 0;
  EXPECT_TRUE(fit_term_model(store, sel("alpha"), nutrients(), {}).degenerate);
}

TEST(Fit, LogisticAgreesInSign) {
  const auto store = random_store(1500, 9);
  FitOptions o;
  o.kind = TermModelKind::Logistic;
  const auto r = fit_term_model(store, sel("alpha"), nutrients(), o);
  ASSERT_FALSE(r.degenerate) << r.reason;
  EXPECT_GT(r.coefficients[index_of(FoodItem::Beef)], 0.0);
  EXPECT_GT(r.r2_i, 0.0);
  EXPECT_LT(r.r2_i, 1.0);
}

TEST(Fit, BatchEqualsSingleForAnyThreadCount) {
  const auto store = random_store(300, 10);
  const std::vector<TermSelection> terms = {sel("alpha"), sel("beta"), sel("gamma")};
  FitOptions o;
  o.threads = 3;
  const auto batch = fit_all_terms(store, terms, nutrients(), o);
  ASSERT_EQ(batch.size(), 3u);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto one = fit_term_model(store, terms[i], nutrients(), {});
    EXPECT_EQ(batch[i].term, one.term);
    EXPECT_EQ(batch[i].coefficients, one.coefficients);
    EXPECT_EQ(batch[i].r2_i, one.r2_i);
    EXPECT_EQ(batch[i].degenerate, one.degenerate);
  }
}

TEST(Rank, OrderAndTies) {
  std::vector<TermModelResult> rs = {result("b", 0.2, 10, 0.1), result("a", 0.2, 10, 0.1),
                                     result("c", 0.2, 50, 0.1), result("d", 0.9, 1, 0.1),
                                     result("e", 0.0, 1, std::nullopt)};
  rs[4].degenerate = true;
  const auto ranked = rank_terms(rs);
  std::vector<std::string> order;
  for (const auto& r : ranked) order.push_back(r.term);
  EXPECT_EQ(order, (std::vector<std::string>{"d", "c", "a", "b", "e"}));
}

TEST(Compare, IdenticalListsGiveRatioOne) {
  std::vector<TermModelResult> rs;
  for (int i = 0; i < 10; ++i) rs.push_back(result("t" + std::to_string(i), 0.01 * (i + 1), 100, -0.5 + 0.1 * i));
  const auto c = target_vs_control(rs, rs, 10);
  ASSERT_TRUE(c.median_r2_ratio);
  EXPECT_DOUBLE_EQ(*c.median_r2_ratio, 1.0);
  EXPECT_NEAR(c.r2_ranksum_p, 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(c.mean_cob12_target, c.mean_cob12_control);
  EXPECT_EQ(c.targets_used, 10u);
}

TEST(Compare, TopKAndShortLists) {
  std::vector<TermModelResult> t, k;
  for (int i = 0; i < 15; ++i) t.push_back(result("t" + std::to_string(i), 0.01 * (i + 1), 100, -0.5));
  for (int i = 0; i < 4; ++i) k.push_back(result("k" + std::to_string(i), 0.001 * (i + 1), 100, 0.1));
  k.push_back(result("deg", 0.5, 100, std::nullopt));
  k.back().degenerate = true;
  const auto c = target_vs_control(t, k, 10);
  EXPECT_EQ(c.targets_used, 10u);
  EXPECT_EQ(c.controls_used, 4u);
  EXPECT_EQ(c.degenerate_controls, 1u);
  // top 10 of 0.01..0.15 are 0.06..0.15
  EXPECT_NEAR(c.median_r2_target, 0.105, 1e-12);
  EXPECT_NEAR(c.median_r2_control, 0.0025, 1e-12);
  EXPECT_THROW(target_vs_control(t, {k.back()}, 10), StatError);
}

TEST(Compare, TomatoContrast) {
  std::vector<TermModelResult> t;
  for (int i = 0; i < 3; ++i) {
    auto r = result("t" + std::to_string(i), 0.1, 10, -0.2);
    r.coefficients.fill(i % 2 ? -0.02 : 0.02);
    r.coefficients[index_of(FoodItem::Tomatoes)] = 0.005;
    r.coefficients[index_of(FoodItem::Milk)] = 0.01;
    t.push_back(r);
  }
  const auto c = target_vs_control(t, t, 10);
  EXPECT_NEAR(c.mean_abs_coef_target[index_of(FoodItem::Beef)], 0.02, 1e-15);
  ASSERT_TRUE(c.min_ratio_to_tomato);
  EXPECT_NEAR(*c.min_ratio_to_tomato, 2.0, 1e-12);
  EXPECT_NEAR(*c.pooled_ratio_to_tomato, (10 * 4.0 + 2.0) / 11.0, 1e-12);
}

TEST(Indications, EqualWeightsMatchUnweightedRankOls) {
  IndicationsTable table;
  std::vector<TermModelResult> rs;
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> ind(1, 30), asked(50, 5000);
  std::normal_distribution<double> noise(0.0, 0.2);
  for (int i = 0; i < 20; ++i) {
    const std::string name = "drug" + std::to_string(i);
    const int n = ind(rng);
    table[name] = {n, n / (1 + i % 4)};
    rs.push_back(result(name, 0.004, static_cast<std::size_t>(asked(rng)), -0.01 * n + noise(rng)));
  }
  rs.push_back(result("no_indications", 0.004, 10, 0.0));
  const auto m = indications_model(rs, table);
  EXPECT_EQ(m.n, 20u);

  std::vector<double> a, b, c, y;
  for (std::size_t i = 0; i < 20; ++i) {
    const auto& ent = table.at(rs[i].term);
    a.push_back(static_cast<double>(rs[i].n_askers));
    b.push_back(static_cast<double>(ent.n_indications));
    c.push_back(static_cast<double>(ent.n_pain_indications));
    y.push_back(*rs[i].cob12);
  }
  const auto ra = oracle::ranks(a), rb = oracle::ranks(b), rc = oracle::ranks(c), ry = oracle::ranks(y);
  std::vector<std::vector<double>> x;
  for (std::size_t i = 0; i < 20; ++i) x.push_back({ra[i], rb[i], rc[i]});
  const auto want = oracle::ols(x, ry);
  EXPECT_NEAR(m.slope_askers, want[1], 1e-9);
  EXPECT_NEAR(m.slope_indications, want[2], 1e-9);
  EXPECT_NEAR(m.slope_pain, want[3], 1e-9);
  EXPECT_LT(m.slope_indications, 0.0);
}

TEST(Indications, TooFewRowsIsStatError) {
  IndicationsTable table{{"a", {1, 0}}, {"b", {2, 1}}};
  EXPECT_THROW(indications_model({result("a", 0.1, 5, 0.1), result("b", 0.1, 5, 0.2)}, table), StatError);
}

TEST(ResultsCsv, RoundTrip) {
  const auto store = random_store(300, 12);
  const std::vector<TermSelection> terms = {sel("alpha"), sel("beta"), sel("gamma")};
  const auto rs = fit_all_terms(store, terms, nutrients(), {});
  std::stringstream buf;
  write_results_csv(buf, rs, {"config_hash deadbeef"});
  EXPECT_EQ(buf.str().rfind("# config_hash deadbeef\n", 0), 0u);
  const auto back = read_results_csv(buf);
  ASSERT_EQ(back.size(), rs.size());
  for (std::size_t i = 0; i < rs.size(); ++i) {
    EXPECT_EQ(back[i].term, rs[i].term);
    EXPECT_EQ(back[i].coefficients, rs[i].coefficients);
    EXPECT_EQ(back[i].cob12, rs[i].cob12);
    EXPECT_EQ(back[i].r2_i, rs[i].r2_i);
    EXPECT_EQ(back[i].degenerate, rs[i].degenerate);
    EXPECT_EQ(back[i].reason, rs[i].reason);
  }
}

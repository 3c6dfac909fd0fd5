#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "b12scope/classifier.hpp"
#include "b12scope/error.hpp"
#include "b12scope/synth.hpp"
#include "b12scope/text.hpp"
#include "test_paths.hpp"

using namespace b12scope;
using testing_support::data_path;
using testing_support::fixture_path;

namespace {

struct World {
  SynonymTable synonyms = load_synonym_table(data_path("ingredient_synonyms.csv"));
  RecipeCorpus corpus = load_recipe_corpus(data_path("recipes.jsonl"), synonyms);
  TermLexicon targets = load_term_lexicon(data_path("targets.csv"), TermKind::Target);
  TermLexicon controls = load_term_lexicon(data_path("controls.csv"), TermKind::Control);
  ClassifierConfig config;
};

const World& world() {
  static const World w;
  return w;
}

TermMatcher all_terms() {
  TermMatcher m;
  m.add(world().targets);
  m.add(world().controls);
  return m;
}

}  // namespace

TEST(RecipeMatch, TitleWithCue) {
  const RecipeMatcher m(world().corpus, world().config);
  const auto hit = m.match(normalize_query("beef stew recipe"));
  ASSERT_TRUE(hit);
  EXPECT_EQ(world().corpus[hit->recipe].title, "beef stew");
  EXPECT_DOUBLE_EQ(hit->coverage, 1.0);
}

TEST(RecipeMatch, NoCueNoTitle) {
  const RecipeMatcher m(world().corpus, world().config);
  EXPECT_FALSE(m.match(normalize_query("weather tomorrow")));
}

TEST(RecipeMatch, BareTitleNeedsExactMatch) {
  const RecipeMatcher m(world().corpus, world().config);
  EXPECT_TRUE(m.match(normalize_query("grilled salmon")));
  EXPECT_FALSE(m.match(normalize_query("grilled salmon near me")));
}

TEST(RecipeMatch, CoverageThreshold) {
  const RecipeMatcher m(world().corpus, world().config);
  // 1 of 2 title tokens covered
  EXPECT_FALSE(m.match(normalize_query("salmon recipe")));
  ClassifierConfig loose = world().config;
  loose.theta = 0.5;
  const RecipeMatcher lm(world().corpus, loose);
  EXPECT_TRUE(lm.match(normalize_query("salmon recipe")));
}

TEST(TermMatch, WholeTokensOnly) {
  const auto m = all_terms();
  EXPECT_EQ(m.match(normalize_query("gabapentin dosage")), std::vector<std::string>{"gabapentin"});
  EXPECT_TRUE(m.match(normalize_query("gaba")).empty());
}

TEST(TermMatch, MultiWordAndOverlapping) {
  TermMatcher m;
  m.add_term("back pain");
  m.add_term("lower back pain");
  EXPECT_EQ(m.match(normalize_query("Lower back pain relief")),
            (std::vector<std::string>{"back pain", "lower back pain"}));
  EXPECT_TRUE(m.match(normalize_query("back of the pain")).empty());
}

TEST(Classify, AwarenessFlags) {
  const auto terms = all_terms();
  const QueryClassifier c(world().corpus, terms, world().config);
  const auto d = c.classify("b12 deficiency symptoms");
  EXPECT_TRUE(d.is_b12);
  EXPECT_TRUE(d.is_b12_deficiency);
  EXPECT_FALSE(d.is_b12_supplement);
  const auto s = c.classify("B12 injections near me");
  EXPECT_TRUE(s.is_b12);
  EXPECT_TRUE(s.is_b12_supplement);
  EXPECT_FALSE(s.is_b12_deficiency);
  const auto low = c.classify("low iron levels");
  EXPECT_FALSE(low.is_b12_deficiency);
}

TEST(Classify, RecipeQueries) {
  const auto terms = all_terms();
  const QueryClassifier c(world().corpus, terms, world().config);
  const auto r = c.classify("Salmon recipe");
  EXPECT_TRUE(r.is_recipe);
  const auto g = c.classify("grilled salmon recipe");
  ASSERT_TRUE(g.recipe_title);
  EXPECT_EQ(*g.recipe_title, "grilled salmon");
  EXPECT_TRUE(g.recipe_foods.contains(FoodItem::Salmon));
}

TEST(Classify, ParallelMatchesSerial) {
  const auto terms = all_terms();
  const QueryClassifier c(world().corpus, terms, world().config);
  std::vector<QueryRecord> recs;
  const char* texts[] = {"beef stew recipe", "gabapentin", "b12 pills", "weather", "how to make tuna melt"};
  for (int i = 0; i < 200; ++i) recs.push_back({"u" + std::to_string(i % 17), texts[i % 5], std::nullopt, i});
  const auto one = classify_all(recs, c, 1);
  const auto four = classify_all(recs, c, 4);
  EXPECT_EQ(one, four);
}

TEST(Classify, JsonRoundTrip) {
  const auto terms = all_terms();
  const QueryClassifier c(world().corpus, terms, world().config);
  std::vector<QueryRecord> recs = {{"u1", "beef stew recipe", "10001", 1},
                                   {"u2", "gabapentin side effects", std::nullopt, 2},
                                   {"u3", "b12 deficiency", "94110", 3}};
  const auto classified = classify_all(recs, c, 1);
  std::stringstream buf;
  write_classified(buf, classified);
  EXPECT_EQ(read_classified(buf), classified);
}

TEST(Classify, PlantedTermHitsRecoveredExactly) {
  SynthConfig cfg;
  cfg.n_users = 160;
  cfg.seed = 99;
  cfg.recipe_rate = 4.0;
  const auto zips = load_zip_regions(data_path("zip_regions.csv"));
  const auto nutrients = load_nutrient_table(data_path("nutrients.csv"));
  std::vector<std::string> names;
  for (const auto& e : world().targets.entries) names.push_back(e.term);
  for (const auto& e : world().controls.entries) names.push_back(e.term);
  cfg.terms = plant_terms(world().targets, names, 12, 0.06, 0.0);
  const auto synth = generate(cfg, {&world().corpus, &zips, &nutrients, nullptr});
  std::size_t planted = 0;
  for (const auto& t : synth.truth.terms) planted += t.n_askers;
  ASSERT_GT(synth.records.size(), 700u);
  ASSERT_GT(planted, 60u);

  const auto terms = all_terms();
  const QueryClassifier c(world().corpus, terms, world().config);
  std::map<std::string, std::vector<std::string>> seen;
  std::size_t hits = 0;
  for (const auto& r : classify_all(synth.records, c, 1)) {
    hits += r.cls.matched_terms.size();
    auto& v = seen[r.record.user_id];
    v.insert(v.end(), r.cls.matched_terms.begin(), r.cls.matched_terms.end());
  }
  EXPECT_EQ(hits, planted);
  for (const auto& u : synth.truth.users) {
    auto got = seen[u.user_id];
    std::sort(got.begin(), got.end());
    EXPECT_EQ(got, u.terms) << u.user_id;
  }
}

TEST(TermMatch, ThousandQueriesWith120PlantedHits) {
  const auto terms = all_terms();
  std::vector<std::string> names;
  for (const auto* lex : {&world().targets, &world().controls}) {
    for (const auto& e : lex->entries) {
      // terms like "lower back pain" also contain a shorter listed term
      if (terms.match(normalize_query(e.term)).size() == 1) names.push_back(e.term);
    }
  }
  ASSERT_GT(names.size(), 60u);
  // near misses: prefixes and suffixed forms of real terms, plus plain filler
  const std::vector<std::string> filler = {"gaba dosage", "weather tomorrow", "tramadols price", "beef stew recipe",
                                           "b12 deficiency symptoms", "best running shoes", "how to tie a tie"};
  std::mt19937_64 rng(120);
  std::vector<std::size_t> slots(1000);
  std::iota(slots.begin(), slots.end(), std::size_t{0});
  std::shuffle(slots.begin(), slots.end(), rng);
  std::map<std::size_t, std::string> planted;
  for (std::size_t i = 0; i < 120; ++i) planted[slots[i]] = names[i % names.size()];

  std::size_t hits = 0;
  for (std::size_t q = 0; q < 1000; ++q) {
    const auto it = planted.find(q);
    const std::string text = it != planted.end() ? it->second + " side effects" : filler[q % filler.size()];
    const auto got = terms.match(normalize_query(text));
    if (it != planted.end()) {
      ASSERT_EQ(got.size(), 1u) << text;
      EXPECT_EQ(got[0], it->second);
    } else {
      EXPECT_TRUE(got.empty()) << text;
    }
    hits += got.size();
  }
  EXPECT_EQ(hits, 120u);
}

TEST(Precision, NineOfTen) {
  const RecipeMatcher m(world().corpus, world().config);
  std::string csv = "query,gold_recipe\n";
  const char* titles[] = {"beef stew", "grilled salmon", "tuna melt", "chicken marsala", "pork chops",
                          "deviled eggs", "baked salmon", "chicken wings", "beef tacos"};
  for (const char* t : titles) csv += std::string(t) + " recipe," + t + "\n";
  csv += "chicken enchiladas recipe,beef stew\n";
  csv += "weather tomorrow,\n";
  std::istringstream in(csv);
  const auto r = evaluate_matcher_precision(in, m, world().corpus);
  ASSERT_EQ(r.emitted, 10u);
  EXPECT_EQ(r.correct, 9u);
  EXPECT_DOUBLE_EQ(r.precision, 0.9);
  ASSERT_EQ(r.errors.size(), 1u);
  EXPECT_EQ(r.errors[0].gold, "beef stew");
}

TEST(Precision, NothingEmittedIsAnError) {
  const RecipeMatcher m(world().corpus, world().config);
  std::istringstream in("query,gold_recipe\nweather tomorrow,\nnews,beef stew\n");
  EXPECT_THROW(evaluate_matcher_precision(in, m, world().corpus), StatError);
}

TEST(Precision, LabeledFixture) {
  const RecipeMatcher m(world().corpus, world().config);
  const auto r = evaluate_matcher_precision(fixture_path("labeled_400.csv"), m, world().corpus);
  EXPECT_EQ(r.pairs, 400u);
  EXPECT_GE(r.precision, 0.85);
}

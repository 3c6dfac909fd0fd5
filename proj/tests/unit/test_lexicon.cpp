#include <gtest/gtest.h>

#include <sstream>

#include "b12scope/error.hpp"
#include "b12scope/lexicon.hpp"
#include "test_paths.hpp"

using namespace b12scope;
using testing_support::data_path;
using testing_support::fixture_path;

namespace {

const SynonymTable& synonyms() {
  static const SynonymTable table = load_synonym_table(data_path("ingredient_synonyms.csv"));
  return table;
}

}  // namespace

TEST(Nutrients, ShippedTable) {
  const auto t = load_nutrient_table(data_path("nutrients.csv"));
  EXPECT_DOUBLE_EQ(t[FoodItem::Shellfish], 98.89);
  EXPECT_DOUBLE_EQ(t[FoodItem::Chicken], 0.3);
  EXPECT_DOUBLE_EQ(t[FoodItem::Beef], 6.0);
  EXPECT_EQ(t[FoodItem::Tomatoes], 0.0);
  for (double v : t.values()) EXPECT_GE(v, 0.0);
}

TEST(Nutrients, ScalingIsElementwise) {
  const auto t = load_nutrient_table(data_path("nutrients.csv"));
  const auto s = t.scaled(2.5);
  for (std::size_t i = 0; i < kFoodCount; ++i) EXPECT_DOUBLE_EQ(s.values()[i], 2.5 * t.values()[i]);
}

TEST(Nutrients, MissingFoodIsFatal) {
  testing_support::TempDir dir("nutrients");
  const auto p = dir.write("n.csv", "food,mcg_per_100g\nShellfish,98.89\nBeef,6\n");
  EXPECT_THROW(load_nutrient_table(p), DataError);
}

TEST(Synonyms, LongestPhraseWins) {
  const auto& syn = synonyms();
  EXPECT_TRUE(syn.match("beef").contains(FoodItem::Beef));
  EXPECT_TRUE(syn.match("tomatoes").contains(FoodItem::Tomatoes));
  EXPECT_EQ(syn.match("water").size(), 0u);
  EXPECT_EQ(syn.match("apple").size(), 0u);
}

TEST(Corpus, TrackedIngredientsOnly) {
  std::istringstream in(
      "{\"title\":\"Beef Stew\",\"ingredients\":[\"beef\",\"tomatoes\",\"water\"]}\n"
      "{\"title\":\"Fruit Salad\",\"ingredients\":[\"apple\",\"banana\"]}\n");
  const auto corpus = load_recipe_corpus(in, synonyms());
  ASSERT_EQ(corpus.size(), 1u);
  EXPECT_EQ(corpus[0].title, "beef stew");
  FoodSet want;
  want.insert(FoodItem::Beef);
  want.insert(FoodItem::Tomatoes);
  EXPECT_EQ(corpus[0].ingredients, want);
  EXPECT_EQ(corpus.stats.excluded_untracked, 1u);
}

TEST(Corpus, FiftyRecipeFixture) {
  const auto corpus = load_recipe_corpus(fixture_path("recipes_50.jsonl"), synonyms());
  EXPECT_EQ(corpus.stats.lines, 50u);
  EXPECT_EQ(corpus.size(), 41u);
}

TEST(Corpus, DuplicateTitlesCollapse) {
  std::istringstream in(
      "{\"title\":\"Beef Stew\",\"ingredients\":[\"beef\"]}\n"
      "{\"title\":\"stew, beef\",\"ingredients\":[\"beef\",\"milk\"]}\n");
  const auto corpus = load_recipe_corpus(in, synonyms());
  EXPECT_EQ(corpus.size(), 1u);
  EXPECT_EQ(corpus.stats.duplicate_titles, 1u);
}

TEST(Corpus, BadLineIsFormatError) {
  std::istringstream in("{\"title\": 3}\n");
  EXPECT_THROW(load_recipe_corpus(in, synonyms()), FormatError);
}

TEST(Corpus, PostingsIndexTitleTokens) {
  const auto corpus = load_recipe_corpus(data_path("recipes.jsonl"), synonyms());
  const auto idx = corpus.find_title("beef stew");
  ASSERT_TRUE(idx);
  const auto& post = corpus.postings("stew");
  EXPECT_NE(std::find(post.begin(), post.end(), *idx), post.end());
  EXPECT_TRUE(corpus.postings("zzzz").empty());
}

TEST(Terms, CaseFoldDedup) {
  std::istringstream in("term,category\ngabapentin,neuropathic drugs\nGabapentin,neuropathic drugs\n");
  const auto lex = load_term_lexicon(in, TermKind::Target);
  EXPECT_EQ(lex.entries.size(), 1u);
  EXPECT_FALSE(lex.warnings.empty());
}

TEST(Terms, EmptyFileWarns) {
  std::istringstream in("");
  const auto lex = load_term_lexicon(in, TermKind::Target);
  EXPECT_TRUE(lex.entries.empty());
  EXPECT_EQ(lex.warnings.size(), 1u);
}

TEST(Terms, UnknownCategoryIsConfigError) {
  std::istringstream in("term,category\nfoo,astrology\n");
  EXPECT_THROW(load_term_lexicon(in, TermKind::Target), ConfigError);
}

TEST(Terms, ShippedLists) {
  const auto targets = load_term_lexicon(data_path("targets.csv"), TermKind::Target);
  EXPECT_EQ(targets.entries.size(), 212u);
  ASSERT_NE(targets.find("gabapentin"), nullptr);
  EXPECT_EQ(targets.find("gabapentin")->category, TermCategory::NeuropathicDrugs);
  const auto controls = load_term_lexicon(data_path("controls.csv"), TermKind::Control);
  EXPECT_GT(controls.entries.size(), 10u);
  for (const auto& e : controls.entries) EXPECT_EQ(targets.find(e.term), nullptr) << e.term;
}

TEST(References, ShippedTablesLoad) {
  ReferencePaths paths{data_path("expenditure.csv"), data_path("costs.csv"), data_path("consumption.csv"),
                       data_path("indications.csv"), data_path("food_groups.csv")};
  const auto refs = load_reference_tables(paths);
  for (const auto& row : refs.expenditure) {
    for (double v : row) EXPECT_GT(v, 0.0);
  }
  const auto& tramadol = refs.indications.at("tramadol");
  EXPECT_EQ(tramadol.n_indications, 14);
  EXPECT_EQ(tramadol.n_pain_indications, 6);
  EXPECT_FALSE(refs.food_groups[index_of(FoodItem::Tomatoes)]);
  EXPECT_EQ(refs.food_groups[index_of(FoodItem::Salmon)], FoodGroup::FishSeafood);
}

TEST(References, MissingExpenditureCellIsFatal) {
  testing_support::TempDir dir("expenditure");
  std::string text = "region,group,dollars\n";
  for (const char* r : {"northeast", "midwest", "south", "west"}) {
    for (const char* g : {"beef", "pork", "poultry", "fish_seafood", "eggs", "milk"}) {
      if (std::string(r) == "west" && std::string(g) == "eggs") continue;
      text += std::string(r) + "," + g + ",100\n";
    }
  }
  EXPECT_THROW(load_expenditure(dir.write("e.csv", text)), DataError);
}

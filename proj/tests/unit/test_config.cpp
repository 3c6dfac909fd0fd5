#include <gtest/gtest.h>

#include "b12scope/config.hpp"
#include "b12scope/error.hpp"
#include "test_paths.hpp"

using namespace b12scope;
using testing_support::data_path;
namespace fs = std::filesystem;

namespace {

const fs::path kData = B12SCOPE_TEST_DATA_DIR;

PipelineConfig parse(std::string_view text, const fs::path& base = "/work") {
  return parse_config(text, base, kData);
}

}  // namespace

TEST(Config, EmptyFileGivesDefaults) {
  const auto c = parse("");
  EXPECT_EQ(c.paths.nutrients, kData / "nutrients.csv");
  EXPECT_EQ(c.paths.out_dir, fs::path("/work/out"));
  EXPECT_FALSE(c.paths.log);
  EXPECT_FALSE(c.synth.enabled);
  EXPECT_EQ(c.models.threshold, 1000u);
  EXPECT_EQ(c.models.filter, CohortFilter::Unaware);
  EXPECT_EQ(c.models.method, CorrelationMethod::Pearson);
  EXPECT_EQ(c.estimate_mode, EstimateMode::Mean);
  EXPECT_DOUBLE_EQ(c.classifier.theta, 0.8);
}

TEST(Config, RelativePathsResolveAgainstConfigDir) {
  const auto c = parse(R"(
[paths]
log = "logs/q.tsv"
log_format = "tsv"
nutrients = "/abs/n.csv"
out_dir = "results"
)");
  EXPECT_EQ(*c.paths.log, fs::path("/work/logs/q.tsv"));
  EXPECT_EQ(c.paths.log_format, LogFormat::Tsv);
  EXPECT_EQ(c.paths.nutrients, fs::path("/abs/n.csv"));
  EXPECT_EQ(c.paths.out_dir, fs::path("/work/results"));
  EXPECT_EQ(c.paths.recipes, kData / "recipes.jsonl");
}

TEST(Config, SynthSectionEnablesAndCopiesSeed) {
  const auto c = parse(R"(
[synth]
n_users = 1234
planted_targets = 3
target_effect = -0.001
[synth.food_weights]
beef = 0.5
tomatoes = 0.5
[synth.region_weights]
west = 1.0
[[synth.terms]]
term = "gabapentin"
effect = -0.002
[run]
seed = 77
threads = 3
)");
  EXPECT_TRUE(c.synth.enabled);
  EXPECT_EQ(c.synth.world.n_users, 1234u);
  EXPECT_EQ(c.synth.world.seed, 77u);
  EXPECT_EQ(c.run.threads, 3u);
  EXPECT_DOUBLE_EQ(c.synth.world.food_weights[index_of(FoodItem::Beef)], 0.5);
  EXPECT_DOUBLE_EQ(c.synth.world.food_weights[index_of(FoodItem::Salmon)], 0.0);
  EXPECT_DOUBLE_EQ(c.synth.world.region_weights[static_cast<std::size_t>(Region::West)], 1.0);
  ASSERT_EQ(c.synth.world.terms.size(), 1u);
  EXPECT_EQ(c.synth.world.terms[0].term, "gabapentin");
}

TEST(Config, UnknownKeysAndValuesAreErrors) {
  EXPECT_THROW(parse("[models]\nthreshhold = 3\n"), ConfigError);
  EXPECT_THROW(parse("[modles]\n"), ConfigError);
  EXPECT_THROW(parse("[models]\ncob12 = \"kendall\"\n"), ConfigError);
  EXPECT_THROW(parse("[models]\nthreshold = \"ten\"\n"), ConfigError);
  EXPECT_THROW(parse("[models]\nthreshold = 0\n"), ConfigError);
  EXPECT_THROW(parse("[classifier]\ntheta = 1.5\n"), ConfigError);
  EXPECT_THROW(parse("[synth.food_weights]\nbacon = 1\n"), ConfigError);
  EXPECT_THROW(parse("[synth]\nn_users = 0\n"), ConfigError);
  EXPECT_THROW(parse("not = [valid"), ConfigError);
}

TEST(Config, MissingInputNamesThePath) {
  auto c = default_config(kData);
  EXPECT_NO_THROW(check_inputs(c));
  c.paths.costs = "/nonexistent/costs.csv";
  try {
    check_inputs(c);
    FAIL() << "expected IoError";
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/costs.csv"), std::string::npos);
  }
}

TEST(ConfigHash, IgnoresThreadsAndOutDir) {
  auto a = default_config(kData);
  auto b = a;
  b.run.threads = 8;
  b.paths.out_dir = "/elsewhere";
  EXPECT_EQ(config_hash(a), config_hash(b));
  b.run.seed = 2;
  EXPECT_NE(config_hash(a), config_hash(b));
  auto d = a;
  d.models.threshold = 999;
  EXPECT_NE(config_hash(a), config_hash(d));
  EXPECT_EQ(config_hash(a).size(), 64u);
}

TEST(ConfigHash, FollowsInputContentNotLocation) {
  testing_support::TempDir dir("cfghash");
  const auto nutrients = testing_support::slurp(data_path("nutrients.csv"));
  auto a = default_config(kData);
  auto b = a;
  b.paths.nutrients = dir.write("copy.csv", nutrients);
  EXPECT_EQ(config_hash(a), config_hash(b));
  b.paths.nutrients = dir.write("edited.csv", nutrients + "\n");
  EXPECT_NE(config_hash(a), config_hash(b));
}

TEST(PlantedTerms, DrawsFromBothLists) {
  const auto targets = load_term_lexicon(data_path("targets.csv"), TermKind::Target);
  const auto controls = load_term_lexicon(data_path("controls.csv"), TermKind::Control);
  SynthSection s;
  s.planted_targets = 4;
  s.planted_controls = 3;
  s.target_effect = -0.001;
  const auto p = planted_terms(s, targets, controls);
  ASSERT_EQ(p.size(), 7u);
  std::size_t n_target = 0;
  for (const auto& t : p) {
    if (t.kind == TermKind::Target) {
      ++n_target;
      EXPECT_DOUBLE_EQ(t.effect, -0.001);
    } else {
      EXPECT_DOUBLE_EQ(t.effect, 0.0);
    }
  }
  EXPECT_EQ(n_target, 4u);
}

#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "b12scope/lexicon.hpp"
#include "b12scope/querylog.hpp"

namespace b12scope {

struct ClassifierConfig {
  double theta = 0.8;  // minimum fraction of a title's tokens the query must cover
  std::vector<std::string> recipe_cues = {"recipe", "recipes", "how to make", "cook"};
  std::vector<std::string> deficiency_cues = {"deficiency", "deficient", "low"};
  std::vector<std::string> supplement_cues = {"supplement", "supplements", "injection",
                                              "injections", "pills"};
};

struct RecipeMatch {
  std::size_t recipe = 0;  // index into the corpus
  double score = 0.0;      // Jaccard similarity between query and title token sets
  double coverage = 0.0;   // fraction of title tokens present in the query
};

class RecipeMatcher {
 public:
  RecipeMatcher(const RecipeCorpus& corpus, const ClassifierConfig& config);

  // True when a cue phrase occurs in the tokens.
  bool has_cue(const std::vector<std::string>& tokens) const;
  std::optional<RecipeMatch> match(const std::vector<std::string>& tokens) const;

 private:
  const RecipeCorpus& corpus_;
  double theta_;
  std::vector<std::vector<std::string>> cues_;
};

// Contiguous-token phrase matching against one or more lexicons.
class TermMatcher {
 public:
  void add(const TermLexicon& lexicon);
  void add_term(const std::string& term);

  // Matched terms, sorted and unique.
  std::vector<std::string> match(const std::vector<std::string>& tokens) const;

 private:
  std::unordered_map<std::string, std::vector<std::vector<std::string>>> by_first_;
};

struct QueryClass {
  bool is_recipe = false;  // a recipe cue was present or a title matched
  std::optional<std::string> recipe_title;
  FoodSet recipe_foods;
  double match_score = 0.0;
  std::vector<std::string> matched_terms;
  bool is_b12 = false;
  bool is_b12_deficiency = false;
  bool is_b12_supplement = false;

  bool operator==(const QueryClass&) const = default;
};

class QueryClassifier {
 public:
  QueryClassifier(const RecipeCorpus& corpus, const TermMatcher& terms,
                  const ClassifierConfig& config);

  QueryClass classify(std::string_view text) const;
  const RecipeMatcher& recipe_matcher() const { return recipe_; }

 private:
  const RecipeCorpus& corpus_;
  const TermMatcher& terms_;
  RecipeMatcher recipe_;
  std::vector<std::string> deficiency_cues_;
  std::vector<std::string> supplement_cues_;
};

struct ClassifiedRecord {
  QueryRecord record;
  QueryClass cls;

  bool operator==(const ClassifiedRecord&) const = default;
};

// Output order equals input order for any thread count.
std::vector<ClassifiedRecord> classify_all(const std::vector<QueryRecord>& records,
                                           const QueryClassifier& classifier, unsigned threads);

std::string classified_to_json(const ClassifiedRecord& rec);
ClassifiedRecord classified_from_json(std::string_view line);
void write_classified(std::ostream& out, const std::vector<ClassifiedRecord>& records);
std::vector<ClassifiedRecord> read_classified(std::istream& in);
std::vector<ClassifiedRecord> read_classified_file(const std::filesystem::path& path);

struct PrecisionReport {
  std::size_t pairs = 0;
  std::size_t gold_positive = 0;  // pairs whose gold label names a recipe
  std::size_t emitted = 0;        // pairs where the matcher produced a recipe
  std::size_t correct = 0;        // emitted and equal to the gold recipe
  double precision = 0.0;
  double recall = 0.0;
  struct Miss {
    std::string query;
    std::string gold;
    std::string predicted;
  };
  std::vector<Miss> errors;  // emitted but wrong
};

// Labeled CSV with columns query,gold_recipe (empty gold = no recipe).
PrecisionReport evaluate_matcher_precision(std::istream& labeled, const RecipeMatcher& matcher,
                                           const RecipeCorpus& corpus);
PrecisionReport evaluate_matcher_precision(const std::filesystem::path& labeled,
                                           const RecipeMatcher& matcher, const RecipeCorpus& corpus);

}  // namespace b12scope

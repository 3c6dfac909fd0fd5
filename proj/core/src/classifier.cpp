#include "b12scope/classifier.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "b12scope/csv.hpp"
#include "b12scope/error.hpp"
#include "b12scope/parallel.hpp"
#include "b12scope/text.hpp"

namespace b12scope {

namespace {

bool contains_token(const std::vector<std::string>& tokens, const std::vector<std::string>& set) {
  return std::any_of(tokens.begin(), tokens.end(), [&](const std::string& t) {
    return std::find(set.begin(), set.end(), t) != set.end();
  });
}

bool phrase_at(const std::vector<std::string>& tokens, std::size_t i,
               const std::vector<std::string>& phrase) {
  if (phrase.empty() || i + phrase.size() > tokens.size()) return false;
  return std::equal(phrase.begin(), phrase.end(), tokens.begin() + static_cast<long>(i));
}

std::vector<std::string> normalized_list(const std::vector<std::string>& raw) {
  std::vector<std::string> out;
  for (const auto& s : raw) {
    auto p = normalize_phrase(s);
    if (!p.empty()) out.push_back(std::move(p));
  }
  return out;
}

}  // namespace

RecipeMatcher::RecipeMatcher(const RecipeCorpus& corpus, const ClassifierConfig& config)
    : corpus_(corpus), theta_(config.theta) {
  if (!(theta_ > 0.0 && theta_ <= 1.0)) throw ConfigError("classifier theta must lie in (0, 1]");
  for (const auto& cue : config.recipe_cues) {
    auto toks = normalize_query(cue);
    if (!toks.empty()) cues_.push_back(std::move(toks));
  }
  // Longer cues first so "how to make" wins over any single-token cue inside it.
  std::stable_sort(cues_.begin(), cues_.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });
}

bool RecipeMatcher::has_cue(const std::vector<std::string>& tokens) const {
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    for (const auto& cue : cues_) {
      if (phrase_at(tokens, i, cue)) return true;
    }
  }
  return false;
}

std::optional<RecipeMatch> RecipeMatcher::match(const std::vector<std::string>& tokens) const {
  if (tokens.empty()) return std::nullopt;

  std::vector<std::string> content;
  bool cue = false;
  for (std::size_t i = 0; i < tokens.size();) {
    std::size_t skip = 0;
    for (const auto& c : cues_) {
      if (phrase_at(tokens, i, c)) {
        skip = c.size();
        break;
      }
    }
    if (skip) {
      cue = true;
      i += skip;
    } else {
      content.push_back(tokens[i]);
      ++i;
    }
  }
  if (!cue) {
    if (!corpus_.find_title(join_tokens(tokens))) return std::nullopt;
    content = tokens;
  }
  if (content.empty()) return std::nullopt;

  std::vector<std::string> query_set = content;
  std::sort(query_set.begin(), query_set.end());
  query_set.erase(std::unique(query_set.begin(), query_set.end()), query_set.end());

  std::vector<std::uint32_t> candidates;
  for (const auto& t : query_set) {
    const auto& p = corpus_.postings(t);
    candidates.insert(candidates.end(), p.begin(), p.end());
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  std::optional<RecipeMatch> best;
  for (const auto idx : candidates) {
    const auto& doc = corpus_[idx];
    std::vector<std::string> title_set = doc.title_tokens;
    std::sort(title_set.begin(), title_set.end());
    title_set.erase(std::unique(title_set.begin(), title_set.end()), title_set.end());
    std::size_t common = 0;
    for (const auto& t : title_set) {
      if (std::binary_search(query_set.begin(), query_set.end(), t)) ++common;
    }
    const double coverage = static_cast<double>(common) / static_cast<double>(title_set.size());
    if (coverage < theta_) continue;
    const double score = static_cast<double>(common) /
                         static_cast<double>(title_set.size() + query_set.size() - common);
    bool better = !best;
    if (best) {
      const auto& cur = corpus_[best->recipe];
      if (score != best->score) {
        better = score > best->score;
      } else if (doc.title.size() != cur.title.size()) {
        better = doc.title.size() < cur.title.size();
      } else {
        better = doc.title < cur.title;
      }
    }
    if (better) best = RecipeMatch{idx, score, coverage};
  }
  return best;
}

void TermMatcher::add(const TermLexicon& lexicon) {
  for (const auto& e : lexicon.entries) add_term(e.term);
}

void TermMatcher::add_term(const std::string& term) {
  auto toks = normalize_query(term);
  if (toks.empty()) return;
  auto& bucket = by_first_[toks.front()];
  if (std::find(bucket.begin(), bucket.end(), toks) == bucket.end()) bucket.push_back(toks);
}

std::vector<std::string> TermMatcher::match(const std::vector<std::string>& tokens) const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    auto it = by_first_.find(tokens[i]);
    if (it == by_first_.end()) continue;
    for (const auto& phrase : it->second) {
      if (phrase_at(tokens, i, phrase)) out.push_back(join_tokens(phrase));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

QueryClassifier::QueryClassifier(const RecipeCorpus& corpus, const TermMatcher& terms,
                                 const ClassifierConfig& config)
    : corpus_(corpus),
      terms_(terms),
      recipe_(corpus, config),
      deficiency_cues_(normalized_list(config.deficiency_cues)),
      supplement_cues_(normalized_list(config.supplement_cues)) {}

QueryClass QueryClassifier::classify(std::string_view text) const {
  const auto tokens = normalize_query(text);
  QueryClass c;
  if (auto m = recipe_.match(tokens)) {
    const auto& doc = corpus_[m->recipe];
    c.is_recipe = true;
    c.recipe_title = doc.title;
    c.recipe_foods = doc.ingredients;
    c.match_score = m->score;
  } else {
    c.is_recipe = recipe_.has_cue(tokens);
  }
  c.matched_terms = terms_.match(tokens);
  c.is_b12 = std::find(tokens.begin(), tokens.end(), "b12") != tokens.end();
  if (c.is_b12) {
    c.is_b12_deficiency = contains_token(tokens, deficiency_cues_);
    c.is_b12_supplement = contains_token(tokens, supplement_cues_);
  }
  return c;
}

std::vector<ClassifiedRecord> classify_all(const std::vector<QueryRecord>& records,
                                           const QueryClassifier& classifier, unsigned threads) {
  std::vector<ClassifiedRecord> out(records.size());
  parallel_for(records.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      out[i].record = records[i];
      out[i].cls = classifier.classify(records[i].text);
    }
  });
  return out;
}

std::string classified_to_json(const ClassifiedRecord& rec) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["user"] = rec.record.user_id;
  j["query"] = rec.record.text;
  j["zip"] = rec.record.zip ? ordered_json(*rec.record.zip) : ordered_json(nullptr);
  j["ts"] = rec.record.timestamp;
  ordered_json c;
  c["recipe"] = rec.cls.is_recipe;
  c["recipe_title"] = rec.cls.recipe_title ? ordered_json(*rec.cls.recipe_title) : ordered_json(nullptr);
  ordered_json foods = ordered_json::array();
  for (auto f : kFoodOrder) {
    if (rec.cls.recipe_foods.contains(f)) foods.push_back(std::string(food_name(f)));
  }
  c["foods"] = std::move(foods);
  c["score"] = rec.cls.match_score;
  c["terms"] = rec.cls.matched_terms;
  c["b12"] = rec.cls.is_b12;
  c["b12_deficiency"] = rec.cls.is_b12_deficiency;
  c["b12_supplement"] = rec.cls.is_b12_supplement;
  j["class"] = std::move(c);
  return j.dump();
}

ClassifiedRecord classified_from_json(std::string_view line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line.begin(), line.end());
    ClassifiedRecord rec;
    rec.record.user_id = j.at("user").get<std::string>();
    rec.record.text = j.at("query").get<std::string>();
    if (!j.at("zip").is_null()) rec.record.zip = j.at("zip").get<std::string>();
    rec.record.timestamp = j.at("ts").get<std::int64_t>();
    const auto& c = j.at("class");
    rec.cls.is_recipe = c.at("recipe").get<bool>();
    if (!c.at("recipe_title").is_null()) rec.cls.recipe_title = c.at("recipe_title").get<std::string>();
    for (const auto& f : c.at("foods")) {
      const auto food = parse_food(f.get<std::string>());
      if (!food) throw FormatError(fmt::format("unknown food '{}'", f.get<std::string>()));
      rec.cls.recipe_foods.insert(*food);
    }
    rec.cls.match_score = c.at("score").get<double>();
    rec.cls.matched_terms = c.at("terms").get<std::vector<std::string>>();
    rec.cls.is_b12 = c.at("b12").get<bool>();
    rec.cls.is_b12_deficiency = c.at("b12_deficiency").get<bool>();
    rec.cls.is_b12_supplement = c.at("b12_supplement").get<bool>();
    return rec;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(fmt::format("classified record: {}", e.what()));
  }
}

void write_classified(std::ostream& out, const std::vector<ClassifiedRecord>& records) {
  for (const auto& r : records) out << classified_to_json(r) << '\n';
}

std::vector<ClassifiedRecord> read_classified(std::istream& in) {
  std::vector<ClassifiedRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      out.push_back(classified_from_json(line));
    } catch (const FormatError& e) {
      throw FormatError(fmt::format("line {}: {}", line_no, e.what()));
    }
  }
  return out;
}

std::vector<ClassifiedRecord> read_classified_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open {}", path.string()));
  try {
    return read_classified(in);
  } catch (const FormatError& e) {
    throw FormatError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

PrecisionReport evaluate_matcher_precision(std::istream& labeled, const RecipeMatcher& matcher,
                                           const RecipeCorpus& corpus) {
  const auto table = read_csv(labeled);
  const auto qcol = table.require_column("query", "labeled pairs");
  const auto gcol = table.require_column("gold_recipe", "labeled pairs");
  if (table.rows.empty()) throw DataError("labeled pairs file has no rows");

  PrecisionReport rep;
  for (const auto& row : table.rows) {
    ++rep.pairs;
    const auto gold = normalize_phrase(row[gcol]);
    if (!gold.empty()) ++rep.gold_positive;
    const auto m = matcher.match(normalize_query(row[qcol]));
    if (!m) continue;
    ++rep.emitted;
    const auto& predicted = corpus[m->recipe].title;
    if (predicted == gold) {
      ++rep.correct;
    } else {
      rep.errors.push_back({row[qcol], gold, predicted});
    }
  }
  if (rep.emitted == 0) throw StatError("matcher emitted no matches; precision is undefined");
  rep.precision = static_cast<double>(rep.correct) / static_cast<double>(rep.emitted);
  rep.recall = rep.gold_positive
                   ? static_cast<double>(rep.correct) / static_cast<double>(rep.gold_positive)
                   : 0.0;
  return rep;
}

PrecisionReport evaluate_matcher_precision(const std::filesystem::path& labeled,
                                           const RecipeMatcher& matcher, const RecipeCorpus& corpus) {
  std::ifstream in(labeled, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open {}", labeled.string()));
  return evaluate_matcher_precision(in, matcher, corpus);
}

}  // namespace b12scope

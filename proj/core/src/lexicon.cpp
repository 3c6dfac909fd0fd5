#include "b12scope/lexicon.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "b12scope/csv.hpp"
#include "b12scope/error.hpp"
#include "b12scope/text.hpp"

namespace b12scope {

namespace {

double parse_number(const std::string& s, std::string_view where) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw DataError(fmt::format("{}: '{}' is not a number", where, s));
  }
  if (used != s.size() || !std::isfinite(v)) {
    throw DataError(fmt::format("{}: '{}' is not a finite number", where, s));
  }
  return v;
}

std::int64_t parse_count(const std::string& s, std::string_view where) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    throw DataError(fmt::format("{}: '{}' is not an integer", where, s));
  }
  if (used != s.size()) throw DataError(fmt::format("{}: '{}' is not an integer", where, s));
  return v;
}

std::string key_of(const std::vector<std::string>& tokens) { return join_tokens(tokens); }

std::string token_set_key(std::vector<std::string> tokens) {
  std::sort(tokens.begin(), tokens.end());
  tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
  return join_tokens(tokens);
}

template <typename T>
std::array<double, kGroupCount> load_group_column(const std::filesystem::path& path,
                                                  std::string_view value_column) {
  const auto table = read_csv_file(path);
  const auto src = path.string();
  const auto gcol = table.require_column("group", src);
  const auto vcol = table.require_column(value_column, src);
  std::array<double, kGroupCount> out{};
  std::array<bool, kGroupCount> seen{};
  for (const auto& row : table.rows) {
    const auto g = parse_group(row[gcol]);
    if (!g) throw DataError(fmt::format("{}: unknown food group '{}'", src, row[gcol]));
    const auto i = static_cast<std::size_t>(*g);
    if (seen[i]) throw DataError(fmt::format("{}: duplicate group '{}'", src, row[gcol]));
    const double v = parse_number(row[vcol], src);
    if (v < 0.0) throw DataError(fmt::format("{}: negative value for '{}'", src, row[gcol]));
    out[i] = v;
    seen[i] = true;
  }
  for (std::size_t i = 0; i < kGroupCount; ++i) {
    if (!seen[i]) {
      throw DataError(fmt::format("{}: missing group '{}'", src, group_name(kGroups[i])));
    }
  }
  return out;
}

}  // namespace

NutrientTable::NutrientTable(const FoodVector& mcg) : values_(mcg) {
  for (double v : values_) {
    if (!std::isfinite(v) || v < 0.0) throw DataError("nutrient values must be finite and >= 0");
  }
}

NutrientTable NutrientTable::scaled(double c) const {
  if (!(c > 0.0) || !std::isfinite(c)) throw DataError("nutrient scale must be positive");
  FoodVector v = values_;
  for (double& x : v) x *= c;
  return NutrientTable(v);
}

NutrientTable load_nutrient_table(const std::filesystem::path& path, double serving_grams) {
  const auto table = read_csv_file(path);
  const auto src = path.string();
  const auto fcol = table.require_column("food", src);
  const auto vcol = table.require_column("mcg_per_100g", src);
  FoodVector values{};
  std::array<bool, kFoodCount> seen{};
  for (const auto& row : table.rows) {
    const auto food = parse_food(row[fcol]);
    if (!food) throw DataError(fmt::format("{}: unknown food '{}'", src, row[fcol]));
    const auto i = index_of(*food);
    if (seen[i]) throw DataError(fmt::format("{}: duplicate food '{}'", src, row[fcol]));
    seen[i] = true;
    values[i] = parse_number(row[vcol], src);
  }
  for (std::size_t i = 0; i < kFoodCount; ++i) {
    if (!seen[i]) {
      throw DataError(fmt::format("{}: missing food '{}'", src, food_name(kFoodOrder[i])));
    }
  }
  values[index_of(FoodItem::Tomatoes)] = 0.0;
  return NutrientTable(values).scaled(serving_grams / 100.0);
}

void SynonymTable::add(std::string_view phrase, std::optional<FoodItem> food) {
  auto tokens = normalize_query(phrase);
  if (tokens.empty()) return;
  max_tokens_ = std::max(max_tokens_, tokens.size());
  phrases_.insert_or_assign(key_of(tokens), food);
}

FoodSet SynonymTable::match(std::string_view ingredient) const {
  const auto tokens = normalize_query(ingredient);
  FoodSet out;
  std::size_t i = 0;
  while (i < tokens.size()) {
    std::size_t matched = 0;
    for (std::size_t len = std::min(max_tokens_, tokens.size() - i); len >= 1; --len) {
      std::string key = tokens[i];
      for (std::size_t k = 1; k < len; ++k) key += " " + tokens[i + k];
      auto it = phrases_.find(key);
      if (it != phrases_.end()) {
        if (it->second) out.insert(*it->second);
        matched = len;
        break;
      }
    }
    i += matched ? matched : 1;
  }
  return out;
}

SynonymTable load_synonym_table(const std::filesystem::path& path) {
  const auto table = read_csv_file(path);
  const auto src = path.string();
  const auto pcol = table.require_column("phrase", src);
  const auto fcol = table.require_column("food", src);
  SynonymTable syn;
  for (const auto& row : table.rows) {
    if (row[fcol] == "none") {
      syn.add(row[pcol], std::nullopt);
      continue;
    }
    const auto food = parse_food(row[fcol]);
    if (!food) throw DataError(fmt::format("{}: unknown food '{}'", src, row[fcol]));
    syn.add(row[pcol], *food);
  }
  return syn;
}

std::optional<std::size_t> RecipeCorpus::add(RecipeDoc doc) {
  if (doc.title_tokens.empty()) doc.title_tokens = normalize_query(doc.title);
  doc.title = join_tokens(doc.title_tokens);
  auto set_key = token_set_key(doc.title_tokens);
  if (by_token_set_.count(set_key)) {
    ++stats.duplicate_titles;
    return std::nullopt;
  }
  const std::size_t idx = docs_.size();
  by_token_set_.emplace(std::move(set_key), idx);
  by_title_.emplace(doc.title, idx);
  std::set<std::string> unique(doc.title_tokens.begin(), doc.title_tokens.end());
  for (const auto& t : unique) index_[t].push_back(static_cast<std::uint32_t>(idx));
  docs_.push_back(std::move(doc));
  return idx;
}

const std::vector<std::uint32_t>& RecipeCorpus::postings(const std::string& token) const {
  static const std::vector<std::uint32_t> kEmpty;
  auto it = index_.find(token);
  return it == index_.end() ? kEmpty : it->second;
}

std::optional<std::size_t> RecipeCorpus::find_title(const std::string& normalized_title) const {
  auto it = by_title_.find(normalized_title);
  if (it == by_title_.end()) return std::nullopt;
  return it->second;
}

RecipeCorpus load_recipe_corpus(std::istream& in, const SynonymTable& synonyms) {
  RecipeCorpus corpus;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    ++corpus.stats.lines;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(fmt::format("recipe line {}: {}", line_no, e.what()));
    }
    if (!j.is_object() || !j.contains("ingredients") || !j["ingredients"].is_array()) {
      throw FormatError(fmt::format("recipe line {}: expected {{title, ingredients[]}}", line_no));
    }
    std::string title;
    if (j.contains("title") && j["title"].is_string()) title = j["title"].get<std::string>();
    RecipeDoc doc;
    doc.title_tokens = normalize_query(title);
    if (doc.title_tokens.empty()) {
      ++corpus.stats.skipped_empty_title;
      continue;
    }
    for (const auto& ing : j["ingredients"]) {
      if (!ing.is_string()) {
        throw FormatError(fmt::format("recipe line {}: ingredient is not a string", line_no));
      }
      const auto found = synonyms.match(ing.get<std::string>());
      doc.ingredients = FoodSet::from_bits(doc.ingredients.bits() | found.bits());
    }
    if (doc.ingredients.empty()) {
      ++corpus.stats.excluded_untracked;
      continue;
    }
    if (corpus.add(std::move(doc))) ++corpus.stats.loaded;
  }
  return corpus;
}

RecipeCorpus load_recipe_corpus(const std::filesystem::path& path, const SynonymTable& synonyms) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open {}", path.string()));
  try {
    return load_recipe_corpus(in, synonyms);
  } catch (const FormatError& e) {
    throw FormatError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

namespace {

constexpr std::array<std::string_view, 9> kCategoryNames = {
    "antidepressants", "neuropathic drugs", "other pharmaceuticals",
    "pain descriptions", "acid disorders", "OTC antacids",
    "psychotherapy",   "medical cannabis",  "control"};

}  // namespace

std::string_view term_kind_name(TermKind k) { return k == TermKind::Target ? "target" : "control"; }

std::optional<TermKind> parse_term_kind(std::string_view s) {
  if (s == "target") return TermKind::Target;
  if (s == "control") return TermKind::Control;
  return std::nullopt;
}

std::string_view category_name(TermCategory c) { return kCategoryNames[static_cast<std::size_t>(c)]; }

std::optional<TermCategory> parse_category(std::string_view s) {
  const auto norm = normalize_phrase(s);
  for (std::size_t i = 0; i < kCategoryNames.size(); ++i) {
    if (normalize_phrase(kCategoryNames[i]) == norm) return static_cast<TermCategory>(i);
  }
  return std::nullopt;
}

const TermEntry* TermLexicon::find(std::string_view term) const {
  for (const auto& e : entries) {
    if (e.term == term) return &e;
  }
  return nullptr;
}

TermLexicon load_term_lexicon(std::istream& in, TermKind kind) {
  TermLexicon lex;
  lex.kind = kind;
  std::string first;
  // An empty file is a valid (empty) lexicon.
  if (!(in >> std::ws) || in.peek() == std::char_traits<char>::eof()) {
    lex.warnings.emplace_back("term lexicon is empty");
    return lex;
  }
  const auto table = read_csv(in);
  const auto tcol = table.require_column("term", "term lexicon");
  const auto ccol = table.require_column("category", "term lexicon");
  std::set<std::string> seen;
  for (const auto& row : table.rows) {
    const auto cat = parse_category(row[ccol]);
    if (!cat) throw ConfigError(fmt::format("unknown term category '{}'", row[ccol]));
    auto term = normalize_phrase(row[tcol]);
    if (term.empty()) {
      lex.warnings.push_back(fmt::format("blank term '{}' ignored", row[tcol]));
      continue;
    }
    if (!seen.insert(term).second) {
      lex.warnings.push_back(fmt::format("duplicate term '{}' collapsed", term));
      continue;
    }
    lex.entries.push_back({std::move(term), *cat});
  }
  if (lex.entries.empty()) lex.warnings.emplace_back("term lexicon is empty");
  return lex;
}

TermLexicon load_term_lexicon(const std::filesystem::path& path, TermKind kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open {}", path.string()));
  return load_term_lexicon(in, kind);
}

IndicationsTable load_indications(const std::filesystem::path& path) {
  const auto table = read_csv_file(path);
  const auto src = path.string();
  const auto tcol = table.require_column("term", src);
  const auto icol = table.require_column("n_indications", src);
  const auto pcol = table.require_column("n_pain_indications", src);
  IndicationsTable out;
  for (const auto& row : table.rows) {
    Indications ind{parse_count(row[icol], src), parse_count(row[pcol], src)};
    if (ind.n_indications < 0 || ind.n_pain_indications < 0 ||
        ind.n_pain_indications > ind.n_indications) {
      throw DataError(fmt::format("{}: inconsistent counts for '{}'", src, row[tcol]));
    }
    out.insert_or_assign(normalize_phrase(row[tcol]), ind);
  }
  return out;
}

FoodGroupMap load_food_groups(const std::filesystem::path& path) {
  const auto table = read_csv_file(path);
  const auto src = path.string();
  const auto fcol = table.require_column("food", src);
  const auto gcol = table.require_column("group", src);
  FoodGroupMap out{};
  std::array<bool, kFoodCount> seen{};
  for (const auto& row : table.rows) {
    const auto food = parse_food(row[fcol]);
    if (!food) throw DataError(fmt::format("{}: unknown food '{}'", src, row[fcol]));
    seen[index_of(*food)] = true;
    if (row[gcol] == "none") continue;
    const auto g = parse_group(row[gcol]);
    if (!g) throw DataError(fmt::format("{}: unknown group '{}'", src, row[gcol]));
    out[index_of(*food)] = *g;
  }
  for (std::size_t i = 0; i < kFoodCount; ++i) {
    if (!seen[i]) {
      throw DataError(fmt::format("{}: missing food '{}'", src, food_name(kFoodOrder[i])));
    }
  }
  return out;
}

ExpenditureTable load_expenditure(const std::filesystem::path& path) {
  const auto table = read_csv_file(path);
  const auto src = path.string();
  const auto rcol = table.require_column("region", src);
  const auto gcol = table.require_column("group", src);
  const auto dcol = table.require_column("dollars", src);
  ExpenditureTable out{};
  std::array<std::array<bool, kGroupCount>, kRegionCount> seen{};
  for (const auto& row : table.rows) {
    const auto r = parse_region(row[rcol]);
    const auto g = parse_group(row[gcol]);
    if (!r || *r == Region::Unknown) {
      throw DataError(fmt::format("{}: unknown region '{}'", src, row[rcol]));
    }
    if (!g) throw DataError(fmt::format("{}: unknown group '{}'", src, row[gcol]));
    const double v = parse_number(row[dcol], src);
    if (v < 0.0) throw DataError(fmt::format("{}: negative expenditure", src));
    const auto ri = static_cast<std::size_t>(*r);
    const auto gi = static_cast<std::size_t>(*g);
    out[ri][gi] = v;
    seen[ri][gi] = true;
  }
  for (std::size_t r = 0; r < kRegionCount; ++r) {
    for (std::size_t g = 0; g < kGroupCount; ++g) {
      if (!seen[r][g]) {
        throw DataError(fmt::format("{}: missing cell ({}, {})", src, region_name(kRegions[r]),
                                    group_name(kGroups[g])));
      }
    }
  }
  return out;
}

CostTable load_costs(const std::filesystem::path& path) {
  return load_group_column<CostTable>(path, "dollars_per_unit");
}

ConsumptionTable load_consumption(const std::filesystem::path& path) {
  return load_group_column<ConsumptionTable>(path, "per_capita");
}

ReferenceTables load_reference_tables(const ReferencePaths& paths) {
  ReferenceTables t;
  t.expenditure = load_expenditure(paths.expenditure);
  t.costs = load_costs(paths.costs);
  t.consumption = load_consumption(paths.consumption);
  t.indications = load_indications(paths.indications);
  t.food_groups = load_food_groups(paths.food_groups);
  return t;
}

}  // namespace b12scope

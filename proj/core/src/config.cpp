#include "b12scope/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <toml.hpp>

#include "b12scope/error.hpp"
#include "b12scope/hash.hpp"
#include "b12scope/text.hpp"

namespace b12scope {

namespace fs = std::filesystem;

ReferencePaths PathsConfig::references() const {
  return ReferencePaths{expenditure, costs, consumption, indications, food_groups};
}

namespace {

void set_data_paths(PathsConfig& p, const fs::path& dir) {
  p.nutrients = dir / "nutrients.csv";
  p.synonyms = dir / "ingredient_synonyms.csv";
  p.recipes = dir / "recipes.jsonl";
  p.targets = dir / "targets.csv";
  p.controls = dir / "controls.csv";
  p.zip_regions = dir / "zip_regions.csv";
  p.expenditure = dir / "expenditure.csv";
  p.costs = dir / "costs.csv";
  p.consumption = dir / "consumption.csv";
  p.indications = dir / "indications.csv";
  p.food_groups = dir / "food_groups.csv";
}

// Reads the keys of one table, remembering which were consumed so leftovers can
// be reported as typos.
class Section {
 public:
  Section(const toml::table* table, std::string name) : table_(table), name_(std::move(name)) {}

  bool present() const { return table_ != nullptr; }

  const toml::node* node(std::string_view key) {
    if (!table_) return nullptr;
    const toml::node* n = table_->get(key);
    if (n) used_.insert(std::string(key));
    return n;
  }

  template <typename T>
  std::optional<T> get(std::string_view key) {
    const toml::node* n = node(key);
    if (!n) return std::nullopt;
    auto v = n->value<T>();
    if (!v) throw ConfigError(fmt::format("{}.{}: wrong value type", name_, key));
    return v;
  }

  void number(std::string_view key, double& out) {
    if (auto v = get<double>(key)) out = *v;
  }

  template <typename U>
  void count(std::string_view key, U& out) {
    if (auto v = get<std::int64_t>(key)) {
      if (*v < 0) throw ConfigError(fmt::format("{}.{} must be >= 0", name_, key));
      out = static_cast<U>(*v);
    }
  }

  void flag(std::string_view key, bool& out) {
    if (auto v = get<bool>(key)) out = *v;
  }

  template <typename E, typename Parse>
  void choice(std::string_view key, E& out, Parse parse) {
    if (auto v = get<std::string>(key)) {
      auto parsed = parse(*v);
      if (!parsed) throw ConfigError(fmt::format("{}.{}: unknown value '{}'", name_, key, *v));
      out = *parsed;
    }
  }

  void strings(std::string_view key, std::vector<std::string>& out) {
    const toml::node* n = node(key);
    if (!n) return;
    const auto* arr = n->as_array();
    if (!arr) throw ConfigError(fmt::format("{}.{}: expected an array of strings", name_, key));
    out.clear();
    for (const auto& e : *arr) {
      auto s = e.value<std::string>();
      if (!s) throw ConfigError(fmt::format("{}.{}: expected an array of strings", name_, key));
      out.push_back(*s);
    }
  }

  void path(std::string_view key, fs::path& out, const fs::path& base) {
    if (auto v = get<std::string>(key)) {
      fs::path p(*v);
      out = p.is_absolute() ? p : base / p;
    }
  }

  const toml::table* table(std::string_view key) {
    const toml::node* n = node(key);
    if (!n) return nullptr;
    if (!n->is_table()) throw ConfigError(fmt::format("{}.{}: expected a table", name_, key));
    return n->as_table();
  }

  void finish() const {
    if (!table_) return;
    for (const auto& [k, v] : *table_) {
      if (!used_.contains(std::string(k.str()))) {
        throw ConfigError(fmt::format("unknown key '{}.{}'", name_, k.str()));
      }
    }
  }

 private:
  const toml::table* table_;
  std::string name_;
  std::set<std::string> used_;
};

const toml::table* sub_table(const toml::table& root, std::string_view key) {
  const toml::node* n = root.get(key);
  if (!n) return nullptr;
  if (!n->is_table()) throw ConfigError(fmt::format("'{}' must be a table", key));
  return n->as_table();
}

template <std::size_t N, typename Item, typename NameFn>
void weights_table(const toml::table* t, std::string_view section, std::array<double, N>& out,
                   const std::array<Item, N>& items, NameFn name_of) {
  if (!t) return;
  out.fill(0.0);
  for (const auto& [k, v] : *t) {
    auto w = v.template value<double>();
    if (!w) throw ConfigError(fmt::format("{}.{}: expected a number", section, k.str()));
    bool found = false;
    for (std::size_t i = 0; i < N; ++i) {
      if (normalize_phrase(name_of(items[i])) == normalize_phrase(k.str())) {
        out[i] = *w;
        found = true;
      }
    }
    if (!found) throw ConfigError(fmt::format("{}: unknown name '{}'", section, k.str()));
  }
}

void parse_terms(const toml::node* n, std::vector<PlantedTerm>& out) {
  if (!n) return;
  const auto* arr = n->as_array();
  if (!arr) throw ConfigError("synth.terms must be an array of tables");
  for (const auto& e : *arr) {
    const auto* t = e.as_table();
    if (!t) throw ConfigError("synth.terms must be an array of tables");
    Section s(t, "synth.terms");
    PlantedTerm p;
    auto term = s.get<std::string>("term");
    if (!term) throw ConfigError("synth.terms entry needs 'term'");
    p.term = *term;
    s.choice("kind", p.kind, parse_term_kind);
    s.number("base_rate", p.base_rate);
    s.number("effect", p.effect);
    s.finish();
    out.push_back(std::move(p));
  }
}

}  // namespace

PipelineConfig default_config(const fs::path& data_dir) {
  PipelineConfig c;
  set_data_paths(c.paths, data_dir);
  return c;
}

PipelineConfig parse_config(std::string_view toml_text, const fs::path& base_dir, const fs::path& data_dir) {
  toml::table root;
  try {
    root = toml::parse(toml_text);
  } catch (const toml::parse_error& e) {
    const auto& where = e.source().begin;
    throw ConfigError(fmt::format("config line {}, column {}: {}", where.line, where.column, e.description()));
  }

  PipelineConfig c;
  static const std::set<std::string> kSections = {"paths", "synth", "classifier", "profiles", "models", "run"};
  for (const auto& [k, v] : root) {
    if (!kSections.contains(std::string(k.str()))) {
      throw ConfigError(fmt::format("unknown config section '{}'", k.str()));
    }
  }

  Section paths(sub_table(root, "paths"), "paths");
  fs::path data = data_dir;
  paths.path("data_dir", data, base_dir);
  set_data_paths(c.paths, data);
  paths.path("nutrients", c.paths.nutrients, base_dir);
  paths.path("synonyms", c.paths.synonyms, base_dir);
  paths.path("recipes", c.paths.recipes, base_dir);
  paths.path("targets", c.paths.targets, base_dir);
  paths.path("controls", c.paths.controls, base_dir);
  paths.path("zip_regions", c.paths.zip_regions, base_dir);
  paths.path("expenditure", c.paths.expenditure, base_dir);
  paths.path("costs", c.paths.costs, base_dir);
  paths.path("consumption", c.paths.consumption, base_dir);
  paths.path("indications", c.paths.indications, base_dir);
  paths.path("food_groups", c.paths.food_groups, base_dir);
  fs::path log;
  paths.path("log", log, base_dir);
  if (!log.empty()) c.paths.log = log;
  paths.choice("log_format", c.paths.log_format, parse_log_format);
  c.paths.out_dir = base_dir / c.paths.out_dir;
  paths.path("out_dir", c.paths.out_dir, base_dir);
  paths.finish();

  Section synth(sub_table(root, "synth"), "synth");
  if (synth.present()) {
    auto& s = c.synth;
    auto& w = s.world;
    s.enabled = true;
    synth.flag("enabled", s.enabled);
    synth.count("n_users", w.n_users);
    synth.number("missing_zip_rate", w.missing_zip_rate);
    synth.choice("preference", w.preference, parse_preference_source);
    synth.number("concentration", w.concentration);
    synth.number("regional_noise_sigma", w.regional_noise_sigma);
    synth.number("regional_tomato_weight", w.regional_tomato_weight);
    synth.number("recipe_rate", w.recipe_rate);
    synth.flag("single_ingredient", w.single_ingredient);
    synth.number("filler_rate", w.filler_rate);
    synth.choice("shape", w.shape, parse_plant_shape);
    synth.choice("intake", w.intake, parse_plant_intake);
    synth.number("b12_rate", w.b12_rate);
    synth.number("deficiency_rate", w.deficiency_rate);
    synth.number("deficiency_gap", w.deficiency_gap);
    synth.number("supplement_rate_aware", w.supplement_rate_aware);
    synth.number("supplement_rate_unaware", w.supplement_rate_unaware);
    synth.number("noise_rate", w.noise_rate);
    synth.count("start_time", w.start_time);
    synth.count("planted_targets", s.planted_targets);
    synth.count("planted_controls", s.planted_controls);
    synth.number("target_effect", s.target_effect);
    synth.number("control_effect", s.control_effect);
    synth.number("base_rate", s.base_rate);
    weights_table(synth.table("region_weights"), "synth.region_weights", w.region_weights, kRegions,
                  [](Region r) { return region_name(r); });
    weights_table(synth.table("food_weights"), "synth.food_weights", w.food_weights, kFoodOrder,
                  [](FoodItem f) { return food_name(f); });
    parse_terms(synth.node("terms"), w.terms);
    synth.finish();
  }

  Section cls(sub_table(root, "classifier"), "classifier");
  cls.number("theta", c.classifier.theta);
  cls.strings("recipe_cues", c.classifier.recipe_cues);
  cls.strings("deficiency_cues", c.classifier.deficiency_cues);
  cls.strings("supplement_cues", c.classifier.supplement_cues);
  cls.finish();
  if (!(c.classifier.theta > 0.0 && c.classifier.theta <= 1.0)) {
    throw ConfigError("classifier.theta must lie in (0, 1]");
  }

  Section prof(sub_table(root, "profiles"), "profiles");
  prof.choice("estimate_mode", c.estimate_mode, parse_estimate_mode);
  prof.finish();

  Section models(sub_table(root, "models"), "models");
  models.count("threshold", c.models.threshold);
  models.choice("cohort_filter", c.models.filter, parse_cohort_filter);
  models.choice("cob12", c.models.method, parse_correlation_method);
  models.choice("kind", c.models.kind, parse_model_kind);
  models.flag("with_interaction", c.models.with_interaction);
  models.count("top_k", c.models.top_k);
  models.finish();
  if (c.models.threshold == 0) throw ConfigError("models.threshold must be at least 1");
  if (c.models.top_k == 0) throw ConfigError("models.top_k must be at least 1");

  Section run(sub_table(root, "run"), "run");
  run.count("threads", c.run.threads);
  run.count("seed", c.run.seed);
  run.finish();
  if (c.run.threads == 0) c.run.threads = 1;

  if (c.synth.enabled) {
    c.synth.world.seed = c.run.seed;
    c.synth.world.validate();
  }
  return c;
}

PipelineConfig load_config(const fs::path& path, const fs::path& data_dir) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open config {}", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str(), path.parent_path().empty() ? fs::path(".") : path.parent_path(), data_dir);
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

namespace {

std::vector<std::pair<std::string, fs::path>> input_paths(const PipelineConfig& c) {
  const auto& p = c.paths;
  std::vector<std::pair<std::string, fs::path>> out = {
      {"nutrients", p.nutrients},     {"synonyms", p.synonyms},       {"recipes", p.recipes},
      {"targets", p.targets},         {"controls", p.controls},       {"zip_regions", p.zip_regions},
      {"expenditure", p.expenditure}, {"costs", p.costs},             {"consumption", p.consumption},
      {"indications", p.indications}, {"food_groups", p.food_groups}};
  if (p.log && !c.synth.enabled) out.emplace_back("log", *p.log);
  return out;
}

}  // namespace

void check_inputs(const PipelineConfig& c) {
  for (const auto& [name, path] : input_paths(c)) {
    std::error_code ec;
    if (!fs::is_regular_file(path, ec)) {
      throw IoError(fmt::format("input '{}' not found: {}", name, path.string()));
    }
  }
}

std::string canonical_config(const PipelineConfig& c) {
  using nlohmann::ordered_json;
  ordered_json j;
  ordered_json inputs;
  for (const auto& [name, path] : input_paths(c)) inputs[name] = sha256_file(path);
  j["inputs"] = std::move(inputs);
  j["log_format"] = std::string(log_format_name(c.paths.log_format));

  ordered_json s;
  s["enabled"] = c.synth.enabled;
  if (c.synth.enabled) {
    const auto& w = c.synth.world;
    s["n_users"] = w.n_users;
    s["region_weights"] = w.region_weights;
    s["missing_zip_rate"] = w.missing_zip_rate;
    s["preference"] = std::string(preference_source_name(w.preference));
    s["food_weights"] = w.food_weights;
    s["concentration"] = w.concentration;
    s["regional_noise_sigma"] = w.regional_noise_sigma;
    s["regional_tomato_weight"] = w.regional_tomato_weight;
    s["recipe_rate"] = w.recipe_rate;
    s["single_ingredient"] = w.single_ingredient;
    s["filler_rate"] = w.filler_rate;
    ordered_json terms = ordered_json::array();
    for (const auto& t : w.terms) {
      terms.push_back({{"term", t.term}, {"kind", std::string(term_kind_name(t.kind))},
                       {"base_rate", t.base_rate}, {"effect", t.effect}});
    }
    s["terms"] = std::move(terms);
    s["shape"] = std::string(plant_shape_name(w.shape));
    s["intake"] = std::string(plant_intake_name(w.intake));
    s["b12_rate"] = w.b12_rate;
    s["deficiency_rate"] = w.deficiency_rate;
    s["deficiency_gap"] = w.deficiency_gap;
    s["supplement_rate_aware"] = w.supplement_rate_aware;
    s["supplement_rate_unaware"] = w.supplement_rate_unaware;
    s["noise_rate"] = w.noise_rate;
    s["start_time"] = w.start_time;
    s["planted_targets"] = c.synth.planted_targets;
    s["planted_controls"] = c.synth.planted_controls;
    s["target_effect"] = c.synth.target_effect;
    s["control_effect"] = c.synth.control_effect;
    s["base_rate"] = c.synth.base_rate;
  }
  j["synth"] = std::move(s);

  j["classifier"] = {{"theta", c.classifier.theta},
                     {"recipe_cues", c.classifier.recipe_cues},
                     {"deficiency_cues", c.classifier.deficiency_cues},
                     {"supplement_cues", c.classifier.supplement_cues}};
  j["estimate_mode"] = std::string(estimate_mode_name(c.estimate_mode));
  j["models"] = {{"threshold", c.models.threshold},
                 {"cohort_filter", std::string(cohort_filter_name(c.models.filter))},
                 {"cob12", std::string(correlation_method_name(c.models.method))},
                 {"kind", std::string(model_kind_name(c.models.kind))},
                 {"with_interaction", c.models.with_interaction},
                 {"top_k", c.models.top_k}};
  j["seed"] = c.run.seed;
  return j.dump();
}

std::string config_hash(const PipelineConfig& c) { return sha256_hex(canonical_config(c)); }

std::vector<PlantedTerm> planted_terms(const SynthSection& synth, const TermLexicon& targets,
                                       const TermLexicon& controls) {
  std::vector<std::string> all;
  for (const auto& e : targets.entries) all.push_back(e.term);
  for (const auto& e : controls.entries) all.push_back(e.term);
  auto out = plant_terms(targets, all, synth.planted_targets, synth.base_rate, synth.target_effect);
  if (out.size() < synth.planted_targets) {
    throw ConfigError(fmt::format("only {} target terms can be planted", out.size()));
  }
  auto ctl = plant_terms(controls, all, synth.planted_controls, synth.base_rate, synth.control_effect);
  if (ctl.size() < synth.planted_controls) {
    throw ConfigError(fmt::format("only {} control terms can be planted", ctl.size()));
  }
  out.insert(out.end(), ctl.begin(), ctl.end());
  for (const auto& t : synth.world.terms) out.push_back(t);
  return out;
}

}  // namespace b12scope

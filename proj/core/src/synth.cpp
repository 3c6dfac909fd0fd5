#include "b12scope/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include <boost/random/bernoulli_distribution.hpp>
#include <boost/random/gamma_distribution.hpp>
#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/poisson_distribution.hpp>
#include <boost/random/uniform_01.hpp>
#include <boost/random/uniform_int_distribution.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "b12scope/error.hpp"
#include "b12scope/hash.hpp"
#include "b12scope/numeric.hpp"
#include "b12scope/text.hpp"

namespace b12scope {

std::string_view plant_shape_name(PlantShape s) { return s == PlantShape::Linear ? "linear" : "logistic"; }
std::optional<PlantShape> parse_plant_shape(std::string_view s) {
  if (s == "linear") return PlantShape::Linear;
  if (s == "logistic") return PlantShape::Logistic;
  return std::nullopt;
}
std::string_view plant_intake_name(PlantIntake s) { return s == PlantIntake::Mean ? "mean" : "sum"; }
std::optional<PlantIntake> parse_plant_intake(std::string_view s) {
  if (s == "mean") return PlantIntake::Mean;
  if (s == "sum") return PlantIntake::Sum;
  return std::nullopt;
}
std::string_view preference_source_name(PreferenceSource s) {
  return s == PreferenceSource::National ? "national" : "regional";
}
std::optional<PreferenceSource> parse_preference_source(std::string_view s) {
  if (s == "national") return PreferenceSource::National;
  if (s == "regional") return PreferenceSource::Regional;
  return std::nullopt;
}

namespace {

void check_rate(double v, std::string_view name) {
  if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(fmt::format("synth: {} must lie in [0, 1]", name));
}

}  // namespace

void SynthConfig::validate() const {
  if (n_users == 0) throw ConfigError("synth: n_users must be at least 1");
  double rw = 0.0;
  for (double w : region_weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw ConfigError("synth: region weights must be >= 0");
    rw += w;
  }
  if (!(rw > 0.0)) throw ConfigError("synth: region weights sum to zero");
  double fw = 0.0;
  for (double w : food_weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw ConfigError("synth: food weights must be >= 0");
    fw += w;
  }
  if (!(fw > 0.0)) throw ConfigError("synth: food weights sum to zero");
  if (!(concentration > 0.0)) throw ConfigError("synth: concentration must be positive");
  if (!(regional_noise_sigma >= 0.0)) throw ConfigError("synth: regional noise sigma must be >= 0");
  if (!(recipe_rate >= 0.0) || !(filler_rate >= 0.0)) {
    throw ConfigError("synth: query rates must be >= 0");
  }
  check_rate(missing_zip_rate, "missing_zip_rate");
  check_rate(regional_tomato_weight, "regional_tomato_weight");
  check_rate(b12_rate, "b12_rate");
  check_rate(deficiency_rate, "deficiency_rate");
  check_rate(deficiency_gap, "deficiency_gap");
  check_rate(supplement_rate_aware, "supplement_rate_aware");
  check_rate(supplement_rate_unaware, "supplement_rate_unaware");
  check_rate(noise_rate, "noise_rate");
  for (const auto& t : terms) {
    check_rate(t.base_rate, fmt::format("base rate of '{}'", t.term));
    if (shape == PlantShape::Logistic && (t.base_rate <= 0.0 || t.base_rate >= 1.0)) {
      throw ConfigError(fmt::format("synth: logistic plant needs 0 < base rate < 1 for '{}'", t.term));
    }
    if (!std::isfinite(t.effect)) throw ConfigError(fmt::format("synth: effect of '{}' not finite", t.term));
    if (normalize_phrase(t.term).empty()) throw ConfigError("synth: empty planted term");
  }
}

namespace {

using Rng = boost::random::mt19937_64;

constexpr std::array<std::string_view, 5> kRecipeTemplates = {
    "{} recipe", "{} recipes", "how to make {}", "{}", "cook {}"};
constexpr std::array<std::string_view, 5> kTermTemplates = {
    "{}", "{} side effects", "{} dosage", "what is {}", "{} treatment"};
constexpr std::array<std::string_view, 5> kDeficiencyQueries = {
    "b12 deficiency symptoms", "vitamin b12 deficiency", "low b12 levels",
    "B-12 deficiency causes", "am i b12 deficient"};
constexpr std::array<std::string_view, 4> kGeneralB12Queries = {
    "vitamin b12 foods", "b12 benefits", "what does b12 do", "b 12 vitamin"};
constexpr std::array<std::string_view, 4> kSupplementQueries = {
    "b12 supplements", "b12 injections near me", "best b12 supplement", "b12 pills"};
constexpr std::array<std::string_view, 10> kFillerQueries = {
    "weather tomorrow",   "movie times",   "news today",        "cheap flights",
    "football scores",    "used cars",     "nearest gas station", "how to tie a tie",
    "translate hello",    "stock market"};
constexpr std::array<std::string_view, 6> kJunkTokens = {"best", "easy", "homemade",
                                                         "quick", "grandmas", "healthy"};

std::size_t pick(Rng& rng, std::size_t n) {
  return boost::random::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

double uniform(Rng& rng) { return boost::random::uniform_01<double>()(rng); }

bool coin(Rng& rng, double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return boost::random::bernoulli_distribution<double>(p)(rng);
}

std::size_t categorical(Rng& rng, const FoodVector& p) {
  const double total = compensated_sum(p);
  const double u = uniform(rng) * total;
  double acc = 0.0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    last = i;
    acc += p[i];
    if (u < acc) return i;
  }
  return last;
}

template <std::size_t N>
std::size_t categorical(Rng& rng, const std::array<double, N>& w) {
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  const double u = uniform(rng) * total;
  double acc = 0.0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < N; ++i) {
    if (w[i] <= 0.0) continue;
    last = i;
    acc += w[i];
    if (u < acc) return i;
  }
  return last;
}

int poisson(Rng& rng, double mean) {
  if (mean <= 0.0) return 0;
  return boost::random::poisson_distribution<int, double>(mean)(rng);
}

FoodVector normalized(FoodVector v) {
  const double s = compensated_sum(v);
  for (double& x : v) x /= s;
  return v;
}

FoodVector dirichlet(Rng& rng, const FoodVector& base, double concentration) {
  FoodVector out{};
  for (std::size_t i = 0; i < kFoodCount; ++i) {
    const double a = concentration * base[i];
    out[i] = a > 0.0 ? boost::random::gamma_distribution<double>(a, 1.0)(rng) : 0.0;
  }
  const double s = compensated_sum(out);
  if (!(s > 0.0)) return base;  // all draws underflowed; fall back to the mean
  for (double& x : out) x /= s;
  return out;
}

std::string fill(std::string_view tmpl, std::string_view value) {
  return fmt::format(fmt::runtime(tmpl), value);
}

struct RegionalPlant {
  std::array<FoodVector, kRegionCount> base{};
  RegionGroupMatrix shares{};
};

RegionalPlant build_regional_plant(const SynthConfig& cfg, const ReferenceTables& refs, Rng& rng) {
  RegionalPlant plant;
  std::array<double, kGroupCount> group_weight_sum{};
  for (std::size_t f = 0; f < kFoodCount; ++f) {
    if (refs.food_groups[f]) group_weight_sum[static_cast<std::size_t>(*refs.food_groups[f])] += cfg.food_weights[f];
  }
  for (std::size_t g = 0; g < kGroupCount; ++g) {
    if (!(group_weight_sum[g] > 0.0)) {
      throw ConfigError(fmt::format("synth: food group '{}' has no weighted member food",
                                    group_name(kGroups[g])));
    }
  }
  boost::random::normal_distribution<double> noise(0.0, 1.0);
  for (std::size_t r = 0; r < kRegionCount; ++r) {
    const double total = std::accumulate(refs.expenditure[r].begin(), refs.expenditure[r].end(), 0.0);
    std::array<double, kGroupCount> w{};
    double wsum = 0.0;
    for (std::size_t g = 0; g < kGroupCount; ++g) {
      const double frac = refs.expenditure[r][g] / total;
      const double eps = cfg.regional_noise_sigma > 0.0 ? std::exp(cfg.regional_noise_sigma * noise(rng)) : 1.0;
      w[g] = frac / refs.costs[g] * eps;
      wsum += w[g];
    }
    double share_total = 0.0;
    for (std::size_t g = 0; g < kGroupCount; ++g) {
      w[g] /= wsum;
      plant.shares[r][g] = refs.costs[g] * w[g];
      share_total += plant.shares[r][g];
    }
    for (std::size_t g = 0; g < kGroupCount; ++g) plant.shares[r][g] /= share_total;
    for (std::size_t f = 0; f < kFoodCount; ++f) {
      if (refs.food_groups[f]) {
        const auto g = static_cast<std::size_t>(*refs.food_groups[f]);
        plant.base[r][f] = (1.0 - cfg.regional_tomato_weight) * w[g] * cfg.food_weights[f] / group_weight_sum[g];
      } else if (kFoodOrder[f] == FoodItem::Tomatoes) {
        plant.base[r][f] = cfg.regional_tomato_weight;
      }
    }
    plant.base[r] = normalized(plant.base[r]);
  }
  return plant;
}

struct PendingQuery {
  std::string text;
};

}  // namespace

SynthWorld generate(const SynthConfig& cfg, const SynthInputs& in) {
  cfg.validate();
  if (!in.corpus || !in.zips || !in.nutrients) {
    throw ConfigError("synth: corpus, zip table and nutrient table are required");
  }
  if (cfg.preference == PreferenceSource::Regional && !in.references) {
    throw ConfigError("synth: regional preferences need the reference tables");
  }
  const auto& corpus = *in.corpus;
  const auto& nutrients = in.nutrients->values();

  // Recipes available for each food.
  std::array<std::vector<std::size_t>, kFoodCount> recipes_for{};
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& set = corpus[i].ingredients;
    for (std::size_t f = 0; f < kFoodCount; ++f) {
      if (!set.contains(kFoodOrder[f])) continue;
      if (cfg.single_ingredient && set.size() != 1) continue;
      recipes_for[f].push_back(i);
    }
  }

  Rng rng(cfg.seed);
  GroundTruth truth;
  truth.seed = cfg.seed;
  truth.n_users = cfg.n_users;
  truth.intake = cfg.intake;
  truth.nutrient_values = nutrients;

  FoodVector national = normalized(cfg.food_weights);
  RegionalPlant regional;
  if (cfg.preference == PreferenceSource::Regional) {
    regional = build_regional_plant(cfg, *in.references, rng);
    truth.regional_plant = true;
    truth.planted_shares = regional.shares;
  }
  for (std::size_t f = 0; f < kFoodCount; ++f) {
    bool needed = cfg.preference == PreferenceSource::National ? national[f] > 0.0 : false;
    if (cfg.preference == PreferenceSource::Regional) {
      for (const auto& b : regional.base) needed = needed || b[f] > 0.0;
    }
    if (cfg.deficiency_gap > 0.0 && kFoodOrder[f] == FoodItem::Tomatoes) needed = true;
    if (needed && recipes_for[f].empty() && cfg.recipe_rate > 0.0) {
      throw ConfigError(fmt::format("synth: corpus has no {}recipe for food '{}'",
                                    cfg.single_ingredient ? "single-ingredient " : "",
                                    food_name(kFoodOrder[f])));
    }
  }

  struct UserState {
    std::vector<std::string> queries;
    double intake = 0.0;
    bool has_searches = false;
  };
  std::vector<UserState> state(cfg.n_users);
  truth.users.resize(cfg.n_users);

  const std::size_t tomato = index_of(FoodItem::Tomatoes);
  for (std::size_t u = 0; u < cfg.n_users; ++u) {
    auto& tu = truth.users[u];
    auto& st = state[u];
    tu.user_id = fmt::format("u{:07d}", u);
    const std::size_t r = categorical(rng, cfg.region_weights);
    tu.region = kRegions[r];
    if (!coin(rng, cfg.missing_zip_rate)) {
      const auto& prefixes = in.zips->prefixes(tu.region);
      if (!prefixes.empty()) {
        const int prefix = prefixes[pick(rng, prefixes.size())];
        tu.zip = fmt::format("{:03d}{:02d}", prefix, pick(rng, 100));
      }
    }
    tu.deficiency_aware = coin(rng, cfg.deficiency_rate);
    tu.general_b12 = coin(rng, cfg.b12_rate);
    tu.supplement = coin(rng, tu.deficiency_aware ? cfg.supplement_rate_aware : cfg.supplement_rate_unaware);

    FoodVector base = cfg.preference == PreferenceSource::National ? national : regional.base[r];
    if (tu.deficiency_aware && cfg.deficiency_gap > 0.0) {
      for (double& b : base) b *= 1.0 - cfg.deficiency_gap;
      base[tomato] += cfg.deficiency_gap;
    }
    const FoodVector pref = dirichlet(rng, base, cfg.concentration);

    const int n_recipes = poisson(rng, cfg.recipe_rate);
    for (int k = 0; k < n_recipes; ++k) {
      const std::size_t f = categorical(rng, pref);
      const auto& pool = recipes_for[f];
      const auto& doc = corpus[pool[pick(rng, pool.size())]];
      for (std::size_t i = 0; i < kFoodCount; ++i) {
        if (doc.ingredients.contains(kFoodOrder[i])) ++tu.food_counts[i];
      }
      ++tu.recipe_searches;
      std::vector<std::string> title = doc.title_tokens;
      if (coin(rng, cfg.noise_rate)) {
        const std::size_t pos = pick(rng, title.size());
        if (title.size() >= 2 && coin(rng, 0.5)) {
          title.erase(title.begin() + static_cast<long>(pos));
        } else {
          title[pos] = std::string(kJunkTokens[pick(rng, kJunkTokens.size())]);
        }
      }
      const auto tmpl = kRecipeTemplates[pick(rng, kRecipeTemplates.size())];
      st.queries.push_back(fill(tmpl, join_tokens(title)));
    }
    const int n_filler = poisson(rng, cfg.filler_rate);
    for (int k = 0; k < n_filler; ++k) {
      st.queries.emplace_back(kFillerQueries[pick(rng, kFillerQueries.size())]);
    }
    if (tu.deficiency_aware) st.queries.emplace_back(kDeficiencyQueries[pick(rng, kDeficiencyQueries.size())]);
    if (tu.general_b12) st.queries.emplace_back(kGeneralB12Queries[pick(rng, kGeneralB12Queries.size())]);
    if (tu.supplement) st.queries.emplace_back(kSupplementQueries[pick(rng, kSupplementQueries.size())]);

    CompensatedSum total;
    std::int64_t n = 0;
    for (std::size_t i = 0; i < kFoodCount; ++i) {
      total.add(nutrients[i] * static_cast<double>(tu.food_counts[i]));
      n += tu.food_counts[i];
    }
    st.has_searches = n > 0;
    if (cfg.intake == PlantIntake::Sum) {
      st.intake = total.value();
    } else if (n > 0) {
      st.intake = total.value() / static_cast<double>(n);
    }
  }

  {
    CompensatedSum s;
    std::size_t n = 0;
    for (const auto& st : state) {
      if (cfg.intake == PlantIntake::Sum || st.has_searches) {
        s.add(st.intake);
        ++n;
      }
    }
    truth.reference_intake = n ? s.value() / static_cast<double>(n) : 0.0;
    if (cfg.intake == PlantIntake::Mean) {
      for (auto& st : state) {
        if (!st.has_searches) st.intake = truth.reference_intake;
      }
    }
  }

  for (const auto& plant : cfg.terms) {
    TruthTerm tt;
    tt.plant = plant;
    tt.plant.term = normalize_phrase(plant.term);
    std::size_t clamped = 0;
    const double logit_base =
        cfg.shape == PlantShape::Logistic ? std::log(plant.base_rate / (1.0 - plant.base_rate)) : 0.0;
    const double logistic_slope =
        cfg.shape == PlantShape::Logistic ? plant.effect / (plant.base_rate * (1.0 - plant.base_rate)) : 0.0;
    for (std::size_t u = 0; u < cfg.n_users; ++u) {
      const double delta = state[u].intake - truth.reference_intake;
      double p = 0.0;
      if (cfg.shape == PlantShape::Linear) {
        p = plant.base_rate + plant.effect * delta;
        if (p < 0.0 || p > 1.0) ++clamped;
        p = std::clamp(p, 0.0, 1.0);
      } else {
        p = 1.0 / (1.0 + std::exp(-(logit_base + logistic_slope * delta)));
      }
      if (coin(rng, p)) {
        ++tt.n_askers;
        truth.users[u].terms.push_back(tt.plant.term);
        const auto tmpl = kTermTemplates[pick(rng, kTermTemplates.size())];
        state[u].queries.push_back(fill(tmpl, tt.plant.term));
      }
    }
    tt.clamped_fraction = static_cast<double>(clamped) / static_cast<double>(cfg.n_users);
    if (tt.clamped_fraction > 0.05) {
      truth.warnings.push_back(fmt::format(
          "term '{}': {:.1f}% of users had a probability outside [0,1] before clamping; the effect is "
          "too large for linear-model recovery",
          tt.plant.term, 100.0 * tt.clamped_fraction));
    }
    truth.terms.push_back(std::move(tt));
  }

  SynthWorld world;
  std::string log;
  for (std::size_t u = 0; u < cfg.n_users; ++u) {
    auto& tu = truth.users[u];
    std::sort(tu.terms.begin(), tu.terms.end());
    tu.terms.erase(std::unique(tu.terms.begin(), tu.terms.end()), tu.terms.end());
    auto& qs = state[u].queries;
    for (std::size_t i = qs.size(); i > 1; --i) std::swap(qs[i - 1], qs[pick(rng, i)]);
    for (std::size_t j = 0; j < qs.size(); ++j) {
      QueryRecord rec{tu.user_id, qs[j], tu.zip,
                      cfg.start_time + static_cast<std::int64_t>(u) * 600 + static_cast<std::int64_t>(j) * 7};
      log += serialize_record(rec, LogFormat::Jsonl);
      log += '\n';
      world.records.push_back(std::move(rec));
    }
  }
  truth.log_sha256 = sha256_hex(log);
  world.log_text = std::move(log);
  world.truth = std::move(truth);
  return world;
}

std::vector<PlantedTerm> plant_terms(const TermLexicon& lexicon, const std::vector<std::string>& all_terms,
                                     std::size_t count, double base_rate, double effect) {
  auto contains = [](const std::vector<std::string>& hay, const std::vector<std::string>& needle) {
    if (needle.size() > hay.size()) return false;
    for (std::size_t i = 0; i + needle.size() <= hay.size(); ++i) {
      if (std::equal(needle.begin(), needle.end(), hay.begin() + static_cast<long>(i))) return true;
    }
    return false;
  };
  std::vector<std::vector<std::string>> others;
  for (const auto& t : all_terms) others.push_back(normalize_query(t));
  std::vector<PlantedTerm> out;
  for (const auto& e : lexicon.entries) {
    if (out.size() >= count) break;
    const auto toks = normalize_query(e.term);
    bool overlaps = false;
    for (const auto& o : others) {
      if (o == toks) continue;
      if (contains(o, toks) || contains(toks, o)) {
        overlaps = true;
        break;
      }
    }
    if (!overlaps) out.push_back({e.term, lexicon.kind, base_rate, effect});
  }
  return out;
}

void write_truth(std::ostream& out, const GroundTruth& t) {
  using nlohmann::ordered_json;
  ordered_json h;
  h["type"] = "header";
  h["log_sha256"] = t.log_sha256;
  h["seed"] = t.seed;
  h["n_users"] = t.n_users;
  h["reference_intake"] = t.reference_intake;
  h["intake"] = std::string(plant_intake_name(t.intake));
  h["nutrients"] = t.nutrient_values;
  h["regional_plant"] = t.regional_plant;
  h["planted_shares"] = t.planted_shares;
  out << h.dump() << '\n';
  for (const auto& w : t.warnings) {
    ordered_json j;
    j["type"] = "warning";
    j["text"] = w;
    out << j.dump() << '\n';
  }
  for (const auto& term : t.terms) {
    ordered_json j;
    j["type"] = "term";
    j["term"] = term.plant.term;
    j["kind"] = std::string(term_kind_name(term.plant.kind));
    j["base_rate"] = term.plant.base_rate;
    j["effect"] = term.plant.effect;
    j["n_askers"] = term.n_askers;
    j["clamped_fraction"] = term.clamped_fraction;
    out << j.dump() << '\n';
  }
  for (const auto& u : t.users) {
    ordered_json j;
    j["type"] = "user";
    j["user"] = u.user_id;
    j["region"] = std::string(region_name(u.region));
    j["zip"] = u.zip ? ordered_json(*u.zip) : ordered_json(nullptr);
    j["food_counts"] = u.food_counts;
    j["recipe_searches"] = u.recipe_searches;
    j["terms"] = u.terms;
    j["deficiency_aware"] = u.deficiency_aware;
    j["general_b12"] = u.general_b12;
    j["supplement"] = u.supplement;
    out << j.dump() << '\n';
  }
}

GroundTruth read_truth(std::istream& in) {
  GroundTruth t;
  std::string line;
  bool header = false;
  std::size_t line_no = 0;
  try {
    while (std::getline(in, line)) {
      ++line_no;
      if (trim(line).empty()) continue;
      const auto j = nlohmann::json::parse(line);
      const auto type = j.at("type").get<std::string>();
      if (type == "header") {
        header = true;
        t.log_sha256 = j.at("log_sha256").get<std::string>();
        t.seed = j.at("seed").get<std::uint64_t>();
        t.n_users = j.at("n_users").get<std::size_t>();
        t.reference_intake = j.at("reference_intake").get<double>();
        const auto intake = parse_plant_intake(j.at("intake").get<std::string>());
        if (!intake) throw FormatError("unknown intake measure");
        t.intake = *intake;
        t.nutrient_values = j.at("nutrients").get<FoodVector>();
        t.regional_plant = j.at("regional_plant").get<bool>();
        t.planted_shares = j.at("planted_shares").get<RegionGroupMatrix>();
      } else if (type == "warning") {
        t.warnings.push_back(j.at("text").get<std::string>());
      } else if (type == "term") {
        TruthTerm tt;
        tt.plant.term = j.at("term").get<std::string>();
        const auto kind = parse_term_kind(j.at("kind").get<std::string>());
        if (!kind) throw FormatError("unknown term kind");
        tt.plant.kind = *kind;
        tt.plant.base_rate = j.at("base_rate").get<double>();
        tt.plant.effect = j.at("effect").get<double>();
        tt.n_askers = j.at("n_askers").get<std::size_t>();
        tt.clamped_fraction = j.at("clamped_fraction").get<double>();
        t.terms.push_back(std::move(tt));
      } else if (type == "user") {
        TruthUser u;
        u.user_id = j.at("user").get<std::string>();
        const auto region = parse_region(j.at("region").get<std::string>());
        if (!region) throw FormatError("unknown region");
        u.region = *region;
        if (!j.at("zip").is_null()) u.zip = j.at("zip").get<std::string>();
        u.food_counts = j.at("food_counts").get<FoodCounts>();
        u.recipe_searches = j.at("recipe_searches").get<std::int64_t>();
        u.terms = j.at("terms").get<std::vector<std::string>>();
        u.deficiency_aware = j.at("deficiency_aware").get<bool>();
        u.general_b12 = j.at("general_b12").get<bool>();
        u.supplement = j.at("supplement").get<bool>();
        t.users.push_back(std::move(u));
      } else {
        throw FormatError(fmt::format("unknown record type '{}'", type));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(fmt::format("truth line {}: {}", line_no, e.what()));
  } catch (const FormatError& e) {
    throw FormatError(fmt::format("truth line {}: {}", line_no, e.what()));
  }
  if (!header) throw FormatError("truth file has no header");
  return t;
}

GroundTruth read_truth_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open {}", path.string()));
  try {
    return read_truth(in);
  } catch (const FormatError& e) {
    throw FormatError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

OracleExpectations oracle_expected_effects(const GroundTruth& truth, const std::filesystem::path& log_path,
                                           const CostTable& costs, const FoodGroupMap& groups) {
  std::ifstream in(log_path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open {}", log_path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string bytes = buf.str();
  return oracle_expected_effects(truth, std::string_view(bytes), costs, groups);
}

OracleExpectations oracle_expected_effects(const GroundTruth& truth, std::string_view log_bytes,
                                           const CostTable& costs, const FoodGroupMap& groups) {
  const auto digest = sha256_hex(log_bytes);
  if (digest != truth.log_sha256) {
    throw DataError(fmt::format("log hash {} does not match truth hash {}", digest, truth.log_sha256));
  }
  OracleExpectations o;

  // Regional shares over users whose zip is visible in the log.
  RegionGroupMatrix weighted{};
  for (const auto& u : truth.users) {
    if (!u.zip) continue;
    const auto r = static_cast<std::size_t>(u.region);
    for (std::size_t f = 0; f < kFoodCount; ++f) {
      if (!groups[f]) continue;
      const auto g = static_cast<std::size_t>(*groups[f]);
      weighted[r][g] += static_cast<double>(u.food_counts[f]);
    }
  }
  for (std::size_t r = 0; r < kRegionCount; ++r) {
    long double total = 0.0L;
    for (std::size_t g = 0; g < kGroupCount; ++g) total += static_cast<long double>(costs[g] * weighted[r][g]);
    if (total <= 0.0L) continue;
    o.active[r] = true;
    for (std::size_t g = 0; g < kGroupCount; ++g) {
      o.true_shares[r][g] = static_cast<double>(static_cast<long double>(costs[g] * weighted[r][g]) / total);
    }
  }

  // Mean-mode intake by deficiency awareness.
  std::vector<double> intake(truth.users.size(), 0.0);
  std::vector<bool> defined(truth.users.size(), false);
  long double sum_a = 0.0L, sum_o = 0.0L;
  std::size_t n_a = 0, n_o = 0;
  for (std::size_t i = 0; i < truth.users.size(); ++i) {
    const auto& u = truth.users[i];
    long double total = 0.0L;
    std::int64_t n = 0;
    for (std::size_t f = 0; f < kFoodCount; ++f) {
      total += static_cast<long double>(truth.nutrient_values[f]) * u.food_counts[f];
      n += u.food_counts[f];
    }
    if (truth.intake == PlantIntake::Sum) {
      intake[i] = static_cast<double>(total);
    } else {
      intake[i] = n > 0 ? static_cast<double>(total / n) : truth.reference_intake;
    }
    if (n == 0) continue;
    defined[i] = true;
    const long double m = total / n;
    if (u.deficiency_aware) {
      sum_a += m;
      ++n_a;
    } else {
      sum_o += m;
      ++n_o;
    }
  }
  if (n_a) o.mean_intake_aware = static_cast<double>(sum_a / n_a);
  if (n_o) o.mean_intake_other = static_cast<double>(sum_o / n_o);
  if (o.mean_intake_aware && o.mean_intake_other && *o.mean_intake_other != 0.0) {
    o.relative_gap = std::abs(*o.mean_intake_aware - *o.mean_intake_other) / *o.mean_intake_other;
  }

  for (const auto& t : truth.terms) {
    OracleTerm ot;
    ot.term = t.plant.term;
    ot.planted_effect = t.plant.effect;
    ot.n_askers = t.n_askers;
    const std::size_t n = truth.users.size();
    long double mx = 0.0L, my = 0.0L;
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& terms = truth.users[i].terms;
      y[i] = std::binary_search(terms.begin(), terms.end(), t.plant.term) ? 1.0 : 0.0;
      mx += intake[i];
      my += y[i];
    }
    mx /= static_cast<long double>(n);
    my /= static_cast<long double>(n);
    long double sxy = 0.0L, sxx = 0.0L, syy = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
      const long double dx = intake[i] - mx;
      const long double dy = y[i] - my;
      sxy += dx * dy;
      sxx += dx * dx;
      syy += dy * dy;
    }
    if (sxx > 0.0L && syy > 0.0L) ot.intake_correlation = static_cast<double>(sxy / std::sqrt(sxx * syy));
    o.terms.push_back(std::move(ot));
  }
  return o;
}

std::string oracle_to_json(const OracleExpectations& o) {
  using nlohmann::ordered_json;
  ordered_json j;
  ordered_json regions = ordered_json::array();
  for (std::size_t r = 0; r < kRegionCount; ++r) {
    ordered_json row;
    row["region"] = std::string(region_name(kRegions[r]));
    row["active"] = o.active[r];
    ordered_json shares;
    for (std::size_t g = 0; g < kGroupCount; ++g) shares[std::string(group_name(kGroups[g]))] = o.true_shares[r][g];
    row["shares"] = std::move(shares);
    regions.push_back(std::move(row));
  }
  j["regional_shares"] = std::move(regions);
  auto opt = [](const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); };
  j["mean_intake_deficiency_aware"] = opt(o.mean_intake_aware);
  j["mean_intake_other"] = opt(o.mean_intake_other);
  j["relative_gap"] = opt(o.relative_gap);
  ordered_json terms = ordered_json::array();
  for (const auto& t : o.terms) {
    ordered_json row;
    row["term"] = t.term;
    row["planted_effect"] = t.planted_effect;
    row["expected_sign"] = t.planted_effect < 0.0 ? -1 : (t.planted_effect > 0.0 ? 1 : 0);
    row["n_askers"] = t.n_askers;
    row["intake_correlation"] = opt(t.intake_correlation);
    terms.push_back(std::move(row));
  }
  j["terms"] = std::move(terms);
  return j.dump(2);
}

IndicationsWorld generate_indications_world(const IndicationsWorldConfig& cfg) {
  if (cfg.n_drugs < kIndicationsMinRows) throw ConfigError("indications world needs at least 5 drugs");
  Rng rng(cfg.seed);
  boost::random::normal_distribution<double> normal(0.0, 1.0);
  IndicationsWorld w;
  const std::size_t n = cfg.n_drugs;
  std::vector<double> askers(n), share(n);
  std::vector<std::int64_t> n_ind(n), n_pain(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double log_askers = 7.5 + normal(rng);
    askers[i] = std::floor(1000.0 + std::exp(log_askers));
    const double mean_ind = 4.0 + 3.0 * std::max(0.0, log_askers - 6.0);
    n_ind[i] = 1 + poisson(rng, mean_ind);
    const double a = boost::random::gamma_distribution<double>(2.0, 1.0)(rng);
    const double b = boost::random::gamma_distribution<double>(3.0, 1.0)(rng);
    const double q = a / (a + b);
    std::int64_t pain = 0;
    for (std::int64_t k = 0; k < n_ind[i]; ++k) pain += coin(rng, q) ? 1 : 0;
    n_pain[i] = pain;
    share[i] = static_cast<double>(pain) / static_cast<double>(n_ind[i]);
  }
  // average ranks of the indication counts, scaled to (0, 1]
  std::vector<double> ind_d(n_ind.begin(), n_ind.end());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return ind_d[x] < ind_d[y]; });
  std::vector<double> rank(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i + 1;
    while (j < n && ind_d[order[j]] == ind_d[order[i]]) ++j;
    for (std::size_t t = i; t < j; ++t) rank[order[t]] = 0.5 * static_cast<double>(i + 1 + j);
    i = j;
  }
  for (std::size_t i = 0; i < n; ++i) {
    TermModelResult r;
    r.term = fmt::format("drug{:03d}", i);
    r.kind = TermKind::Target;
    r.category = TermCategory::OtherPharmaceuticals;
    r.n_askers = static_cast<std::size_t>(askers[i]);
    double c = -0.3 + cfg.indications_effect * (rank[i] / static_cast<double>(n) - 0.5) +
               cfg.pain_effect * (share[i] - 0.4) + cfg.noise_sd * normal(rng);
    r.cob12 = std::clamp(c, -1.0, 1.0);
    r.cob12_pearson = r.cob12;
    r.r2_i = 0.001 + 0.009 * uniform(rng);
    w.results.push_back(std::move(r));
    w.indications[fmt::format("drug{:03d}", i)] = Indications{n_ind[i], n_pain[i]};
  }
  return w;
}

}  // namespace b12scope

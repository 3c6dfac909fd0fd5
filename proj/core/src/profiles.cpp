#include "b12scope/profiles.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "b12scope/error.hpp"
#include "b12scope/numeric.hpp"
#include "b12scope/parallel.hpp"
#include "b12scope/stats.hpp"
#include "b12scope/text.hpp"

namespace b12scope {

bool UserProfile::has_term(std::string_view term) const {
  return std::binary_search(term_flags.begin(), term_flags.end(), term,
                            [](const auto& a, const auto& b) { return std::string_view(a) < std::string_view(b); });
}

std::int64_t UserProfile::total_food_count() const {
  std::int64_t n = 0;
  for (auto c : food_counts) n += c;
  return n;
}

const UserProfile* ProfileStore::find(std::string_view user_id) const {
  auto it = std::lower_bound(users.begin(), users.end(), user_id,
                             [](const UserProfile& p, std::string_view id) { return p.user_id < id; });
  if (it == users.end() || it->user_id != user_id) return nullptr;
  return &*it;
}

ProfileStore build_profiles(const std::vector<ClassifiedRecord>& records, const ZipRegionTable& zips,
                            unsigned threads) {
  std::unordered_map<std::string_view, std::size_t> slot;
  std::vector<std::vector<std::size_t>> by_user;
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto [it, fresh] = slot.try_emplace(records[i].record.user_id, by_user.size());
    if (fresh) by_user.emplace_back();
    by_user[it->second].push_back(i);
  }

  std::vector<UserProfile> users(by_user.size());
  parallel_for(by_user.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t u = begin; u < end; ++u) {
      UserProfile& p = users[u];
      std::array<std::int64_t, kRegionCount> region_hits{};
      std::array<std::size_t, kRegionCount> first_seen{};
      first_seen.fill(SIZE_MAX);
      std::size_t order = 0;
      for (const auto idx : by_user[u]) {
        const auto& rec = records[idx];
        if (p.user_id.empty()) p.user_id = rec.record.user_id;
        ++p.queries;
        const auto& c = rec.cls;
        if (c.recipe_title) {
          ++p.recipe_searches;
          for (auto f : kFoodOrder) {
            if (c.recipe_foods.contains(f)) ++p.food_counts[index_of(f)];
          }
        }
        p.term_flags.insert(p.term_flags.end(), c.matched_terms.begin(), c.matched_terms.end());
        p.asked_b12 = p.asked_b12 || c.is_b12;
        p.asked_b12_deficiency = p.asked_b12_deficiency || c.is_b12_deficiency;
        p.asked_b12_supplement = p.asked_b12_supplement || c.is_b12_supplement;
        const Region r = zips.region_of(rec.record.zip);
        if (r != Region::Unknown) {
          const auto ri = static_cast<std::size_t>(r);
          ++region_hits[ri];
          if (first_seen[ri] == SIZE_MAX) first_seen[ri] = order++;
        }
      }
      std::sort(p.term_flags.begin(), p.term_flags.end());
      p.term_flags.erase(std::unique(p.term_flags.begin(), p.term_flags.end()), p.term_flags.end());
      std::size_t best = SIZE_MAX;
      for (std::size_t r = 0; r < kRegionCount; ++r) {
        if (region_hits[r] == 0) continue;
        if (best == SIZE_MAX || region_hits[r] > region_hits[best] ||
            (region_hits[r] == region_hits[best] && first_seen[r] < first_seen[best])) {
          best = r;
        }
      }
      p.region = best == SIZE_MAX ? Region::Unknown : kRegions[best];
    }
  });

  std::sort(users.begin(), users.end(),
            [](const UserProfile& a, const UserProfile& b) { return a.user_id < b.user_id; });
  return ProfileStore{std::move(users)};
}

std::string_view estimate_mode_name(EstimateMode m) { return m == EstimateMode::Sum ? "sum" : "mean"; }

std::optional<EstimateMode> parse_estimate_mode(std::string_view s) {
  if (s == "sum") return EstimateMode::Sum;
  if (s == "mean") return EstimateMode::Mean;
  return std::nullopt;
}

std::optional<double> estimate_b12(const UserProfile& profile, const NutrientTable& table,
                                   EstimateMode mode) {
  CompensatedSum total;
  std::int64_t n = 0;
  for (std::size_t i = 0; i < kFoodCount; ++i) {
    const auto c = profile.food_counts[i];
    total.add(table.values()[i] * static_cast<double>(c));
    n += c;
  }
  if (mode == EstimateMode::Sum) return total.value();
  if (n == 0) return std::nullopt;
  return total.value() / static_cast<double>(n);
}

CohortComparison cohort_compare(const ProfileStore& store, const NutrientTable& table,
                                EstimateMode mode, const ProfilePredicate& predicate,
                                std::string_view predicate_name) {
  CohortComparison out;
  out.predicate = std::string(predicate_name);
  out.mode = mode;
  std::vector<double> a, b;
  for (const auto& p : store.users) {
    const auto est = estimate_b12(p, table, mode);
    if (!est) {
      ++out.excluded;
      continue;
    }
    (predicate(p) ? a : b).push_back(*est);
  }
  if (a.empty()) {
    throw StatError(fmt::format("cohort '{}' is empty", predicate_name));
  }
  if (b.empty()) {
    throw StatError(fmt::format("complement of cohort '{}' is empty", predicate_name));
  }
  out.n_a = a.size();
  out.n_b = b.size();
  out.mean_a = stats::mean(a);
  out.mean_b = stats::mean(b);
  out.relative_diff = out.mean_b != 0.0 ? std::abs(out.mean_a - out.mean_b) / out.mean_b
                                        : std::numeric_limits<double>::quiet_NaN();
  out.ranksum_p = stats::ranksum(a, b).p_value;
  return out;
}

AwarenessReport awareness_stats(const ProfileStore& store) {
  AwarenessReport r;
  r.users = store.size();
  std::size_t not_deficiency = 0;
  for (const auto& p : store.users) {
    if (!p.b12_aware()) ++r.unaware;
    if (p.asked_b12_deficiency) {
      ++r.deficiency_aware;
      if (p.asked_b12_supplement) ++r.supplement_within;
    } else {
      ++not_deficiency;
      if (p.asked_b12_supplement) ++r.supplement_without;
    }
  }
  if (r.users) r.unaware_fraction = static_cast<double>(r.unaware) / static_cast<double>(r.users);
  if (r.deficiency_aware) {
    r.rate_within = static_cast<double>(r.supplement_within) / static_cast<double>(r.deficiency_aware);
  }
  if (not_deficiency) {
    r.rate_without = static_cast<double>(r.supplement_without) / static_cast<double>(not_deficiency);
  }
  if (r.rate_within && r.rate_without && *r.rate_without > 0.0) {
    r.ratio = *r.rate_within / *r.rate_without;
  }
  return r;
}

std::string profile_to_json(const UserProfile& p) {
  nlohmann::ordered_json j;
  j["user"] = p.user_id;
  j["region"] = std::string(region_name(p.region));
  j["food_counts"] = p.food_counts;
  j["terms"] = p.term_flags;
  j["b12"] = p.asked_b12;
  j["b12_deficiency"] = p.asked_b12_deficiency;
  j["b12_supplement"] = p.asked_b12_supplement;
  j["queries"] = p.queries;
  j["recipe_searches"] = p.recipe_searches;
  return j.dump();
}

UserProfile profile_from_json(std::string_view line) {
  try {
    const auto j = nlohmann::json::parse(line.begin(), line.end());
    UserProfile p;
    p.user_id = j.at("user").get<std::string>();
    const auto region = parse_region(j.at("region").get<std::string>());
    if (!region) throw FormatError("unknown region in profile");
    p.region = *region;
    const auto counts = j.at("food_counts").get<std::vector<std::int64_t>>();
    if (counts.size() != kFoodCount) throw FormatError("food_counts must have 12 entries");
    for (std::size_t i = 0; i < kFoodCount; ++i) {
      if (counts[i] < 0) throw FormatError("negative food count");
      p.food_counts[i] = counts[i];
    }
    p.term_flags = j.at("terms").get<std::vector<std::string>>();
    std::sort(p.term_flags.begin(), p.term_flags.end());
    p.term_flags.erase(std::unique(p.term_flags.begin(), p.term_flags.end()), p.term_flags.end());
    p.asked_b12 = j.at("b12").get<bool>();
    p.asked_b12_deficiency = j.at("b12_deficiency").get<bool>();
    p.asked_b12_supplement = j.at("b12_supplement").get<bool>();
    p.queries = j.at("queries").get<std::int64_t>();
    p.recipe_searches = j.at("recipe_searches").get<std::int64_t>();
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(fmt::format("profile record: {}", e.what()));
  }
}

void write_profiles(std::ostream& out, const ProfileStore& store) {
  for (const auto& p : store.users) out << profile_to_json(p) << '\n';
}

ProfileStore read_profiles(std::istream& in) {
  ProfileStore store;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      store.users.push_back(profile_from_json(line));
    } catch (const FormatError& e) {
      throw FormatError(fmt::format("line {}: {}", line_no, e.what()));
    }
  }
  std::sort(store.users.begin(), store.users.end(),
            [](const UserProfile& a, const UserProfile& b) { return a.user_id < b.user_id; });
  for (std::size_t i = 1; i < store.users.size(); ++i) {
    if (store.users[i].user_id == store.users[i - 1].user_id) {
      throw FormatError(fmt::format("duplicate profile for user '{}'", store.users[i].user_id));
    }
  }
  return store;
}

ProfileStore read_profiles_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open {}", path.string()));
  try {
    return read_profiles(in);
  } catch (const FormatError& e) {
    throw FormatError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

}  // namespace b12scope

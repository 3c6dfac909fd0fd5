#include "b12scope/types.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace b12scope {

namespace {

constexpr std::array<std::string_view, kFoodCount> kFoodNames = {
    "Shellfish", "Mackerel", "Trout",   "Salmon", "Tuna", "Pork",
    "Beef",      "Turkey",   "Chicken", "Egg",    "Milk", "Tomatoes"};

constexpr std::array<std::string_view, kRegionCount + 1> kRegionNames = {
    "northeast", "midwest", "south", "west", "unknown"};

constexpr std::array<std::string_view, kGroupCount> kGroupNames = {
    "beef", "pork", "poultry", "fish_seafood", "eggs", "milk"};

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

template <typename Enum, std::size_t N>
std::optional<Enum> lookup(const std::array<std::string_view, N>& names, std::string_view s) {
  for (std::size_t i = 0; i < N; ++i) {
    if (iequals(names[i], s)) return static_cast<Enum>(i);
  }
  return std::nullopt;
}

}  // namespace

std::string_view food_name(FoodItem f) { return kFoodNames[index_of(f)]; }
std::optional<FoodItem> parse_food(std::string_view name) {
  return lookup<FoodItem>(kFoodNames, name);
}

std::string_view region_name(Region r) { return kRegionNames[static_cast<std::size_t>(r)]; }
std::optional<Region> parse_region(std::string_view name) {
  return lookup<Region>(kRegionNames, name);
}

std::string_view group_name(FoodGroup g) { return kGroupNames[static_cast<std::size_t>(g)]; }
std::optional<FoodGroup> parse_group(std::string_view name) {
  return lookup<FoodGroup>(kGroupNames, name);
}

}  // namespace b12scope

#pragma once

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace b12scope {

// The twelve tracked foods. The enumerator order is the canonical order of every
// 12-vector in the project (coefficients, nutrient values, counts).
enum class FoodItem : std::uint8_t {
  Shellfish,
  Mackerel,
  Trout,
  Salmon,
  Tuna,
  Pork,
  Beef,
  Turkey,
  Chicken,
  Egg,
  Milk,
  Tomatoes,
};

inline constexpr std::size_t kFoodCount = 12;

inline constexpr std::array<FoodItem, kFoodCount> kFoodOrder = {
    FoodItem::Shellfish, FoodItem::Mackerel, FoodItem::Trout, FoodItem::Salmon,
    FoodItem::Tuna,      FoodItem::Pork,     FoodItem::Beef,  FoodItem::Turkey,
    FoodItem::Chicken,   FoodItem::Egg,      FoodItem::Milk,  FoodItem::Tomatoes,
};

constexpr std::size_t index_of(FoodItem f) { return static_cast<std::size_t>(f); }

std::string_view food_name(FoodItem f);
// Case-insensitive; accepts the canonical names only (synonyms live in SynonymTable).
std::optional<FoodItem> parse_food(std::string_view name);

using FoodVector = std::array<double, kFoodCount>;
using FoodCounts = std::array<std::int64_t, kFoodCount>;

// Small bit set over the twelve foods.
class FoodSet {
 public:
  constexpr FoodSet() = default;

  constexpr void insert(FoodItem f) { bits_ |= bit(f); }
  constexpr bool contains(FoodItem f) const { return (bits_ & bit(f)) != 0; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  constexpr std::uint16_t bits() const { return bits_; }

  static constexpr FoodSet from_bits(std::uint16_t bits) {
    FoodSet s;
    s.bits_ = static_cast<std::uint16_t>(bits & 0x0FFF);
    return s;
  }

  constexpr bool operator==(const FoodSet&) const = default;

 private:
  static constexpr std::uint16_t bit(FoodItem f) {
    return static_cast<std::uint16_t>(1u << index_of(f));
  }
  std::uint16_t bits_ = 0;
};

enum class Region : std::uint8_t { Northeast, Midwest, South, West, Unknown };

inline constexpr std::size_t kRegionCount = 4;
inline constexpr std::array<Region, kRegionCount> kRegions = {
    Region::Northeast, Region::Midwest, Region::South, Region::West};

std::string_view region_name(Region r);
std::optional<Region> parse_region(std::string_view name);

// Coarse grouping used by the expenditure, cost and consumption tables.
enum class FoodGroup : std::uint8_t { Beef, Pork, Poultry, FishSeafood, Eggs, Milk };

inline constexpr std::size_t kGroupCount = 6;
inline constexpr std::array<FoodGroup, kGroupCount> kGroups = {
    FoodGroup::Beef, FoodGroup::Pork, FoodGroup::Poultry,
    FoodGroup::FishSeafood, FoodGroup::Eggs, FoodGroup::Milk};

std::string_view group_name(FoodGroup g);
std::optional<FoodGroup> parse_group(std::string_view name);

using RegionGroupMatrix = std::array<std::array<double, kGroupCount>, kRegionCount>;

}  // namespace b12scope

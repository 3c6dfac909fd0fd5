#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "b12scope/types.hpp"

namespace b12scope {

struct QueryRecord {
  std::string user_id;
  std::string text;
  std::optional<std::string> zip;  // exactly five ASCII digits when present
  std::int64_t timestamp = 0;

  bool operator==(const QueryRecord&) const = default;
};

enum class LogFormat : std::uint8_t { Tsv, Jsonl };

std::string_view log_format_name(LogFormat f);
std::optional<LogFormat> parse_log_format(std::string_view s);

struct ParseStats {
  std::size_t total_lines = 0;  // non-blank lines read
  std::size_t emitted = 0;
  std::size_t malformed = 0;
  std::size_t invalid_zip = 0;  // zip present but not 5 digits; record kept, zip dropped

  ParseStats& operator+=(const ParseStats& o);
};

bool is_valid_zip(std::string_view zip);

// Parses one log line. Returns nullopt for a malformed line. A record with an
// invalid zip is still returned, with `zip` cleared and `*invalid_zip` set.
std::optional<QueryRecord> parse_log_line(std::string_view line, LogFormat format,
                                          bool* invalid_zip = nullptr);

std::string serialize_record(const QueryRecord& record, LogFormat format);

// Pull-based reader over one stream. Call finish() after the last record; it
// raises FormatError when more than half of the lines were malformed.
class LogReader {
 public:
  LogReader(std::istream& in, LogFormat format);

  bool next(QueryRecord& out);
  void finish() const;
  const ParseStats& stats() const { return stats_; }

 private:
  std::istream& in_;
  LogFormat format_;
  ParseStats stats_;
  std::string line_;
};

std::vector<QueryRecord> parse_log_stream(std::istream& in, LogFormat format,
                                          ParseStats* stats = nullptr);
std::vector<QueryRecord> read_log_file(const std::filesystem::path& path, LogFormat format,
                                       ParseStats* stats = nullptr);

// Three-digit zip prefix -> census region.
class ZipRegionTable {
 public:
  ZipRegionTable();

  void set(int prefix, Region region);
  Region region_of(std::string_view zip) const;
  Region region_of(const std::optional<std::string>& zip) const {
    return zip ? region_of(std::string_view(*zip)) : Region::Unknown;
  }
  // Mapped prefixes of a region, ascending.
  const std::vector<int>& prefixes(Region region) const;

 private:
  std::array<Region, 1000> table_{};
  std::array<std::vector<int>, kRegionCount> by_region_;
};

ZipRegionTable load_zip_regions(const std::filesystem::path& path);

}  // namespace b12scope

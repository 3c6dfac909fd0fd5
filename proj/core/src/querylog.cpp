#include "b12scope/querylog.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "b12scope/csv.hpp"
#include "b12scope/error.hpp"
#include "b12scope/text.hpp"

namespace b12scope {

std::string_view log_format_name(LogFormat f) { return f == LogFormat::Tsv ? "tsv" : "jsonl"; }

std::optional<LogFormat> parse_log_format(std::string_view s) {
  if (s == "tsv") return LogFormat::Tsv;
  if (s == "jsonl") return LogFormat::Jsonl;
  return std::nullopt;
}

ParseStats& ParseStats::operator+=(const ParseStats& o) {
  total_lines += o.total_lines;
  emitted += o.emitted;
  malformed += o.malformed;
  invalid_zip += o.invalid_zip;
  return *this;
}

bool is_valid_zip(std::string_view zip) {
  return zip.size() == 5 &&
         std::all_of(zip.begin(), zip.end(), [](char c) { return c >= '0' && c <= '9'; });
}

namespace {

bool parse_int64(std::string_view s, std::int64_t& out) {
  s = trim(s);
  if (s.empty()) return false;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

std::optional<QueryRecord> finish_record(QueryRecord rec, std::string_view zip, bool* invalid_zip) {
  if (rec.user_id.empty() || trim(rec.text).empty()) return std::nullopt;
  if (!is_valid_utf8(rec.text) || !is_valid_utf8(rec.user_id)) return std::nullopt;
  zip = trim(zip);
  if (!zip.empty()) {
    if (is_valid_zip(zip)) {
      rec.zip = std::string(zip);
    } else if (invalid_zip) {
      *invalid_zip = true;
    }
  }
  return rec;
}

}  // namespace

std::optional<QueryRecord> parse_log_line(std::string_view line, LogFormat format,
                                          bool* invalid_zip) {
  if (invalid_zip) *invalid_zip = false;
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  if (trim(line).empty()) return std::nullopt;

  if (format == LogFormat::Tsv) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      const auto tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab == std::string_view::npos ? tab : tab - start));
      if (tab == std::string_view::npos) break;
      start = tab + 1;
    }
    if (fields.size() != 4) return std::nullopt;
    QueryRecord rec;
    rec.user_id = std::string(trim(fields[0]));
    rec.text = std::string(fields[1]);
    if (!parse_int64(fields[3], rec.timestamp)) return std::nullopt;
    return finish_record(std::move(rec), fields[2], invalid_zip);
  }

  nlohmann::json j = nlohmann::json::parse(line.begin(), line.end(), nullptr, false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  auto user = j.find("user");
  auto query = j.find("query");
  auto ts = j.find("ts");
  if (user == j.end() || !user->is_string()) return std::nullopt;
  if (query == j.end() || !query->is_string()) return std::nullopt;
  if (ts == j.end() || !ts->is_number_integer()) return std::nullopt;
  QueryRecord rec;
  rec.user_id = std::string(trim(user->get_ref<const std::string&>()));
  rec.text = query->get<std::string>();
  rec.timestamp = ts->get<std::int64_t>();
  std::string zip;
  if (auto z = j.find("zip"); z != j.end()) {
    if (z->is_string()) {
      zip = z->get<std::string>();
    } else if (!z->is_null()) {
      if (invalid_zip) *invalid_zip = true;
    }
  }
  return finish_record(std::move(rec), zip, invalid_zip);
}

std::string serialize_record(const QueryRecord& r, LogFormat format) {
  if (format == LogFormat::Tsv) {
    return fmt::format("{}\t{}\t{}\t{}", r.user_id, r.text, r.zip.value_or(""), r.timestamp);
  }
  nlohmann::ordered_json j;
  j["user"] = r.user_id;
  j["query"] = r.text;
  j["zip"] = r.zip ? nlohmann::ordered_json(*r.zip) : nlohmann::ordered_json(nullptr);
  j["ts"] = r.timestamp;
  return j.dump();
}

LogReader::LogReader(std::istream& in, LogFormat format) : in_(in), format_(format) {}

bool LogReader::next(QueryRecord& out) {
  while (std::getline(in_, line_)) {
    if (line_.empty() || line_ == "\r") continue;
    ++stats_.total_lines;
    bool bad_zip = false;
    auto rec = parse_log_line(line_, format_, &bad_zip);
    if (!rec) {
      ++stats_.malformed;
      continue;
    }
    if (bad_zip) ++stats_.invalid_zip;
    ++stats_.emitted;
    out = std::move(*rec);
    return true;
  }
  if (in_.bad()) throw IoError("read error on log stream");
  return false;
}

void LogReader::finish() const {
  if (stats_.total_lines > 0 && 2 * stats_.malformed > stats_.total_lines) {
    throw FormatError(fmt::format(
        "{} of {} lines malformed; is the log format really {}?", stats_.malformed,
        stats_.total_lines, log_format_name(format_)));
  }
}

std::vector<QueryRecord> parse_log_stream(std::istream& in, LogFormat format, ParseStats* stats) {
  LogReader reader(in, format);
  std::vector<QueryRecord> out;
  QueryRecord rec;
  while (reader.next(rec)) out.push_back(rec);
  if (stats) *stats = reader.stats();
  reader.finish();
  return out;
}

std::vector<QueryRecord> read_log_file(const std::filesystem::path& path, LogFormat format,
                                       ParseStats* stats) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open {}", path.string()));
  try {
    return parse_log_stream(in, format, stats);
  } catch (const FormatError& e) {
    throw FormatError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

ZipRegionTable::ZipRegionTable() { table_.fill(Region::Unknown); }

void ZipRegionTable::set(int prefix, Region region) {
  if (prefix < 0 || prefix > 999) throw DataError(fmt::format("zip prefix {} out of range", prefix));
  const Region old = table_[static_cast<std::size_t>(prefix)];
  if (old != Region::Unknown) {
    auto& v = by_region_[static_cast<std::size_t>(old)];
    v.erase(std::remove(v.begin(), v.end(), prefix), v.end());
  }
  table_[static_cast<std::size_t>(prefix)] = region;
  if (region != Region::Unknown) {
    auto& v = by_region_[static_cast<std::size_t>(region)];
    v.insert(std::upper_bound(v.begin(), v.end(), prefix), prefix);
  }
}

Region ZipRegionTable::region_of(std::string_view zip) const {
  if (!is_valid_zip(zip)) return Region::Unknown;
  const int prefix = (zip[0] - '0') * 100 + (zip[1] - '0') * 10 + (zip[2] - '0');
  return table_[static_cast<std::size_t>(prefix)];
}

const std::vector<int>& ZipRegionTable::prefixes(Region region) const {
  static const std::vector<int> kNone;
  if (region == Region::Unknown) return kNone;
  return by_region_[static_cast<std::size_t>(region)];
}

ZipRegionTable load_zip_regions(const std::filesystem::path& path) {
  const auto table = read_csv_file(path);
  const auto src = path.string();
  const auto pcol = table.require_column("prefix", src);
  const auto rcol = table.require_column("region", src);
  ZipRegionTable zips;
  for (const auto& row : table.rows) {
    const auto& p = row[pcol];
    if (p.size() != 3 || !std::all_of(p.begin(), p.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      throw DataError(fmt::format("{}: bad zip prefix '{}'", src, p));
    }
    const auto region = parse_region(row[rcol]);
    if (!region) throw DataError(fmt::format("{}: unknown region '{}'", src, row[rcol]));
    zips.set(std::stoi(p), *region);
  }
  return zips;
}

}  // namespace b12scope

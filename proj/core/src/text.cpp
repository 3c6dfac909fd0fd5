#include "b12scope/text.hpp"

#include <array>
#include <cstdint>

namespace b12scope {

namespace {

// U+00C0..U+00FF folded to lowercase ASCII; empty means separator.
constexpr std::array<const char*, 64> kLatin1Fold = {
    "a", "a", "a", "a", "a", "a", "ae", "c", "e", "e", "e", "e", "i", "i", "i", "i",
    "d", "n", "o", "o", "o", "o", "o", "",  "o", "u", "u", "u", "u", "y", "th", "ss",
    "a", "a", "a", "a", "a", "a", "ae", "c", "e", "e", "e", "e", "i", "i", "i", "i",
    "d", "n", "o", "o", "o", "o", "o", "",  "o", "u", "u", "u", "u", "y", "th", "y"};

// Decodes one code point; returns false on malformed input (cp untouched).
bool decode(std::string_view s, std::size_t& i, std::uint32_t& cp) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) {
    cp = b0;
    ++i;
    return true;
  }
  std::size_t len = 0;
  std::uint32_t min = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
    min = 0x80;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
    min = 0x800;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
    min = 0x10000;
  } else {
    return false;
  }
  if (i + len > s.size()) return false;
  for (std::size_t k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) return false;
    cp = (cp << 6) | (b & 0x3F);
  }
  if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return false;
  i += len;
  return true;
}

bool is_apostrophe(std::uint32_t cp) { return cp == '\'' || cp == 0x2019 || cp == 0x2018; }

}  // namespace

bool is_valid_utf8(std::string_view bytes) {
  std::size_t i = 0;
  std::uint32_t cp = 0;
  while (i < bytes.size()) {
    if (!decode(bytes, i, cp)) return false;
  }
  return true;
}

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n\f\v";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string> normalize_query(std::string_view text) {
  std::vector<std::string> tokens;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) {
      tokens.push_back(std::move(cur));
      cur.clear();
    }
  };
  std::size_t i = 0;
  while (i < text.size()) {
    std::uint32_t cp = 0;
    if (!decode(text, i, cp)) {
      ++i;  // stray byte acts as a separator
      flush();
      continue;
    }
    if (cp < 0x80) {
      const char c = static_cast<char>(cp);
      if (c >= 'A' && c <= 'Z') {
        cur.push_back(static_cast<char>(c - 'A' + 'a'));
      } else if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) {
        cur.push_back(c);
      } else if (!is_apostrophe(cp)) {
        flush();
      }
    } else if (cp >= 0xC0 && cp <= 0xFF) {
      const char* folded = kLatin1Fold[cp - 0xC0];
      if (*folded == '\0') {
        flush();
      } else {
        cur += folded;
      }
    } else if (!is_apostrophe(cp)) {
      flush();
    }
  }
  flush();

  std::vector<std::string> merged;
  merged.reserve(tokens.size());
  for (std::size_t k = 0; k < tokens.size(); ++k) {
    if (tokens[k] == "b" && k + 1 < tokens.size() && tokens[k + 1] == "12") {
      merged.emplace_back("b12");
      ++k;
    } else {
      merged.push_back(std::move(tokens[k]));
    }
  }
  return merged;
}

std::string join_tokens(const std::vector<std::string>& tokens, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += sep;
    out += tokens[i];
  }
  return out;
}

std::string normalize_phrase(std::string_view text) { return join_tokens(normalize_query(text)); }

}  // namespace b12scope

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace b12scope {

// Lowercases, folds Latin-1 accents to ASCII, deletes apostrophes, splits on every
// other non-alphanumeric character, then joins a lone "b" followed by "12" into
// "b12" so "B-12", "b 12" and "B12" agree.
std::vector<std::string> normalize_query(std::string_view text);

// normalize_query joined by single spaces.
std::string normalize_phrase(std::string_view text);

std::string join_tokens(const std::vector<std::string>& tokens, std::string_view sep = " ");

// True when `bytes` is well-formed UTF-8 (no overlongs, no surrogates).
bool is_valid_utf8(std::string_view bytes);

std::string_view trim(std::string_view s);

}  // namespace b12scope

#pragma once

#include <string>
#include <string_view>

namespace subseg::text {

/// Lowercases UTF-8 text. Covers ASCII, Latin-1, Latin Extended-A, Greek and
/// Cyrillic; other code points pass through unchanged.
std::string to_lower(std::string_view utf8);

/// Decodes one code point starting at `pos` and advances `pos`. Invalid
/// sequences decode as U+FFFD consuming one byte.
char32_t next_code_point(std::string_view utf8, std::size_t& pos);

void append_utf8(std::string& out, char32_t cp);

bool is_space(char32_t cp);

/// Punctuation or symbol characters that are stripped from token surfaces.
bool is_punctuation(char32_t cp);

bool is_apostrophe(char32_t cp);

}  // namespace subseg::text

#pragma once

#include <string>
#include <string_view>
#include <vector>

// UTF-8 helpers backed by ICU character properties.
namespace causal::text {

/// True for code points in the Unicode general categories P* (Pc, Pd, Ps, Pe, Pi, Pf, Po).
bool is_punctuation(char32_t cp);

/// Unicode White_Space property.
bool is_space(char32_t cp);

/// Decodes UTF-8; ill-formed sequences become U+FFFD.
std::u32string decode(std::string_view utf8);
std::string encode(std::u32string_view cps);

/// Simple (one-to-one) Unicode lowercase mapping applied per code point.
std::string to_lower(std::string_view utf8);

bool has_upper(std::string_view utf8);
bool has_digit(std::string_view utf8);

/// Removes every punctuation code point.
std::string strip_punctuation(std::string_view utf8);

/// Splits on runs of Unicode whitespace; never yields empty tokens.
std::vector<std::string> split_whitespace(std::string_view utf8);

/// First `n` (or last `n`) code points; the whole string when shorter.
std::string prefix(std::string_view utf8, std::size_t n);
std::string suffix(std::string_view utf8, std::size_t n);

bool starts_with_icase_ascii(std::string_view s, std::string_view prefix);

}  // namespace causal::text

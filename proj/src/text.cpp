#include "causal/text.hpp"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

namespace causal::text {

bool is_punctuation(char32_t cp) { return u_ispunct(static_cast<UChar32>(cp)) != 0; }

bool is_space(char32_t cp) { return u_isUWhiteSpace(static_cast<UChar32>(cp)) != 0; }

std::u32string decode(std::string_view utf8) {
  std::u32string out;
  out.reserve(utf8.size());
  const auto* s = reinterpret_cast<const std::uint8_t*>(utf8.data());
  const auto length = static_cast<std::int32_t>(utf8.size());
  std::int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(s, i, length, c);
    out.push_back(c < 0 ? U'\uFFFD' : static_cast<char32_t>(c));
  }
  return out;
}

std::string encode(std::u32string_view cps) {
  std::string out;
  out.reserve(cps.size());
  for (char32_t cp : cps) {
    std::uint8_t buf[U8_MAX_LENGTH];
    std::int32_t n = 0;
    UBool error = false;
    U8_APPEND(buf, n, U8_MAX_LENGTH, static_cast<UChar32>(cp), error);
    if (error) {
      out += "\xEF\xBF\xBD";
    } else {
      out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(n));
    }
  }
  return out;
}

std::string to_lower(std::string_view utf8) {
  bool ascii = true;
  for (unsigned char c : utf8) {
    if (c >= 0x80) {
      ascii = false;
      break;
    }
  }
  if (ascii) {
    std::string out(utf8);
    for (char& c : out) {
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
  }
  std::u32string cps = decode(utf8);
  for (char32_t& cp : cps) cp = static_cast<char32_t>(u_tolower(static_cast<UChar32>(cp)));
  return encode(cps);
}

bool has_upper(std::string_view utf8) {
  for (char32_t cp : decode(utf8)) {
    if (u_isupper(static_cast<UChar32>(cp))) return true;
  }
  return false;
}

bool has_digit(std::string_view utf8) {
  for (char32_t cp : decode(utf8)) {
    if (u_isdigit(static_cast<UChar32>(cp))) return true;
  }
  return false;
}

std::string strip_punctuation(std::string_view utf8) {
  std::u32string cps = decode(utf8);
  std::erase_if(cps, [](char32_t cp) { return is_punctuation(cp); });
  return encode(cps);
}

std::vector<std::string> split_whitespace(std::string_view utf8) {
  std::vector<std::string> tokens;
  std::u32string cps = decode(utf8);
  std::u32string current;
  for (char32_t cp : cps) {
    if (is_space(cp)) {
      if (!current.empty()) {
        tokens.push_back(encode(current));
        current.clear();
      }
    } else {
      current.push_back(cp);
    }
  }
  if (!current.empty()) tokens.push_back(encode(current));
  return tokens;
}

std::string prefix(std::string_view utf8, std::size_t n) {
  std::u32string cps = decode(utf8);
  if (cps.size() > n) cps.resize(n);
  return encode(cps);
}

std::string suffix(std::string_view utf8, std::size_t n) {
  std::u32string cps = decode(utf8);
  if (cps.size() > n) cps.erase(0, cps.size() - n);
  return encode(cps);
}

bool starts_with_icase_ascii(std::string_view s, std::string_view prefix) {
  if (s.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    char a = s[i];
    if (a >= 'A' && a <= 'Z') a = static_cast<char>(a - 'A' + 'a');
    if (a != prefix[i]) return false;
  }
  return true;
}

}  // namespace causal::text

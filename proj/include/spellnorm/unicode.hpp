#pragma once

#include <string>
#include <string_view>

#include <unicode/uchar.h>
#include <unicode/unorm2.h>
#include <unicode/ustring.h>

#include "spellnorm/error.hpp"

// Thin wrapper around ICU plus a strict UTF-8 codec. All library-internal
// string processing happens on code points (std::u32string); UTF-8 appears
// only at the I/O boundary.

namespace spellnorm::uni {

inline bool is_valid_utf8(std::string_view bytes) {
  std::size_t i = 0;
  const auto n = bytes.size();
  while (i < n) {
    const unsigned char b = static_cast<unsigned char>(bytes[i]);
    std::size_t len;
    char32_t cp;
    if (b < 0x80) {
      len = 1;
      cp = b;
    } else if ((b & 0xE0) == 0xC0) {
      len = 2;
      cp = b & 0x1F;
    } else if ((b & 0xF0) == 0xE0) {
      len = 3;
      cp = b & 0x0F;
    } else if ((b & 0xF8) == 0xF0) {
      len = 4;
      cp = b & 0x07;
    } else {
      return false;
    }
    if (i + len > n) return false;
    for (std::size_t k = 1; k < len; ++k) {
      const unsigned char c = static_cast<unsigned char>(bytes[i + k]);
      if ((c & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (c & 0x3F);
    }
    // Reject overlong forms, surrogates and out-of-range values.
    static constexpr char32_t kMin[5] = {0, 0, 0x80, 0x800, 0x10000};
    if (cp < kMin[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF))
      return false;
    i += len;
  }
  return true;
}

inline std::u32string decode_utf8(std::string_view bytes) {
  if (!is_valid_utf8(bytes)) throw ParseError("invalid UTF-8 input");
  std::u32string out;
  out.reserve(bytes.size());
  std::size_t i = 0;
  while (i < bytes.size()) {
    const unsigned char b = static_cast<unsigned char>(bytes[i]);
    std::size_t len = b < 0x80 ? 1 : (b & 0xE0) == 0xC0 ? 2 : (b & 0xF0) == 0xE0 ? 3 : 4;
    char32_t cp = len == 1 ? b : b & (0x7F >> len);
    for (std::size_t k = 1; k < len; ++k)
      cp = (cp << 6) | (static_cast<unsigned char>(bytes[i + k]) & 0x3F);
    out.push_back(cp);
    i += len;
  }
  return out;
}

inline std::string encode_utf8(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t cp : text) {
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
  }
  return out;
}

namespace detail {

inline std::u16string to_utf16(std::u32string_view text) {
  std::u16string out;
  out.reserve(text.size());
  for (char32_t cp : text) {
    if (cp < 0x10000) {
      out.push_back(static_cast<char16_t>(cp));
    } else {
      cp -= 0x10000;
      out.push_back(static_cast<char16_t>(0xD800 + (cp >> 10)));
      out.push_back(static_cast<char16_t>(0xDC00 + (cp & 0x3FF)));
    }
  }
  return out;
}

inline std::u32string from_utf16(std::u16string_view text) {
  std::u32string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char16_t u = text[i];
    if (u >= 0xD800 && u <= 0xDBFF && i + 1 < text.size()) {
      const char16_t lo = text[i + 1];
      out.push_back(0x10000 + ((char32_t(u) - 0xD800) << 10) + (char32_t(lo) - 0xDC00));
      ++i;
    } else {
      out.push_back(u);
    }
  }
  return out;
}

inline const UNormalizer2* normalizer(bool composed) {
  UErrorCode status = U_ZERO_ERROR;
  const UNormalizer2* n =
      composed ? unorm2_getNFCInstance(&status) : unorm2_getNFDInstance(&status);
  if (U_FAILURE(status)) throw Error("ICU normalizer unavailable");
  return n;
}

inline std::u32string normalize(std::u32string_view text, bool composed) {
  const std::u16string in = to_utf16(text);
  const UNormalizer2* n = normalizer(composed);
  UErrorCode status = U_ZERO_ERROR;
  const int32_t needed =
      unorm2_normalize(n, in.data(), static_cast<int32_t>(in.size()), nullptr, 0, &status);
  if (status != U_BUFFER_OVERFLOW_ERROR && U_FAILURE(status))
    throw Error("unicode normalization failed");
  std::u16string out(static_cast<std::size_t>(needed), u'\0');
  status = U_ZERO_ERROR;
  unorm2_normalize(n, in.data(), static_cast<int32_t>(in.size()), out.data(), needed, &status);
  if (U_FAILURE(status)) throw Error("unicode normalization failed");
  return from_utf16(out);
}

}  // namespace detail

// Canonical composed form (NFC).
inline std::u32string nfc(std::u32string_view text) { return detail::normalize(text, true); }

// Canonical decomposed form (NFD).
inline std::u32string nfd(std::u32string_view text) { return detail::normalize(text, false); }

// Full Unicode lowercase in the root locale.
inline std::u32string to_lower(std::u32string_view text) {
  const std::u16string in = detail::to_utf16(text);
  UErrorCode status = U_ZERO_ERROR;
  const int32_t needed = u_strToLower(nullptr, 0, in.data(), static_cast<int32_t>(in.size()),
                                      "", &status);
  if (status != U_BUFFER_OVERFLOW_ERROR && U_FAILURE(status))
    throw Error("unicode lowercasing failed");
  std::u16string out(static_cast<std::size_t>(needed), u'\0');
  status = U_ZERO_ERROR;
  u_strToLower(out.data(), needed, in.data(), static_cast<int32_t>(in.size()), "", &status);
  if (U_FAILURE(status)) throw Error("unicode lowercasing failed");
  return detail::from_utf16(out);
}

inline bool is_punctuation(char32_t cp) {
  switch (u_charType(static_cast<UChar32>(cp))) {
    case U_DASH_PUNCTUATION:
    case U_START_PUNCTUATION:
    case U_END_PUNCTUATION:
    case U_CONNECTOR_PUNCTUATION:
    case U_OTHER_PUNCTUATION:
    case U_INITIAL_PUNCTUATION:
    case U_FINAL_PUNCTUATION:
      return true;
    default:
      return false;
  }
}

inline bool is_digit(char32_t cp) {
  return u_charType(static_cast<UChar32>(cp)) == U_DECIMAL_DIGIT_NUMBER;
}

inline bool is_space_separator(char32_t cp) {
  return u_charType(static_cast<UChar32>(cp)) == U_SPACE_SEPARATOR;
}

inline bool is_combining_mark(char32_t cp) {
  switch (u_charType(static_cast<UChar32>(cp))) {
    case U_NON_SPACING_MARK:
    case U_COMBINING_SPACING_MARK:
    case U_ENCLOSING_MARK:
      return true;
    default:
      return false;
  }
}

// NFD followed by removal of combining marks, recomposed. Maps e.g.
// "ésta" -> "esta"; used by the suffix-table stemmers.
inline std::u32string fold_diacritics(std::u32string_view text) {
  const std::u32string decomposed = nfd(text);
  std::u32string stripped;
  stripped.reserve(decomposed.size());
  for (char32_t cp : decomposed)
    if (!is_combining_mark(cp)) stripped.push_back(cp);
  return nfc(stripped);
}

}  // namespace spellnorm::uni

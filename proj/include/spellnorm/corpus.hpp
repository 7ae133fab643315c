#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spellnorm/error.hpp"
#include "spellnorm/io.hpp"
#include "spellnorm/unicode.hpp"

// Ingestion and preprocessing of token-pair datasets and contemporary
// lexica. All text leaving this module is lowercase, NFC-composed, and free
// of raw space characters.

namespace spellnorm {

// Placeholder for internal spaces; the loader rejects input that already
// contains it.
inline constexpr char32_t kJoinSymbol = U'▁';

struct TokenPair {
  std::string source;  // historical form
  std::string target;  // gold contemporary form

  bool operator==(const TokenPair&) const = default;
};

enum class Split { train, dev, test };

inline std::string to_string(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::dev: return "dev";
    default: return "test";
  }
}

struct Dataset {
  std::string name;
  std::vector<TokenPair> pairs;
  Split split = Split::train;
  std::size_t dropped = 0;  // lines removed by preprocessing
};

struct Lexicon {
  std::map<std::string, std::uint64_t> entries;

  bool contains(const std::string& word) const { return entries.count(word) != 0; }

  std::uint64_t frequency(const std::string& word) const {
    const auto it = entries.find(word);
    return it == entries.end() ? 0 : it->second;
  }

  void add(const std::string& word, std::uint64_t count = 1) { entries[word] += count; }

  void merge(const Lexicon& other) {
    for (const auto& [word, count] : other.entries) entries[word] += count;
  }

  bool empty() const { return entries.empty(); }
  std::size_t size() const { return entries.size(); }
};

namespace detail {

inline bool all_punctuation(const std::u32string& text) {
  if (text.empty()) return false;
  for (char32_t cp : text)
    if (!uni::is_punctuation(cp)) return false;
  return true;
}

inline std::u32string digit_sequence(const std::u32string& text) {
  std::u32string digits;
  for (char32_t cp : text)
    if (uni::is_digit(cp)) digits.push_back(cp);
  return digits;
}

inline void zero_digits(std::u32string& text) {
  for (char32_t& cp : text)
    if (uni::is_digit(cp)) cp = U'0';
}

// Trims space separators at the edges and joins internal ones.
inline std::u32string join_spaces(const std::u32string& text) {
  std::size_t begin = 0, end = text.size();
  while (begin < end && uni::is_space_separator(text[begin])) ++begin;
  while (end > begin && uni::is_space_separator(text[end - 1])) --end;
  std::u32string out;
  out.reserve(end - begin);
  bool in_gap = false;
  for (std::size_t i = begin; i < end; ++i) {
    if (uni::is_space_separator(text[i])) {
      in_gap = true;
      continue;
    }
    if (in_gap) {
      out.push_back(kJoinSymbol);
      in_gap = false;
    }
    out.push_back(text[i]);
  }
  return out;
}

// UTF-8 encoding of kJoinSymbol; raw input must not contain it.
inline constexpr std::string_view kJoinSymbolUtf8 = "\xE2\x96\x81";

inline bool contains_join_symbol(std::string_view raw) {
  return raw.find(kJoinSymbolUtf8) != std::string_view::npos;
}

}  // namespace detail

// Preprocesses one aligned pair. Returns std::nullopt when the pair is
// filtered out (empty or punctuation-only on either side). Steps, in order:
// lowercase; drop empties; drop punctuation-only; zero digits iff both
// sides carry the same digit sequence; replace internal spaces with the
// join symbol; NFC.
inline std::optional<TokenPair> preprocess_pair(std::string_view raw_source,
                                                std::string_view raw_target) {
  std::u32string src = uni::decode_utf8(raw_source);
  std::u32string tgt = uni::decode_utf8(raw_target);

  src = uni::to_lower(src);
  tgt = uni::to_lower(tgt);

  if (src.empty() || tgt.empty()) return std::nullopt;
  if (detail::all_punctuation(src) || detail::all_punctuation(tgt)) return std::nullopt;

  if (!detail::digit_sequence(src).empty() &&
      detail::digit_sequence(src) == detail::digit_sequence(tgt)) {
    detail::zero_digits(src);
    detail::zero_digits(tgt);
  }

  src = detail::join_spaces(src);
  tgt = detail::join_spaces(tgt);
  // trimming spaces can leave a field empty or punctuation-only
  if (src.empty() || tgt.empty()) return std::nullopt;
  if (detail::all_punctuation(src) || detail::all_punctuation(tgt)) return std::nullopt;

  return TokenPair{uni::encode_utf8(uni::nfc(src)), uni::encode_utf8(uni::nfc(tgt))};
}

// Single-token variant used for lexicon entries and external predictions:
// no pairing is possible, so digits are always zeroed. Leading/trailing
// punctuation is stripped first (corpus tokens arrive whitespace-split).
inline std::optional<std::string> preprocess_token(std::string_view raw) {
  std::u32string text = uni::decode_utf8(raw);
  std::size_t begin = 0, end = text.size();
  while (begin < end && uni::is_punctuation(text[begin])) ++begin;
  while (end > begin && uni::is_punctuation(text[end - 1])) --end;
  text = text.substr(begin, end - begin);

  text = uni::to_lower(text);
  if (text.empty() || detail::all_punctuation(text)) return std::nullopt;
  detail::zero_digits(text);
  text = detail::join_spaces(text);
  if (text.empty() || detail::all_punctuation(text)) return std::nullopt;
  return uni::encode_utf8(uni::nfc(text));
}

// Canonicalizes an already-tokenized prediction for scoring: lowercase,
// spaces joined, NFC. No filtering, no digit rewriting.
inline std::string canonicalize_prediction(std::string_view raw) {
  std::u32string text = uni::to_lower(uni::decode_utf8(raw));
  text = detail::join_spaces(text);
  return uni::encode_utf8(uni::nfc(text));
}

// Loads a two-column TAB-separated UTF-8 file. Dropped pairs are counted,
// not fatal; structural problems (bad UTF-8, wrong column count) throw.
// `verify_join_symbol` is set when ingesting raw data: preprocessed files
// legitimately contain the join symbol where spaces used to be.
inline Dataset load_dataset_text(std::string_view text, Split split, std::string name,
                                 bool verify_join_symbol = false) {
  Dataset ds;
  ds.name = std::move(name);
  ds.split = split;
  const auto lines = io::split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty()) continue;
    if (!uni::is_valid_utf8(line))
      throw ParseError("line " + std::to_string(i + 1) + ": invalid UTF-8");
    if (verify_join_symbol && detail::contains_join_symbol(line))
      throw ParseError("line " + std::to_string(i + 1) + ": input already contains the "
                       "reserved join symbol U+2581");
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos)
      throw ParseError("line " + std::to_string(i + 1) + ": expected exactly two "
                       "TAB-separated columns");
    auto pair = preprocess_pair(std::string_view(line).substr(0, tab),
                                std::string_view(line).substr(tab + 1));
    if (pair)
      ds.pairs.push_back(std::move(*pair));
    else
      ++ds.dropped;
  }
  return ds;
}

inline Dataset load_dataset(const std::string& path, Split split, std::string name = {},
                            bool verify_join_symbol = false) {
  if (name.empty()) name = path;
  try {
    return load_dataset_text(io::read_file(path), split, std::move(name), verify_join_symbol);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

inline std::string format_dataset(const Dataset& ds) {
  std::string out;
  for (const TokenPair& p : ds.pairs) {
    out += p.source;
    out += '\t';
    out += p.target;
    out += '\n';
  }
  return out;
}

// Builds a lexicon from running-text corpora (whitespace tokenized,
// frequencies accumulated) and one-type-per-line wordlists (frequency 1
// when unseen).
inline Lexicon build_lexicon(const std::vector<std::string>& corpus_paths,
                             const std::vector<std::string>& wordlist_paths) {
  if (corpus_paths.empty() && wordlist_paths.empty())
    throw ConfigError("lexicon construction needs at least one corpus or wordlist");
  Lexicon lex;
  for (const auto& path : corpus_paths) {
    const std::string text = io::read_file(path);
    if (!uni::is_valid_utf8(text)) throw ParseError(path + ": invalid UTF-8");
    if (detail::contains_join_symbol(text))
      throw ParseError(path + ": input already contains the reserved join symbol U+2581");
    std::size_t i = 0;
    while (i < text.size()) {
      while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
      std::size_t start = i;
      while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
      if (i > start) {
        if (auto tok = preprocess_token(std::string_view(text).substr(start, i - start)))
          lex.add(*tok);
      }
    }
  }
  for (const auto& path : wordlist_paths) {
    const std::string text = io::read_file(path);
    if (!uni::is_valid_utf8(text)) throw ParseError(path + ": invalid UTF-8");
    if (detail::contains_join_symbol(text))
      throw ParseError(path + ": input already contains the reserved join symbol U+2581");
    for (const std::string& line : io::split_lines(text)) {
      if (line.empty()) continue;
      if (auto tok = preprocess_token(line)) {
        if (!lex.contains(*tok)) lex.add(*tok);
      }
    }
  }
  return lex;
}

inline std::string format_lexicon(const Lexicon& lex) {
  std::string out;
  for (const auto& [word, freq] : lex.entries) {
    out += word;
    out += '\t';
    out += std::to_string(freq);
    out += '\n';
  }
  return out;
}

inline Lexicon parse_lexicon(std::string_view text) {
  Lexicon lex;
  const auto lines = io::split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const std::size_t tab = lines[i].find('\t');
    if (tab == std::string::npos)
      throw ParseError("lexicon line " + std::to_string(i + 1) + ": expected "
                       "type<TAB>frequency");
    lex.add(lines[i].substr(0, tab),
            static_cast<std::uint64_t>(std::stoull(lines[i].substr(tab + 1))));
  }
  return lex;
}

inline Lexicon load_lexicon(const std::string& path) {
  return parse_lexicon(io::read_file(path));
}

}  // namespace spellnorm

#pragma once

#include <algorithm>
#include <string>
#include <string_view>
#include <vector>

#include "spellnorm/error.hpp"
#include "spellnorm/io.hpp"
#include "spellnorm/unicode.hpp"

// Stemmers for the stem-match evaluation. English gets a full Porter
// implementation (reference-implementation semantics, including the bli/logi
// departures); German, Spanish, Hungarian, Portuguese and Swedish use coarse
// suffix-strip tables applied after diacritic folding. Icelandic and Slovene
// are unsupported and reported as such by the evaluation layer.

namespace spellnorm {

namespace porter {

// The classic algorithm, kept structurally close to its reference
// implementation: `word[0..k]` is the current word, `j` marks the stem end
// set by the last successful suffix match.
class Stemmer {
public:
  std::string operator()(std::string_view input) {
    word_ = uni::decode_utf8(input);
    if (word_.size() <= 2) return std::string(input);
    k_ = static_cast<int>(word_.size()) - 1;
    j_ = 0;
    step1ab();
    step1c();
    step2();
    step3();
    step4();
    step5();
    return uni::encode_utf8(word_.substr(0, static_cast<std::size_t>(k_) + 1));
  }

private:
  std::u32string word_;
  int k_ = 0;  // index of last character
  int j_ = 0;  // stem end after a suffix match

  bool is_consonant(int i) const {
    switch (word_[static_cast<std::size_t>(i)]) {
      case U'a': case U'e': case U'i': case U'o': case U'u':
        return false;
      case U'y':
        return i == 0 ? true : !is_consonant(i - 1);
      default:
        return true;
    }
  }

  // Number of VC sequences in word[0..j].
  int measure() const {
    int n = 0, i = 0;
    while (true) {
      if (i > j_) return n;
      if (!is_consonant(i)) break;
      ++i;
    }
    ++i;
    while (true) {
      while (true) {
        if (i > j_) return n;
        if (is_consonant(i)) break;
        ++i;
      }
      ++i;
      ++n;
      while (true) {
        if (i > j_) return n;
        if (!is_consonant(i)) break;
        ++i;
      }
      ++i;
    }
  }

  bool vowel_in_stem() const {
    for (int i = 0; i <= j_; ++i)
      if (!is_consonant(i)) return true;
    return false;
  }

  bool double_consonant(int i) const {
    if (i < 1) return false;
    if (word_[static_cast<std::size_t>(i)] != word_[static_cast<std::size_t>(i) - 1])
      return false;
    return is_consonant(i);
  }

  // consonant-vowel-consonant ending at i, final consonant not w, x or y;
  // restarts e-insertion decisions (e.g. hop-, hoping).
  bool cvc(int i) const {
    if (i < 2 || !is_consonant(i) || is_consonant(i - 1) || !is_consonant(i - 2))
      return false;
    const char32_t ch = word_[static_cast<std::size_t>(i)];
    return ch != U'w' && ch != U'x' && ch != U'y';
  }

  bool ends(std::u32string_view suffix) {
    const int len = static_cast<int>(suffix.size());
    if (len > k_ + 1) return false;
    if (word_.compare(static_cast<std::size_t>(k_ - len + 1), suffix.size(), suffix) != 0)
      return false;
    j_ = k_ - len;
    return true;
  }

  void set_to(std::u32string_view s) {
    word_.resize(static_cast<std::size_t>(j_) + 1);
    word_.append(s);
    k_ = j_ + static_cast<int>(s.size());
  }

  void replace_if_m(std::u32string_view s) {
    if (measure() > 0) set_to(s);
  }

  void step1ab() {
    if (word_[static_cast<std::size_t>(k_)] == U's') {
      if (ends(U"sses")) {
        k_ -= 2;
      } else if (ends(U"ies")) {
        set_to(U"i");
      } else if (k_ >= 1 && word_[static_cast<std::size_t>(k_) - 1] != U's') {
        --k_;
      }
    }
    if (ends(U"eed")) {
      if (measure() > 0) --k_;
    } else if ((ends(U"ed") || ends(U"ing")) && vowel_in_stem()) {
      k_ = j_;
      if (ends(U"at")) {
        set_to(U"ate");
      } else if (ends(U"bl")) {
        set_to(U"ble");
      } else if (ends(U"iz")) {
        set_to(U"ize");
      } else if (double_consonant(k_)) {
        --k_;
        const char32_t ch = word_[static_cast<std::size_t>(k_)];
        if (ch == U'l' || ch == U's' || ch == U'z') ++k_;
      } else if (measure() == 1 && cvc(k_)) {
        set_to(U"e");
      }
    }
  }

  void step1c() {
    if (ends(U"y") && vowel_in_stem()) word_[static_cast<std::size_t>(k_)] = U'i';
  }

  void step2() {
    static constexpr std::pair<std::u32string_view, std::u32string_view> kRules[] = {
        {U"ational", U"ate"}, {U"tional", U"tion"}, {U"enci", U"ence"},
        {U"anci", U"ance"},   {U"izer", U"ize"},    {U"bli", U"ble"},
        {U"alli", U"al"},     {U"entli", U"ent"},   {U"eli", U"e"},
        {U"ousli", U"ous"},   {U"ization", U"ize"}, {U"ation", U"ate"},
        {U"ator", U"ate"},    {U"alism", U"al"},    {U"iveness", U"ive"},
        {U"fulness", U"ful"}, {U"ousness", U"ous"}, {U"aliti", U"al"},
        {U"iviti", U"ive"},   {U"biliti", U"ble"},  {U"logi", U"log"},
    };
    for (const auto& [suffix, replacement] : kRules) {
      if (ends(suffix)) {
        replace_if_m(replacement);
        return;
      }
    }
  }

  void step3() {
    static constexpr std::pair<std::u32string_view, std::u32string_view> kRules[] = {
        {U"icate", U"ic"}, {U"ative", U""}, {U"alize", U"al"}, {U"iciti", U"ic"},
        {U"ical", U"ic"},  {U"ful", U""},   {U"ness", U""},
    };
    for (const auto& [suffix, replacement] : kRules) {
      if (ends(suffix)) {
        replace_if_m(replacement);
        return;
      }
    }
  }

  void step4() {
    static constexpr std::u32string_view kSuffixes[] = {
        U"al",  U"ance", U"ence", U"er",  U"ic",  U"able", U"ible", U"ant", U"ement",
        U"ment", U"ent", U"ion",  U"ou",  U"ism", U"ate",  U"iti",  U"ous", U"ive",
        U"ize",
    };
    for (const auto& suffix : kSuffixes) {
      if (!ends(suffix)) continue;
      if (suffix == U"ion") {
        const char32_t before = j_ >= 0 ? word_[static_cast<std::size_t>(j_)] : 0;
        if (before != U's' && before != U't') continue;
      }
      if (measure() > 1) k_ = j_;
      return;
    }
  }

  void step5() {
    j_ = k_;
    if (word_[static_cast<std::size_t>(k_)] == U'e') {
      const int a = measure();
      if (a > 1 || (a == 1 && !cvc(k_ - 1))) --k_;
    }
    if (word_[static_cast<std::size_t>(k_)] == U'l' && double_consonant(k_) && measure() > 1)
      --k_;
  }
};

inline std::string stem(std::string_view word) { return Stemmer{}(word); }

}  // namespace porter

struct SuffixRule {
  std::string suffix;       // matched against the diacritic-folded word
  std::string replacement;  // usually empty
  int min_stem_length = 1;  // code points that must remain before the suffix
};

struct StemmerSpec {
  enum class Algorithm { porter_english, suffix_table };

  std::string language;
  Algorithm algorithm = Algorithm::suffix_table;
  std::vector<SuffixRule> rules;  // kept longest-suffix-first
};

namespace detail {

inline void order_rules(std::vector<SuffixRule>& rules) {
  std::stable_sort(rules.begin(), rules.end(), [](const SuffixRule& a, const SuffixRule& b) {
    return a.suffix.size() > b.suffix.size();
  });
}

// Coarse inflectional tables, expressed in diacritic-folded form. They are
// deliberately rough: the stem-match evaluation only needs predictions and
// references to collapse to the same string.
inline std::vector<SuffixRule> builtin_rules(const std::string& lang) {
  std::vector<SuffixRule> rules;
  if (lang == "de") {
    rules = {{"ungen", "", 3}, {"heiten", "", 3}, {"keiten", "", 3}, {"lichen", "", 3},
             {"ischen", "", 3}, {"heit", "", 3},  {"keit", "", 3},   {"lich", "", 3},
             {"isch", "", 3},   {"ung", "", 3},   {"end", "", 3},    {"ern", "", 3},
             {"en", "", 3},     {"er", "", 3},    {"em", "", 3},     {"es", "", 3},
             {"est", "", 3},    {"st", "", 3},    {"e", "", 3},      {"s", "", 3},
             {"n", "", 3}};
  } else if (lang == "es") {
    rules = {{"amientos", "", 3}, {"imientos", "", 3}, {"amiento", "", 3},
             {"imiento", "", 3},  {"aciones", "", 3},  {"uciones", "", 3},
             {"acion", "", 3},    {"ucion", "", 3},    {"idades", "", 3},
             {"idad", "", 3},     {"mente", "", 3},    {"adoras", "", 3},
             {"adores", "", 3},   {"adora", "", 3},    {"ador", "", 3},
             {"ancias", "", 3},   {"ancia", "", 3},    {"istas", "", 3},
             {"ista", "", 3},     {"ables", "", 3},    {"able", "", 3},
             {"ibles", "", 3},    {"ible", "", 3},     {"ando", "", 3},
             {"iendo", "", 3},    {"aron", "", 3},     {"aban", "", 3},
             {"aba", "", 3},      {"osos", "", 3},     {"osas", "", 3},
             {"oso", "", 3},      {"osa", "", 3},      {"es", "", 3},
             {"ar", "", 3},       {"er", "", 3},       {"ir", "", 3},
             {"s", "", 3},        {"a", "", 3},        {"o", "", 3},
             {"e", "", 3}};
  } else if (lang == "hu") {
    rules = {{"oknak", "", 3}, {"eknek", "", 3}, {"okban", "", 3}, {"ekben", "", 3},
             {"okat", "", 3},  {"eket", "", 3},  {"akat", "", 3},  {"nak", "", 3},
             {"nek", "", 3},   {"ban", "", 3},   {"ben", "", 3},   {"bol", "", 3},
             {"rol", "", 3},   {"tol", "", 3},   {"val", "", 3},   {"vel", "", 3},
             {"hoz", "", 3},   {"hez", "", 3},   {"nal", "", 3},   {"nel", "", 3},
             {"ra", "", 3},    {"re", "", 3},    {"ba", "", 3},    {"be", "", 3},
             {"ak", "", 3},    {"ek", "", 3},    {"ok", "", 3},    {"ot", "", 3},
             {"et", "", 3},    {"at", "", 3},    {"on", "", 3},    {"en", "", 3},
             {"an", "", 3},    {"t", "", 3},     {"k", "", 3},     {"i", "", 3}};
  } else if (lang == "pt") {
    rules = {{"amentos", "", 3}, {"imentos", "", 3}, {"amento", "", 3},
             {"imento", "", 3},  {"adoras", "", 3},  {"adores", "", 3},
             {"adora", "", 3},   {"ador", "", 3},    {"acoes", "", 3},
             {"acao", "", 3},    {"idades", "", 3},  {"idade", "", 3},
             {"mente", "", 3},   {"aveis", "", 3},   {"avel", "", 3},
             {"iveis", "", 3},   {"ivel", "", 3},    {"istas", "", 3},
             {"ista", "", 3},    {"ando", "", 3},    {"endo", "", 3},
             {"indo", "", 3},    {"aram", "", 3},    {"eram", "", 3},
             {"avam", "", 3},    {"ava", "", 3},     {"oso", "", 3},
             {"osa", "", 3},     {"osos", "", 3},    {"osas", "", 3},
             {"es", "", 3},      {"ar", "", 3},      {"er", "", 3},
             {"ir", "", 3},      {"ou", "", 3},      {"am", "", 3},
             {"em", "", 3},      {"s", "", 3},       {"a", "", 3},
             {"o", "", 3},       {"e", "", 3}};
  } else if (lang == "sv") {
    rules = {{"heterna", "", 3}, {"heten", "", 3}, {"heter", "", 3}, {"arnas", "", 3},
             {"ernas", "", 3},   {"ornas", "", 3}, {"andes", "", 3}, {"andet", "", 3},
             {"arna", "", 3},    {"erna", "", 3},  {"orna", "", 3},  {"ande", "", 3},
             {"aste", "", 3},    {"ades", "", 3},  {"ade", "", 3},   {"are", "", 3},
             {"ern", "", 3},     {"ens", "", 3},   {"ast", "", 3},   {"lig", "", 3},
             {"els", "", 3},     {"ad", "", 3},    {"en", "", 3},    {"ar", "", 3},
             {"er", "", 3},      {"or", "", 3},    {"as", "", 3},    {"es", "", 3},
             {"at", "", 3},      {"ig", "", 3},    {"a", "", 3},     {"e", "", 3},
             {"s", "", 3}};
  }
  order_rules(rules);
  return rules;
}

}  // namespace detail

inline bool stemmer_available(const std::string& language) {
  return language == "en" || language == "de" || language == "es" || language == "hu" ||
         language == "pt" || language == "sv";
}

inline StemmerSpec stemmer_for_language(const std::string& language) {
  if (!stemmer_available(language))
    throw ConfigError("no stemmer for language '" + language +
                      "'; supported: de en es hu pt sv");
  StemmerSpec spec;
  spec.language = language;
  if (language == "en") {
    spec.algorithm = StemmerSpec::Algorithm::porter_english;
  } else {
    spec.algorithm = StemmerSpec::Algorithm::suffix_table;
    spec.rules = detail::builtin_rules(language);
  }
  return spec;
}

// Loads a custom suffix table: `suffix<TAB>replacement<TAB>minlen` per line.
inline StemmerSpec load_suffix_table(const std::string& language, const std::string& path) {
  StemmerSpec spec;
  spec.language = language;
  spec.algorithm = StemmerSpec::Algorithm::suffix_table;
  const auto lines = io::split_lines(io::read_file(path));
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const std::size_t t1 = lines[i].find('\t');
    const std::size_t t2 = t1 == std::string::npos ? t1 : lines[i].find('\t', t1 + 1);
    if (t2 == std::string::npos)
      throw ParseError(path + " line " + std::to_string(i + 1) +
                       ": expected suffix<TAB>replacement<TAB>minlen");
    SuffixRule rule;
    rule.suffix = lines[i].substr(0, t1);
    rule.replacement = lines[i].substr(t1 + 1, t2 - t1 - 1);
    rule.min_stem_length = std::stoi(lines[i].substr(t2 + 1));
    if (rule.min_stem_length < 1)
      throw ParseError(path + " line " + std::to_string(i + 1) + ": minlen must be >= 1");
    spec.rules.push_back(std::move(rule));
  }
  detail::order_rules(spec.rules);
  return spec;
}

inline std::string stem(const StemmerSpec& spec, const std::string& word) {
  if (spec.algorithm == StemmerSpec::Algorithm::porter_english) return porter::stem(word);

  const std::u32string folded = uni::fold_diacritics(uni::decode_utf8(word));
  for (const SuffixRule& rule : spec.rules) {
    const std::u32string suffix = uni::decode_utf8(rule.suffix);
    if (suffix.empty() || folded.size() < suffix.size()) continue;
    const std::size_t stem_len = folded.size() - suffix.size();
    if (stem_len < static_cast<std::size_t>(rule.min_stem_length)) continue;
    if (folded.compare(stem_len, suffix.size(), suffix) != 0) continue;
    return uni::encode_utf8(folded.substr(0, stem_len) + uni::decode_utf8(rule.replacement));
  }
  return uni::encode_utf8(folded);
}

}  // namespace spellnorm

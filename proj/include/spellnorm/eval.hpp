#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "spellnorm/align.hpp"
#include "spellnorm/corpus.hpp"
#include "spellnorm/error.hpp"
#include "spellnorm/stemmer.hpp"

// Metrics and significance machinery: word accuracy, identity/maximum
// baselines, CER and CER on the incorrect subset, stem-match accuracy,
// seen/unseen breakdown, McNemar's test.

namespace spellnorm {

struct SubReport {
  std::size_t n = 0;
  std::size_t n_correct = 0;

  double accuracy() const {
    return n == 0 ? 0.0 : static_cast<double>(n_correct) / static_cast<double>(n);
  }
};

struct EvalReport {
  std::string system;
  std::size_t n_total = 0;
  std::size_t n_correct = 0;
  double word_accuracy = 0.0;
  double identity_baseline = 0.0;
  double maximum_accuracy = 0.0;
  double cer = 0.0;
  std::optional<double> cer_incorrect;           // absent when nothing was wrong
  std::optional<double> stem_accuracy_incorrect; // absent: see reason
  std::string stem_absence_reason;               // "", "no-errors", "unsupported-language",
                                                 // "not-requested"
  bool has_seen_unseen = false;
  SubReport seen;
  SubReport unseen;
  std::vector<bool> per_token_correctness;
};

struct Contingency {
  // counts over aligned tokens: first index = system A correct?, second =
  // system B correct?
  std::uint64_t n00 = 0, n01 = 0, n10 = 0, n11 = 0;
};

struct McNemarResult {
  double statistic = 0.0;   // continuity-corrected chi-square
  bool significant = false; // at p < 0.05
  bool used_exact = false;  // binomial branch for < 25 discordant pairs
  double p_value = 1.0;     // exact branch only; 1.0 otherwise
};

inline double word_accuracy(const std::vector<std::string>& gold,
                            const std::vector<std::string>& pred) {
  if (gold.size() != pred.size())
    throw EvalError("gold/prediction length mismatch: " + std::to_string(gold.size()) +
                    " vs " + std::to_string(pred.size()));
  if (gold.empty()) throw EvalError("cannot score an empty token list");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < gold.size(); ++i)
    if (gold[i] == pred[i]) ++correct;
  return static_cast<double>(correct) / static_cast<double>(gold.size());
}

inline double identity_baseline(const Dataset& ds) {
  if (ds.pairs.empty()) throw EvalError("cannot score an empty dataset");
  std::size_t unchanged = 0;
  for (const TokenPair& p : ds.pairs)
    if (p.source == p.target) ++unchanged;
  return static_cast<double>(unchanged) / static_cast<double>(ds.pairs.size());
}

// Oracle upper bound for token-level methods: the majority map built on
// this very dataset, scored on it. Only the majority count matters, so no
// tie-breaking is needed.
inline double maximum_accuracy(const Dataset& ds) {
  if (ds.pairs.empty()) throw EvalError("cannot score an empty dataset");
  std::map<std::string, std::map<std::string, std::uint64_t>> counts;
  for (const TokenPair& p : ds.pairs) counts[p.source][p.target] += 1;
  std::uint64_t correct = 0;
  for (const auto& [source, targets] : counts) {
    std::uint64_t best = 0;
    for (const auto& [target, count] : targets) best = std::max(best, count);
    correct += best;
  }
  return static_cast<double>(correct) / static_cast<double>(ds.pairs.size());
}

// Mean per-token character error rate: unit edit distance over the
// reference length. With incorrect_only, exact matches are excluded;
// absent when the selected subset is empty.
inline std::optional<double> cer(const std::vector<std::string>& gold,
                                 const std::vector<std::string>& pred, bool incorrect_only) {
  if (gold.size() != pred.size())
    throw EvalError("gold/prediction length mismatch in CER");
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (incorrect_only && gold[i] == pred[i]) continue;
    const std::u32string g = uni::decode_utf8(gold[i]);
    sum += edit_distance(uni::decode_utf8(pred[i]), g) /
           static_cast<double>(std::max<std::size_t>(1, g.size()));
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

// Fraction of incorrect predictions whose stem matches the reference stem.
inline std::optional<double> stem_accuracy_incorrect(const std::vector<std::string>& gold,
                                                     const std::vector<std::string>& pred,
                                                     const StemmerSpec& spec) {
  if (gold.size() != pred.size())
    throw EvalError("gold/prediction length mismatch in stem accuracy");
  std::size_t incorrect = 0, stem_match = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i] == pred[i]) continue;
    ++incorrect;
    if (stem(spec, gold[i]) == stem(spec, pred[i])) ++stem_match;
  }
  if (incorrect == 0) return std::nullopt;
  return static_cast<double>(stem_match) / static_cast<double>(incorrect);
}

inline std::pair<SubReport, SubReport> seen_unseen_split(
    const std::set<std::string>& train_vocab, const std::vector<std::string>& gold,
    const std::vector<std::string>& pred, const std::vector<std::string>& source) {
  if (gold.size() != pred.size() || gold.size() != source.size())
    throw EvalError("gold/prediction/source length mismatch in seen-unseen split");
  SubReport seen, unseen;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    SubReport& bucket = train_vocab.count(source[i]) ? seen : unseen;
    ++bucket.n;
    if (gold[i] == pred[i]) ++bucket.n_correct;
  }
  return {seen, unseen};
}

inline Contingency make_contingency(const std::vector<bool>& a, const std::vector<bool>& b) {
  if (a.size() != b.size())
    throw EvalError("per-token correctness vectors have different lengths: " +
                    std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  Contingency c;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] && b[i]) ++c.n11;
    else if (a[i]) ++c.n10;
    else if (b[i]) ++c.n01;
    else ++c.n00;
  }
  return c;
}

namespace detail {

// Two-sided exact binomial test with p = 1/2, evaluated over the
// discordant pairs.
inline double binomial_two_sided(std::uint64_t k_min, std::uint64_t n) {
  // cumulative P(X <= k_min) for X ~ Bin(n, 0.5); n stays < 25 here so
  // plain doubles are exact enough.
  double coeff = 1.0;  // C(n, 0)
  double cdf = 0.0;
  const double unit = std::pow(0.5, static_cast<double>(n));
  for (std::uint64_t i = 0; i <= k_min; ++i) {
    if (i > 0) coeff = coeff * static_cast<double>(n - i + 1) / static_cast<double>(i);
    cdf += coeff * unit;
  }
  return std::min(1.0, 2.0 * cdf);
}

}  // namespace detail

inline constexpr double kChiSquare05 = 3.841458820694124;  // chi^2(1) critical value
inline constexpr std::uint64_t kExactTestCutoff = 25;      // discordant pairs

// Continuity-corrected McNemar statistic; with fewer than 25 discordant
// pairs the verdict comes from the exact binomial test instead.
inline McNemarResult mcnemar(const Contingency& c) {
  McNemarResult r;
  const std::uint64_t discordant = c.n01 + c.n10;
  if (discordant == 0) return r;  // statistic 0, not significant

  const double diff =
      std::abs(static_cast<double>(c.n01) - static_cast<double>(c.n10)) - 1.0;
  r.statistic = diff * diff / static_cast<double>(discordant);

  if (discordant < kExactTestCutoff) {
    r.used_exact = true;
    r.p_value = detail::binomial_two_sided(std::min(c.n01, c.n10), discordant);
    r.significant = r.p_value < 0.05;
  } else {
    r.significant = r.statistic > kChiSquare05;
  }
  return r;
}

struct EvalOptions {
  std::string system;
  std::optional<std::set<std::string>> train_vocab;
  std::optional<std::string> stemmer_language;
};

// Full report over aligned (source, gold, prediction) token lists.
inline EvalReport evaluate(const std::vector<std::string>& source,
                           const std::vector<std::string>& gold,
                           const std::vector<std::string>& pred,
                           const EvalOptions& options = {}) {
  if (source.size() != gold.size() || gold.size() != pred.size())
    throw EvalError("source/gold/prediction length mismatch: " +
                    std::to_string(source.size()) + "/" + std::to_string(gold.size()) + "/" +
                    std::to_string(pred.size()));
  if (gold.empty()) throw EvalError("cannot evaluate an empty token list");

  EvalReport report;
  report.system = options.system;
  report.n_total = gold.size();
  report.per_token_correctness.resize(gold.size());
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const bool ok = gold[i] == pred[i];
    report.per_token_correctness[i] = ok;
    if (ok) ++report.n_correct;
  }
  report.word_accuracy =
      static_cast<double>(report.n_correct) / static_cast<double>(report.n_total);

  Dataset ds;
  for (std::size_t i = 0; i < source.size(); ++i) ds.pairs.push_back({source[i], gold[i]});
  report.identity_baseline = identity_baseline(ds);
  report.maximum_accuracy = maximum_accuracy(ds);

  report.cer = *cer(gold, pred, false);
  report.cer_incorrect = cer(gold, pred, true);

  if (!options.stemmer_language) {
    report.stem_absence_reason = "not-requested";
  } else if (!stemmer_available(*options.stemmer_language)) {
    report.stem_absence_reason = "unsupported-language";
  } else {
    report.stem_accuracy_incorrect =
        stem_accuracy_incorrect(gold, pred, stemmer_for_language(*options.stemmer_language));
    if (!report.stem_accuracy_incorrect) report.stem_absence_reason = "no-errors";
  }

  if (options.train_vocab) {
    report.has_seen_unseen = true;
    std::tie(report.seen, report.unseen) =
        seen_unseen_split(*options.train_vocab, gold, pred, source);
  }
  return report;
}

}  // namespace spellnorm

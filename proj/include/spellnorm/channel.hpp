#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "spellnorm/align.hpp"
#include "spellnorm/candidate.hpp"
#include "spellnorm/corpus.hpp"
#include "spellnorm/distance.hpp"
#include "spellnorm/error.hpp"

// Character-level noisy-channel normalizer: a substitution-unit table
// p(target unit | source unit) plus a character n-gram LM over target
// forms, decoded with a monotone beam search.

namespace spellnorm {

inline constexpr int kDefaultMaxUnit = 3;
inline constexpr int kDefaultBeamWidth = 10;
inline constexpr int kDefaultLmOrder = 5;
inline constexpr double kDefaultLmWeight = 1.0;

// Channel penalty for copying an unknown source character through, and LM
// floor for characters outside the training alphabet.
inline const double kUnknownLogPenalty = std::log(1e-4);

// Word-boundary sentinels used inside LM contexts; control characters
// cannot occur in preprocessed text.
inline constexpr char32_t kLmBegin = U'';
inline constexpr char32_t kLmEnd = U'';

struct SubstitutionTable {
  struct TargetStats {
    std::uint64_t count = 0;  // 0 for the smoothing-only identity target
    double prob = 0.0;
  };

  // source unit (1..max_unit chars) -> target unit (usually 0..max_unit
  // chars) -> statistics. Probabilities per source unit sum to 1.
  std::map<std::u32string, std::map<std::u32string, TargetStats>> entries;

  bool empty() const { return entries.empty(); }
};

namespace detail {

struct UnitPair {
  std::u32string source;
  std::u32string target;
};

// Splits a (repeat-canonicalized) alignment into translation units: match
// ops stand alone, runs of consecutive non-match ops merge (capped at
// max_unit source chars). One-sided runs keep an anchoring match so they
// stay contextual: insertion and deletion runs join the preceding match
// ("tt" -> "t", "sch" -> "s"), falling back to the following one at the
// start of the word.
inline std::vector<UnitPair> extract_unit_pairs(const Alignment& alignment, int max_unit) {
  struct Segment {
    std::u32string source, target;
    bool is_match;
  };
  std::vector<Segment> segments;
  for (const EditOp& op : alignment.ops) {
    // Repeated-letter reduction pairs with its own match ("nn" -> "n") so it
    // cannot leak into a neighbouring substitution run.
    if (op.kind == EditKind::erase && !segments.empty() && segments.back().is_match &&
        segments.back().source.back() == op.source &&
        segments.back().source.size() < static_cast<std::size_t>(max_unit)) {
      segments.back().source.push_back(op.source);
      segments.back().is_match = false;
      continue;
    }
    const bool is_match = op.kind == EditKind::match;
    const bool source_full =
        !segments.empty() && !segments.back().is_match &&
        segments.back().source.size() >= static_cast<std::size_t>(max_unit) &&
        op.source != 0;
    if (segments.empty() || is_match || segments.back().is_match || source_full)
      segments.push_back({{}, {}, is_match});
    if (op.source) segments.back().source.push_back(op.source);
    if (op.target) segments.back().target.push_back(op.target);
  }

  std::vector<UnitPair> units;
  std::vector<bool> unit_is_match;  // pure match units can absorb a deletion run
  std::u32string pending_source, pending_target;  // word-initial run awaiting an anchor
  auto push_unit = [&](std::u32string source, std::u32string target, bool is_match) {
    units.push_back({pending_source + source, pending_target + target});
    unit_is_match.push_back(is_match && pending_source.empty() && pending_target.empty());
    pending_source.clear();
    pending_target.clear();
  };
  for (const Segment& seg : segments) {
    if (seg.source.empty()) {  // insertion run
      if (!units.empty())
        units.back().target += seg.target;
      else
        pending_target += seg.target;
      continue;
    }
    if (seg.target.empty() && !seg.is_match) {  // deletion run
      const bool fits = !units.empty() && unit_is_match.back() &&
                        units.back().source.size() + seg.source.size() <=
                            static_cast<std::size_t>(max_unit);
      if (fits) {
        units.back().source += seg.source;
        unit_is_match.back() = false;
      } else if (units.empty() &&
                 pending_source.size() + seg.source.size() <
                     static_cast<std::size_t>(max_unit)) {
        pending_source += seg.source;  // anchor to the first match instead
      } else {
        push_unit(seg.source, {}, false);
      }
      continue;
    }
    push_unit(seg.source, seg.target, seg.is_match);
  }
  if (!pending_source.empty() || !pending_target.empty())
    units.push_back({pending_source, pending_target});
  return units;
}

}  // namespace detail

// Relative-frequency translation probabilities with add-0.1 smoothing over
// each source unit's observed targets plus its identity.
inline SubstitutionTable extract_units(const Dataset& pairs, int max_unit = kDefaultMaxUnit) {
  if (pairs.pairs.empty()) throw TrainError("unit extraction needs a nonempty training set");
  if (max_unit < 1 || max_unit > 3) throw ConfigError("max_unit must be in [1,3]");

  // Weighted alignment keeps systematic edits on the right characters (see
  // learn_rules).
  const EditWeightMatrix weights = learn_weights(pairs);
  std::map<std::u32string, std::map<std::u32string, std::uint64_t>> counts;
  for (const TokenPair& p : pairs.pairs) {
    const Alignment a = canonicalize_repeats(
        align(uni::decode_utf8(p.source), uni::decode_utf8(p.target), weights));
    for (const auto& unit : detail::extract_unit_pairs(a, max_unit))
      counts[unit.source][unit.target] += 1;
  }

  constexpr double kAdd = 0.1;
  SubstitutionTable table;
  for (const auto& [source, targets] : counts) {
    auto& out = table.entries[source];
    std::uint64_t total = 0;
    for (const auto& [target, count] : targets) {
      out[target].count = count;
      total += count;
    }
    out[source];  // identity target always participates in smoothing
    const double denom = static_cast<double>(total) + kAdd * static_cast<double>(out.size());
    for (auto& [target, stats] : out)
      stats.prob = (static_cast<double>(stats.count) + kAdd) / denom;
  }
  return table;
}

struct CharLM {
  struct ContextStats {
    std::map<char32_t, std::uint64_t> events;
    std::uint64_t total = 0;
  };

  int order = kDefaultLmOrder;
  // by_length[k]: contexts of exactly k preceding symbols.
  std::vector<std::map<std::u32string, ContextStats>> by_length;
  std::set<char32_t> alphabet;  // observed target characters, sentinels excluded

  // Witten-Bell estimate with backoff to shorter contexts and a uniform
  // base over alphabet + end-of-word.
  double prob(char32_t event, std::u32string_view context) const {
    if (event != kLmEnd && alphabet.count(event) == 0) return 0.0;
    const std::size_t k = std::min<std::size_t>(context.size(), order - 1);
    return prob_at(event, context.substr(context.size() - k), k);
  }

  double log_prob(char32_t event, std::u32string_view context) const {
    const double p = prob(event, context);
    return p > 0.0 ? std::log(p) : kUnknownLogPenalty;
  }

private:
  double prob_at(char32_t event, std::u32string_view context, std::size_t k) const {
    const double uniform = 1.0 / static_cast<double>(alphabet.size() + 1);
    if (k == 0) {
      const auto it = by_length[0].find(std::u32string());
      if (it == by_length[0].end()) return uniform;
      const auto& stats = it->second;
      const double types = static_cast<double>(stats.events.size());
      const auto ev = stats.events.find(event);
      const double count = ev == stats.events.end() ? 0.0 : static_cast<double>(ev->second);
      return (count + types * uniform) / (static_cast<double>(stats.total) + types);
    }
    const auto it = by_length[k].find(std::u32string(context));
    const double lower = prob_at(event, context.substr(1), k - 1);
    if (it == by_length[k].end()) return lower;
    const auto& stats = it->second;
    const double types = static_cast<double>(stats.events.size());
    const auto ev = stats.events.find(event);
    const double count = ev == stats.events.end() ? 0.0 : static_cast<double>(ev->second);
    return (count + types * lower) / (static_cast<double>(stats.total) + types);
  }
};

// Trains the character LM on target forms; extra monolingual tokens, when
// given, are simply appended to the training material.
inline CharLM train_lm(const std::vector<std::string>& targets,
                       const std::vector<std::string>& extra_corpus = {},
                       int order = kDefaultLmOrder) {
  if (order < 1) throw ConfigError("LM order must be at least 1");
  if (targets.empty() && extra_corpus.empty())
    throw TrainError("LM training needs at least one string");

  CharLM lm;
  lm.order = order;
  lm.by_length.resize(static_cast<std::size_t>(order));

  auto add_word = [&lm, order](const std::string& word) {
    const std::u32string chars = uni::decode_utf8(word);
    for (char32_t c : chars) lm.alphabet.insert(c);
    std::u32string history(static_cast<std::size_t>(order - 1), kLmBegin);
    for (std::size_t t = 0; t <= chars.size(); ++t) {
      const char32_t event = t < chars.size() ? chars[t] : kLmEnd;
      for (std::size_t k = 0; k < static_cast<std::size_t>(order); ++k) {
        auto& stats = lm.by_length[k][history.substr(history.size() - k)];
        stats.events[event] += 1;
        stats.total += 1;
      }
      if (order > 1) {
        history.erase(history.begin());
        history.push_back(event);
      }
    }
  };
  for (const auto& w : targets) add_word(w);
  for (const auto& w : extra_corpus) add_word(w);
  return lm;
}

struct ChannelModel {
  SubstitutionTable table;
  CharLM lm;
  double lm_weight = kDefaultLmWeight;
  int beam_width = kDefaultBeamWidth;
  int max_unit = kDefaultMaxUnit;
};

namespace detail {

struct Hypothesis {
  std::u32string target;
  std::u32string context;  // last order-1 emitted symbols, begin-padded
  double score = 0.0;
};

inline bool hypothesis_before(const Hypothesis& a, const Hypothesis& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.target < b.target;
}

}  // namespace detail

// Monotone beam search over source positions. Hypotheses consume
// 1..max_unit source characters through the table; source characters
// without a single-character entry copy through at a fixed penalty.
inline Candidate decode(const ChannelModel& model, const std::string& token) {
  const std::u32string source = uni::decode_utf8(token);
  if (source.empty()) return identity_candidate(token, "channel");

  const std::size_t context_len = static_cast<std::size_t>(model.lm.order - 1);
  const auto extend = [&](detail::Hypothesis hyp, const std::u32string& emitted,
                          double channel_log) {
    hyp.score += channel_log;
    for (char32_t c : emitted) {
      hyp.score += model.lm_weight * model.lm.log_prob(c, hyp.context);
      hyp.target.push_back(c);
      if (context_len > 0) {
        hyp.context.push_back(c);
        if (hyp.context.size() > context_len) hyp.context.erase(hyp.context.begin());
      }
    }
    return hyp;
  };

  std::vector<std::vector<detail::Hypothesis>> buckets(source.size() + 1);
  buckets[0].push_back({{}, std::u32string(context_len, kLmBegin), 0.0});

  for (std::size_t consumed = 0; consumed < source.size(); ++consumed) {
    auto& bucket = buckets[consumed];
    if (bucket.empty()) continue;
    std::sort(bucket.begin(), bucket.end(), detail::hypothesis_before);
    if (bucket.size() > static_cast<std::size_t>(model.beam_width))
      bucket.resize(static_cast<std::size_t>(model.beam_width));

    for (const auto& hyp : bucket) {
      bool has_single = false;
      for (std::size_t len = 1;
           len <= static_cast<std::size_t>(model.max_unit) && consumed + len <= source.size();
           ++len) {
        const std::u32string unit = source.substr(consumed, len);
        const auto it = model.table.entries.find(unit);
        if (it == model.table.entries.end()) continue;
        if (len == 1) has_single = true;
        for (const auto& [target, stats] : it->second)
          buckets[consumed + len].push_back(extend(hyp, target, std::log(stats.prob)));
      }
      if (!has_single) {
        // Unknown character: copy through.
        buckets[consumed + 1].push_back(
            extend(hyp, std::u32string(1, source[consumed]), kUnknownLogPenalty));
      }
    }
  }

  auto& final_bucket = buckets[source.size()];
  const detail::Hypothesis* best = nullptr;
  double best_score = 0.0;
  for (auto& hyp : final_bucket) {
    const double total =
        hyp.score + model.lm_weight * model.lm.log_prob(kLmEnd, hyp.context);
    if (best == nullptr || total > best_score ||
        (total == best_score && hyp.target < best->target)) {
      best = &hyp;
      best_score = total;
    }
  }
  if (best == nullptr || best->target.empty()) return identity_candidate(token, "channel");
  return Candidate{uni::encode_utf8(best->target), best_score, "channel"};
}

}  // namespace spellnorm

#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "spellnorm/align.hpp"
#include "spellnorm/candidate.hpp"
#include "spellnorm/corpus.hpp"
#include "spellnorm/distance.hpp"
#include "spellnorm/error.hpp"

// Context-aware replacement rules induced from character alignments.
// Decoding applies exactly one rule per source character, with positions
// scored independently.

namespace spellnorm {

inline constexpr char32_t kBoundary = U'#';

struct RuleKey {
  char32_t source;  // the character the rule rewrites
  char32_t left;    // preceding source character, or kBoundary
  char32_t right;   // following source character, or kBoundary

  auto operator<=>(const RuleKey&) const = default;
};

struct RuleSet {
  // (source, contexts) -> target segment -> count. Target segments are
  // usually 0-2 characters: empty for deletions, two when an insertion
  // merged into the position.
  std::map<RuleKey, std::map<std::u32string, std::uint64_t>> rules;
  std::map<RuleKey, std::uint64_t> context_totals;

  // Context-free aggregation, the first backoff level.
  std::map<char32_t, std::map<std::u32string, std::uint64_t>> by_source;
  std::map<char32_t, std::uint64_t> source_totals;

  bool empty() const { return rules.empty(); }

  void add(const RuleKey& key, const std::u32string& target, std::uint64_t count = 1) {
    rules[key][target] += count;
    context_totals[key] += count;
    by_source[key.source][target] += count;
    source_totals[key.source] += count;
  }
};

namespace detail {

struct PositionEdit {
  char32_t source;
  std::u32string target;
};

// Collapses an alignment to one edit per source character: insertions
// merge into the preceding position, or into the following one at the
// start of the word.
inline std::vector<PositionEdit> per_position_edits(const Alignment& alignment) {
  std::vector<PositionEdit> edits;
  std::u32string pending;  // inserted characters waiting for a position
  for (const EditOp& op : alignment.ops) {
    if (op.kind == EditKind::insert) {
      if (edits.empty())
        pending.push_back(op.target);
      else
        edits.back().target.push_back(op.target);
      continue;
    }
    PositionEdit edit{op.source, {}};
    edit.target = pending;
    pending.clear();
    if (op.target) edit.target.push_back(op.target);
    edits.push_back(std::move(edit));
  }
  return edits;
}

}  // namespace detail

inline RuleSet learn_rules(const Dataset& pairs) {
  if (pairs.pairs.empty()) throw TrainError("rule induction needs a nonempty training set");
  // Align under corpus-estimated edit weights: unit costs leave frequent
  // sub-vs-delete ties that would smear counts across unrelated rules.
  const EditWeightMatrix weights = learn_weights(pairs);
  RuleSet set;
  for (const TokenPair& p : pairs.pairs) {
    const std::u32string src = uni::decode_utf8(p.source);
    const std::u32string tgt = uni::decode_utf8(p.target);
    const auto edits = detail::per_position_edits(align(src, tgt, weights));
    for (std::size_t i = 0; i < edits.size(); ++i) {
      const RuleKey key{edits[i].source,
                        i > 0 ? edits[i - 1].source : kBoundary,
                        i + 1 < edits.size() ? edits[i + 1].source : kBoundary};
      set.add(key, edits[i].target);
    }
  }
  return set;
}

// Per position: exact-context rule, backing off to the context-free
// aggregate, backing off to identity. Score is the summed log of the
// chosen rules' relative frequencies.
inline Candidate apply_rules(const RuleSet& set, const std::string& token) {
  const std::u32string chars = uni::decode_utf8(token);
  std::u32string output;
  double score = 0.0;
  for (std::size_t i = 0; i < chars.size(); ++i) {
    const RuleKey key{chars[i],
                      i > 0 ? chars[i - 1] : kBoundary,
                      i + 1 < chars.size() ? chars[i + 1] : kBoundary};

    const std::map<std::u32string, std::uint64_t>* options = nullptr;
    std::uint64_t total = 0;
    if (const auto it = set.rules.find(key); it != set.rules.end()) {
      options = &it->second;
      total = set.context_totals.at(key);
    } else if (const auto cf = set.by_source.find(chars[i]); cf != set.by_source.end()) {
      options = &cf->second;
      total = set.source_totals.at(chars[i]);
    }

    if (options == nullptr) {
      output.push_back(chars[i]);  // identity backoff, probability 1
      continue;
    }
    const std::u32string* best = nullptr;
    std::uint64_t best_count = 0;
    for (const auto& [target, count] : *options) {
      if (count > best_count) {  // ties resolve to the smallest target
        best = &target;
        best_count = count;
      }
    }
    output += *best;
    score += std::log(static_cast<double>(best_count) / static_cast<double>(total));
  }
  if (output.empty()) return identity_candidate(token, "rules");
  return Candidate{uni::encode_utf8(output), score, "rules"};
}

}  // namespace spellnorm

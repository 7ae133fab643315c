#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <utility>

#include "spellnorm/align.hpp"
#include "spellnorm/candidate.hpp"
#include "spellnorm/corpus.hpp"
#include "spellnorm/error.hpp"

// Weighted-Levenshtein normalizer: edit weights estimated from training
// alignments, candidates drawn from a contemporary lexicon.

namespace spellnorm {

inline constexpr double kDefaultDistanceThreshold = 0.5;  // per source character
inline constexpr int kDefaultWeightIterations = 2;

struct EditWeightMatrix {
  // Non-match ops only; 0 on one side encodes insert/delete. Identity ops
  // always cost 0 and are never stored.
  std::map<std::pair<char32_t, char32_t>, double> costs;
  double default_cost = 1.0;

  double operator()(char32_t source, char32_t target) const {
    if (source == target) return 0.0;
    const auto it = costs.find({source, target});
    return it == costs.end() ? default_cost : it->second;
  }

  // Admissible per-character lower bound for covering a length difference.
  double min_indel_cost() const {
    double lo = default_cost;
    for (const auto& [op, cost] : costs)
      if (op.first == 0 || op.second == 0) lo = std::min(lo, cost);
    return lo;
  }
};

// Iterative estimation: align under current weights, turn non-match op
// frequencies into -log costs rescaled to (0,1], repeat. Matches stay free;
// unseen ops keep the unit default so they are never cheaper than observed
// ones.
inline EditWeightMatrix learn_weights(const Dataset& pairs,
                                      int iterations = kDefaultWeightIterations) {
  if (pairs.pairs.empty()) throw TrainError("weight learning needs a nonempty training set");
  if (iterations < 1) throw ConfigError("weight learning needs at least one iteration");

  EditWeightMatrix weights;
  for (int round = 0; round < iterations; ++round) {
    std::map<std::pair<char32_t, char32_t>, std::uint64_t> counts;
    std::uint64_t total = 0;
    for (const TokenPair& p : pairs.pairs) {
      const Alignment a =
          align(uni::decode_utf8(p.source), uni::decode_utf8(p.target), weights);
      for (const EditOp& op : a.ops) {
        if (op.kind == EditKind::match) continue;
        counts[{op.source, op.target}] += 1;
        ++total;
      }
    }
    if (counts.empty()) return EditWeightMatrix{};  // identical-pair corpus

    double scale = 0.0;
    std::map<std::pair<char32_t, char32_t>, double> neglog;
    for (const auto& [op, count] : counts) {
      const double v = -std::log(static_cast<double>(count) / static_cast<double>(total));
      neglog[op] = v;
      scale = std::max(scale, v);
    }
    weights.costs.clear();
    for (const auto& [op, v] : neglog) weights.costs[op] = scale > 0.0 ? v / scale : 0.0;
    weights.default_cost = 1.0;
  }
  return weights;
}

// Nearest lexicon entry under the weighted distance; ties go to the more
// frequent entry, then code-point order. Falls back to identity when the
// best distance per source character exceeds `threshold`.
inline Candidate distance_normalize(const EditWeightMatrix& weights, const Lexicon& lexicon,
                                    const std::string& token,
                                    double threshold = kDefaultDistanceThreshold) {
  if (lexicon.empty()) throw ConfigError("distance normalization requires a nonempty lexicon");

  const std::u32string tok = uni::decode_utf8(token);
  const double min_indel = weights.min_indel_cost();

  const std::string* best_word = nullptr;
  double best_cost = std::numeric_limits<double>::infinity();
  std::uint64_t best_freq = 0;

  for (const auto& [word, freq] : lexicon.entries) {
    const std::u32string entry = uni::decode_utf8(word);
    const double length_gap =
        static_cast<double>(entry.size() > tok.size() ? entry.size() - tok.size()
                                                      : tok.size() - entry.size());
    if (best_word != nullptr && length_gap * min_indel > best_cost) continue;

    const auto d = edit_distance_bounded(tok, entry, weights, best_cost);
    if (!d) continue;
    // Ascending map order already resolves equal (cost, freq) to the
    // code-point-smallest word.
    const bool better = *d < best_cost || (*d == best_cost && freq > best_freq);
    if (better) {
      best_word = &word;
      best_cost = *d;
      best_freq = freq;
    }
  }

  if (best_word == nullptr ||
      best_cost / std::max<std::size_t>(1, tok.size()) > threshold)
    return identity_candidate(token, "distance");
  return Candidate{*best_word, -best_cost, "distance"};
}

}  // namespace spellnorm

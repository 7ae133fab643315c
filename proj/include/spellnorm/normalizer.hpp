#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "spellnorm/candidate.hpp"
#include "spellnorm/channel.hpp"
#include "spellnorm/corpus.hpp"
#include "spellnorm/distance.hpp"
#include "spellnorm/error.hpp"
#include "spellnorm/lookup.hpp"
#include "spellnorm/rules.hpp"

// The common normalizer contract: a trained, immutable model that turns any
// token into exactly one candidate. Includes the chained "combined"
// normalizer and the seen/unseen hybrid dispatch.

namespace spellnorm {

enum class Backend { lookup, rules, distance, channel, chain, hybrid };

inline std::string to_string(Backend b) {
  switch (b) {
    case Backend::lookup: return "lookup";
    case Backend::rules: return "rules";
    case Backend::distance: return "distance";
    case Backend::channel: return "channel";
    case Backend::chain: return "chain";
    default: return "hybrid";
  }
}

inline Backend backend_from_string(const std::string& name) {
  if (name == "lookup") return Backend::lookup;
  if (name == "rules") return Backend::rules;
  if (name == "distance") return Backend::distance;
  if (name == "channel") return Backend::channel;
  if (name == "chain") return Backend::chain;
  if (name == "hybrid") return Backend::hybrid;
  throw ConfigError("unknown backend '" + name +
                    "'; expected lookup, rules, distance, channel, chain or hybrid");
}

struct TrainConfig {
  double distance_threshold = kDefaultDistanceThreshold;
  int weight_iterations = kDefaultWeightIterations;
  int lm_order = kDefaultLmOrder;
  double lm_weight = kDefaultLmWeight;
  int beam_width = kDefaultBeamWidth;
  int max_unit = kDefaultMaxUnit;
  std::vector<std::string> extra_lm_corpus;  // +LM configuration
  bool chain_lookup = true;
  bool chain_rules = true;
  bool chain_distance = true;
};

struct DistanceModel {
  EditWeightMatrix weights;
  Lexicon lexicon;
  double threshold = kDefaultDistanceThreshold;
};

// Ordered [lookup, rules, distance]; each stage fires only when confident
// (token seen; rule output in the lexicon; distance under threshold).
struct ChainModel {
  std::optional<LookupTable> lookup;
  std::optional<RuleSet> rules;
  std::optional<EditWeightMatrix> weights;
  Lexicon lexicon;
  double threshold = kDefaultDistanceThreshold;
};

struct NormalizerModel;

struct HybridModel {
  std::shared_ptr<const NormalizerModel> lookup;
  std::shared_ptr<const NormalizerModel> backoff;
};

struct NormalizerModel {
  Backend backend = Backend::lookup;
  std::set<std::string> source_vocabulary;
  std::variant<LookupTable, RuleSet, DistanceModel, ChannelModel, ChainModel, HybridModel>
      state;
};

inline NormalizerModel train(Backend backend, const Dataset& pairs,
                             const std::optional<Lexicon>& lexicon = std::nullopt,
                             const TrainConfig& config = {}) {
  NormalizerModel model;
  model.backend = backend;
  for (const TokenPair& p : pairs.pairs) model.source_vocabulary.insert(p.source);

  auto require_lexicon = [&]() -> const Lexicon& {
    if (!lexicon || lexicon->empty())
      throw ConfigError(to_string(backend) + " backend requires a nonempty lexicon");
    return *lexicon;
  };

  switch (backend) {
    case Backend::lookup:
      model.state = train_lookup(pairs);
      break;
    case Backend::rules:
      model.state = learn_rules(pairs);
      break;
    case Backend::distance: {
      DistanceModel dm;
      dm.lexicon = require_lexicon();
      dm.weights = learn_weights(pairs, config.weight_iterations);
      dm.threshold = config.distance_threshold;
      model.state = std::move(dm);
      break;
    }
    case Backend::channel: {
      ChannelModel cm;
      cm.table = extract_units(pairs, config.max_unit);
      std::vector<std::string> targets;
      targets.reserve(pairs.pairs.size());
      for (const TokenPair& p : pairs.pairs) targets.push_back(p.target);
      cm.lm = train_lm(targets, config.extra_lm_corpus, config.lm_order);
      cm.lm_weight = config.lm_weight;
      cm.beam_width = config.beam_width;
      cm.max_unit = config.max_unit;
      model.state = std::move(cm);
      break;
    }
    case Backend::chain: {
      ChainModel chain;
      chain.lexicon = require_lexicon();
      chain.threshold = config.distance_threshold;
      if (config.chain_lookup) chain.lookup = train_lookup(pairs);
      if (config.chain_rules) chain.rules = learn_rules(pairs);
      if (config.chain_distance) chain.weights = learn_weights(pairs, config.weight_iterations);
      model.state = std::move(chain);
      break;
    }
    case Backend::hybrid:
      throw ConfigError("hybrid models are composed from two trained models, not trained "
                        "directly");
  }
  return model;
}

inline Candidate normalize(const NormalizerModel& model, const std::string& token);

namespace detail {

inline Candidate normalize_chain(const ChainModel& chain, const std::string& token) {
  if (chain.lookup && chain.lookup->contains(token))
    return lookup_normalize(*chain.lookup, token);
  if (chain.rules) {
    Candidate cand = apply_rules(*chain.rules, token);
    if (!cand.is_sentinel() && chain.lexicon.contains(cand.form)) return cand;
  }
  if (chain.weights) {
    Candidate cand = distance_normalize(*chain.weights, chain.lexicon, token, chain.threshold);
    if (!cand.is_sentinel()) return cand;
  }
  return identity_candidate(token, "chain");
}

}  // namespace detail

// Total function: always returns exactly one candidate, falling back to the
// identity with a sentinel score.
inline Candidate normalize(const NormalizerModel& model, const std::string& token) {
  return std::visit(
      [&](const auto& state) -> Candidate {
        using T = std::decay_t<decltype(state)>;
        if constexpr (std::is_same_v<T, LookupTable>) {
          return lookup_normalize(state, token);
        } else if constexpr (std::is_same_v<T, RuleSet>) {
          return apply_rules(state, token);
        } else if constexpr (std::is_same_v<T, DistanceModel>) {
          return distance_normalize(state.weights, state.lexicon, token, state.threshold);
        } else if constexpr (std::is_same_v<T, ChannelModel>) {
          return decode(state, token);
        } else if constexpr (std::is_same_v<T, ChainModel>) {
          return detail::normalize_chain(state, token);
        } else {
          const HybridModel& hybrid = state;
          if (model.source_vocabulary.count(token))
            return normalize(*hybrid.lookup, token);
          return normalize(*hybrid.backoff, token);
        }
      },
      model.state);
}

// Composes the seen/unseen dispatch model. Both parts must come from the
// same training data; differing vocabularies signal a mismatch.
inline NormalizerModel make_hybrid(NormalizerModel lookup, NormalizerModel backoff) {
  if (lookup.source_vocabulary != backoff.source_vocabulary)
    throw ConfigError("hybrid composition requires models trained on the same data "
                      "(source vocabularies differ)");
  NormalizerModel model;
  model.backend = Backend::hybrid;
  model.source_vocabulary = lookup.source_vocabulary;
  HybridModel hybrid;
  hybrid.lookup = std::make_shared<const NormalizerModel>(std::move(lookup));
  hybrid.backoff = std::make_shared<const NormalizerModel>(std::move(backoff));
  model.state = std::move(hybrid);
  return model;
}

// Per-call variant of the hybrid dispatch.
inline Candidate normalize_hybrid(const NormalizerModel& lookup,
                                  const NormalizerModel& backoff, const std::string& token) {
  if (lookup.source_vocabulary != backoff.source_vocabulary)
    throw ConfigError("hybrid dispatch requires models trained on the same data "
                      "(source vocabularies differ)");
  if (lookup.source_vocabulary.count(token)) return normalize(lookup, token);
  return normalize(backoff, token);
}

}  // namespace spellnorm

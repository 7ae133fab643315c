#pragma once

#include <string>

namespace spellnorm {

// Score assigned to identity fallbacks so every Candidate carries a finite
// score and real hypotheses always outrank them.
inline constexpr double kSentinelScore = -1e9;

struct Candidate {
  std::string form;    // proposed normalization, never empty
  double score = 0.0;  // log-probability or negated cost, higher is better
  std::string origin;  // producing backend

  bool is_sentinel() const { return score <= kSentinelScore; }

  bool operator==(const Candidate&) const = default;
};

inline Candidate identity_candidate(std::string token, std::string origin) {
  return Candidate{std::move(token), kSentinelScore, std::move(origin)};
}

}  // namespace spellnorm

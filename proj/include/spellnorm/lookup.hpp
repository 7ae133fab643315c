#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>

#include "spellnorm/candidate.hpp"
#include "spellnorm/corpus.hpp"

// Memorization baseline: each seen historical type maps to its most
// frequent training normalization; everything else passes through.

namespace spellnorm {

struct LookupTable {
  struct Entry {
    std::string target;   // majority normalization for this source type
    std::uint64_t count;  // occurrences of (source, target)
    std::uint64_t total;  // occurrences of source with any target
  };

  std::map<std::string, Entry> mapping;

  bool contains(const std::string& source) const { return mapping.count(source) != 0; }
  bool empty() const { return mapping.empty(); }
};

// Majority target per source type; ties go to the lexicographically
// smallest target so training is order-independent.
inline LookupTable train_lookup(const Dataset& pairs) {
  std::map<std::string, std::map<std::string, std::uint64_t>> counts;
  for (const TokenPair& p : pairs.pairs) counts[p.source][p.target] += 1;

  LookupTable table;
  for (const auto& [source, targets] : counts) {
    std::uint64_t total = 0;
    const std::string* best = nullptr;
    std::uint64_t best_count = 0;
    for (const auto& [target, count] : targets) {
      total += count;
      if (count > best_count) {  // map order makes the first maximum the smallest
        best = &target;
        best_count = count;
      }
    }
    table.mapping.emplace(source, LookupTable::Entry{*best, best_count, total});
  }
  return table;
}

inline Candidate lookup_normalize(const LookupTable& table, const std::string& token) {
  const auto it = table.mapping.find(token);
  if (it == table.mapping.end()) return identity_candidate(token, "lookup");
  const auto& e = it->second;
  return Candidate{e.target,
                   std::log(static_cast<double>(e.count) / static_cast<double>(e.total)),
                   "lookup"};
}

}  // namespace spellnorm

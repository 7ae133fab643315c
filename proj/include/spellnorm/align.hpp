#pragma once

#include <algorithm>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spellnorm/unicode.hpp"

// Character-level alignment and (weighted) Levenshtein distance. Operates
// on code points; ops are 1:1, 1:0 or 0:1, with multi-character units
// formed by the consumers.

namespace spellnorm {

enum class EditKind { match, substitute, insert, erase };

struct EditOp {
  EditKind kind;
  char32_t source = 0;  // 0 when the op consumes no source character
  char32_t target = 0;  // 0 when the op emits no target character

  bool operator==(const EditOp&) const = default;
};

struct Alignment {
  std::vector<EditOp> ops;

  std::u32string source() const {
    std::u32string s;
    for (const EditOp& op : ops)
      if (op.source) s.push_back(op.source);
    return s;
  }

  std::u32string target() const {
    std::u32string t;
    for (const EditOp& op : ops)
      if (op.target) t.push_back(op.target);
    return t;
  }
};

// Unit costs: matches are free, everything else costs 1.
struct UnitCost {
  double operator()(char32_t source, char32_t target) const {
    return source == target ? 0.0 : 1.0;
  }
};

namespace detail {

template <typename Cost>
std::vector<std::vector<double>> edit_table(std::u32string_view a, std::u32string_view b,
                                            const Cost& cost) {
  const std::size_t m = a.size(), n = b.size();
  std::vector<std::vector<double>> d(m + 1, std::vector<double>(n + 1, 0.0));
  for (std::size_t i = 1; i <= m; ++i) d[i][0] = d[i - 1][0] + cost(a[i - 1], 0);
  for (std::size_t j = 1; j <= n; ++j) d[0][j] = d[0][j - 1] + cost(0, b[j - 1]);
  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      d[i][j] = std::min({d[i - 1][j - 1] + cost(a[i - 1], b[j - 1]),
                          d[i - 1][j] + cost(a[i - 1], 0),
                          d[i][j - 1] + cost(0, b[j - 1])});
    }
  }
  return d;
}

}  // namespace detail

template <typename Cost>
double edit_distance(std::u32string_view a, std::u32string_view b, const Cost& cost) {
  // Two-row DP; the full table is only needed for backtracking.
  const std::size_t n = b.size();
  std::vector<double> prev(n + 1, 0.0), cur(n + 1, 0.0);
  for (std::size_t j = 1; j <= n; ++j) prev[j] = prev[j - 1] + cost(0, b[j - 1]);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = prev[0] + cost(a[i - 1], 0);
    for (std::size_t j = 1; j <= n; ++j) {
      cur[j] = std::min({prev[j - 1] + cost(a[i - 1], b[j - 1]),
                         prev[j] + cost(a[i - 1], 0),
                         cur[j - 1] + cost(0, b[j - 1])});
    }
    std::swap(prev, cur);
  }
  return prev[n];
}

inline double edit_distance(std::u32string_view a, std::u32string_view b) {
  return edit_distance(a, b, UnitCost{});
}

inline double edit_distance(std::string_view a, std::string_view b) {
  return edit_distance(uni::decode_utf8(a), uni::decode_utf8(b), UnitCost{});
}

// Same DP with an admissible cutoff: returns nullopt as soon as the best
// value in a row exceeds `bound`, so lexicon scans can abandon hopeless
// candidates early.
template <typename Cost>
std::optional<double> edit_distance_bounded(std::u32string_view a, std::u32string_view b,
                                            const Cost& cost, double bound) {
  const std::size_t n = b.size();
  std::vector<double> prev(n + 1, 0.0), cur(n + 1, 0.0);
  for (std::size_t j = 1; j <= n; ++j) prev[j] = prev[j - 1] + cost(0, b[j - 1]);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = prev[0] + cost(a[i - 1], 0);
    double row_min = cur[0];
    for (std::size_t j = 1; j <= n; ++j) {
      cur[j] = std::min({prev[j - 1] + cost(a[i - 1], b[j - 1]),
                         prev[j] + cost(a[i - 1], 0),
                         cur[j - 1] + cost(0, b[j - 1])});
      row_min = std::min(row_min, cur[j]);
    }
    if (row_min > bound) return std::nullopt;
    std::swap(prev, cur);
  }
  if (prev[n] > bound) return std::nullopt;
  return prev[n];
}

// One optimal alignment. Ties are broken deterministically while
// backtracking: match > substitute > delete > insert.
template <typename Cost>
Alignment align(std::u32string_view a, std::u32string_view b, const Cost& cost) {
  const auto d = detail::edit_table(a, b, cost);
  constexpr double kEps = 1e-12;
  std::vector<EditOp> ops;
  std::size_t i = a.size(), j = b.size();
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 && a[i - 1] == b[j - 1] &&
        d[i][j] >= d[i - 1][j - 1] + cost(a[i - 1], b[j - 1]) - kEps) {
      ops.push_back({EditKind::match, a[i - 1], b[j - 1]});
      --i, --j;
    } else if (i > 0 && j > 0 && a[i - 1] != b[j - 1] &&
               d[i][j] >= d[i - 1][j - 1] + cost(a[i - 1], b[j - 1]) - kEps) {
      ops.push_back({EditKind::substitute, a[i - 1], b[j - 1]});
      --i, --j;
    } else if (i > 0 && d[i][j] >= d[i - 1][j] + cost(a[i - 1], 0) - kEps) {
      ops.push_back({EditKind::erase, a[i - 1], 0});
      --i;
    } else {
      ops.push_back({EditKind::insert, 0, b[j - 1]});
      --j;
    }
  }
  std::reverse(ops.begin(), ops.end());
  return Alignment{std::move(ops)};
}

// Deleting one of two equal adjacent characters costs the same either way;
// this moves such deletions to the right of their match so repeated-letter
// gaps never open a neighbouring substitution run. Cost-preserving.
inline Alignment canonicalize_repeats(Alignment alignment) {
  auto& ops = alignment.ops;
  bool moved = true;
  while (moved) {
    moved = false;
    for (std::size_t k = 0; k + 1 < ops.size(); ++k) {
      if (ops[k].kind == EditKind::erase && ops[k + 1].kind == EditKind::match &&
          ops[k].source == ops[k + 1].source) {
        std::swap(ops[k], ops[k + 1]);
        moved = true;
      }
    }
  }
  return alignment;
}

inline Alignment align(std::u32string_view a, std::u32string_view b) {
  return align(a, b, UnitCost{});
}

inline Alignment align(std::string_view a, std::string_view b) {
  return align(uni::decode_utf8(a), uni::decode_utf8(b), UnitCost{});
}

}  // namespace spellnorm

#pragma once

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "spellnorm/corpus.hpp"
#include "spellnorm/error.hpp"

// Learning-curve protocol: contiguous n-token chunks spaced equidistantly
// across the training set, with the chunk count reduced for large n so that
// no two chunks overlap by more than half their size.

namespace spellnorm {

inline constexpr int kDefaultMaxSplits = 10;

struct CurvePoint {
  std::size_t train_size = 0;
  std::vector<std::optional<double>> per_split_accuracy;  // nullopt = failed split

  std::size_t splits_used() const { return per_split_accuracy.size(); }

  std::optional<double> mean_accuracy() const {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& a : per_split_accuracy) {
      if (!a) continue;
      sum += *a;
      ++n;
    }
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
  }
};

namespace detail {

inline std::size_t round_half_up(double v) {
  return static_cast<std::size_t>(std::floor(v + 0.5));
}

// Chunk start offsets for k equidistant chunks of n over T tokens.
inline std::vector<std::size_t> chunk_starts(std::size_t total, std::size_t n, std::size_t k) {
  std::vector<std::size_t> starts;
  if (k == 1) return {0};
  for (std::size_t i = 0; i < k; ++i)
    starts.push_back(round_half_up(static_cast<double>(i) *
                                   static_cast<double>(total - n) /
                                   static_cast<double>(k - 1)));
  return starts;
}

inline bool overlap_ok(const std::vector<std::size_t>& starts, std::size_t n) {
  const std::size_t max_overlap = (n + 1) / 2;  // ceil(n/2)
  for (std::size_t i = 1; i < starts.size(); ++i) {
    const std::size_t gap = starts[i] - starts[i - 1];
    if (gap < n && n - gap > max_overlap) return false;
  }
  return true;
}

}  // namespace detail

// k = min(max_splits, floor((T-n)/ceil(n/2)) + 1), then reduced further if
// start rounding still produced a >50% overlap anywhere.
inline std::vector<Dataset> make_splits(const Dataset& train, std::size_t n,
                                        std::size_t max_splits = kDefaultMaxSplits) {
  const std::size_t total = train.pairs.size();
  if (n == 0 || n > total)
    throw ConfigError("split size " + std::to_string(n) + " exceeds training set size " +
                      std::to_string(total));
  if (max_splits == 0) throw ConfigError("max_splits must be positive");

  const std::size_t step = std::max<std::size_t>(1, (n + 1) / 2);
  std::size_t k = std::min<std::size_t>(max_splits, (total - n) / step + 1);
  std::vector<std::size_t> starts = detail::chunk_starts(total, n, k);
  while (k > 1 && !detail::overlap_ok(starts, n)) {
    --k;
    starts = detail::chunk_starts(total, n, k);
  }

  std::vector<Dataset> splits;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    Dataset chunk;
    chunk.name = train.name + "[" + std::to_string(n) + "/" + std::to_string(i) + "]";
    chunk.split = train.split;
    chunk.pairs.assign(train.pairs.begin() + static_cast<std::ptrdiff_t>(starts[i]),
                       train.pairs.begin() + static_cast<std::ptrdiff_t>(starts[i] + n));
    splits.push_back(std::move(chunk));
  }
  return splits;
}

inline std::vector<std::size_t> default_curve_sizes(std::size_t train_size) {
  std::vector<std::size_t> sizes;
  for (std::size_t n : {100, 250, 500, 1000, 2500, 5000, 10000, 25000, 50000})
    if (n <= train_size) sizes.push_back(n);
  return sizes;
}

// Trains one model per split via `train_fn(chunk)` and scores it on the dev
// set with `accuracy_fn(model)`. Failures on individual splits are recorded
// and skipped.
template <typename TrainFn, typename AccuracyFn>
std::vector<CurvePoint> learning_curve(const Dataset& train,
                                       const std::vector<std::size_t>& sizes,
                                       std::size_t max_splits, TrainFn&& train_fn,
                                       AccuracyFn&& accuracy_fn) {
  std::vector<CurvePoint> points;
  for (std::size_t n : sizes) {
    CurvePoint point;
    point.train_size = n;
    for (const Dataset& chunk : make_splits(train, n, max_splits)) {
      try {
        point.per_split_accuracy.push_back(accuracy_fn(train_fn(chunk)));
      } catch (const Error&) {
        point.per_split_accuracy.push_back(std::nullopt);
      }
    }
    points.push_back(std::move(point));
  }
  return points;
}

// CSV emission: backend,n,split,accuracy with one `mean` row per size.
inline std::string curve_to_csv(const std::string& backend,
                                const std::vector<CurvePoint>& points) {
  std::string csv = "backend,n,split,accuracy\n";
  char buf[64];
  for (const CurvePoint& p : points) {
    for (std::size_t i = 0; i < p.per_split_accuracy.size(); ++i) {
      if (p.per_split_accuracy[i])
        std::snprintf(buf, sizeof(buf), "%.6f", *p.per_split_accuracy[i]);
      else
        std::snprintf(buf, sizeof(buf), "failed");
      csv += backend + "," + std::to_string(p.train_size) + "," + std::to_string(i) + "," +
             buf + "\n";
    }
    if (const auto mean = p.mean_accuracy()) {
      std::snprintf(buf, sizeof(buf), "%.6f", *mean);
      csv += backend + "," + std::to_string(p.train_size) + ",mean," + buf + "\n";
    }
  }
  return csv;
}

}  // namespace spellnorm

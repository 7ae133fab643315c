#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "spellnorm/eval.hpp"
#include "spellnorm/lookup.hpp"

using namespace spellnorm;

namespace {

Dataset make(std::initializer_list<std::pair<const char*, const char*>> pairs) {
  Dataset ds;
  for (const auto& [s, t] : pairs) ds.pairs.push_back({s, t});
  return ds;
}

}  // namespace

TEST_CASE("lookup picks the majority target") {
  const LookupTable table =
      train_lookup(make({{"ther", "there"}, {"ther", "there"}, {"ther", "their"}}));
  const Candidate c = lookup_normalize(table, "ther");
  CHECK(c.form == "there");
  CHECK(c.score == Catch::Approx(std::log(2.0 / 3.0)));
  CHECK(c.origin == "lookup");
}

TEST_CASE("lookup ties break lexicographically") {
  const LookupTable table = train_lookup(make({{"a", "x"}, {"a", "y"}}));
  CHECK(lookup_normalize(table, "a").form == "x");
}

TEST_CASE("empty training set gives the identity everywhere") {
  const LookupTable table = train_lookup(make({}));
  CHECK(table.empty());
  const Candidate c = lookup_normalize(table, "anything");
  CHECK(c.form == "anything");
  CHECK(c.is_sentinel());
}

TEST_CASE("unseen tokens pass through with the sentinel score") {
  const LookupTable table = train_lookup(make({{"ther", "there"}}));
  const Candidate c = lookup_normalize(table, "thar");
  CHECK(c.form == "thar");
  CHECK(c.is_sentinel());
}

TEST_CASE("seen identity mapping keeps a real score") {
  const LookupTable table = train_lookup(make({{"the", "the"}, {"the", "the"}}));
  const Candidate c = lookup_normalize(table, "the");
  CHECK(c.form == "the");
  CHECK(c.score == Catch::Approx(0.0));
  CHECK_FALSE(c.is_sentinel());
}

TEST_CASE("lookup on its own training set attains maximum accuracy") {
  const Dataset ds = make({{"a", "x"},
                           {"a", "y"},
                           {"a", "x"},
                           {"b", "b"},
                           {"c", "d"},
                           {"c", "e"},
                           {"ther", "there"},
                           {"ther", "their"},
                           {"ther", "there"}});
  const LookupTable table = train_lookup(ds);
  std::size_t correct = 0;
  for (const auto& p : ds.pairs)
    if (lookup_normalize(table, p.source).form == p.target) ++correct;
  const double acc = static_cast<double>(correct) / static_cast<double>(ds.pairs.size());
  CHECK(acc == Catch::Approx(maximum_accuracy(ds)).epsilon(1e-12));
}

TEST_CASE("lookup never invents targets and ignores duplication") {
  const Dataset ds = make({{"u", "v"}, {"u", "w"}, {"x", "x"}});
  const LookupTable once = train_lookup(ds);
  Dataset doubled = ds;
  for (const auto& p : ds.pairs) doubled.pairs.push_back(p);
  const LookupTable twice = train_lookup(doubled);
  for (const auto& [source, entry] : once.mapping) {
    CHECK(twice.mapping.at(source).target == entry.target);
    bool observed = false;
    for (const auto& p : ds.pairs)
      if (p.source == source && p.target == entry.target) observed = true;
    CHECK(observed);
  }
}

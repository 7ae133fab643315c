#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "spellnorm/rules.hpp"
#include "support/oracles.hpp"

using namespace spellnorm;

namespace {

Dataset make(std::initializer_list<std::pair<const char*, const char*>> pairs) {
  Dataset ds;
  for (const auto& [s, t] : pairs) ds.pairs.push_back({s, t});
  return ds;
}

}  // namespace

TEST_CASE("rules from a single substitution pair") {
  const RuleSet set = learn_rules(make({{"vnd", "und"}}));
  REQUIRE(set.rules.size() == 3);
  CHECK(set.rules.at({U'v', kBoundary, U'n'}).at(U"u") == 1);
  CHECK(set.rules.at({U'n', U'v', U'd'}).at(U"n") == 1);
  CHECK(set.rules.at({U'd', U'n', kBoundary}).at(U"d") == 1);

  const Candidate c = apply_rules(set, "vnd");
  CHECK(c.form == "und");
  CHECK(c.score == Catch::Approx(0.0));  // every position has probability 1
}

TEST_CASE("identity pairs give identity rules") {
  const RuleSet set = learn_rules(make({{"abc", "abc"}}));
  REQUIRE(set.rules.size() == 3);
  for (const auto& [key, targets] : set.rules) {
    REQUIRE(targets.size() == 1);
    CHECK(targets.begin()->first == std::u32string(1, key.source));
  }
}

TEST_CASE("trailing insertions merge into the previous position") {
  const RuleSet set = learn_rules(make({{"ther", "there"}, {"ther", "there"},
                                        {"ther", "there"}}));
  CHECK(set.rules.at({U'r', U'e', kBoundary}).at(U"re") == 3);
  CHECK(apply_rules(set, "ther").form == "there");
}

TEST_CASE("word-initial insertions attach to the following position") {
  const RuleSet set = learn_rules(make({{"x", "ax"}}));
  CHECK(set.rules.at({U'x', kBoundary, kBoundary}).at(U"ax") == 1);
}

TEST_CASE("empty training set is a training error") {
  CHECK_THROWS_AS(learn_rules(make({})), TrainError);
}

TEST_CASE("probability-weighted choice per position") {
  const RuleSet set = learn_rules(make({{"ver", "uer"},
                                        {"ver", "uer"},
                                        {"ver", "uer"},
                                        {"ver", "ver"}}));
  const Candidate c = apply_rules(set, "ver");
  CHECK(c.form == "uer");
  CHECK(c.score == Catch::Approx(std::log(3.0 / 4.0)));
}

TEST_CASE("tokens without any rules pass through") {
  const RuleSet set = learn_rules(make({{"ab", "ab"}}));
  const Candidate c = apply_rules(set, "zq");
  CHECK(c.form == "zq");
  CHECK(c.score == Catch::Approx(0.0));  // identity backoff has probability 1
}

TEST_CASE("context-free backoff fires when the exact context is unseen") {
  const RuleSet set = learn_rules(make({{"va", "ua"}}));  // v seen with right ctx 'a'
  const Candidate c = apply_rules(set, "vb");             // right ctx 'b' unseen
  CHECK(c.form[0] == 'u');
}

TEST_CASE("identity training data normalizes training tokens to themselves") {
  const Dataset ds = make({{"alpha", "alpha"}, {"beta", "beta"}, {"gamma", "gamma"}});
  const RuleSet set = learn_rules(ds);
  for (const auto& p : ds.pairs) CHECK(apply_rules(set, p.source).form == p.source);
}

TEST_CASE("per-key probabilities sum to one") {
  const RuleSet set = learn_rules(make(
      {{"vnd", "und"}, {"vns", "uns"}, {"vnd", "vnd"}, {"ver", "uer"}, {"ver", "wer"}}));
  for (const auto& [key, targets] : set.rules) {
    double sum = 0.0;
    for (const auto& [target, count] : targets)
      sum += static_cast<double>(count) / static_cast<double>(set.context_totals.at(key));
    CHECK(sum == Catch::Approx(1.0).margin(1e-9));
  }
}

TEST_CASE("rule counts are invariant under training order") {
  const Dataset ds = make(
      {{"vnd", "und"}, {"ther", "there"}, {"abc", "abc"}, {"vns", "uns"}, {"x", "ax"}});
  Dataset shuffled = ds;
  std::mt19937 rng(99);
  std::shuffle(shuffled.pairs.begin(), shuffled.pairs.end(), rng);
  const RuleSet a = learn_rules(ds);
  const RuleSet b = learn_rules(shuffled);
  CHECK(a.rules == b.rules);
  CHECK(a.context_totals == b.context_totals);
}

TEST_CASE("greedy application matches exhaustive enumeration") {
  std::mt19937 rng(31337);
  const std::string alphabet = "abcd";
  auto random_word = [&](std::size_t min_len, std::size_t max_len) {
    std::string w;
    const std::size_t len = min_len + rng() % (max_len - min_len + 1);
    for (std::size_t i = 0; i < len; ++i) w.push_back(alphabet[rng() % alphabet.size()]);
    return w;
  };
  for (int trial = 0; trial < 50; ++trial) {
    Dataset ds;
    const int n = 3 + static_cast<int>(rng() % 8);
    for (int i = 0; i < n; ++i) {
      const std::string src = random_word(1, 6);
      std::string tgt = src;
      // random single-character mutation keeps alignments simple
      if (!tgt.empty() && rng() % 2) tgt[rng() % tgt.size()] = alphabet[rng() % 4];
      ds.pairs.push_back({src, tgt});
    }
    const RuleSet set = learn_rules(ds);
    for (int q = 0; q < 10; ++q) {
      const std::string token = random_word(1, 6);
      const Candidate fast = apply_rules(set, token);
      const auto oracle = oracles::enumerate_rule_outputs(set, token);
      CHECK(fast.score == Catch::Approx(oracle.best_log).margin(1e-9));
      CHECK(std::find(oracle.argmax_forms.begin(), oracle.argmax_forms.end(), fast.form) !=
            oracle.argmax_forms.end());
    }
  }
}

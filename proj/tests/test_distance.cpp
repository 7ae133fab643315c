#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "spellnorm/distance.hpp"
#include "support/oracles.hpp"

using namespace spellnorm;

namespace {

Dataset make(std::initializer_list<std::pair<const char*, const char*>> pairs) {
  Dataset ds;
  for (const auto& [s, t] : pairs) ds.pairs.push_back({s, t});
  return ds;
}

Dataset repeat(const char* s, const char* t, int n) {
  Dataset ds;
  for (int i = 0; i < n; ++i) ds.pairs.push_back({s, t});
  return ds;
}

}  // namespace

TEST_CASE("learned costs order by frequency") {
  Dataset ds;
  for (int i = 0; i < 90; ++i) ds.pairs.push_back({"y", "i"});
  for (int i = 0; i < 10; ++i) ds.pairs.push_back({"y", "o"});
  const EditWeightMatrix w = learn_weights(ds);
  CHECK(w.costs.at({U'y', U'i'}) < w.costs.at({U'y', U'o'}));
  CHECK(w.costs.at({U'y', U'o'}) == Catch::Approx(1.0));  // rarest op scales to 1
  CHECK(w(U'a', U'a') == 0.0);
}

TEST_CASE("identical-pair corpus keeps unit costs") {
  const EditWeightMatrix w = learn_weights(make({{"abc", "abc"}, {"xy", "xy"}}));
  CHECK(w.costs.empty());
  CHECK(w.default_cost == 1.0);
  CHECK(w(U'a', U'b') == 1.0);
  CHECK(w(U'q', U'q') == 0.0);
}

TEST_CASE("single observed op gets the minimum scaled cost") {
  const EditWeightMatrix w = learn_weights(repeat("vnd", "und", 1));
  // the only non-match op has relative frequency 1, hence -log = 0
  CHECK(w.costs.at({U'v', U'u'}) == 0.0);
}

TEST_CASE("empty dataset is a training error") {
  CHECK_THROWS_AS(learn_weights(make({})), TrainError);
}

TEST_CASE("distance normalization finds the nearest lexicon entry") {
  Lexicon lex;
  lex.add("their", 5);
  lex.add("there", 5);
  lex.add("the", 50);
  EditWeightMatrix unit;
  const Candidate c = distance_normalize(unit, lex, "theyr", 0.5);
  CHECK(c.form == "their");
  CHECK(c.score == Catch::Approx(-1.0));
  CHECK(c.origin == "distance");
}

TEST_CASE("lexicon tokens map to themselves") {
  Lexicon lex;
  lex.add("their", 1);
  lex.add("apple", 1);
  EditWeightMatrix unit;
  const Candidate c = distance_normalize(unit, lex, "apple", 0.5);
  CHECK(c.form == "apple");
  CHECK(c.score == 0.0);
}

TEST_CASE("threshold falls back to identity") {
  Lexicon lex;
  lex.add("the", 1);
  EditWeightMatrix unit;
  const Candidate c = distance_normalize(unit, lex, "zzzzz", 0.5);
  CHECK(c.form == "zzzzz");
  CHECK(c.is_sentinel());
}

TEST_CASE("empty lexicon is a configuration error") {
  EditWeightMatrix unit;
  CHECK_THROWS_AS(distance_normalize(unit, Lexicon{}, "x", 0.5), ConfigError);
}

TEST_CASE("ties break by frequency then code-point order") {
  EditWeightMatrix unit;
  SECTION("frequency wins") {
    Lexicon lex;
    lex.add("cat", 1);
    lex.add("car", 9);
    CHECK(distance_normalize(unit, lex, "caz", 1.0).form == "car");
  }
  SECTION("lexicographic at equal frequency") {
    Lexicon lex;
    lex.add("cat", 3);
    lex.add("car", 3);
    CHECK(distance_normalize(unit, lex, "caz", 1.0).form == "car");
  }
}

TEST_CASE("output is a lexicon entry or the token itself") {
  std::mt19937 rng(2024);
  Lexicon lex;
  const std::string words[] = {"alpha", "beta", "gamma", "delta", "epsilon"};
  for (const auto& w : words) lex.add(w, 1 + rng() % 5);
  EditWeightMatrix unit;
  const std::string alphabet = "abgde";
  for (int i = 0; i < 100; ++i) {
    std::string token;
    const std::size_t len = 1 + rng() % 7;
    for (std::size_t k = 0; k < len; ++k) token.push_back(alphabet[rng() % alphabet.size()]);
    const Candidate c = distance_normalize(unit, lex, token, 0.5);
    CHECK((lex.contains(c.form) || c.form == token));
  }
}

TEST_CASE("lowering the threshold only switches answers to identity") {
  Lexicon lex;
  lex.add("their", 2);
  lex.add("there", 2);
  lex.add("apple", 2);
  EditWeightMatrix unit;
  const std::string tokens[] = {"theyr", "thar", "apple", "applf", "zzz", "b"};
  for (const auto& token : tokens) {
    std::string previous_form;
    for (const double threshold : {2.0, 1.5, 1.0, 0.75, 0.5, 0.25, 0.1}) {
      const Candidate c = distance_normalize(unit, lex, token, threshold);
      if (!previous_form.empty() && c.form != token) CHECK(c.form == previous_form);
      if (c.form != token) previous_form = c.form;
    }
  }
}

TEST_CASE("weighted search agrees with exhaustive scan and the recursive oracle") {
  std::mt19937 rng(77);
  const std::string alphabet = "abc";
  auto random_word = [&](std::size_t max_len) {
    std::string w;
    const std::size_t len = 1 + rng() % max_len;
    for (std::size_t i = 0; i < len; ++i) w.push_back(alphabet[rng() % alphabet.size()]);
    return w;
  };
  EditWeightMatrix w;
  w.costs[{U'a', U'b'}] = 0.25;
  w.costs[{U'b', 0}] = 0.5;
  w.costs[{0, U'c'}] = 0.75;
  Lexicon lex;
  for (int i = 0; i < 12; ++i) lex.add(random_word(5), 1 + rng() % 3);
  for (int i = 0; i < 60; ++i) {
    const std::string token = random_word(6);
    const Candidate fast = distance_normalize(w, lex, token, 10.0);
    double best = 1e18;
    for (const auto& [word, freq] : lex.entries)
      best = std::min(best, oracles::naive_edit_distance(uni::decode_utf8(token),
                                                         uni::decode_utf8(word), w));
    REQUIRE_FALSE(fast.is_sentinel());
    CHECK(-fast.score == Catch::Approx(best).margin(1e-9));
  }
}

#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "spellnorm/align.hpp"
#include "spellnorm/distance.hpp"
#include "support/oracles.hpp"

using namespace spellnorm;

TEST_CASE("unit edit distance basics") {
  CHECK(edit_distance("kitten", "sitting") == 3.0);
  CHECK(edit_distance("abc", "abc") == 0.0);
  CHECK(edit_distance("", "ab") == 2.0);
  CHECK(edit_distance("üdvözülendők", "üdvözülendőek") == 1.0);
}

TEST_CASE("alignment reconstructs both strings") {
  const std::pair<const char*, const char*> cases[] = {
      {"vnd", "und"}, {"", "ab"}, {"ther", "there"}, {"abc", ""}, {"kitten", "sitting"}};
  for (const auto& [a, b] : cases) {
    const Alignment al = align(a, b);
    CHECK(uni::encode_utf8(al.source()) == a);
    CHECK(uni::encode_utf8(al.target()) == b);
  }
}

TEST_CASE("alignment ops and tie-breaking") {
  SECTION("substitution at the start") {
    const Alignment al = align("vnd", "und");
    REQUIRE(al.ops.size() == 3);
    CHECK(al.ops[0].kind == EditKind::substitute);
    CHECK(al.ops[0].source == U'v');
    CHECK(al.ops[0].target == U'u');
    CHECK(al.ops[1].kind == EditKind::match);
    CHECK(al.ops[2].kind == EditKind::match);
  }
  SECTION("pure insertion") {
    const Alignment al = align("", "ab");
    REQUIRE(al.ops.size() == 2);
    CHECK(al.ops[0].kind == EditKind::insert);
    CHECK(al.ops[1].kind == EditKind::insert);
  }
  SECTION("trailing insert") {
    const Alignment al = align("ther", "there");
    REQUIRE(al.ops.size() == 5);
    CHECK(al.ops.back().kind == EditKind::insert);
    CHECK(al.ops.back().target == U'e');
  }
}

TEST_CASE("alignment cost equals edit distance") {
  std::mt19937 rng(12345);
  const std::u32string alphabet = U"abcd";
  auto random_word = [&](std::size_t max_len) {
    std::u32string w;
    const std::size_t len = rng() % (max_len + 1);
    for (std::size_t i = 0; i < len; ++i) w.push_back(alphabet[rng() % alphabet.size()]);
    return w;
  };
  for (int i = 0; i < 300; ++i) {
    const std::u32string a = random_word(8), b = random_word(8);
    const Alignment al = align(a, b, UnitCost{});
    double cost = 0.0;
    for (const EditOp& op : al.ops) cost += UnitCost{}(op.source, op.target);
    CHECK(cost == edit_distance(a, b, UnitCost{}));
    CHECK(al.source() == a);
    CHECK(al.target() == b);
  }
}

TEST_CASE("unit edit distance matches the recursive oracle and is a metric") {
  std::mt19937 rng(987);
  const std::u32string alphabet = U"abc";
  auto random_word = [&]() {
    std::u32string w;
    const std::size_t len = rng() % 6;
    for (std::size_t i = 0; i < len; ++i) w.push_back(alphabet[rng() % alphabet.size()]);
    return w;
  };
  for (int i = 0; i < 200; ++i) {
    const std::u32string a = random_word(), b = random_word(), c = random_word();
    const double dab = edit_distance(a, b);
    CHECK(dab == oracles::naive_unit_edit_distance(a, b));
    CHECK(dab == edit_distance(b, a));                            // symmetry
    CHECK(edit_distance(a, a) == 0.0);                            // identity
    CHECK(dab <= edit_distance(a, c) + edit_distance(c, b));      // triangle
  }
}

TEST_CASE("weighted distance respects the cost matrix") {
  EditWeightMatrix w;
  w.costs[{U'v', U'u'}] = 0.1;
  w.default_cost = 1.0;
  CHECK(edit_distance(std::u32string(U"vnd"), std::u32string(U"und"), w) ==
        Catch::Approx(0.1));
  // zero-cost matches for any character
  CHECK(edit_distance(std::u32string(U"vnd"), std::u32string(U"vnd"), w) == 0.0);
}

TEST_CASE("bounded edit distance aborts early but agrees under the bound") {
  std::mt19937 rng(555);
  const std::u32string alphabet = U"abcd";
  auto random_word = [&]() {
    std::u32string w;
    const std::size_t len = rng() % 7;
    for (std::size_t i = 0; i < len; ++i) w.push_back(alphabet[rng() % alphabet.size()]);
    return w;
  };
  for (int i = 0; i < 200; ++i) {
    const std::u32string a = random_word(), b = random_word();
    const double exact = edit_distance(a, b);
    const auto bounded = edit_distance_bounded(a, b, UnitCost{}, exact);
    REQUIRE(bounded);
    CHECK(*bounded == exact);
    if (exact > 0.5) CHECK_FALSE(edit_distance_bounded(a, b, UnitCost{}, exact - 0.5));
  }
}

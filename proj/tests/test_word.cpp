#include <doctest.h>

#include <algorithm>
#include <random>

#include "fixtures.hpp"

using namespace toptile;

TEST_CASE("lex_cmp examples") {
  CHECK(lex_cmp(Word::parse("12"), Word::parse("21")) == Ordering::greater);
  CHECK(lex_cmp(Word::parse("11"), Word::parse("11")) == Ordering::equal);
  CHECK(lex_cmp(Word::parse("34"), Word::parse("33")) == Ordering::less);
  CHECK_THROWS_AS(lex_cmp(Word::parse("1"), Word::parse("11")), std::invalid_argument);
}

namespace {
std::vector<Word> all_words(int M, int n) {
  std::vector<Word> out{Word{}};
  for (int i = 0; i < n; ++i) {
    std::vector<Word> next;
    for (const auto& w : out)
      for (int s = 1; s <= M; ++s) next.push_back(w.appended(Symbol(s)));
    out = std::move(next);
  }
  return out;
}
}  // namespace

TEST_CASE("top order is total on each length") {
  for (int n = 1; n <= 4; ++n) {
    const auto ws = all_words(4, n);
    for (const auto& u : ws)
      for (const auto& v : ws) {
        const Ordering uv = lex_cmp(u, v), vu = lex_cmp(v, u);
        REQUIRE((uv == Ordering::equal) == (u == v));
        REQUIRE((uv == Ordering::greater) == (vu == Ordering::less));
      }
    // Transitivity via a sort: adjacent pairs strictly decrease, and the
    // result agrees with digit order.
    auto sorted = ws;
    std::sort(sorted.begin(), sorted.end(), TopOrderGreater{});
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
      REQUIRE(lex_cmp(sorted[i], sorted[i + 1]) == Ordering::greater);
    CHECK(sorted == ws);
    if (n <= 3)
      for (const auto& a : ws)
        for (const auto& b : ws)
          for (const auto& c : ws)
            if (lex_cmp(a, b) == Ordering::greater && lex_cmp(b, c) == Ordering::greater)
              REQUIRE(lex_cmp(a, c) == Ordering::greater);
  }
}

TEST_CASE("shift") {
  CHECK(shift(Word::parse("1414")) == Word::parse("414"));
  CHECK(shift(Word::parse("2")) == Word{});
  CHECK_THROWS_AS(shift(Word{}), std::invalid_argument);
  std::mt19937_64 rng(5);
  for (int t = 0; t < 200; ++t) {
    const Word w = fx::random_word(rng, 7, 2 + t % 10);
    Word s = w;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) s = shift(s);
    REQUIRE(s == Word{w.back()});
    const Word once = shift(w);
    REQUIRE(once.size() == w.size() - 1);
    for (std::size_t i = 0; i < once.size(); ++i) REQUIRE(once[i] == w[i + 1]);
  }
}

TEST_CASE("truncate") {
  CHECK(truncate(PeriodicAddress::parse("(14)"), 5) == Word::parse("14141"));
  CHECK(truncate(PeriodicAddress(Word::parse("5324"), Word::parse("5324")), 4) == Word::parse("5324"));
  CHECK(truncate(PeriodicAddress::parse("2(1)"), 3) == Word::parse("211"));
  CHECK(truncate(PeriodicAddress::parse("(3)"), 0) == Word{});
  const auto a = PeriodicAddress::parse("12(345)");
  for (std::size_t n = 0; n < 64; ++n) REQUIRE(truncate(a, n + 1).prefix(n) == truncate(a, n));
}

TEST_CASE("reverse") {
  CHECK(reverse(Word::parse("1414")) == Word::parse("4141"));
  CHECK(reverse(Word{}) == Word{});
  std::mt19937_64 rng(9);
  for (int t = 0; t < 100; ++t) {
    const Word w = fx::random_word(rng, 5, t % 12);
    REQUIRE(reverse(reverse(w)) == w);
  }
}

TEST_CASE("address parsing") {
  const auto a = PeriodicAddress::parse("1(14)");
  CHECK(a.preperiod == Word{1});
  CHECK(a.period == Word::parse("14"));
  CHECK(a.str() == "1(14)");
  CHECK(PeriodicAddress::parse("(5324)").at(5) == 3);
  CHECK(PeriodicAddress::parse("(1414)").normalized() == PeriodicAddress::parse("(14)"));
  CHECK(PeriodicAddress::parse("14(14)").normalized() == PeriodicAddress::parse("(14)"));
  CHECK(PeriodicAddress::parse("2(1)").prepended(3) == PeriodicAddress::parse("32(1)"));
  CHECK_THROWS_AS(PeriodicAddress::parse("()"), std::invalid_argument);
  CHECK_THROWS_AS(PeriodicAddress::parse("12"), std::invalid_argument);
  CHECK_THROWS_AS(PeriodicAddress::parse("(1"), std::invalid_argument);
  CHECK_THROWS_AS(Word::parse("102"), std::invalid_argument);
  CHECK_THROWS_AS(Word::parse("1a"), std::invalid_argument);
}

TEST_CASE("address_distance") {
  const auto one = PeriodicAddress::constant(1);
  CHECK(address_distance(one, one, 32) == 0);
  CHECK(address_distance(PeriodicAddress::parse("11(1)"), PeriodicAddress::parse("12(1)"), 32) == 0.5);
  CHECK(address_distance(one, PeriodicAddress::parse("1(2)"), 32) == 0.5);
  CHECK(address_distance(PeriodicAddress::parse("(2)"), one, 32) == 1.0);
  CHECK(address_distance(PeriodicAddress::parse("(14)"), PeriodicAddress::parse("(1414)"), 40) == 0);
  CHECK_THROWS(address_distance(one, one, 0));
}

TEST_CASE("word trie") {
  WordTrie t(4);
  for (const char* s : {"21", "13", "11", "24", "3"}) t.insert(Word::parse(s));
  CHECK(t.contains(Word::parse("13")));
  CHECK_FALSE(t.contains(Word{1}));
  CHECK(t.find(Word{1}) >= 0);
  CHECK(t.find(Word::parse("44")) == -1);
  const auto two = t.completions(0, 2);
  CHECK(two == std::vector<Word>{Word::parse("11"), Word::parse("13"), Word::parse("21"),
                                 Word::parse("24")});
  CHECK(t.completions(t.find(Word{2}), 1) == std::vector<Word>{Word{1}, Word{4}});
  CHECK(t.completions(0, 1) == std::vector<Word>{Word{3}});
  CHECK_THROWS(t.insert(Word{5}));
}

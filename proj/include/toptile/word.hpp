#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace toptile {

/// Map index, 1-based as in the usual address notation.
using Symbol = std::uint8_t;

/// Finite string over {1..M}.
class Word {
 public:
  Word() = default;
  explicit Word(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {}
  Word(std::initializer_list<Symbol> symbols) : symbols_(symbols) {}

  /// Parses a digit string such as "1414". Digits 1..9 only.
  static Word parse(std::string_view digits);

  std::size_t size() const { return symbols_.size(); }
  bool empty() const { return symbols_.empty(); }
  Symbol operator[](std::size_t i) const { return symbols_[i]; }
  Symbol front() const { return symbols_.front(); }
  Symbol back() const { return symbols_.back(); }
  auto begin() const { return symbols_.begin(); }
  auto end() const { return symbols_.end(); }
  const std::vector<Symbol>& symbols() const { return symbols_; }

  void push_back(Symbol s) { symbols_.push_back(s); }
  Word appended(Symbol s) const;
  Word prepended(Symbol s) const;
  Word prefix(std::size_t n) const;
  Word suffix_from(std::size_t start) const;

  /// Digits when every symbol is ≤ 9, otherwise dot-separated numbers.
  std::string str() const;

  friend Word operator+(const Word& u, const Word& v);
  friend bool operator==(const Word&, const Word&) = default;

 private:
  std::vector<Symbol> symbols_;
};

enum class Ordering { less, equal, greater };

/// Top order on equal-length words: symbol 1 is greatest, then 2, ... M.
/// Throws std::invalid_argument on a length mismatch.
Ordering lex_cmp(const Word& u, const Word& v);

/// Strict "u is higher than v" in top order; usable as a sort comparator to
/// get descending top order. Words of different length compare by length.
struct TopOrderGreater {
  bool operator()(const Word& u, const Word& v) const;
};

Word shift(const Word& w);
Word reverse(const Word& w);

/// Eventually periodic infinite address: preperiod followed by period repeated.
struct PeriodicAddress {
  Word preperiod;
  Word period;

  PeriodicAddress() = default;
  PeriodicAddress(Word pre, Word per);

  /// Syntax: digits with the periodic block in parentheses, e.g. "1(14)",
  /// "(5324)", "(2)".
  static PeriodicAddress parse(std::string_view text);

  /// Constant address s s s ...
  static PeriodicAddress constant(Symbol s) { return {Word{}, Word{s}}; }

  /// Symbol at 0-based position n of the infinite expansion.
  Symbol at(std::size_t n) const;

  /// Prepends symbol s: s followed by this address.
  PeriodicAddress prepended(Symbol s) const;

  /// Minimal period and preperiod describing the same infinite string.
  PeriodicAddress normalized() const;

  std::string str() const;

  friend bool operator==(const PeriodicAddress&, const PeriodicAddress&) = default;
};

Word truncate(const PeriodicAddress& a, std::size_t n);

/// 2^-p where p is the common-prefix length within the horizon; 0 when the
/// two addresses agree on the whole horizon.
double address_distance(const PeriodicAddress& u, const PeriodicAddress& v,
                        std::size_t horizon);

struct WordHash {
  std::size_t operator()(const Word& w) const noexcept;
};

/// Prefix tree over {1..M}. Node 0 is the empty word; children are kept in
/// symbol order, so a depth-first walk lists each level in descending top
/// order.
class WordTrie {
 public:
  explicit WordTrie(int alphabet_size);

  int alphabet_size() const { return alphabet_; }

  /// Inserts w (and implicitly its prefixes as interior nodes); returns the
  /// node of w.
  std::int32_t insert(const Word& w);

  /// Node id of w (inserted or interior) or -1.
  std::int32_t find(const Word& w) const;
  /// True when w itself was inserted.
  bool contains(const Word& w) const;

  /// Child of node along symbol s, or -1.
  std::int32_t child(std::int32_t node, Symbol s) const;

  /// Inserted words of length `depth` below node, descending top order, as
  /// suffixes relative to the node.
  std::vector<Word> completions(std::int32_t node, std::size_t depth) const;

  std::size_t node_count() const { return terminal_.size(); }

 private:
  int alphabet_;
  std::vector<std::int32_t> children_;
  std::vector<std::uint8_t> terminal_;
};

}  // namespace toptile

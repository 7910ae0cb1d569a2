#include "toptile/word.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace toptile {

Word Word::parse(std::string_view digits) {
  std::vector<Symbol> out;
  out.reserve(digits.size());
  for (char ch : digits) {
    if (ch < '1' || ch > '9')
      throw std::invalid_argument("word symbols must be digits 1..9, got '" +
                                  std::string(1, ch) + "'");
    out.push_back(static_cast<Symbol>(ch - '0'));
  }
  return Word(std::move(out));
}

Word Word::appended(Symbol s) const {
  Word w = *this;
  w.symbols_.push_back(s);
  return w;
}

Word Word::prepended(Symbol s) const {
  std::vector<Symbol> out;
  out.reserve(symbols_.size() + 1);
  out.push_back(s);
  out.insert(out.end(), symbols_.begin(), symbols_.end());
  return Word(std::move(out));
}

Word Word::prefix(std::size_t n) const {
  n = std::min(n, symbols_.size());
  return Word(std::vector<Symbol>(symbols_.begin(), symbols_.begin() + n));
}

Word Word::suffix_from(std::size_t start) const {
  start = std::min(start, symbols_.size());
  return Word(std::vector<Symbol>(symbols_.begin() + start, symbols_.end()));
}

std::string Word::str() const {
  const bool digits = std::all_of(symbols_.begin(), symbols_.end(),
                                  [](Symbol s) { return s >= 1 && s <= 9; });
  std::string out;
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (digits) {
      out.push_back(static_cast<char>('0' + symbols_[i]));
    } else {
      if (i) out.push_back('.');
      out += std::to_string(symbols_[i]);
    }
  }
  return out;
}

Word operator+(const Word& u, const Word& v) {
  std::vector<Symbol> out = u.symbols_;
  out.insert(out.end(), v.symbols_.begin(), v.symbols_.end());
  return Word(std::move(out));
}

Ordering lex_cmp(const Word& u, const Word& v) {
  if (u.size() != v.size())
    throw std::invalid_argument("lex_cmp: words of different length (" +
                                std::to_string(u.size()) + " vs " +
                                std::to_string(v.size()) + ")");
  for (std::size_t i = 0; i < u.size(); ++i) {
    // Smaller numeral ranks higher.
    if (u[i] < v[i]) return Ordering::greater;
    if (u[i] > v[i]) return Ordering::less;
  }
  return Ordering::equal;
}

bool TopOrderGreater::operator()(const Word& u, const Word& v) const {
  if (u.size() != v.size()) return u.size() < v.size();
  return lex_cmp(u, v) == Ordering::greater;
}

Word shift(const Word& w) {
  if (w.empty()) throw std::invalid_argument("shift of the empty word");
  return w.suffix_from(1);
}

Word reverse(const Word& w) {
  std::vector<Symbol> out(w.begin(), w.end());
  std::reverse(out.begin(), out.end());
  return Word(std::move(out));
}

PeriodicAddress::PeriodicAddress(Word pre, Word per)
    : preperiod(std::move(pre)), period(std::move(per)) {
  if (period.empty())
    throw std::invalid_argument("periodic address needs a nonempty period");
}

PeriodicAddress PeriodicAddress::parse(std::string_view text) {
  const auto open = text.find('(');
  const auto close = text.find(')');
  if (open == std::string_view::npos || close == std::string_view::npos ||
      close < open || close + 1 != text.size())
    throw std::invalid_argument("address must look like 'pre(period)', got '" +
                                std::string(text) + "'");
  Word pre = Word::parse(text.substr(0, open));
  Word per = Word::parse(text.substr(open + 1, close - open - 1));
  if (per.empty())
    throw std::invalid_argument("address period is empty: '" +
                                std::string(text) + "'");
  return {std::move(pre), std::move(per)};
}

Symbol PeriodicAddress::at(std::size_t n) const {
  if (n < preperiod.size()) return preperiod[n];
  return period[(n - preperiod.size()) % period.size()];
}

PeriodicAddress PeriodicAddress::prepended(Symbol s) const {
  return {preperiod.prepended(s), period};
}

PeriodicAddress PeriodicAddress::normalized() const {
  // Smallest period dividing the block.
  Word per = period;
  const std::size_t p = period.size();
  for (std::size_t d = 1; d <= p; ++d) {
    if (p % d) continue;
    bool ok = true;
    for (std::size_t i = d; i < p && ok; ++i) ok = period[i] == period[i - d];
    if (ok) {
      per = period.prefix(d);
      break;
    }
  }
  // Absorb trailing preperiod symbols into a rotated period.
  Word pre = preperiod;
  while (!pre.empty() && pre.back() == per.back()) {
    std::vector<Symbol> rotated;
    rotated.push_back(per.back());
    rotated.insert(rotated.end(), per.begin(), per.end() - 1);
    per = Word(std::move(rotated));
    pre = pre.prefix(pre.size() - 1);
  }
  return {pre, per};
}

std::string PeriodicAddress::str() const {
  return preperiod.str() + "(" + period.str() + ")";
}

Word truncate(const PeriodicAddress& a, std::size_t n) {
  std::vector<Symbol> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = a.at(i);
  return Word(std::move(out));
}

double address_distance(const PeriodicAddress& u, const PeriodicAddress& v,
                        std::size_t horizon) {
  if (horizon < 1) throw std::invalid_argument("address_distance: horizon < 1");
  std::size_t p = 0;
  while (p < horizon && u.at(p) == v.at(p)) ++p;
  if (p == horizon) return 0.0;
  return std::ldexp(1.0, -static_cast<int>(p));
}

std::size_t WordHash::operator()(const Word& w) const noexcept {
  std::uint64_t h = 1469598103934665603ull;
  for (Symbol s : w) {
    h ^= s;
    h *= 1099511628211ull;
  }
  h ^= w.size();
  return static_cast<std::size_t>(h * 1099511628211ull);
}

WordTrie::WordTrie(int alphabet_size) : alphabet_(alphabet_size) {
  if (alphabet_size < 1) throw std::invalid_argument("empty alphabet");
  children_.assign(alphabet_, -1);
  terminal_.push_back(0);
}

std::int32_t WordTrie::insert(const Word& w) {
  std::int32_t node = 0;
  for (Symbol s : w) {
    if (s < 1 || s > alphabet_)
      throw std::out_of_range("symbol " + std::to_string(s) +
                              " outside alphabet");
    auto& slot = children_[std::size_t(node) * alphabet_ + (s - 1)];
    if (slot < 0) {
      slot = static_cast<std::int32_t>(terminal_.size());
      terminal_.push_back(0);
      children_.resize(children_.size() + alphabet_, -1);
    }
    node = children_[std::size_t(node) * alphabet_ + (s - 1)];
  }
  terminal_[node] = 1;
  return node;
}

std::int32_t WordTrie::child(std::int32_t node, Symbol s) const {
  if (node < 0 || s < 1 || s > alphabet_) return -1;
  return children_[std::size_t(node) * alphabet_ + (s - 1)];
}

std::int32_t WordTrie::find(const Word& w) const {
  std::int32_t node = 0;
  for (Symbol s : w) {
    node = child(node, s);
    if (node < 0) return -1;
  }
  return node;
}

bool WordTrie::contains(const Word& w) const {
  const auto node = find(w);
  return node >= 0 && terminal_[node];
}

std::vector<Word> WordTrie::completions(std::int32_t node,
                                        std::size_t depth) const {
  std::vector<Word> out;
  if (node < 0) return out;
  Word current;
  auto walk = [&](auto&& self, std::int32_t at, std::size_t remaining) -> void {
    if (remaining == 0) {
      if (terminal_[at]) out.push_back(current);
      return;
    }
    for (int s = 1; s <= alphabet_; ++s) {
      const auto next = child(at, static_cast<Symbol>(s));
      if (next < 0) continue;
      current.push_back(static_cast<Symbol>(s));
      self(self, next, remaining - 1);
      current = current.prefix(current.size() - 1);
    }
  };
  walk(walk, node, depth);
  return out;
}

}  // namespace toptile

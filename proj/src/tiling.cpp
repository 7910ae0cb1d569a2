#include "toptile/tiling.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace toptile {

std::string BackwardResult::str() const {
  switch (verdict) {
    case Verdict::pass: return "PASS n=" + std::to_string(n);
    case Verdict::fail: return "FAIL n=" + std::to_string(n);
    default: return "INCONCLUSIVE n=" + std::to_string(n);
  }
}

BackwardResult backward_check(SigmaHierarchy& sigma, const PeriodicAddress& j, int N) {
  if (N < 1) throw std::invalid_argument("backward_check: N must be >= 1");
  for (int n = 1; n <= N; ++n) {
    const auto& lev = sigma.level(n);
    if (lev.unreliable) return {Verdict::inconclusive, n};
    if (!sigma.contains(reverse(truncate(j, n)))) return {Verdict::fail, n};
  }
  return {Verdict::pass, N};
}

std::int32_t PreTiling::index_of(const Word& w) const {
  auto it = std::lower_bound(words.begin(), words.end(), w,
                             TopOrderGreater{});
  if (it == words.end() || !(*it == w)) return -1;
  return static_cast<std::int32_t>(it - words.begin());
}

RasterSet PreTiling::tile(std::int32_t idx) const {
  RasterSet r(grid);
  const int W = grid.width();
  for (std::size_t p = 0; p < labels.size(); ++p)
    if (labels[p] == idx) r.set(int(p % W), int(p / W));
  return r;
}

RasterSet PreTiling::support() const {
  RasterSet r(grid);
  const int W = grid.width();
  for (std::size_t p = 0; p < labels.size(); ++p)
    if (labels[p] >= 0) r.set(int(p % W), int(p / W));
  return r;
}

std::vector<std::int64_t> PreTiling::counts() const {
  std::vector<std::int64_t> c(words.size(), 0);
  for (auto l : labels)
    if (l >= 0) ++c[l];
  return c;
}

TilingEngine::TilingEngine(std::shared_ptr<const PixelDynamics> base)
    : base_(std::move(base)), prune_(dilate(base_->support(), 2)) {}

bool TilingEngine::contains(const Point2d& z, int r) const {
  if (!near(z)) return false;
  if (r == 0) return base_->support().test(z);
  const Ifs& f = ifs();
  for (int i = 1; i <= f.size(); ++i)
    if (contains(f.inverse_map(Symbol(i))(z), r - 1)) return true;
  return false;
}

namespace {

// Forward points P_0 = y, P_m = f_{j_m}(P_{m-1}) of one window pixel. Tests
// along the path reuse P_{m-1} in place of f_{j_m}^-1(P_m), so the decisions
// at depth k+1 repeat those at depth k bit for bit.
class Orbit {
 public:
  Orbit(const TilingEngine& e, const std::vector<Symbol>& js) : e_(e), js_(js), P_(js.size()) {}

  void start(const Point2d& y, int k) {
    P_[0] = y;
    for (int m = 1; m <= k; ++m) P_[m] = e_.ifs().map(js_[m])(P_[m - 1]);
  }
  const Point2d& point(int m) const { return P_[m]; }
  Symbol j(int m) const { return js_[m]; }

  // P_m in A refined through r levels.
  bool on_path(int m, int r) const {
    if (m == 0) return e_.contains(P_[0], r);
    const Point2d& z = P_[m];
    if (!e_.near(z)) return false;
    if (r == 0) return e_.contains(z, 0);
    const Ifs& f = e_.ifs();
    for (int i = 1; i <= f.size(); ++i) {
      const bool ok = (i == js_[m]) ? on_path(m - 1, r - 1)
                                    : e_.contains(f.inverse_map(Symbol(i))(z), r - 1);
      if (ok) return true;
    }
    return false;
  }

 private:
  const TilingEngine& e_;
  const std::vector<Symbol>& js_;
  std::vector<Point2d> P_;
};

std::vector<Symbol> path_symbols(const PeriodicAddress& j, int k) {
  std::vector<Symbol> js(std::size_t(k) + 2, 0);
  for (int m = 1; m <= k + 1; ++m) js[m] = j.at(std::size_t(m - 1));
  return js;
}

// Greedy top orbit of x_1 = P_k; empty word when x_1 is outside the blowup.
Word label_pixel(const TilingEngine& e, const Orbit& orb, int k, bool& stuck) {
  const Ifs& f = e.ifs();
  Word t;
  bool path = true;
  int cur = k;
  Point2d x = orb.point(k);
  stuck = false;
  for (int step = 1; step <= k + 1; ++step) {
    const int r = k + 1 - step;
    Symbol chosen = 0;
    bool next_path = false;
    Point2d next;
    for (int i = 1; i <= f.size(); ++i) {
      if (path && cur >= 1 && i == orb.j(cur)) {
        if (orb.on_path(cur - 1, r)) {
          chosen = Symbol(i), next_path = true, next = orb.point(cur - 1);
          break;
        }
      } else {
        const Point2d z = f.inverse_map(Symbol(i))(x);
        if (e.contains(z, r)) {
          chosen = Symbol(i), next = z;
          break;
        }
      }
    }
    if (chosen == 0) {
      if (step > 1) stuck = true;
      return t;
    }
    t.push_back(chosen);
    path = next_path;
    if (path) --cur;
    x = next;
  }
  return t;
}

}  // namespace

RasterSet TilingEngine::blowup(const PeriodicAddress& j, int k, const Grid& window) const {
  if (k < 0) throw std::invalid_argument("blowup: negative depth");
  const auto js = path_symbols(j, k);
  Orbit orb(*this, js);
  RasterSet out(window);
  for (int iy = 0; iy < window.height(); ++iy)
    for (int ix = 0; ix < window.width(); ++ix) {
      orb.start(window.center(ix, iy), k);
      if (orb.on_path(k, k + 1)) out.set(ix, iy);
    }
  return out;
}

PreTiling TilingEngine::pretiling(const PeriodicAddress& j, int k, const Grid& window) const {
  if (k < 0) throw std::invalid_argument("pretiling: negative depth");
  const auto js = path_symbols(j, k);
  Orbit orb(*this, js);
  PreTiling pt;
  pt.j = j;
  pt.k = k;
  pt.grid = window;
  pt.labels.assign(std::size_t(window.pixel_count()), -1);

  std::unordered_map<Word, std::int32_t, WordHash> index;
  std::vector<Word> found;
  std::vector<std::int32_t> pending;
  const int W = window.width();
  for (int iy = 0; iy < window.height(); ++iy)
    for (int ix = 0; ix < W; ++ix) {
      const std::int32_t p = iy * W + ix;
      orb.start(window.center(ix, iy), k);
      if (!near(orb.point(k))) continue;
      bool stuck = false;
      Word t = label_pixel(*this, orb, k, stuck);
      if (stuck) {
        pending.push_back(p);
        continue;
      }
      if (t.empty()) continue;
      auto [it, fresh] = index.try_emplace(t, static_cast<std::int32_t>(found.size()));
      if (fresh) found.push_back(t);
      pt.labels[p] = it->second;
    }

  std::vector<std::int32_t> order(found.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = std::int32_t(i);
  std::sort(order.begin(), order.end(),
            [&](auto a, auto b) { return TopOrderGreater{}(found[a], found[b]); });
  std::vector<std::int32_t> remap(found.size());
  for (std::size_t r = 0; r < order.size(); ++r) {
    remap[order[r]] = std::int32_t(r);
    pt.words.push_back(found[order[r]]);
  }
  for (auto& l : pt.labels)
    if (l >= 0) l = remap[l];
  pt.absorbed = static_cast<std::int64_t>(pending.size());
  if (!pending.empty()) {
    if (pt.words.empty()) throw std::runtime_error("pretiling: no labeled pixels to absorb into");
    absorb_orphans(pt.labels, window, std::move(pending));
  }
  return pt;
}

RasterSet TilingEngine::support_region(const PeriodicAddress& j, int l, const Grid& window) const {
  // First symbol of the depth-(l+1) labels.
  const int k = l + 1;
  const auto js = path_symbols(j, k);
  Orbit orb(*this, js);
  const Ifs& f = ifs();
  RasterSet out(window);
  for (int iy = 0; iy < window.height(); ++iy)
    for (int ix = 0; ix < window.width(); ++ix) {
      orb.start(window.center(ix, iy), k);
      if (!near(orb.point(k))) continue;
      for (int i = 1; i <= f.size(); ++i) {
        const bool ok = i == js[k] ? orb.on_path(k - 1, k)
                                   : contains(f.inverse_map(Symbol(i))(orb.point(k)), k);
        if (ok) {
          if (i == js[k]) out.set(ix, iy);
          break;
        }
      }
    }
  return out;
}

namespace {

using PixelLists = std::vector<std::vector<std::int32_t>>;

PixelLists pixel_lists(const PreTiling& pt) {
  PixelLists lists(pt.words.size());
  for (std::size_t p = 0; p < pt.labels.size(); ++p)
    if (pt.labels[p] >= 0) lists[pt.labels[p]].push_back(std::int32_t(p));
  return lists;
}

// Pixels of list a with no pixel labeled b within Chebyshev distance s.
std::int64_t outside_dilation(const std::vector<std::int32_t>& a, const PreTiling& lb,
                              std::int32_t b, int s) {
  const Grid& g = lb.grid;
  const int W = g.width();
  std::int64_t bad = 0;
  for (auto p : a) {
    const int ix = p % W, iy = p / W;
    bool hit = false;
    for (int dy = -s; dy <= s && !hit; ++dy)
      for (int dx = -s; dx <= s && !hit; ++dx) {
        const int x = ix + dx, y = iy + dy;
        if (g.inside(x, y) && lb.labels[std::size_t(y) * W + x] == b) hit = true;
      }
    if (!hit) ++bad;
  }
  return bad;
}

bool lists_equal_within(const std::vector<std::int32_t>& a, const PreTiling& la, std::int32_t ia,
                        const std::vector<std::int32_t>& b, const PreTiling& lb, std::int32_t ib,
                        int s) {
  return outside_dilation(a, lb, ib, s) == 0 && outside_dilation(b, la, ia, s) == 0;
}

}  // namespace

int StabilizationReport::unstabilized() const {
  int n = 0;
  for (const auto& c : chains)
    if (!c.stabilized && c.first_k < k_max) ++n;
  return n;
}

std::string StabilizationReport::table() const {
  std::ostringstream os;
  os << "# j=" << j.str() << " k_max=" << k_max << " slack_px=" << slack_px << "\n";
  os << "l, tail_word, K_observed, pixel_count, bbox\n";
  for (const auto& c : chains) {
    os << c.l << ", " << c.tail.str() << ", ";
    if (c.stabilized) os << c.k_observed;
    else if (c.first_k == k_max) os << "new";
    else if (c.last_k < k_max) os << "vanished@" << c.last_k + 1;
    else os << "unstable";
    os << ", " << c.pixel_count << ", " << c.bbox[0] << " " << c.bbox[1] << " " << c.bbox[2]
       << " " << c.bbox[3] << "\n";
  }
  return os.str();
}

StabilizationReport stabilize(const TilingEngine& engine, const PeriodicAddress& j,
                              const Grid& window, int k_max, int slack_px) {
  if (k_max < 0) throw std::invalid_argument("stabilize: negative k_max");
  StabilizationReport rep;
  rep.j = j;
  rep.window = window;
  rep.k_max = k_max;
  rep.slack_px = slack_px;
  std::vector<PixelLists> lists;
  for (int k = 0; k <= k_max; ++k) {
    rep.levels.push_back(engine.pretiling(j, k, window));
    lists.push_back(pixel_lists(rep.levels.back()));
  }

  // chain id -> tile index per level (-1 before first / after last)
  std::vector<std::vector<std::int32_t>> members;
  std::vector<std::int32_t> prev_chain;  // tile index at k-1 -> chain
  for (int k = 0; k <= k_max; ++k) {
    const auto& pt = rep.levels[k];
    std::vector<std::int32_t> cur_chain(pt.words.size(), -1);
    for (std::size_t t = 0; t < pt.words.size(); ++t) {
      const Word& w = pt.words[t];
      std::int32_t chain = -1;
      if (k > 0 && w.front() == j.at(std::size_t(k - 1))) {
        const auto pred = rep.levels[k - 1].index_of(w.suffix_from(1));
        if (pred >= 0) chain = prev_chain[pred];
      }
      if (chain < 0) {
        chain = static_cast<std::int32_t>(rep.chains.size());
        ChainRecord c;
        std::size_t p = 0;
        while (p < std::size_t(k) && w[p] == j.at(std::size_t(k) - 1 - p)) ++p;
        c.l = k - static_cast<int>(p);
        c.tail = w.suffix_from(p);
        c.first_k = k;
        rep.chains.push_back(c);
        members.emplace_back(std::size_t(k_max) + 1, -1);
      }
      members[chain][k] = static_cast<std::int32_t>(t);
      rep.chains[chain].last_k = k;
      cur_chain[t] = chain;
    }
    prev_chain.swap(cur_chain);
  }

  for (std::size_t c = 0; c < rep.chains.size(); ++c) {
    auto& rec = rep.chains[c];
    const auto& mem = members[c];
    for (int k = rec.first_k; k < rec.last_k; ++k)
      rec.nest_violations +=
          outside_dilation(lists[k + 1][mem[k + 1]], rep.levels[k], mem[k], 1);
    rep.nest_violations += rec.nest_violations;
    const auto& last = rep.levels[rec.last_k];
    const auto& px = lists[rec.last_k][mem[rec.last_k]];
    rec.word_at_last = last.words[mem[rec.last_k]];
    rec.pixel_count = static_cast<std::int64_t>(px.size());
    const int W = window.width();
    rec.bbox[0] = rec.bbox[1] = std::numeric_limits<int>::max();
    rec.bbox[2] = rec.bbox[3] = -1;
    for (auto p : px) {
      rec.bbox[0] = std::min(rec.bbox[0], p % W);
      rec.bbox[1] = std::min(rec.bbox[1], p / W);
      rec.bbox[2] = std::max(rec.bbox[2], p % W);
      rec.bbox[3] = std::max(rec.bbox[3], p / W);
    }
    if (rec.last_k < k_max) continue;
    // Walk back from k_max while the tile agrees with every later level.
    int K = k_max;
    for (int k = k_max - 1; k >= rec.first_k; --k) {
      bool ok = true;
      for (int k2 = k + 1; k2 <= k_max && ok; ++k2)
        ok = lists_equal_within(lists[k][mem[k]], rep.levels[k], mem[k], lists[k2][mem[k2]],
                                rep.levels[k2], mem[k2], slack_px);
      if (!ok) break;
      K = k;
    }
    rec.k_observed = K;
    rec.stabilized = K < k_max;
    if (rec.stabilized) rep.k_l[rec.l] = std::max(rep.k_l.count(rec.l) ? rep.k_l[rec.l] : 0, K);
  }
  return rep;
}

RasterSet stabilized_union(const StabilizationReport& report) {
  const auto& last = report.levels.back();
  std::vector<char> keep(last.words.size(), 0);
  for (const auto& c : report.chains)
    if (c.stabilized) keep[last.index_of(c.word_at_last)] = 1;
  RasterSet r(report.window);
  const int W = report.window.width();
  for (std::size_t p = 0; p < last.labels.size(); ++p)
    if (last.labels[p] >= 0 && keep[last.labels[p]]) r.set(int(p % W), int(p / W));
  return r;
}

ClearanceEstimate orbit_clearance(const Ifs& ifs, const PeriodicAddress& j,
                                  std::optional<Point2d> x0, std::optional<double> lambda_hat,
                                  int N, const RasterSet& critical) {
  ClearanceEstimate est;
  est.default_x0 = !x0;
  est.default_lambda_hat = !lambda_hat;
  est.x0 = x0 ? *x0 : ifs.fixed(j.at(0));
  est.lambda_hat = lambda_hat ? *lambda_hat : (1 + ifs.lambda()) / 2;
  if (!(est.lambda_hat > ifs.lambda() && est.lambda_hat < 1))
    throw std::invalid_argument("orbit_clearance: lambda_hat must lie in (lambda, 1)");
  est.steps = N;
  const bool none = critical.empty();
  est.epsilon_hat = std::numeric_limits<double>::infinity();
  Point2d x = est.x0;
  for (int n = 1; n <= N; ++n) {
    x = ifs.map(j.at(std::size_t(n - 1)))(x);
    ClearanceStep s;
    s.n = n;
    s.x = x;
    s.distance = critical.test(x) ? 0.0 : distance_to(x, critical);
    s.ratio = s.distance / std::pow(est.lambda_hat, n);
    if (!none) est.epsilon_hat = std::min(est.epsilon_hat, s.ratio);
    est.table.push_back(s);
  }
  return est;
}

namespace {
void check_domain(double diameter, double epsilon, double lambda, double lambda_hat) {
  if (!(lambda > 0 && lambda < lambda_hat && lambda_hat < 1 && epsilon > 0 && diameter > 0))
    throw std::invalid_argument("need 0 < lambda < lambda_hat < 1, epsilon > 0, diameter > 0");
}
}  // namespace

double l_threshold(double diameter, double epsilon, double lambda, double lambda_hat) {
  check_domain(diameter, epsilon, lambda, lambda_hat);
  const double lb = std::log(lambda_hat / lambda);
  const double a = std::log(diameter / (epsilon * lambda)) / lb;
  const double c = std::log(lambda) / lb;
  return (a - 1) / (1 + c);
}

double separation_bound(int k, int l, double diameter, double epsilon, double lambda,
                        double lambda_hat) {
  check_domain(diameter, epsilon, lambda, lambda_hat);
  return std::pow(lambda_hat, k + 1) * epsilon - std::pow(lambda, k - l) * diameter;
}

double separation_k_threshold(int l, double diameter, double epsilon, double lambda,
                              double lambda_hat) {
  check_domain(diameter, epsilon, lambda, lambda_hat);
  return (std::log(diameter / (epsilon * lambda_hat)) + l * std::log(1 / lambda)) /
         std::log(lambda_hat / lambda);
}

OmegaResult omega_l(SigmaHierarchy& sigma, const PeriodicAddress& j, int l, int k_cap) {
  if (l < 0 || k_cap < l + 1) throw std::invalid_argument("omega_l: need 0 <= l < k_cap");
  OmegaResult res;
  bool first = true;
  for (int k = l + 1; k <= k_cap; ++k) {
    const auto& lev = sigma.level(k + 1);
    if (lev.unreliable) {
      res.verdict = Verdict::inconclusive;
      res.inconclusive_level = k + 1;
      return res;
    }
    Word u;
    for (int m = k; m >= l + 1; --m) u.push_back(j.at(std::size_t(m - 1)));
    const auto node = sigma.trie().find(u);
    std::vector<Word> tails;
    if (node >= 0) tails = sigma.trie().completions(node, std::size_t(l) + 1);
    if (first) {
      res.words = std::move(tails);
      first = false;
    } else {
      std::vector<Word> keep;
      for (const auto& w : res.words)
        if (std::binary_search(tails.begin(), tails.end(), w,
                               TopOrderGreater{}))
          keep.push_back(w);
      res.words.swap(keep);
    }
  }
  return res;
}

bool support_check(const TilingEngine& engine, const StabilizationReport& report, int l) {
  if (l + 1 > report.k_max) throw std::invalid_argument("support_check: need l < k_max");
  const RasterSet region = engine.support_region(report.j, l, report.window);
  return is_subset(region, dilate(stabilized_union(report), 1));
}

bool interior_certificate(const Ifs& ifs, const std::vector<Point2d>& polygon, const Grid& grid) {
  if (polygon.size() < 3) throw std::invalid_argument("interior_certificate: need >= 3 vertices");
  double area = 0;
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    const auto& a = polygon[i];
    const auto& b = polygon[(i + 1) % polygon.size()];
    area += a.x() * b.y() - b.x() * a.y();
  }
  if (std::abs(area) < 1e-300) throw std::invalid_argument("interior_certificate: degenerate polygon");
  const RasterSet P = rasterize_polygon(polygon, grid);
  const RasterSet core = erode(P, 1);
  if (core.empty()) return false;  // no interior at this resolution
  RasterSet cover(grid);
  for (int i = 1; i <= ifs.size(); ++i)
    cover |= erode(transform(P, ifs.map(Symbol(i)), grid), 1);
  return is_subset(core, cover);
}

std::vector<Point2d> load_polygon(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<Point2d> pts;
  std::string line;
  while (std::getline(in, line)) {
    const auto h = line.find('#');
    if (h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    double x, y;
    if (ls >> x >> y) pts.emplace_back(x, y);
    else if (line.find_first_not_of(" \t\r") != std::string::npos)
      throw std::runtime_error(path + ": bad vertex line: " + line);
  }
  return pts;
}

}  // namespace toptile

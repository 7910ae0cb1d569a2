#include "toptile/tops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace toptile {

namespace {

// Nearest support pixel to q within Chebyshev radius k of q's pixel.
std::int32_t snap(const RasterSet& support, const Point2d& q, int k) {
  const Grid& g = support.grid();
  const int ix = g.pixel_x(q.x()), iy = g.pixel_y(q.y());
  std::int32_t best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  for (int y = std::max(0, iy - k); y <= std::min(g.height() - 1, iy + k); ++y)
    for (int x = std::max(0, ix - k); x <= std::min(g.width() - 1, ix + k); ++x) {
      if (!support.get(x, y)) continue;
      const double d = (g.center(x, y) - q).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = y * g.width() + x;
      }
    }
  return best;
}

}  // namespace

PixelDynamics::PixelDynamics(const Ifs& ifs, const RasterSet& attractor, int snap_px)
    : ifs_(ifs), snap_px_(snap_px), support_(attractor) {
  if (snap_px < 0) throw std::invalid_argument("snap radius must be non-negative");
  const Grid& g = support_.grid();
  if (g.pixel_count() > std::numeric_limits<std::int32_t>::max())
    throw std::invalid_argument("grid too large for 32-bit pixel indices");
  stride_ = static_cast<std::size_t>(g.pixel_count());
  const int m = ifs_.size();
  pre_.assign(stride_ * m, -1);
  for (;;) {
    std::vector<std::int32_t> dead;
    snapped_ = 0;
    for (int iy = 0; iy < g.height(); ++iy)
      for (int ix = 0; ix < g.width(); ++ix) {
        const std::int32_t p = iy * g.width() + ix;
        if (!support_.get(ix, iy)) {
          for (int i = 0; i < m; ++i) pre_[i * stride_ + p] = -1;
          continue;
        }
        const Point2d c = g.center(ix, iy);
        bool any = false;
        for (int i = 0; i < m; ++i) {
          const auto q = g.locate(ifs_.inverse_map(static_cast<Symbol>(i + 1))(c));
          const bool ok = q >= 0 && support_.get(q);
          pre_[i * stride_ + p] = ok ? static_cast<std::int32_t>(q) : -1;
          any = any || ok;
        }
        if (any) continue;
        for (int i = 0; i < m; ++i) {
          const auto q = snap(support_, ifs_.inverse_map(static_cast<Symbol>(i + 1))(c), snap_px);
          pre_[i * stride_ + p] = q;
          any = any || q >= 0;
        }
        if (any) ++snapped_;
        else dead.push_back(p);
      }
    if (dead.empty()) break;
    removed_ += static_cast<std::int64_t>(dead.size());
    for (auto p : dead) support_.set(p % g.width(), p / g.width(), false);
  }
}

PixelDynamics PixelDynamics::build(const Ifs& ifs, const Grid& grid, double tol_px, int snap_px) {
  return PixelDynamics(ifs, rasterize_attractor(ifs, grid, tol_px), snap_px);
}

Symbol PixelDynamics::top_symbol(std::int32_t p) const {
  for (int i = 1; i <= size(); ++i)
    if (pre(static_cast<Symbol>(i), p) >= 0) return static_cast<Symbol>(i);
  return 0;
}

bool PixelDynamics::in_image(const Word& w, std::int32_t p) const {
  for (Symbol s : w) {
    p = pre(s, p);
    if (p < 0) return false;
  }
  return true;
}

void absorb_orphans(std::vector<std::int32_t>& labels, const Grid& g,
                    std::vector<std::int32_t> pending) {
  const int W = g.width();
  while (!pending.empty()) {
    std::vector<std::pair<std::int32_t, std::int32_t>> assign;
    std::vector<std::int32_t> rest;
    for (auto p : pending) {
      const int ix = p % W, iy = p / W;
      std::int32_t best = -1;
      const int nb[4][2] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
      for (const auto& d : nb) {
        const int x = ix + d[0], y = iy + d[1];
        if (!g.inside(x, y)) continue;
        const auto l = labels[std::size_t(y) * W + x];
        if (l >= 0 && (best < 0 || l < best)) best = l;
      }
      if (best >= 0) assign.emplace_back(p, best);
      else rest.push_back(p);
    }
    if (assign.empty()) {
      // Components with no labeled neighbour take the greatest word.
      for (auto p : rest) labels[p] = 0;
      break;
    }
    for (auto [p, l] : assign) labels[p] = l;
    pending.swap(rest);
  }
}

TopPartition level1_partition(const PixelDynamics& dyn) {
  TopPartition out;
  out.attractor = dyn.support();
  out.parts.assign(dyn.size(), RasterSet(dyn.grid()));
  const Grid& g = dyn.grid();
  for (int iy = 0; iy < g.height(); ++iy)
    for (int ix = 0; ix < g.width(); ++ix) {
      if (!out.attractor.get(ix, iy)) continue;
      const Symbol s = dyn.top_symbol(iy * g.width() + ix);
      if (s) out.parts[s - 1].set(ix, iy);
    }
  if (out.parts.back().empty())
    throw std::invalid_argument("A_M is empty on this grid; the top partition needs every map visible");
  return out;
}

SigmaHierarchy::SigmaHierarchy(std::shared_ptr<const PixelDynamics> dyn, SigmaOptions opt)
    : dyn_(std::move(dyn)), opt_(opt), trie_(dyn_->size()) {
  if (opt_.theta < 1) throw std::invalid_argument("theta must be at least 1");
  SigmaLevel zero;
  zero.words.push_back(Word{});
  const Grid& g = grid();
  zero.labels.assign(static_cast<std::size_t>(g.pixel_count()), -1);
  for (int iy = 0; iy < g.height(); ++iy)
    for (int ix = 0; ix < g.width(); ++ix)
      if (dyn_->support().get(ix, iy)) zero.labels[std::size_t(iy) * g.width() + ix] = 0;
  trie_.insert(Word{});
  node_index_.assign(1, 0);
  levels_.push_back(std::move(zero));
}

const SigmaLevel& SigmaHierarchy::level(int n) {
  if (n < 0) throw std::invalid_argument("negative sigma depth");
  while (depth() < n) build_next();
  return levels_[n];
}

const SigmaLevel& SigmaHierarchy::built(int n) const {
  if (n < 0 || n > depth())
    throw std::out_of_range("sigma level " + std::to_string(n) + " not built");
  return levels_[n];
}

bool SigmaHierarchy::contains(const Word& w) const {
  return static_cast<int>(w.size()) <= depth() && trie_.contains(w);
}

std::int32_t SigmaHierarchy::index_of(const Word& w) const {
  if (!contains(w)) return -1;
  return node_index_[trie_.find(w)];
}

RasterSet SigmaHierarchy::pretile(const Word& w) const {
  const auto idx = index_of(w);
  if (idx < 0) throw std::invalid_argument("word " + w.str() + " is not in Sigma_" +
                                           std::to_string(w.size()));
  const SigmaLevel& lv = levels_[w.size()];
  if (lv.labels.empty())
    throw std::logic_error("labels of level " + std::to_string(w.size()) + " were dropped");
  const Grid& g = grid();
  RasterSet out(g);
  for (int iy = 0; iy < g.height(); ++iy)
    for (int ix = 0; ix < g.width(); ++ix)
      if (lv.labels[std::size_t(iy) * g.width() + ix] == idx) out.set(ix, iy);
  return out;
}

void SigmaHierarchy::build_next() {
  const PixelDynamics& dyn = *dyn_;
  const Ifs& ifs = dyn.ifs();
  const Grid& g = grid();
  const int W = g.width(), H = g.height(), M = dyn.size();
  const double h = g.pixel_size();
  const SigmaLevel& prev = levels_.back();
  SigmaLevel next;
  next.n = prev.n + 1;
  next.labels.assign(static_cast<std::size_t>(g.pixel_count()), -1);

  int sx0, sy0, sx1, sy1;
  if (!dyn.support().bbox(sx0, sy0, sx1, sy1)) throw std::logic_error("empty attractor raster");
  const Box& win = g.window();
  const Box support_box{win.xmin + sx0 * h, win.ymin + sy0 * h, win.xmin + (sx1 + 1) * h,
                        win.ymin + (sy1 + 1) * h};
  const double lam = ifs.lambda();
  const int margin =
      static_cast<int>(std::ceil((0.71 + dyn.snap_px()) * lam / (1 - lam))) + 2;

  auto pixel_box = [&](const AffineMap2d& f, int& x0, int& y0, int& x1, int& y1) {
    const Point2d corners[4] = {f({support_box.xmin, support_box.ymin}),
                                f({support_box.xmax, support_box.ymin}),
                                f({support_box.xmin, support_box.ymax}),
                                f({support_box.xmax, support_box.ymax})};
    double bx0 = corners[0].x(), bx1 = bx0, by0 = corners[0].y(), by1 = by0;
    for (const auto& c : corners) {
      bx0 = std::min(bx0, c.x());
      bx1 = std::max(bx1, c.x());
      by0 = std::min(by0, c.y());
      by1 = std::max(by1, c.y());
    }
    x0 = std::max(0, g.pixel_x(bx0) - margin);
    y0 = std::max(0, g.pixel_y(by0) - margin);
    x1 = std::min(W - 1, g.pixel_x(bx1) + margin);
    y1 = std::min(H - 1, g.pixel_y(by1) + margin);
    return x0 <= x1 && y0 <= y1;
  };

  std::vector<std::int32_t> endpoint;  // chain end of w per pixel of w's box
  std::vector<std::uint8_t> region;
  std::vector<Word> accepted;
  for (const Word& w : prev.words) {
    int wx0, wy0, wx1, wy1;
    if (!pixel_box(compose_word(ifs, w), wx0, wy0, wx1, wy1)) {
      next.candidates += M;
      next.rejected += M;
      continue;
    }
    const int bw = wx1 - wx0 + 1, bh = wy1 - wy0 + 1;
    endpoint.assign(std::size_t(bw) * bh, -1);
    for (int iy = wy0; iy <= wy1; ++iy)
      for (int ix = wx0; ix <= wx1; ++ix) {
        std::int32_t q = iy * W + ix;
        if (!dyn.support().get(ix, iy)) continue;
        for (Symbol s : w) {
          q = dyn.pre(s, q);
          if (q < 0) break;
        }
        endpoint[std::size_t(iy - wy0) * bw + (ix - wx0)] = q;
      }
    for (int si = 1; si <= M; ++si) {
      const Symbol s = static_cast<Symbol>(si);
      ++next.candidates;
      const Word cand = w.appended(s);
      int cx0, cy0, cx1, cy1;
      if (!pixel_box(compose_word(ifs, cand), cx0, cy0, cx1, cy1)) {
        ++next.rejected;
        continue;
      }
      cx0 = std::max(cx0, wx0), cy0 = std::max(cy0, wy0);
      cx1 = std::min(cx1, wx1), cy1 = std::min(cy1, wy1);
      if (cx0 > cx1 || cy0 > cy1) {
        ++next.rejected;
        continue;
      }
      const int rw = cx1 - cx0 + 1, rh = cy1 - cy0 + 1;
      region.assign(std::size_t(rw) * rh, 0);
      int fx0 = W, fx1 = -1, fy0 = H, fy1 = -1;
      std::int64_t members = 0;
      for (int iy = cy0; iy <= cy1; ++iy)
        for (int ix = cx0; ix <= cx1; ++ix) {
          const auto e = endpoint[std::size_t(iy - wy0) * bw + (ix - wx0)];
          if (e < 0 || dyn.pre(s, e) < 0) continue;
          fx0 = std::min(fx0, ix), fx1 = std::max(fx1, ix);
          fy0 = std::min(fy0, iy), fy1 = std::max(fy1, iy);
          if (next.labels[std::size_t(iy) * W + ix] != -1) continue;
          region[std::size_t(iy - cy0) * rw + (ix - cx0)] = 1;
          ++members;
        }
      if (fx1 >= 0)
        next.max_span_px = std::max<double>(next.max_span_px, std::max(fx1 - fx0, fy1 - fy0) + 1);
      std::int64_t interior = 0;
      if (members > 0)
        for (int y = 1; y + 1 < rh && interior < opt_.theta; ++y)
          for (int x = 1; x + 1 < rw; ++x) {
            bool all = true;
            for (int dy = -1; dy <= 1 && all; ++dy)
              for (int dx = -1; dx <= 1; ++dx)
                if (!region[std::size_t(y + dy) * rw + (x + dx)]) {
                  all = false;
                  break;
                }
            if (all && ++interior >= opt_.theta) break;
          }
      if (interior < opt_.theta) {
        ++next.rejected;
        continue;
      }
      const auto idx = static_cast<std::int32_t>(next.words.size());
      next.words.push_back(cand);
      for (int iy = cy0; iy <= cy1; ++iy)
        for (int ix = cx0; ix <= cx1; ++ix)
          if (region[std::size_t(iy - cy0) * rw + (ix - cx0)])
            next.labels[std::size_t(iy) * W + ix] = idx;
    }
  }

  // Absorb unlabeled support pixels layer by layer from labeled 4-neighbours,
  // preferring the greatest neighbouring word.
  std::vector<std::int32_t> pending;
  for (int iy = 0; iy < H; ++iy)
    for (int ix = 0; ix < W; ++ix)
      if (dyn.support().get(ix, iy) && next.labels[std::size_t(iy) * W + ix] < 0)
        pending.push_back(iy * W + ix);
  next.orphans = static_cast<std::int64_t>(pending.size());
  absorb_orphans(next.labels, g, std::move(pending));

  next.unreliable = next.max_span_px < 4;
  for (std::size_t i = 0; i < next.words.size(); ++i) {
    const auto node = trie_.insert(next.words[i]);
    if (static_cast<std::size_t>(node) >= node_index_.size()) node_index_.resize(node + 1, -1);
    node_index_[node] = static_cast<std::int32_t>(i);
  }
  if (!opt_.retain_labels && levels_.size() > 1) {
    levels_.back().labels.clear();
    levels_.back().labels.shrink_to_fit();
  }
  levels_.push_back(std::move(next));
}

LemmaReport check_level(SigmaHierarchy& sigma, int n, bool containment) {
  if (n < 1) throw std::invalid_argument("check_level needs n >= 1");
  LemmaReport rep;
  rep.n = n;
  const SigmaLevel& cur = sigma.level(n);
  const SigmaLevel& prev = sigma.built(n - 1);
  const PixelDynamics& dyn = sigma.dynamics();
  const Grid& g = sigma.grid();
  const int W = g.width(), H = g.height();
  rep.words = static_cast<std::int64_t>(cur.words.size());

  for (const Word& w : cur.words) {
    if (!sigma.contains(w.prefix(n - 1)) || !sigma.contains(shift(w))) {
      ++rep.closure_failures;
      rep.messages.push_back("lemma 3: " + w.str());
    }
  }
  for (const Word& v : prev.words) {
    bool found = false;
    for (int s = 1; s <= dyn.size() && !found; ++s)
      found = sigma.contains(v.prepended(static_cast<Symbol>(s)));
    if (!found) {
      ++rep.extension_failures;
      rep.messages.push_back("lemma 1: no s with s." + v.str());
    }
  }

  if (cur.labels.empty() || prev.labels.empty()) {
    rep.messages.push_back("labels dropped; pixel checks skipped");
    return rep;
  }

  rep.partition_exact = true;
  std::vector<std::int64_t> interior(cur.words.size(), 0);
  std::vector<std::uint8_t> bad_word(cur.words.size(), 0);
  std::vector<std::int32_t> shifted(cur.words.size(), -1);
  for (std::size_t k = 0; k < cur.words.size(); ++k)
    shifted[k] = sigma.index_of(shift(cur.words[k]));
  for (int iy = 0; iy < H; ++iy)
    for (int ix = 0; ix < W; ++ix) {
      const std::int32_t p = iy * W + ix;
      const auto l = cur.labels[p];
      const bool in = dyn.support().get(ix, iy);
      if (in != (l >= 0) || l >= static_cast<std::int32_t>(cur.words.size())) {
        rep.partition_exact = false;
        continue;
      }
      if (l < 0) continue;
      bool all = true;
      for (int dy = -1; dy <= 1 && all; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          const int x = ix + dx, y = iy + dy;
          if (!g.inside(x, y) || cur.labels[std::size_t(y) * W + x] != l) {
            all = false;
            break;
          }
        }
      if (all) ++interior[l];
      if (!containment) continue;
      const auto target = shifted[l];
      const Symbol k1 = cur.words[l][0];
      bool ok = false;
      if (target >= 0) {
        const AffineMap2d& inv = dyn.ifs().inverse_map(k1);
        for (int dy = -1; dy <= 1 && !ok; ++dy)
          for (int dx = -1; dx <= 1 && !ok; ++dx) {
            const int x = ix + dx, y = iy + dy;
            if (!g.inside(x, y)) continue;
            const std::int32_t q = y * W + x;
            if (dyn.support().get(x, y)) {
              const auto t = dyn.pre(k1, q);
              if (t >= 0 && prev.labels[t] == target) ok = true;
            }
            const auto t = g.locate(inv(g.center(x, y)));
            if (t >= 0 && prev.labels[t] == target) ok = true;
          }
      }
      if (!ok) {
        ++rep.containment_bad_pixels;
        bad_word[l] = 1;
      }
    }
  for (std::size_t k = 0; k < cur.words.size(); ++k) {
    if (interior[k] < 1) {
      ++rep.interior_failures;
      rep.messages.push_back("interior: " + cur.words[k].str());
    }
    if (containment) {
      ++rep.containment_checked;
      if (bad_word[k]) {
        ++rep.containment_failures;
        rep.messages.push_back("lemma 2: " + cur.words[k].str());
      }
    }
  }
  return rep;
}

TopAddressResult top_address(const PixelDynamics& dyn, const Point2d& x0, int n) {
  TopAddressResult out;
  Point2d x = x0;
  for (int k = 0; k < n; ++k) {
    bool found = false;
    for (int i = 1; i <= dyn.size(); ++i) {
      const Point2d z = dyn.ifs().inverse_map(static_cast<Symbol>(i))(x);
      if (dyn.support().test_dilated(z, 1)) {
        out.word.push_back(static_cast<Symbol>(i));
        x = z;
        found = true;
        break;
      }
    }
    if (!found) {
      out.escaped = true;
      out.escape_step = k;
      break;
    }
  }
  return out;
}

RasterSet critical_set(const TopPartition& partition) {
  RasterSet edges(partition.attractor.grid());
  for (const auto& part : partition.parts) edges |= boundary(part);
  edges -= dilate(boundary(partition.attractor), 1);
  return dilate(edges, 1);
}

}  // namespace toptile

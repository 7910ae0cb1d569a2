#include "toptile/render.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <unordered_set>

namespace toptile {

Rgb palette_color(const Word& w, std::uint32_t salt) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&](std::uint8_t b) {
    h ^= b;
    h *= 1099511628211ull;
  };
  for (int i = 0; i < 4; ++i) mix(std::uint8_t(salt >> (8 * i)));
  for (Symbol s : w) mix(s);
  mix(0xff);
  h ^= h >> 29;
  return {std::uint8_t(h), std::uint8_t(h >> 8), std::uint8_t(h >> 16)};
}

Rgb steal_color(const Word& w, const Ifs& ifs, const Image& master) {
  if (master.width <= 0 || master.height <= 0) throw std::invalid_argument("empty master image");
  const Box b = ifs.attractor_bounds();
  const std::size_t depth = w.size() + projection_depth(ifs, 1e-9 * b.diagonal());
  const Point2d p = project(ifs, PeriodicAddress(w, Word{1}), depth);
  auto clamp = [](double v, int n) { return std::clamp(static_cast<int>(v), 0, n - 1); };
  const int ix = clamp((p.x() - b.xmin) / b.width() * master.width, master.width);
  const int iy = clamp((p.y() - b.ymin) / b.height() * master.height, master.height);
  return master.at(ix, iy);
}

namespace {
std::uint32_t key(Rgb c) { return std::uint32_t(c.r) << 16 | std::uint32_t(c.g) << 8 | c.b; }
}  // namespace

std::vector<Rgb> tile_colors(const std::vector<Word>& words, const Ifs& ifs,
                             const RenderStyle& style) {
  std::vector<Rgb> out;
  out.reserve(words.size());
  if (style.mode == ColorMode::color_steal) {
    if (!style.master) throw std::invalid_argument("color-steal rendering needs a master image");
    for (const auto& w : words) {
      Rgb c = steal_color(w, ifs, *style.master);
      if (c == style.background) c.b ^= 1;
      out.push_back(c);
    }
    return out;
  }
  std::unordered_set<std::uint32_t> used{key(style.background)};
  if (style.edge_overlay) used.insert(key(style.edge_color));
  for (const auto& w : words) {
    std::uint32_t salt = 0;
    Rgb c = palette_color(w, salt);
    while (used.count(key(c))) c = palette_color(w, ++salt);
    used.insert(key(c));
    out.push_back(c);
  }
  return out;
}

Image render_labels(const Grid& grid, const std::vector<Word>& words,
                    const std::vector<std::int32_t>& labels, const Ifs& ifs,
                    const RenderStyle& style) {
  if (labels.size() != std::size_t(grid.pixel_count()))
    throw std::invalid_argument("render: label map does not match grid");
  const auto colors = tile_colors(words, ifs, style);
  const int W = grid.width(), H = grid.height();
  Image img(W, H, style.background);
  for (int iy = 0; iy < H; ++iy)
    for (int ix = 0; ix < W; ++ix) {
      const auto l = labels[std::size_t(iy) * W + ix];
      if (l < 0) continue;
      bool edge = false;
      if (style.edge_overlay) {
        const int nb[4][2] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
        for (const auto& d : nb) {
          const int x = ix + d[0], y = iy + d[1];
          if (!grid.inside(x, y) || labels[std::size_t(y) * W + x] != l) edge = true;
        }
      }
      img.at(ix, iy) = edge ? style.edge_color : colors[l];
    }
  return img;
}

Image render_pretiling(const PreTiling& pt, const Ifs& ifs, const RenderStyle& style) {
  if (pt.words.empty()) throw std::invalid_argument("render: pre-tiling has no tiles");
  return render_labels(pt.grid, pt.words, pt.labels, ifs, style);
}

Image render_sigma(const SigmaLevel& level, const Grid& grid, const Ifs& ifs,
                   const RenderStyle& style) {
  if (level.labels.empty()) throw std::invalid_argument("render: level labels were dropped");
  return render_labels(grid, level.words, level.labels, ifs, style);
}

RasterSet render_attractor_chaos(const Ifs& ifs, const Grid& grid, std::int64_t n_points,
                                 std::uint64_t seed) {
  if (n_points < 1) throw std::invalid_argument("chaos game: n_points must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(1, ifs.size());
  Point2d x = ifs.fixed(1);
  for (int i = 0; i < 100; ++i) x = ifs.map(Symbol(pick(rng)))(x);
  RasterSet r(grid);
  for (std::int64_t n = 0; n < n_points; ++n) {
    x = ifs.map(Symbol(pick(rng)))(x);
    const int ix = grid.pixel_x(x.x()), iy = grid.pixel_y(x.y());
    if (grid.inside(ix, iy)) r.set(ix, iy);
  }
  return r;
}

Image to_image(const RasterSet& r, Rgb ink, Rgb paper) {
  Image img(r.width(), r.height(), paper);
  for (int iy = 0; iy < r.height(); ++iy)
    for (int ix = 0; ix < r.width(); ++ix)
      if (r.get(ix, iy)) img.at(ix, iy) = ink;
  return img;
}

void write_image(const Image& img, const std::string& path) {
  write_file_atomic(path, encode_ppm(img));
}

void write_image(const RasterSet& r, const std::string& path) {
  write_file_atomic(path, encode_pbm(r));
}

}  // namespace toptile

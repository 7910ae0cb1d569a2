#pragma once

#include <map>
#include <memory>
#include <random>
#include <string>

#include "toptile/tiling.hpp"

namespace fx {

using namespace toptile;

inline Grid base_grid(const Ifs& ifs, int res) {
  return Grid::covering(ifs.attractor_bounds().padded(0.05), res, res);
}

// Pixel dynamics per preset and resolution, built once per test binary.
inline std::shared_ptr<const PixelDynamics> dyn(const std::string& preset, int res) {
  static std::map<std::pair<std::string, int>, std::shared_ptr<const PixelDynamics>> cache;
  auto& slot = cache[{preset, res}];
  if (!slot) {
    const Ifs ifs = Ifs::preset(preset);
    slot = std::make_shared<PixelDynamics>(PixelDynamics::build(ifs, base_grid(ifs, res)));
  }
  return slot;
}

inline SigmaHierarchy& sigma(const std::string& preset, int res) {
  static std::map<std::pair<std::string, int>, std::unique_ptr<SigmaHierarchy>> cache;
  auto& slot = cache[{preset, res}];
  if (!slot) slot = std::make_unique<SigmaHierarchy>(dyn(preset, res));
  return *slot;
}

inline Word random_word(std::mt19937_64& rng, int M, int len) {
  std::uniform_int_distribution<int> s(1, M);
  Word w;
  for (int i = 0; i < len; ++i) w.push_back(Symbol(s(rng)));
  return w;
}

inline RasterSet random_raster(std::mt19937_64& rng, const Grid& g, double p = 0.5) {
  std::bernoulli_distribution b(p);
  RasterSet r(g);
  for (int iy = 0; iy < g.height(); ++iy)
    for (int ix = 0; ix < g.width(); ++ix)
      if (b(rng)) r.set(ix, iy);
  return r;
}

// Pixels whose center satisfies pred.
template <typename Pred>
RasterSet analytic(const Grid& g, Pred pred) {
  RasterSet r(g);
  for (int iy = 0; iy < g.height(); ++iy)
    for (int ix = 0; ix < g.width(); ++ix)
      if (pred(g.center(ix, iy))) r.set(ix, iy);
  return r;
}

// Top word of a point of the unit square for square4, half-open cells.
inline Word square_word(Point2d p, int n) {
  Word w;
  for (int i = 0; i < n; ++i) {
    const int dx = p.x() > 0.5, dy = p.y() > 0.5;
    w.push_back(Symbol(1 + dx + 2 * dy));
    p = Point2d(2 * p.x() - dx, 2 * p.y() - dy);
  }
  return w;
}

}  // namespace fx

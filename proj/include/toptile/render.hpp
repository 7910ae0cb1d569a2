#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "toptile/tiling.hpp"

namespace toptile {

enum class ColorMode { palette_hash, color_steal };

struct RenderStyle {
  ColorMode mode = ColorMode::palette_hash;
  std::optional<Image> master;  // required for color_steal
  bool edge_overlay = false;
  Rgb edge_color{0, 0, 0};
  Rgb background{255, 255, 255};
};

/// 24-bit FNV-1a color of a word under a salt.
Rgb palette_color(const Word& w, std::uint32_t salt = 0);

/// One fill color per word. Palette colors are distinct and avoid the
/// background and edge colors; clashes are re-salted in word order.
std::vector<Rgb> tile_colors(const std::vector<Word>& words, const Ifs& ifs,
                             const RenderStyle& style);

/// Master-image pixel sampled for a word: project(word.1bar) mapped from the
/// attractor bounds onto the image.
Rgb steal_color(const Word& w, const Ifs& ifs, const Image& master);

/// Fills the labeled pixels (index into words, -1 for background).
Image render_labels(const Grid& grid, const std::vector<Word>& words,
                    const std::vector<std::int32_t>& labels, const Ifs& ifs,
                    const RenderStyle& style);

Image render_pretiling(const PreTiling& pt, const Ifs& ifs, const RenderStyle& style);
Image render_sigma(const SigmaLevel& level, const Grid& grid, const Ifs& ifs,
                   const RenderStyle& style);

/// Chaos game from fix(f_1): uniform map choice, 100 burn-in steps, then
/// n_points plotted points.
RasterSet render_attractor_chaos(const Ifs& ifs, const Grid& grid, std::int64_t n_points,
                                 std::uint64_t seed);

/// Set pixels drawn in `ink` on `paper`.
Image to_image(const RasterSet& r, Rgb ink = {0, 0, 0}, Rgb paper = {255, 255, 255});

void write_image(const Image& img, const std::string& path);      // P6
void write_image(const RasterSet& r, const std::string& path);    // P4

}  // namespace toptile

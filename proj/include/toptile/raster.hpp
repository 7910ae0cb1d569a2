#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "toptile/ifs.hpp"

namespace toptile {

/// Window sampled by width x height square pixels. Row iy = 0 sits at ymin.
class Grid {
 public:
  Grid() = default;
  /// Throws unless the pixels are square to 1e-12.
  Grid(Box window, int width, int height);

  /// Grid of the given pixel width whose window covers `box`, grown in one
  /// direction to keep pixels square.
  static Grid covering(const Box& box, int width, int height);

  const Box& window() const { return window_; }
  int width() const { return width_; }
  int height() const { return height_; }
  std::int64_t pixel_count() const { return std::int64_t(width_) * height_; }
  double pixel_size() const { return h_; }

  Point2d center(int ix, int iy) const {
    return {window_.xmin + (ix + 0.5) * h_, window_.ymin + (iy + 0.5) * h_};
  }
  /// Integer pixel coordinates of the pixel containing p; may lie outside.
  int pixel_x(double x) const {
    return static_cast<int>(std::floor((x - window_.xmin) / h_));
  }
  int pixel_y(double y) const {
    return static_cast<int>(std::floor((y - window_.ymin) / h_));
  }
  bool inside(int ix, int iy) const {
    return ix >= 0 && iy >= 0 && ix < width_ && iy < height_;
  }
  /// Flat index of the pixel containing p, or -1 outside the window.
  std::int64_t locate(const Point2d& p) const;

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.width_ == b.width_ && a.height_ == b.height_ &&
           a.window_.xmin == b.window_.xmin && a.window_.ymin == b.window_.ymin &&
           a.window_.xmax == b.window_.xmax && a.window_.ymax == b.window_.ymax;
  }

 private:
  Box window_;
  int width_ = 0, height_ = 0;
  double h_ = 0;
};

/// One bit per pixel; bit set iff the pixel center belongs to the set.
class RasterSet {
 public:
  RasterSet() = default;
  explicit RasterSet(const Grid& grid);
  static RasterSet full(const Grid& grid);

  const Grid& grid() const { return grid_; }
  int width() const { return grid_.width(); }
  int height() const { return grid_.height(); }

  bool get(int ix, int iy) const {
    return (rows_[row_offset(iy) + (ix >> 6)] >> (ix & 63)) & 1u;
  }
  bool get(std::int64_t flat) const {
    return get(static_cast<int>(flat % width()), static_cast<int>(flat / width()));
  }
  /// False outside the window.
  bool get_checked(int ix, int iy) const { return grid_.inside(ix, iy) && get(ix, iy); }
  void set(int ix, int iy, bool value = true) {
    auto& w = rows_[row_offset(iy) + (ix >> 6)];
    const std::uint64_t bit = std::uint64_t(1) << (ix & 63);
    w = value ? (w | bit) : (w & ~bit);
  }

  /// Membership of the pixel containing p.
  bool test(const Point2d& p) const;
  /// True when some set pixel lies within Chebyshev distance k of the pixel
  /// containing p; p may be outside the window.
  bool test_dilated(const Point2d& p, int k) const;

  std::int64_t count() const;
  bool empty() const;
  /// Pixel bounding box [x0, x1] x [y0, y1] inclusive; false when empty.
  bool bbox(int& x0, int& y0, int& x1, int& y1) const;

  RasterSet& operator|=(const RasterSet& o);
  RasterSet& operator&=(const RasterSet& o);
  RasterSet& operator-=(const RasterSet& o);
  friend bool operator==(const RasterSet& a, const RasterSet& b) {
    return a.grid_ == b.grid_ && a.rows_ == b.rows_;
  }

  const std::vector<std::uint64_t>& words() const { return rows_; }
  int words_per_row() const { return wpr_; }
  std::uint64_t* row(int iy) { return rows_.data() + row_offset(iy); }
  const std::uint64_t* row(int iy) const { return rows_.data() + row_offset(iy); }

 private:
  std::size_t row_offset(int iy) const { return std::size_t(iy) * wpr_; }
  void clear_padding();
  void require_same_grid(const RasterSet& o) const;

  Grid grid_;
  int wpr_ = 0;
  std::vector<std::uint64_t> rows_;
};

RasterSet unite(RasterSet a, const RasterSet& b);
RasterSet intersect(RasterSet a, const RasterSet& b);
RasterSet difference(RasterSet a, const RasterSet& b);
RasterSet complement(const RasterSet& r);
bool is_subset(const RasterSet& a, const RasterSet& b);
bool disjoint(const RasterSet& a, const RasterSet& b);

/// Pull-back sampling: target pixel p is set iff m^-1(center p) falls in a
/// set pixel of r. Pixels pulling back outside r's window are counted in
/// `outside` when given.
RasterSet transform(const RasterSet& r, const AffineMap2d& m, const Grid& target,
                    std::int64_t* outside = nullptr);

/// Chebyshev (8-neighbour) morphology, k steps; outside the window is unset.
RasterSet erode(const RasterSet& r, int k);
RasterSet dilate(const RasterSet& r, int k);
/// Set pixels 4-adjacent to an unset pixel or the window edge.
RasterSet boundary(const RasterSet& r);

/// Distance from p to the nearest set-pixel center; +inf when empty.
double distance_to(const Point2d& p, const RasterSet& r);

/// r1 within dilate(r2, slack) and r2 within dilate(r1, slack).
bool equal_within(const RasterSet& r1, const RasterSet& r2, int slack_px);

/// Deterministic ball subdivision of the attractor; a superset of A at
/// pixel scale.
RasterSet rasterize_attractor(const Ifs& ifs, const Grid& grid, double tol_px = 0.75);

/// Scanline fill of a simple polygon by pixel centers.
RasterSet rasterize_polygon(const std::vector<Point2d>& polygon, const Grid& grid);

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Packed RGB image, row iy = 0 at the bottom like Grid.
struct Image {
  int width = 0, height = 0;
  std::vector<Rgb> pixels;

  Image() = default;
  Image(int w, int h, Rgb fill = {}) : width(w), height(h), pixels(std::size_t(w) * h, fill) {}
  Rgb& at(int ix, int iy) { return pixels[std::size_t(iy) * width + ix]; }
  const Rgb& at(int ix, int iy) const { return pixels[std::size_t(iy) * width + ix]; }
  friend bool operator==(const Image&, const Image&) = default;
};

/// Binary P4 / P6 encodings, top row first.
std::string encode_pbm(const RasterSet& r);
std::string encode_ppm(const Image& img);
RasterSet decode_pbm(const std::string& bytes, const Grid& grid);
Image decode_ppm(const std::string& bytes);

/// Writes through a temporary file and rename; errors name the path.
void write_file_atomic(const std::string& path, const std::string& bytes);
std::string read_file(const std::string& path);

}  // namespace toptile

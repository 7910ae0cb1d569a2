#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "toptile/affine.hpp"
#include "toptile/word.hpp"

namespace toptile {

/// Axis-aligned rectangle in the plane.
struct Box {
  double xmin = 0, ymin = 0, xmax = 0, ymax = 0;

  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  double diagonal() const { return std::hypot(width(), height()); }
  Box padded(double fraction) const;
  Box squared() const;
};

/// Ordered system of invertible planar contractions, symbols 1..M.
class Ifs {
 public:
  explicit Ifs(std::vector<AffineMap2d> maps, std::string name = {});

  /// square4, overlap4, leaf2 or hat7.
  static Ifs preset(std::string_view name);
  static const std::vector<std::string>& preset_names();

  /// Six decimals `a b c d e f` per line, `#` starts a comment line.
  static Ifs parse_config(std::istream& in, std::string name = {});
  static Ifs load_config(const std::string& path);

  const std::string& name() const { return name_; }
  int size() const { return static_cast<int>(maps_.size()); }
  const AffineMap2d& map(Symbol i) const { return maps_.at(i - 1); }
  const AffineMap2d& inverse_map(Symbol i) const { return inverses_.at(i - 1); }
  const Point2d& fixed(Symbol i) const { return fixed_.at(i - 1); }
  const std::vector<AffineMap2d>& maps() const { return maps_; }

  double lambda() const { return lambda_; }
  const Point2d& center() const { return center_; }
  double radius() const { return radius_; }
  double diameter_bound() const { return 2 * radius_; }

  /// Outer bounding box of the attractor, accurate to `tol` (absolute).
  Box attractor_bounds(double tol) const;
  /// attractor_bounds with tolerance 1e-4 of the ball diameter.
  Box attractor_bounds() const;

 private:
  std::string name_;
  std::vector<AffineMap2d> maps_;
  std::vector<AffineMap2d> inverses_;
  std::vector<Point2d> fixed_;
  double lambda_ = 0;
  Point2d center_ = Point2d::Zero();
  double radius_ = 0;
};

/// f_{w1} o f_{w2} o ... o f_{wk}; identity for the empty word.
AffineMap2d compose_word(const Ifs& ifs, const Word& w);

/// f_{w1}^-1 o f_{w2}^-1 o ... o f_{wk}^-1, the inverse of
/// compose_word(reverse(w)).
AffineMap2d inverse_compose_word(const Ifs& ifs, const Word& w);

/// f_{a1}(f_{a2}(...f_{am}(center))), evaluated innermost first so that
/// project(i.a, m+1) == f_i(project(a, m)) in floating point.
Point2d project(const Ifs& ifs, const PeriodicAddress& addr, std::size_t m);

/// Smallest depth m with lambda^m * diameter_bound <= tol.
std::size_t projection_depth(const Ifs& ifs, double tol);

}  // namespace toptile

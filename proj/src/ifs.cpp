#include "toptile/ifs.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace toptile {

Box Box::padded(double fraction) const {
  const double px = width() * fraction, py = height() * fraction;
  return {xmin - px, ymin - py, xmax + px, ymax + py};
}

Box Box::squared() const {
  const double side = std::max(width(), height());
  const double cx = (xmin + xmax) / 2, cy = (ymin + ymax) / 2;
  return {cx - side / 2, cy - side / 2, cx + side / 2, cy + side / 2};
}

Ifs::Ifs(std::vector<AffineMap2d> maps, std::string name)
    : name_(std::move(name)), maps_(std::move(maps)) {
  if (maps_.size() < 2)
    throw std::invalid_argument("an IFS needs at least two maps");
  if (maps_.size() > 255)
    throw std::invalid_argument("at most 255 maps are supported");
  for (std::size_t i = 0; i < maps_.size(); ++i) {
    const double norm = maps_[i].operator_norm();
    if (!(norm < 1))
      throw std::invalid_argument("map " + std::to_string(i + 1) +
                                  " is not a strict contraction (norm " +
                                  std::to_string(norm) + ")");
    lambda_ = std::max(lambda_, norm);
    inverses_.push_back(inverse(maps_[i]));
    fixed_.push_back(fixed_point(maps_[i]));
  }
  for (const auto& p : fixed_) center_ += p;
  center_ /= static_cast<double>(fixed_.size());
  double spread = 0;
  for (const auto& p : fixed_) spread = std::max(spread, (p - center_).norm());
  // |f_i(x) - c| <= lambda (r + spread) + spread <= r.
  radius_ = spread * (1 + lambda_) / (1 - lambda_);
  if (radius_ == 0) radius_ = 1e-300;
}

namespace {

AffineMap2d similarity(double scale, double theta, double tx, double ty) {
  const double c = scale * std::cos(theta), s = scale * std::sin(theta);
  return AffineMap2d::from_coefficients(c, -s, s, c, tx, ty);
}

Ifs make_hat7() {
  using std::numbers::pi;
  const double r5 = std::sqrt(5.0), r3 = std::sqrt(3.0), r15 = std::sqrt(15.0);
  const double s = 2 / (r5 + 3);
  const double q = (r5 - 1) / 4;
  return Ifs({similarity(s, 0, 0, 0),
              similarity(s, -pi / 3, q, q * r3),
              similarity(s, -2 * pi / 3, 3 * q, q * r3),
              similarity(s, 2 * pi / 3, (3 + r5) / 4, (r3 - r15) / 4),
              similarity(s, pi / 3, (5 - r5) / 4, (r3 - r15) / 4),
              similarity(s, 0, (3 - r5) / 2, 0),
              similarity(s, 0, (r5 - 1) / 2, 0)},
             "hat7");
}

}  // namespace

const std::vector<std::string>& Ifs::preset_names() {
  static const std::vector<std::string> names{"square4", "overlap4", "leaf2",
                                              "hat7"};
  return names;
}

Ifs Ifs::preset(std::string_view name) {
  using M = AffineMap2d;
  if (name == "square4")
    return Ifs({M::from_coefficients(0.5, 0, 0, 0.5, 0, 0),
                M::from_coefficients(0.5, 0, 0, 0.5, 0.5, 0),
                M::from_coefficients(0.5, 0, 0, 0.5, 0, 0.5),
                M::from_coefficients(0.5, 0, 0, 0.5, 0.5, 0.5)},
               "square4");
  if (name == "overlap4")
    return Ifs({M::from_coefficients(0.6, 0, 0, 0.6, 0, 0),
                M::from_coefficients(0.6, 0, 0, 0.6, 0.4, 0),
                M::from_coefficients(0.6, 0, 0, 0.6, 0, 0.4),
                M::from_coefficients(0.6, 0, 0, 0.6, 0.4, 0.4)},
               "overlap4");
  if (name == "leaf2")
    return Ifs({M::from_coefficients(0.7526, -0.2190, 0.2190, 0.7526, 0.2474,
                                     -0.0726),
                M::from_coefficients(-0.7526, 0.2190, 0.2190, 0.7526, 1.0349,
                                     0.0678)},
               "leaf2");
  if (name == "hat7") return make_hat7();
  throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
}

Ifs Ifs::parse_config(std::istream& in, std::string name) {
  std::vector<AffineMap2d> maps;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    double v[6];
    for (double& x : v)
      if (!(fields >> x))
        throw std::invalid_argument("line " + std::to_string(lineno) +
                                    ": expected six numbers a b c d e f");
    std::string extra;
    if (fields >> extra)
      throw std::invalid_argument("line " + std::to_string(lineno) +
                                  ": trailing text '" + extra + "'");
    maps.push_back(AffineMap2d::from_coefficients(v[0], v[1], v[2], v[3], v[4], v[5]));
  }
  return Ifs(std::move(maps), std::move(name));
}

Ifs Ifs::load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open IFS config '" + path + "'");
  try {
    return parse_config(in, path);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

Box Ifs::attractor_bounds(double tol) const {
  // Inner box from points known to lie in A, outer box from covering balls.
  const Point2d seed = fixed_[0];
  Box inner{seed.x(), seed.y(), seed.x(), seed.y()};
  Box outer = inner;
  struct Node {
    AffineMap2d map;
    double scale;
  };
  std::vector<Node> stack;
  stack.push_back({AffineMap2d::identity(), 1.0});
  while (!stack.empty()) {
    const Node node = stack.back();
    stack.pop_back();
    const Point2d c = node.map(center_);
    const double r = node.scale * radius_;
    const Point2d in_a = node.map(seed);
    inner.xmin = std::min(inner.xmin, in_a.x());
    inner.xmax = std::max(inner.xmax, in_a.x());
    inner.ymin = std::min(inner.ymin, in_a.y());
    inner.ymax = std::max(inner.ymax, in_a.y());
    const bool extends = c.x() - r < inner.xmin || c.x() + r > inner.xmax ||
                         c.y() - r < inner.ymin || c.y() + r > inner.ymax;
    if (!extends) continue;
    if (r <= tol) {
      outer.xmin = std::min(outer.xmin, c.x() - r);
      outer.xmax = std::max(outer.xmax, c.x() + r);
      outer.ymin = std::min(outer.ymin, c.y() - r);
      outer.ymax = std::max(outer.ymax, c.y() + r);
      continue;
    }
    for (int i = size(); i >= 1; --i) {
      const AffineMap2d next = node.map * maps_[i - 1];
      stack.push_back({next, next.operator_norm()});
    }
  }
  outer.xmin = std::min(outer.xmin, inner.xmin);
  outer.xmax = std::max(outer.xmax, inner.xmax);
  outer.ymin = std::min(outer.ymin, inner.ymin);
  outer.ymax = std::max(outer.ymax, inner.ymax);
  return outer;
}

Box Ifs::attractor_bounds() const { return attractor_bounds(1e-4 * diameter_bound()); }

AffineMap2d compose_word(const Ifs& ifs, const Word& w) {
  AffineMap2d out = AffineMap2d::identity();
  for (Symbol s : w) out = out * ifs.map(s);
  return out;
}

AffineMap2d inverse_compose_word(const Ifs& ifs, const Word& w) {
  AffineMap2d out = AffineMap2d::identity();
  for (Symbol s : w) out = out * ifs.inverse_map(s);
  return out;
}

Point2d project(const Ifs& ifs, const PeriodicAddress& addr, std::size_t m) {
  Point2d x = ifs.center();
  for (std::size_t n = m; n-- > 0;) x = ifs.map(addr.at(n))(x);
  return x;
}

std::size_t projection_depth(const Ifs& ifs, double tol) {
  if (!(tol > 0)) throw std::invalid_argument("projection tolerance must be positive");
  std::size_t m = 0;
  double err = ifs.diameter_bound();
  while (err > tol && m < 4096) {
    err *= ifs.lambda();
    ++m;
  }
  return m;
}

}  // namespace toptile

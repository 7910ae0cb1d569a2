// Searches for an interior certificate polygon: an eroded attractor raster
// shrunk until its images cover it with margin, then outlined and simplified.
//   certgen <preset> [out.txt]

#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <sstream>

#include "toptile/tiling.hpp"

using namespace toptile;

namespace {

struct Corner {
  int x, y;
  friend bool operator<(const Corner& a, const Corner& b) {
    return a.y != b.y ? a.y < b.y : a.x < b.x;
  }
  friend bool operator==(const Corner&, const Corner&) = default;
};

// Outer boundary of the component holding the lowest set pixel, as pixel
// corners in counter-clockwise order.
std::vector<Corner> trace_outline(const RasterSet& r) {
  std::multimap<Corner, Corner> edges;
  for (int iy = 0; iy < r.height(); ++iy)
    for (int ix = 0; ix < r.width(); ++ix) {
      if (!r.get(ix, iy)) continue;
      if (!r.get_checked(ix, iy - 1)) edges.insert({{ix, iy}, {ix + 1, iy}});
      if (!r.get_checked(ix + 1, iy)) edges.insert({{ix + 1, iy}, {ix + 1, iy + 1}});
      if (!r.get_checked(ix, iy + 1)) edges.insert({{ix + 1, iy + 1}, {ix, iy + 1}});
      if (!r.get_checked(ix - 1, iy)) edges.insert({{ix, iy + 1}, {ix, iy}});
    }
  if (edges.empty()) return {};
  const Corner start = edges.begin()->first;
  std::vector<Corner> out{start};
  Corner cur = start, prev = {start.x - 1, start.y};
  for (;;) {
    auto [lo, hi] = edges.equal_range(cur);
    auto pick = lo;
    if (std::distance(lo, hi) > 1) {
      // Pinch vertex: turn left to stay on a 4-connected outline.
      const int dx = cur.x - prev.x, dy = cur.y - prev.y;
      for (auto it = lo; it != hi; ++it)
        if (it->second.x - cur.x == -dy && it->second.y - cur.y == dx) pick = it;
    }
    const Corner next = pick->second;
    edges.erase(pick);
    if (next == start) break;
    prev = cur;
    cur = next;
    out.push_back(cur);
  }
  return out;
}

void douglas_peucker(const std::vector<Point2d>& p, std::size_t a, std::size_t b, double tol,
                     std::vector<char>& keep) {
  if (b <= a + 1) return;
  const Point2d d = p[b] - p[a];
  const double len = d.norm();
  double best = -1;
  std::size_t idx = a;
  for (std::size_t i = a + 1; i < b; ++i) {
    const Point2d v = p[i] - p[a];
    const double dist = len > 0 ? std::abs(d.x() * v.y() - d.y() * v.x()) / len : v.norm();
    if (dist > best) best = dist, idx = i;
  }
  if (best > tol) {
    keep[idx] = 1;
    douglas_peucker(p, a, idx, tol, keep);
    douglas_peucker(p, idx, b, tol, keep);
  }
}

std::vector<Point2d> simplify(const std::vector<Point2d>& ring, double tol) {
  std::vector<Point2d> p = ring;
  p.push_back(ring.front());
  std::vector<char> keep(p.size(), 0);
  keep.front() = keep.back() = 1;
  // Split at the far point so the closed ring keeps two anchors.
  std::size_t far = 0;
  for (std::size_t i = 0; i < ring.size(); ++i)
    if ((ring[i] - ring[0]).norm() > (ring[far] - ring[0]).norm()) far = i;
  keep[far] = 1;
  douglas_peucker(p, 0, far, tol, keep);
  douglas_peucker(p, far, p.size() - 1, tol, keep);
  std::vector<Point2d> out;
  for (std::size_t i = 0; i + 1 < p.size(); ++i)
    if (keep[i]) out.push_back(p[i]);
  return out;
}

// Largest Q inside r with Q within the union of erode(f_i(Q), margin).
RasterSet self_covering(const Ifs& ifs, RasterSet q, int margin) {
  for (;;) {
    RasterSet cover(q.grid());
    for (int i = 1; i <= ifs.size(); ++i)
      cover |= erode(transform(q, ifs.map(Symbol(i)), q.grid()), margin);
    RasterSet next = intersect(q, cover);
    if (next == q) return q;
    q = std::move(next);
  }
}

bool segments_cross(const Point2d& a, const Point2d& b, const Point2d& c, const Point2d& d) {
  auto orient = [](const Point2d& p, const Point2d& q, const Point2d& r) {
    const double v = (q.x() - p.x()) * (r.y() - p.y()) - (q.y() - p.y()) * (r.x() - p.x());
    return (v > 0) - (v < 0);
  };
  return orient(a, b, c) * orient(a, b, d) < 0 && orient(c, d, a) * orient(c, d, b) < 0;
}

bool is_simple(const std::vector<Point2d>& poly) {
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (segments_cross(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n])) return false;
    }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: certgen <preset> [out.txt]\n";
    return 2;
  }
  const Ifs ifs = Ifs::preset(argv[1]);
  const Box box = ifs.attractor_bounds().padded(0.05);
  const Grid g = Grid::covering(box, 1024, 1024);
  const Grid fine = Grid::covering(box, 2048, 2048);
  const RasterSet a = rasterize_attractor(ifs, g);
  const double h = g.pixel_size();

  for (int d : {2, 3, 4, 6, 8, 10, 12, 16, 20, 24, 32}) {
    const auto ring = trace_outline(self_covering(ifs, erode(a, d), 2));
    if (ring.size() < 3) break;
    std::vector<Point2d> pts;
    for (const auto& c : ring) pts.emplace_back(g.window().xmin + c.x * h, g.window().ymin + c.y * h);
    for (double tol : {4.0, 2.0, 1.0}) {
      const auto poly = simplify(pts, tol * h);
      if (poly.size() < 3 || !is_simple(poly)) continue;
      const bool ok = interior_certificate(ifs, poly, g) && interior_certificate(ifs, poly, fine);
      std::cerr << "erode " << d << " tol " << tol << " vertices " << poly.size()
                << (ok ? " accepted\n" : " rejected\n");
      if (!ok) continue;
      std::ostringstream os;
      os.precision(17);
      os << "# " << argv[1] << " interior certificate, " << poly.size() << " vertices\n";
      for (const auto& p : poly) os << p.x() << " " << p.y() << "\n";
      if (argc > 2) write_file_atomic(argv[2], os.str());
      else std::cout << os.str();
      return 0;
    }
  }
  std::cerr << "no certificate found\n";
  return 1;
}

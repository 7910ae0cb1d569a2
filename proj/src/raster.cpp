#include "toptile/raster.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace toptile {

Grid::Grid(Box window, int width, int height)
    : window_(window), width_(width), height_(height) {
  if (width <= 0 || height <= 0)
    throw std::invalid_argument("grid needs positive pixel counts");
  if (!(window.xmax > window.xmin) || !(window.ymax > window.ymin))
    throw std::invalid_argument("grid window is degenerate");
  const double hx = window.width() / width, hy = window.height() / height;
  if (std::abs(hx - hy) > 1e-12 * std::max(1.0, std::max(hx, hy)))
    throw std::invalid_argument("grid pixels are not square");
  h_ = hx;
}

Grid Grid::covering(const Box& box, int width, int height) {
  if (width <= 0 || height <= 0)
    throw std::invalid_argument("grid needs positive pixel counts");
  const double h = std::max(box.width() / width, box.height() / height);
  const double cx = (box.xmin + box.xmax) / 2, cy = (box.ymin + box.ymax) / 2;
  Box w{cx - h * width / 2, cy - h * height / 2, 0, 0};
  w.xmax = w.xmin + h * width;
  w.ymax = w.ymin + h * height;
  return Grid(w, width, height);
}

std::int64_t Grid::locate(const Point2d& p) const {
  const double fx = (p.x() - window_.xmin) / h_, fy = (p.y() - window_.ymin) / h_;
  if (!(fx >= 0 && fy >= 0 && fx < width_ && fy < height_)) return -1;
  const int ix = std::min(width_ - 1, static_cast<int>(fx));
  const int iy = std::min(height_ - 1, static_cast<int>(fy));
  return std::int64_t(iy) * width_ + ix;
}

RasterSet::RasterSet(const Grid& grid)
    : grid_(grid), wpr_((grid.width() + 63) / 64),
      rows_(std::size_t(wpr_) * grid.height(), 0) {}

RasterSet RasterSet::full(const Grid& grid) {
  RasterSet r(grid);
  std::fill(r.rows_.begin(), r.rows_.end(), ~std::uint64_t(0));
  r.clear_padding();
  return r;
}

void RasterSet::clear_padding() {
  const int tail = width() & 63;
  if (tail == 0 || wpr_ == 0) return;
  const std::uint64_t mask = (std::uint64_t(1) << tail) - 1;
  for (int iy = 0; iy < height(); ++iy) rows_[row_offset(iy) + wpr_ - 1] &= mask;
}

void RasterSet::require_same_grid(const RasterSet& o) const {
  if (!(grid_ == o.grid_)) throw std::invalid_argument("raster grids differ");
}

bool RasterSet::test(const Point2d& p) const {
  const auto flat = grid_.locate(p);
  return flat >= 0 && get(flat);
}

bool RasterSet::test_dilated(const Point2d& p, int k) const {
  const double fx = (p.x() - grid_.window().xmin) / grid_.pixel_size();
  const double fy = (p.y() - grid_.window().ymin) / grid_.pixel_size();
  if (!std::isfinite(fx) || !std::isfinite(fy)) return false;
  if (fx < -k - 1 || fy < -k - 1 || fx > width() + k + 1 || fy > height() + k + 1)
    return false;
  const int ix = static_cast<int>(std::floor(fx)), iy = static_cast<int>(std::floor(fy));
  for (int y = std::max(0, iy - k); y <= std::min(height() - 1, iy + k); ++y)
    for (int x = std::max(0, ix - k); x <= std::min(width() - 1, ix + k); ++x)
      if (get(x, y)) return true;
  return false;
}

std::int64_t RasterSet::count() const {
  std::int64_t n = 0;
  for (auto w : rows_) n += std::popcount(w);
  return n;
}

bool RasterSet::empty() const {
  return std::all_of(rows_.begin(), rows_.end(), [](auto w) { return w == 0; });
}

bool RasterSet::bbox(int& x0, int& y0, int& x1, int& y1) const {
  x0 = width(), y0 = height(), x1 = -1, y1 = -1;
  for (int iy = 0; iy < height(); ++iy) {
    const std::uint64_t* r = row(iy);
    for (int wi = 0; wi < wpr_; ++wi) {
      if (!r[wi]) continue;
      y0 = std::min(y0, iy);
      y1 = iy;
      x0 = std::min(x0, wi * 64 + std::countr_zero(r[wi]));
      x1 = std::max(x1, wi * 64 + 63 - std::countl_zero(r[wi]));
    }
  }
  return x1 >= 0;
}

RasterSet& RasterSet::operator|=(const RasterSet& o) {
  require_same_grid(o);
  for (std::size_t i = 0; i < rows_.size(); ++i) rows_[i] |= o.rows_[i];
  return *this;
}

RasterSet& RasterSet::operator&=(const RasterSet& o) {
  require_same_grid(o);
  for (std::size_t i = 0; i < rows_.size(); ++i) rows_[i] &= o.rows_[i];
  return *this;
}

RasterSet& RasterSet::operator-=(const RasterSet& o) {
  require_same_grid(o);
  for (std::size_t i = 0; i < rows_.size(); ++i) rows_[i] &= ~o.rows_[i];
  return *this;
}

RasterSet unite(RasterSet a, const RasterSet& b) { return a |= b; }
RasterSet intersect(RasterSet a, const RasterSet& b) { return a &= b; }
RasterSet difference(RasterSet a, const RasterSet& b) { return a -= b; }
RasterSet complement(const RasterSet& r) { return difference(RasterSet::full(r.grid()), r); }

bool is_subset(const RasterSet& a, const RasterSet& b) {
  if (!(a.grid() == b.grid())) throw std::invalid_argument("raster grids differ");
  for (std::size_t i = 0; i < a.words().size(); ++i)
    if (a.words()[i] & ~b.words()[i]) return false;
  return true;
}

bool disjoint(const RasterSet& a, const RasterSet& b) {
  if (!(a.grid() == b.grid())) throw std::invalid_argument("raster grids differ");
  for (std::size_t i = 0; i < a.words().size(); ++i)
    if (a.words()[i] & b.words()[i]) return false;
  return true;
}

RasterSet transform(const RasterSet& r, const AffineMap2d& m, const Grid& target,
                    std::int64_t* outside) {
  const AffineMap2d back = inverse(m);
  RasterSet out(target);
  std::int64_t missed = 0;
  for (int iy = 0; iy < target.height(); ++iy) {
    for (int ix = 0; ix < target.width(); ++ix) {
      const auto flat = r.grid().locate(back(target.center(ix, iy)));
      if (flat < 0) {
        ++missed;
        continue;
      }
      if (r.get(flat)) out.set(ix, iy);
    }
  }
  if (outside) *outside = missed;
  return out;
}

namespace {

// Bit ix of the result holds bit ix-1 (left) or ix+1 (right) of the row.
inline std::uint64_t from_left(const std::uint64_t* row, int wi) {
  return (row[wi] << 1) | (wi > 0 ? row[wi - 1] >> 63 : 0);
}
inline std::uint64_t from_right(const std::uint64_t* row, int wi, int wpr) {
  return (row[wi] >> 1) | (wi + 1 < wpr ? row[wi + 1] << 63 : 0);
}

RasterSet step(const RasterSet& r, bool grow, bool four) {
  const int h = r.height(), wpr = r.words_per_row();
  RasterSet horiz(r.grid());
  for (int iy = 0; iy < h; ++iy) {
    const std::uint64_t* src = r.row(iy);
    std::uint64_t* dst = horiz.row(iy);
    for (int wi = 0; wi < wpr; ++wi) {
      const std::uint64_t l = from_left(src, wi), rr = from_right(src, wi, wpr);
      dst[wi] = grow ? (src[wi] | l | rr) : (src[wi] & l & rr);
    }
  }
  RasterSet out(r.grid());
  const RasterSet& vsrc = four ? r : horiz;
  for (int iy = 0; iy < h; ++iy) {
    const std::uint64_t* mid = horiz.row(iy);
    std::uint64_t* dst = out.row(iy);
    for (int wi = 0; wi < wpr; ++wi) {
      const std::uint64_t up = iy + 1 < h ? vsrc.row(iy + 1)[wi] : 0;
      const std::uint64_t down = iy > 0 ? vsrc.row(iy - 1)[wi] : 0;
      dst[wi] = grow ? (mid[wi] | up | down) : (mid[wi] & up & down);
    }
  }
  // Padding bits of the right edge: the shifted-in bit from the padding is
  // zero, so only dilation can leak into it.
  if (grow) {
    const int tail = r.width() & 63;
    if (tail) {
      const std::uint64_t mask = (std::uint64_t(1) << tail) - 1;
      for (int iy = 0; iy < h; ++iy) out.row(iy)[wpr - 1] &= mask;
    }
  }
  return out;
}

}  // namespace

RasterSet erode(const RasterSet& r, int k) {
  if (k < 0) throw std::invalid_argument("erode: negative radius");
  RasterSet out = r;
  for (int i = 0; i < k; ++i) out = step(out, false, false);
  return out;
}

RasterSet dilate(const RasterSet& r, int k) {
  if (k < 0) throw std::invalid_argument("dilate: negative radius");
  RasterSet out = r;
  for (int i = 0; i < k; ++i) out = step(out, true, false);
  return out;
}

RasterSet boundary(const RasterSet& r) { return difference(r, step(r, false, true)); }

double distance_to(const Point2d& p, const RasterSet& r) {
  if (r.empty()) return std::numeric_limits<double>::infinity();
  const Grid& g = r.grid();
  const double h = g.pixel_size();
  const Box& w = g.window();
  const double cx = std::clamp(p.x(), w.xmin, w.xmax);
  const double cy = std::clamp(p.y(), w.ymin, w.ymax);
  const int px = std::clamp(g.pixel_x(cx), 0, g.width() - 1);
  const int py = std::clamp(g.pixel_y(cy), 0, g.height() - 1);
  double best = std::numeric_limits<double>::infinity();
  const int max_ring = std::max(g.width(), g.height());
  auto visit = [&](int x, int y) {
    if (!g.inside(x, y) || !r.get(x, y)) return;
    best = std::min(best, (g.center(x, y) - p).norm());
  };
  for (int ring = 0; ring <= max_ring; ++ring) {
    if ((ring - 0.5) * h > best) break;
    if (ring == 0) {
      visit(px, py);
      continue;
    }
    for (int x = px - ring; x <= px + ring; ++x) {
      visit(x, py - ring);
      visit(x, py + ring);
    }
    for (int y = py - ring + 1; y <= py + ring - 1; ++y) {
      visit(px - ring, y);
      visit(px + ring, y);
    }
  }
  return best;
}

bool equal_within(const RasterSet& r1, const RasterSet& r2, int slack_px) {
  return is_subset(r1, dilate(r2, slack_px)) && is_subset(r2, dilate(r1, slack_px));
}

RasterSet rasterize_attractor(const Ifs& ifs, const Grid& grid, double tol_px) {
  if (!(tol_px >= 0.5)) throw std::invalid_argument("tol_px must be at least 0.5");
  const double h = grid.pixel_size();
  const double tol = tol_px * h;
  // Any disk containing A works: A is inside every f_w(disk) union.
  const Box bounds = ifs.attractor_bounds();
  const Point2d c((bounds.xmin + bounds.xmax) / 2, (bounds.ymin + bounds.ymax) / 2);
  const double r0 = bounds.diagonal() / 2 + 1e-9;
  const Box& win = grid.window();
  RasterSet out(grid);

  auto disk_range = [&](const Point2d& p, double rho, int& x0, int& y0, int& x1, int& y1) {
    x0 = std::max(0, static_cast<int>(std::ceil((p.x() - rho - win.xmin) / h - 0.5)));
    x1 = std::min(grid.width() - 1,
                  static_cast<int>(std::floor((p.x() + rho - win.xmin) / h - 0.5)));
    y0 = std::max(0, static_cast<int>(std::ceil((p.y() - rho - win.ymin) / h - 0.5)));
    y1 = std::min(grid.height() - 1,
                  static_cast<int>(std::floor((p.y() + rho - win.ymin) / h - 0.5)));
    return x0 <= x1 && y0 <= y1;
  };

  struct Node {
    AffineMap2d map;
    double radius;
  };
  std::vector<Node> stack{{AffineMap2d::identity(), r0}};
  while (!stack.empty()) {
    const Node node = stack.back();
    stack.pop_back();
    const Point2d p = node.map(c);
    const double rho = node.radius + tol;
    if (p.x() + rho < win.xmin || p.x() - rho > win.xmax || p.y() + rho < win.ymin ||
        p.y() - rho > win.ymax)
      continue;
    int x0, y0, x1, y1;
    const bool leaf = node.radius <= tol;
    if (leaf || rho <= 16 * h) {
      if (!disk_range(p, rho, x0, y0, x1, y1)) continue;
      bool covered = true;
      for (int iy = y0; iy <= y1 && covered; ++iy)
        for (int ix = x0; ix <= x1; ++ix)
          if ((grid.center(ix, iy) - p).norm() <= rho && !out.get(ix, iy)) {
            covered = false;
            break;
          }
      if (covered) continue;
      if (leaf) {
        for (int iy = y0; iy <= y1; ++iy)
          for (int ix = x0; ix <= x1; ++ix)
            if ((grid.center(ix, iy) - p).norm() <= rho) out.set(ix, iy);
        continue;
      }
    }
    for (int i = ifs.size(); i >= 1; --i) {
      const AffineMap2d next = node.map * ifs.map(static_cast<Symbol>(i));
      stack.push_back({next, next.operator_norm() * r0});
    }
  }
  return out;
}

RasterSet rasterize_polygon(const std::vector<Point2d>& polygon, const Grid& grid) {
  if (polygon.size() < 3) throw std::invalid_argument("polygon needs at least 3 vertices");
  double area = 0;
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    const auto& a = polygon[i];
    const auto& b = polygon[(i + 1) % polygon.size()];
    area += a.x() * b.y() - a.y() * b.x();
  }
  if (std::abs(area) < 1e-14) throw std::invalid_argument("polygon is degenerate");
  RasterSet out(grid);
  std::vector<double> xs;
  for (int iy = 0; iy < grid.height(); ++iy) {
    const double y = grid.center(0, iy).y();
    xs.clear();
    for (std::size_t i = 0; i < polygon.size(); ++i) {
      const auto& a = polygon[i];
      const auto& b = polygon[(i + 1) % polygon.size()];
      if ((a.y() <= y) == (b.y() <= y)) continue;
      xs.push_back(a.x() + (y - a.y()) * (b.x() - a.x()) / (b.y() - a.y()));
    }
    std::sort(xs.begin(), xs.end());
    for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
      const double h = grid.pixel_size(), x0 = grid.window().xmin;
      const int a = std::max(0, static_cast<int>(std::ceil((xs[k] - x0) / h - 0.5)));
      const int b = std::min(grid.width() - 1,
                             static_cast<int>(std::ceil((xs[k + 1] - x0) / h - 0.5)) - 1);
      for (int ix = a; ix <= b; ++ix) out.set(ix, iy);
    }
  }
  return out;
}

std::string encode_pbm(const RasterSet& r) {
  std::string out = "P4\n" + std::to_string(r.width()) + " " + std::to_string(r.height()) + "\n";
  const int bytes_per_row = (r.width() + 7) / 8;
  for (int iy = r.height() - 1; iy >= 0; --iy) {
    for (int b = 0; b < bytes_per_row; ++b) {
      unsigned char byte = 0;
      for (int bit = 0; bit < 8; ++bit) {
        const int ix = b * 8 + bit;
        if (ix < r.width() && r.get(ix, iy)) byte |= static_cast<unsigned char>(0x80u >> bit);
      }
      out.push_back(static_cast<char>(byte));
    }
  }
  return out;
}

std::string encode_ppm(const Image& img) {
  std::string out = "P6\n" + std::to_string(img.width) + " " +
                    std::to_string(img.height) + "\n255\n";
  out.reserve(out.size() + img.pixels.size() * 3);
  for (int iy = img.height - 1; iy >= 0; --iy)
    for (int ix = 0; ix < img.width; ++ix) {
      const Rgb& c = img.at(ix, iy);
      out.push_back(static_cast<char>(c.r));
      out.push_back(static_cast<char>(c.g));
      out.push_back(static_cast<char>(c.b));
    }
  return out;
}

namespace {

// Reads the whitespace/comment separated header fields of a PNM file.
std::size_t read_header(const std::string& bytes, int fields, std::vector<long>& out,
                        std::string& magic) {
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        ++pos;
      } else {
        break;
      }
    }
  };
  if (bytes.size() < 2) throw std::runtime_error("truncated image header");
  magic = bytes.substr(0, 2);
  pos = 2;
  for (int i = 0; i < fields; ++i) {
    skip();
    std::size_t end = pos;
    while (end < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[end]))) ++end;
    if (end == pos) throw std::runtime_error("malformed image header");
    out.push_back(std::stol(bytes.substr(pos, end - pos)));
    pos = end;
  }
  if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos])))
    throw std::runtime_error("malformed image header");
  return pos + 1;
}

}  // namespace

RasterSet decode_pbm(const std::string& bytes, const Grid& grid) {
  std::vector<long> f;
  std::string magic;
  std::size_t pos = read_header(bytes, 2, f, magic);
  if (magic != "P4") throw std::runtime_error("not a binary PBM (P4) file");
  if (f[0] != grid.width() || f[1] != grid.height())
    throw std::runtime_error("PBM dimensions do not match the grid");
  RasterSet r(grid);
  const int bytes_per_row = (grid.width() + 7) / 8;
  if (bytes.size() < pos + std::size_t(bytes_per_row) * grid.height())
    throw std::runtime_error("truncated PBM payload");
  for (int row = 0; row < grid.height(); ++row) {
    const int iy = grid.height() - 1 - row;
    for (int ix = 0; ix < grid.width(); ++ix) {
      const auto byte = static_cast<unsigned char>(bytes[pos + std::size_t(row) * bytes_per_row + ix / 8]);
      if (byte & (0x80u >> (ix % 8))) r.set(ix, iy);
    }
  }
  return r;
}

Image decode_ppm(const std::string& bytes) {
  std::vector<long> f;
  std::string magic;
  std::size_t pos = read_header(bytes, 3, f, magic);
  if (magic != "P6") throw std::runtime_error("not a binary PPM (P6) file");
  if (f[2] != 255) throw std::runtime_error("only 8-bit PPM is supported");
  if (f[0] <= 0 || f[1] <= 0) throw std::runtime_error("PPM has no pixels");
  Image img(static_cast<int>(f[0]), static_cast<int>(f[1]));
  if (bytes.size() < pos + img.pixels.size() * 3) throw std::runtime_error("truncated PPM payload");
  for (int row = 0; row < img.height; ++row)
    for (int ix = 0; ix < img.width; ++ix) {
      const std::size_t at = pos + (std::size_t(row) * img.width + ix) * 3;
      img.at(ix, img.height - 1 - row) = {static_cast<std::uint8_t>(bytes[at]),
                                          static_cast<std::uint8_t>(bytes[at + 1]),
                                          static_cast<std::uint8_t>(bytes[at + 2])};
    }
  return img;
}

void write_file_atomic(const std::string& path, const std::string& bytes) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + tmp + "' for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("write failed for '" + tmp + "'");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw std::runtime_error("cannot rename '" + tmp + "' to '" + path + "'");
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace toptile

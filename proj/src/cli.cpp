#include "toptile/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <random>
#include <sstream>

#include "toptile/render.hpp"

namespace toptile {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string preset;
  std::string ifs_path;
  std::vector<double> window;
  std::string res = "512x512";
  std::string base_res = "1024x1024";
  int max_res = 2048;
  std::string addr;
  int depth = -1;
  int kmax = -1;
  int steps = 20;
  std::string out = ".";
  std::uint64_t seed = 1;
  bool strict = false;
  int slack_px = 1;
  int theta = 1;
  double tol_px = 0.75;
  int snap_px = 2;
  std::int64_t points = 200000;
  std::string polygon;
  std::string mode = "palette";
  std::string master;
  bool edges = false;
  bool pretiles = false;
  bool no_tiles = false;
  std::optional<double> lambda_hat;
  std::vector<double> x0;
};

std::pair<int, int> parse_res(const std::string& s) {
  int w = 0, h = 0;
  char x = 0;
  std::istringstream in(s);
  if (!(in >> w)) throw UsageError("bad resolution '" + s + "'");
  if (in >> x) {
    if ((x != 'x' && x != 'X') || !(in >> h)) throw UsageError("bad resolution '" + s + "'");
  } else {
    h = w;
  }
  if (w < 1 || h < 1) throw UsageError("bad resolution '" + s + "'");
  return {w, h};
}

Ifs load_ifs(const RunConfig& c) {
  if (!c.ifs_path.empty()) return Ifs::load_config(c.ifs_path);
  if (c.preset.empty()) throw UsageError("need a preset name or --ifs <path>");
  try {
    return Ifs::preset(c.preset);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

Grid base_grid(const Ifs& ifs, const std::string& res) {
  const auto [w, h] = parse_res(res);
  return Grid::covering(ifs.attractor_bounds().padded(0.05), w, h);
}

Grid window_grid(const Ifs& ifs, const RunConfig& c) {
  const auto [w, h] = parse_res(c.res);
  if (c.window.empty()) return Grid::covering(ifs.attractor_bounds().padded(0.05), w, h);
  if (c.window.size() != 4 || !(c.window[2] > c.window[0]) || !(c.window[3] > c.window[1]))
    throw UsageError("--window needs x0 y0 x1 y1 with x0 < x1, y0 < y1");
  return Grid::covering(Box{c.window[0], c.window[1], c.window[2], c.window[3]}, w, h);
}

PeriodicAddress parse_addr(const std::string& s) {
  if (s.empty()) throw UsageError("need an address, e.g. \"(14)\"");
  try {
    return PeriodicAddress::parse(s);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

void check_alphabet(const Ifs& ifs, const PeriodicAddress& j) {
  for (const Word* w : {&j.preperiod, &j.period})
    for (Symbol s : *w)
      if (s > ifs.size())
        throw UsageError("address symbol " + std::to_string(s) + " exceeds map count");
}

std::filesystem::path out_dir(const RunConfig& c) {
  std::filesystem::path p(c.out);
  std::filesystem::create_directories(p);
  return p;
}

std::shared_ptr<const PixelDynamics> dynamics(const Ifs& ifs, const Grid& g, const RunConfig& c) {
  return std::make_shared<PixelDynamics>(PixelDynamics::build(ifs, g, c.tol_px, c.snap_px));
}

SigmaOptions sigma_options(const RunConfig& c) {
  SigmaOptions o;
  o.theta = c.theta;
  return o;
}

std::string bbox_str(const RasterSet& r) {
  int x0, y0, x1, y1;
  if (!r.bbox(x0, y0, x1, y1)) return "- - - -";
  std::ostringstream os;
  os << x0 << " " << y0 << " " << x1 << " " << y1;
  return os.str();
}

int cmd_attractor(const RunConfig& c, std::ostream& out) {
  const Ifs ifs = load_ifs(c);
  const Grid g = base_grid(ifs, c.res);
  const auto dir = out_dir(c);
  const RasterSet a = rasterize_attractor(ifs, g, c.tol_px);
  write_image(a, (dir / "attractor.pbm").string());
  const RasterSet chaos = render_attractor_chaos(ifs, g, c.points, c.seed);
  write_image(to_image(chaos), (dir / "chaos.ppm").string());
  out << "attractor pixels=" << a.count() << " of " << g.pixel_count()
      << " chaos pixels=" << chaos.count() << "\n";
  return exit_pass;
}

int cmd_sigma(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const Ifs ifs = load_ifs(c);
  const int n = std::max(c.depth, 0);
  const auto dir = out_dir(c);
  std::ostringstream list;
  bool unreliable = false;
  if (n > 0) {
    SigmaHierarchy sigma(dynamics(ifs, base_grid(ifs, c.res), c), sigma_options(c));
    const auto& lev = sigma.level(n);
    for (int m = 1; m <= n; ++m) unreliable = unreliable || sigma.built(m).unreliable;
    for (const auto& w : lev.words) list << w.str() << "\n";
    if (c.pretiles) {
      std::ostringstream index;
      index << "# word file pixel_count x0 y0 x1 y1\n";
      for (const auto& w : lev.words) {
        const RasterSet t = sigma.pretile(w);
        const std::string file = "pretile_" + w.str() + ".pbm";
        write_image(t, (dir / file).string());
        index << w.str() << " " << file << " " << t.count() << " " << bbox_str(t) << "\n";
      }
      write_file_atomic((dir / ("pretiles_" + std::to_string(n) + "_index.txt")).string(), index.str());
    }
    err << "n=" << n << " words=" << lev.words.size() << " max_span_px=" << lev.max_span_px
        << " orphans=" << lev.orphans << " resolution=" << (unreliable ? "exhausted" : "ok")
        << "\n";
  }
  out << list.str();
  write_file_atomic((dir / ("sigma_" + std::to_string(n) + ".txt")).string(), list.str());
  return unreliable && c.strict ? exit_inconclusive : exit_pass;
}

int cmd_partition(const RunConfig& c, std::ostream& out) {
  const Ifs ifs = load_ifs(c);
  const Grid g = base_grid(ifs, c.res);
  const auto dir = out_dir(c);
  auto dyn = dynamics(ifs, g, c);
  const int n = std::max(c.depth, 1);
  SigmaHierarchy sigma(dyn, sigma_options(c));
  const auto& lev = sigma.level(n);
  RenderStyle style;
  style.edge_overlay = c.edges;
  write_image(render_sigma(lev, g, ifs, style), (dir / ("partition_" + std::to_string(n) + ".ppm")).string());
  const TopPartition part = level1_partition(*dyn);
  for (int i = 1; i <= ifs.size(); ++i)
    write_image(part.parts[i - 1], (dir / ("part_" + std::to_string(i) + ".pbm")).string());
  const RasterSet crit = critical_set(part);
  write_image(crit, (dir / "critical.pbm").string());
  for (const auto& w : lev.words) out << w.str() << " " << sigma.pretile(w).count() << "\n";
  out << "critical pixels=" << crit.count() << "\n";
  return lev.unreliable && c.strict ? exit_inconclusive : exit_pass;
}

int cmd_tile(const RunConfig& c, std::ostream& out) {
  const Ifs ifs = load_ifs(c);
  const auto j = parse_addr(c.addr);
  check_alphabet(ifs, j);
  const int k = std::max(c.depth, 0);
  TilingEngine engine(dynamics(ifs, base_grid(ifs, c.base_res), c));
  const PreTiling pt = engine.pretiling(j, k, window_grid(ifs, c));
  const auto dir = out_dir(c);
  const std::string stem = "tiling_k" + std::to_string(k);
  if (!pt.words.empty()) {
    RenderStyle style;
    style.edge_overlay = c.edges;
    write_image(render_pretiling(pt, ifs, style), (dir / (stem + ".ppm")).string());
  }
  std::ostringstream index;
  index << "# j=" << j.str() << " k=" << k << " tiles=" << pt.words.size()
        << " absorbed=" << pt.absorbed << "\n# word file pixel_count x0 y0 x1 y1\n";
  for (std::size_t i = 0; i < pt.words.size(); ++i) {
    const RasterSet t = pt.tile(static_cast<std::int32_t>(i));
    const std::string file = stem + "_" + pt.words[i].str() + ".pbm";
    if (!c.no_tiles) write_image(t, (dir / file).string());
    index << pt.words[i].str() << " " << (c.no_tiles ? "-" : file) << " " << t.count() << " "
          << bbox_str(t) << "\n";
  }
  write_file_atomic((dir / (stem + "_index.txt")).string(), index.str());
  out << index.str();
  return exit_pass;
}

int cmd_stabilize(const RunConfig& c, std::ostream& out) {
  const Ifs ifs = load_ifs(c);
  const auto j = parse_addr(c.addr);
  check_alphabet(ifs, j);
  const int kmax = c.kmax >= 0 ? c.kmax : std::max(c.depth, 0);
  TilingEngine engine(dynamics(ifs, base_grid(ifs, c.base_res), c));
  const auto rep = stabilize(engine, j, window_grid(ifs, c), kmax, c.slack_px);
  const auto dir = out_dir(c);
  std::ostringstream os;
  os << rep.table();
  for (const auto& [l, K] : rep.k_l) os << "# K_" << l << "=" << K << "\n";
  os << "# chains=" << rep.chains.size() << " unstabilized=" << rep.unstabilized()
     << " nest_violations=" << rep.nest_violations << "\n";
  write_file_atomic((dir / "stabilize.txt").string(), os.str());
  out << os.str();
  return rep.nest_violations > 0 ? exit_violation : exit_pass;
}

// Reruns at doubled resolution while the verdict is inconclusive.
template <typename Fn>
auto escalate(const Ifs& ifs, const RunConfig& c, std::ostream& err, Fn fn) {
  auto [w, h] = parse_res(c.res);
  for (;;) {
    SigmaHierarchy sigma(dynamics(ifs, Grid::covering(ifs.attractor_bounds().padded(0.05), w, h), c),
                         sigma_options(c));
    auto r = fn(sigma);
    if (r.verdict != Verdict::inconclusive || std::max(w, h) * 2 > c.max_res) return r;
    err << "resolution " << w << "x" << h << " exhausted, retrying at " << 2 * w << "x" << 2 * h
        << "\n";
    w *= 2, h *= 2;
  }
}

int verdict_code(Verdict v) {
  switch (v) {
    case Verdict::pass: return exit_pass;
    case Verdict::fail: return exit_negative;
    default: return exit_inconclusive;
  }
}

int cmd_backward(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const Ifs ifs = load_ifs(c);
  const auto j = parse_addr(c.addr);
  check_alphabet(ifs, j);
  if (c.depth < 1) throw UsageError("backward needs a depth N >= 1");
  const auto r = escalate(ifs, c, err, [&](SigmaHierarchy& s) { return backward_check(s, j, c.depth); });
  out << r.str() << "\n";
  return verdict_code(r.verdict);
}

int cmd_omega(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const Ifs ifs = load_ifs(c);
  const auto j = parse_addr(c.addr);
  check_alphabet(ifs, j);
  const int l = std::max(c.depth, 0);
  const int kcap = c.kmax >= 0 ? c.kmax : l + 3;
  if (kcap < l + 1) throw UsageError("omega needs --kmax > l");
  const auto r = escalate(ifs, c, err, [&](SigmaHierarchy& s) { return omega_l(s, j, l, kcap); });
  if (r.verdict == Verdict::inconclusive) {
    out << "INCONCLUSIVE n=" << r.inconclusive_level << "\n";
    return exit_inconclusive;
  }
  for (const auto& w : r.words) out << w.str() << "\n";
  err << "l=" << l << " k_cap=" << kcap << " words=" << r.words.size() << "\n";
  return exit_pass;
}

int cmd_clearance(const RunConfig& c, std::ostream& out) {
  const Ifs ifs = load_ifs(c);
  const auto j = parse_addr(c.addr);
  check_alphabet(ifs, j);
  auto dyn = dynamics(ifs, base_grid(ifs, c.res), c);
  const RasterSet crit = critical_set(level1_partition(*dyn));
  std::optional<Point2d> x0;
  if (!c.x0.empty()) {
    if (c.x0.size() != 2) throw UsageError("--x0 needs two numbers");
    x0 = Point2d(c.x0[0], c.x0[1]);
  }
  const auto est = orbit_clearance(ifs, j, x0, c.lambda_hat, c.steps, crit);
  out << std::setprecision(10);
  out << "x0 = " << est.x0.x() << " " << est.x0.y()
      << (est.default_x0 ? " (default: fixed point of f_j1)" : "") << "\n";
  out << "lambda_hat = " << est.lambda_hat
      << (est.default_lambda_hat ? " (default: (1+lambda)/2)" : "") << "\n";
  out << "n x y distance ratio\n";
  for (const auto& s : est.table)
    out << s.n << " " << s.x.x() << " " << s.x.y() << " " << s.distance << " " << s.ratio << "\n";
  out << "epsilon_hat = " << est.epsilon_hat << "\n";
  return est.epsilon_hat > 0 ? exit_pass : exit_negative;
}

int cmd_certify(const RunConfig& c, std::ostream& out) {
  const Ifs ifs = load_ifs(c);
  std::string path = c.polygon;
  if (path.empty()) {
    if (c.preset.empty()) throw UsageError("certify needs --polygon <file>");
    path = std::string(TOPTILE_DATA_DIR) + "/" + c.preset + "_certificate.txt";
  }
  const auto poly = load_polygon(path);
  const bool ok = interior_certificate(ifs, poly, base_grid(ifs, c.res));
  out << (ok ? "PASS" : "FAIL") << " vertices=" << poly.size() << "\n";
  return ok ? exit_pass : exit_negative;
}

int cmd_render(const RunConfig& c, std::ostream& out) {
  const Ifs ifs = load_ifs(c);
  const auto j = parse_addr(c.addr);
  check_alphabet(ifs, j);
  const int k = std::max(c.depth, 0);
  RenderStyle style;
  style.edge_overlay = c.edges;
  if (c.mode == "steal") {
    if (c.master.empty()) throw UsageError("--mode steal needs --master <file.ppm>");
    style.mode = ColorMode::color_steal;
    style.master = decode_ppm(read_file(c.master));
  } else if (c.mode != "palette") {
    throw UsageError("--mode must be palette or steal");
  }
  TilingEngine engine(dynamics(ifs, base_grid(ifs, c.base_res), c));
  const PreTiling pt = engine.pretiling(j, k, window_grid(ifs, c));
  if (pt.words.empty()) throw UsageError("no tiles meet the window");
  const auto dir = out_dir(c);
  const std::string file = "render_k" + std::to_string(k) + ".ppm";
  write_image(render_pretiling(pt, ifs, style), (dir / file).string());
  out << file << " tiles=" << pt.words.size() << "\n";
  return exit_pass;
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
  const Ifs ifs = load_ifs(c);
  const Grid g = base_grid(ifs, c.res);
  const int depth = c.depth >= 1 ? c.depth : 3;
  bool violation = false, inconclusive = false;
  auto report = [&](bool ok, const std::string& what) {
    out << (ok ? "ok " : "VIOLATION ") << what << "\n";
    violation = violation || !ok;
  };

  std::mt19937_64 rng(c.seed);
  std::uniform_int_distribution<int> sym(1, ifs.size());
  bool compose_ok = true;
  for (int trial = 0; trial < 200; ++trial) {
    Word w;
    const int len = 1 + trial % 8;
    for (int i = 0; i < len; ++i) w.push_back(Symbol(sym(rng)));
    const AffineMap2d id = compose_word(ifs, reverse(w)) * inverse_compose_word(ifs, w);
    compose_ok = compose_ok && (id.linear - AffineMap2d::Linear::Identity()).norm() < 1e-9 &&
                 id.translation.norm() < 1e-9 * (1 + ifs.radius());
    const PeriodicAddress a(w, Word{Symbol(sym(rng))});
    const Symbol s = Symbol(sym(rng));
    compose_ok = compose_ok && project(ifs, a.prepended(s), 12) == ifs.map(s)(project(ifs, a, 11));
  }
  report(compose_ok, "word composition and projection");

  auto dyn = dynamics(ifs, g, c);
  const TopPartition part = level1_partition(*dyn);
  RasterSet uni(g);
  bool disjoint_ok = true;
  for (const auto& p : part.parts) {
    disjoint_ok = disjoint_ok && disjoint(uni, p);
    uni |= p;
  }
  report(disjoint_ok && uni == part.attractor, "level-one partition is exact");

  SigmaHierarchy sigma(dyn, sigma_options(c));
  for (int n = 1; n <= depth; ++n) {
    if (sigma.level(n).unreliable) {
      out << "inconclusive level " << n << ": resolution exhausted\n";
      inconclusive = true;
      break;
    }
    const LemmaReport r = check_level(sigma, n);
    std::ostringstream what;
    what << "level " << n << " words=" << r.words << " extension=" << r.extension_failures
         << " containment=" << r.containment_failures << " closure=" << r.closure_failures
         << " interior=" << r.interior_failures << " partition=" << (r.partition_exact ? "exact" : "broken");
    report(r.ok(), what.str());
  }

  TilingEngine engine(dyn);
  const auto one = PeriodicAddress::constant(1);
  std::optional<PreTiling> prev;
  for (int k = 0; k <= std::min(depth, 2); ++k) {
    PreTiling pt = engine.pretiling(one, k, g);
    const bool support_ok = pt.support() == engine.blowup(one, k, g);
    bool nested = true;
    if (prev) {
      for (std::size_t p = 0; p < pt.labels.size() && nested; ++p)
        if (prev->labels[p] >= 0)
          nested = pt.labels[p] >= 0 &&
                   pt.words[pt.labels[p]] == prev->words[prev->labels[p]].prepended(1);
    }
    report(support_ok && nested, "pre-tiling (1) depth " + std::to_string(k) +
                                     " covers its blowup and extends the previous depth");
    prev = std::move(pt);
  }

  if (violation) return exit_violation;
  return inconclusive ? exit_inconclusive : exit_pass;
}

void common_options(CLI::App* app, RunConfig& c) {
  app->add_option("--ifs", c.ifs_path, "IFS config file (six coefficients per map)");
  app->add_option("--res", c.res, "Resolution WxH")->capture_default_str();
  app->add_option("--out", c.out, "Output directory")->capture_default_str();
  app->add_option("--seed", c.seed, "Random seed")->capture_default_str();
  app->add_flag("--strict", c.strict, "Exit 3 when the resolution is exhausted");
  app->add_option("--slack", c.slack_px, "Slack in pixels")->capture_default_str();
  app->add_option("--theta", c.theta, "Interior pixels required per pre-tile")->capture_default_str();
  app->add_option("--tol", c.tol_px, "Rasterization tolerance in pixels")->capture_default_str();
}

void window_options(CLI::App* app, RunConfig& c) {
  app->add_option("--window", c.window, "Window x0 y0 x1 y1")->expected(4);
  app->add_option("--base-res", c.base_res, "Attractor raster resolution WxH")->capture_default_str();
  app->add_flag("--edges", c.edges, "Overlay tile edges");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Top tilings of planar iterated function systems", "toptile"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "toptile 0.1");

  auto preset = [&](CLI::App* s) { s->add_option("preset,--preset", c.preset, "Preset name"); };

  auto* attractor = app.add_subcommand("attractor", "Attractor raster and chaos-game render");
  preset(attractor);
  common_options(attractor, c);
  attractor->add_option("--points", c.points, "Chaos-game points")->capture_default_str();

  auto* sigma = app.add_subcommand("sigma", "List the depth-n top words");
  preset(sigma);
  sigma->add_option("n,--depth", c.depth, "Depth n");
  common_options(sigma, c);
  sigma->add_flag("--pretiles", c.pretiles, "Write one P4 per pre-tile");

  auto* partition = app.add_subcommand("partition", "Render a top partition and the critical set");
  preset(partition);
  partition->add_option("n,--depth", c.depth, "Depth n (default 1)");
  common_options(partition, c);
  partition->add_flag("--edges", c.edges, "Overlay tile edges");

  auto* tile = app.add_subcommand("tile", "Depth-k pre-tiling of a window");
  preset(tile);
  tile->add_option("addr,--addr", c.addr, "Backward address, e.g. (14)");
  tile->add_option("k,--depth", c.depth, "Depth k");
  common_options(tile, c);
  window_options(tile, c);
  tile->add_flag("--no-tiles", c.no_tiles, "Skip per-tile bitmaps");

  auto* stab = app.add_subcommand("stabilize", "Track address tails across depths");
  preset(stab);
  stab->add_option("addr,--addr", c.addr, "Backward address");
  stab->add_option("kmax,--kmax", c.kmax, "Largest depth");
  common_options(stab, c);
  window_options(stab, c);

  auto* backward = app.add_subcommand("backward", "Check reversed prefixes against the top words");
  preset(backward);
  backward->add_option("addr,--addr", c.addr, "Address");
  backward->add_option("N,--depth", c.depth, "Depth N");
  common_options(backward, c);
  backward->add_option("--max-res", c.max_res, "Largest resolution tried")->capture_default_str();

  auto* omega = app.add_subcommand("omega", "Tails that persist from level l");
  preset(omega);
  omega->add_option("addr,--addr", c.addr, "Backward address");
  omega->add_option("l,--depth", c.depth, "Level l");
  omega->add_option("--kmax", c.kmax, "Largest k checked (default l+3)");
  common_options(omega, c);
  omega->add_option("--max-res", c.max_res, "Largest resolution tried")->capture_default_str();

  auto* clearance = app.add_subcommand("clearance", "Orbit distance to the critical set");
  preset(clearance);
  clearance->add_option("addr,--addr", c.addr, "Address");
  clearance->add_option("--steps", c.steps, "Orbit length N")->capture_default_str();
  clearance->add_option("--lambda-hat", c.lambda_hat, "Rate in (lambda, 1)");
  clearance->add_option("--x0", c.x0, "Start point x y")->expected(2);
  common_options(clearance, c);

  auto* certify = app.add_subcommand("certify", "Check an interior certificate polygon");
  preset(certify);
  certify->add_option("--polygon", c.polygon, "Vertex file (default: shipped certificate)");
  common_options(certify, c);

  auto* render = app.add_subcommand("render", "Render a pre-tiling");
  preset(render);
  render->add_option("addr,--addr", c.addr, "Backward address");
  render->add_option("k,--depth", c.depth, "Depth k");
  render->add_option("--mode", c.mode, "palette or steal")->capture_default_str();
  render->add_option("--master", c.master, "Master P6 image for --mode steal");
  common_options(render, c);
  window_options(render, c);

  auto* verify = app.add_subcommand("verify", "Run the invariant suite");
  preset(verify);
  verify->add_option("--depth", c.depth, "Deepest level checked (default 3)");
  common_options(verify, c);

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_pass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_pass;
  } catch (const CLI::CallForVersion&) {
    out << "toptile 0.1\n";
    return exit_pass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return exit_usage;
  }

  try {
    if (attractor->parsed()) return cmd_attractor(c, out);
    if (sigma->parsed()) return cmd_sigma(c, out, err);
    if (partition->parsed()) return cmd_partition(c, out);
    if (tile->parsed()) return cmd_tile(c, out);
    if (stab->parsed()) return cmd_stabilize(c, out);
    if (backward->parsed()) return cmd_backward(c, out, err);
    if (omega->parsed()) return cmd_omega(c, out, err);
    if (clearance->parsed()) return cmd_clearance(c, out);
    if (certify->parsed()) return cmd_certify(c, out);
    if (render->parsed()) return cmd_render(c, out);
    if (verify->parsed()) return cmd_verify(c, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  }
  return exit_usage;
}

}  // namespace toptile

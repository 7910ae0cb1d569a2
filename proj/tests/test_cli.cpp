#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "fixtures.hpp"
#include "toptile/cli.hpp"

using namespace toptile;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("toptile_cli_" + name);
  std::filesystem::remove_all(p);
  return p;
}

int lines(const std::string& s) { return int(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("sigma line counts") {
  const auto dir = scratch("sigma");
  auto r = run({"sigma", "square4", "2", "--out", dir.string()});
  CHECK(r.code == 0);
  CHECK(lines(r.out) == 16);
  CHECK(read_file((dir / "sigma_2.txt").string()) == r.out);
  r = run({"sigma", "overlap4", "1", "--out", dir.string()});
  CHECK(r.code == 0);
  CHECK(r.out == "1\n2\n3\n4\n");
  r = run({"sigma", "square4", "0", "--out", dir.string()});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  r = run({"sigma", "square4", "2", "--pretiles", "--res", "64x64", "--out", dir.string()});
  CHECK(r.code == 0);
  CHECK(std::filesystem::exists(dir / "pretile_14.pbm"));
  const std::string index = read_file((dir / "pretiles_2_index.txt").string());
  CHECK(lines(index) == 17);
  CHECK(index.find("\n11 pretile_11.pbm ") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("strict flag on an exhausted resolution") {
  const auto dir = scratch("strict");
  auto r = run({"sigma", "leaf2", "12", "--res", "32x32", "--out", dir.string()});
  CHECK(r.code == 0);
  r = run({"sigma", "leaf2", "12", "--res", "32x32", "--strict", "--out", dir.string()});
  CHECK(r.code == 3);
  std::filesystem::remove_all(dir);
}

TEST_CASE("attractor command") {
  const auto dir = scratch("attractor");
  for (const char* name : {"square4", "overlap4"}) {
    const auto r = run({"attractor", name, "--res", "128x128", "--points", "1000", "--out", dir.string()});
    REQUIRE(r.code == 0);
    const std::string pbm = read_file((dir / "attractor.pbm").string());
    const Ifs f = Ifs::preset(name);
    const Grid g = fx::base_grid(f, 128);
    const RasterSet a = decode_pbm(pbm, g);
    const RasterSet square = fx::analytic(g, [](const Point2d& p) {
      return p.x() > 0 && p.x() < 1 && p.y() > 0 && p.y() < 1;
    });
    CHECK(is_subset(square, a));
    CHECK(is_subset(a, dilate(square, 1)));
    CHECK(std::filesystem::exists(dir / "chaos.ppm"));
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("usage errors") {
  CHECK(run({"attractor", "nosuch"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"backward", "square4", "(15)", "3"}).code == 2);
  CHECK(run({"backward", "square4", "15", "3"}).code == 2);
  CHECK(run({"sigma", "square4", "2", "--res", "12xq"}).code == 2);
  CHECK(run({"sigma", "--ifs", "/nonexistent.txt", "2"}).code == 2);
}

TEST_CASE("backward command") {
  auto r = run({"backward", "leaf2", "(2)", "10"});
  CHECK(r.code == 0);
  CHECK(r.out == "PASS n=10\n");
  r = run({"backward", "square4", "(243)", "4", "--res", "128x128"});
  CHECK(r.code == 0);
  CHECK(r.out == "PASS n=4\n");
}

TEST_CASE("verify and certify") {
  CHECK(run({"verify", "square4", "--res", "256x256"}).code == 0);
  const auto r = run({"certify", "leaf2", "--res", "1024x1024"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("PASS", 0) == 0);
}

TEST_CASE("tile, stabilize, omega, clearance, render") {
  const auto dir = scratch("tile");
  auto r = run({"tile", "square4", "(1)", "1", "--window", "-0.1", "-0.1", "2.1", "2.1", "--res",
                "110x110", "--base-res", "256x256", "--out", dir.string()});
  CHECK(r.code == 0);
  CHECK(std::filesystem::exists(dir / "tiling_k1.ppm"));
  CHECK(std::filesystem::exists(dir / "tiling_k1_11.pbm"));
  CHECK(lines(read_file((dir / "tiling_k1_index.txt").string())) == 18);

  r = run({"stabilize", "square4", "(14)", "3", "--window", "-0.1", "-0.1", "2.1", "2.1", "--res",
           "110x110", "--base-res", "256x256", "--out", dir.string()});
  CHECK(r.code == 0);
  CHECK(std::filesystem::exists(dir / "stabilize.txt"));

  r = run({"omega", "square4", "(14)", "1", "--kmax", "3", "--res", "128x128"});
  CHECK(r.code == 0);
  CHECK(lines(r.out) == 16);

  r = run({"clearance", "square4", "(4)", "--x0", "1", "1", "--lambda-hat", "0.8", "--steps", "3",
           "--res", "128x128"});
  CHECK(r.code == 0);
  CHECK(r.out.find("epsilon_hat") != std::string::npos);

  r = run({"render", "square4", "(1)", "1", "--window", "-0.1", "-0.1", "2.1", "2.1", "--res",
           "110x110", "--base-res", "256x256", "--out", dir.string()});
  CHECK(r.code == 0);
  CHECK(std::filesystem::exists(dir / "render_k1.ppm"));
  const std::string first = read_file((dir / "render_k1.ppm").string());
  run({"render", "square4", "(1)", "1", "--window", "-0.1", "-0.1", "2.1", "2.1", "--res", "110x110",
       "--base-res", "256x256", "--out", dir.string()});
  CHECK(read_file((dir / "render_k1.ppm").string()) == first);
  r = run({"render", "square4", "(1)", "1", "--mode", "steal", "--res", "64x64", "--out", dir.string()});
  CHECK(r.code == 2);
  std::filesystem::remove_all(dir);
}

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "toptile/tops.hpp"

namespace toptile {

enum class Verdict { pass, fail, inconclusive };

struct BackwardResult {
  Verdict verdict = Verdict::pass;
  int n = 0;  // N on pass, failing or exhausted depth otherwise
  std::string str() const;
};

/// Smallest n <= N with reverse(j|n) outside Sigma_n, or pass. Unreliable
/// Sigma levels give an inconclusive verdict at that depth.
BackwardResult backward_check(SigmaHierarchy& sigma, const PeriodicAddress& j, int N);

/// Address that passed backward_check to validated_depth.
struct BackwardAddress {
  PeriodicAddress addr;
  int validated_depth = 0;
};

/// Depth-k pre-tiling on a window grid: a tile word of length k+1 per pixel.
struct PreTiling {
  PeriodicAddress j;
  int k = 0;
  Grid grid;
  std::vector<Word> words;            // descending top order
  std::vector<std::int32_t> labels;   // per pixel, -1 outside the blowup
  std::int64_t absorbed = 0;          // pixels labeled from neighbours

  std::int32_t index_of(const Word& w) const;
  RasterSet tile(std::int32_t idx) const;
  RasterSet support() const;
  /// Pixel counts per word index.
  std::vector<std::int64_t> counts() const;
};

/// Builds blowups and pre-tilings of a window from a base attractor raster.
///
/// Window pixel y at depth k is followed forward to x = f_{jk}...f_{j1}(y)
/// and labeled by the greedy top orbit of x, each step testing membership in
/// A refined through as many map levels as remain, so that every decision is
/// made at the same scale in window coordinates.
class TilingEngine {
 public:
  explicit TilingEngine(std::shared_ptr<const PixelDynamics> base);

  const PixelDynamics& base() const { return *base_; }
  const Ifs& ifs() const { return base_->ifs(); }

  /// z in A, refined through r levels: some f_w^-1(z) with |w| = r lies in
  /// the base raster.
  bool contains(const Point2d& z, int r) const;
  /// Within 2 px of the base raster.
  bool near(const Point2d& z) const { return prune_.test(z); }

  /// f_{-j|k}(A) on the window.
  RasterSet blowup(const PeriodicAddress& j, int k, const Grid& window) const;
  PreTiling pretiling(const PeriodicAddress& j, int k, const Grid& window) const;

  /// Pixels y whose point f_{j_{l+1}}...f_{j1}(y) lies in A_{j_{l+1}}.
  RasterSet support_region(const PeriodicAddress& j, int l, const Grid& window) const;

 private:
  std::shared_ptr<const PixelDynamics> base_;
  RasterSet prune_;
};

struct ChainRecord {
  int l = 0;
  Word tail;            // i_1 .. i_{l+1}
  int first_k = 0;      // level of first appearance
  int last_k = 0;       // last level the chain was present
  int k_observed = -1;  // first k equal within slack to all later levels
  bool stabilized = false;
  std::int64_t pixel_count = 0;  // at last_k
  int bbox[4] = {0, 0, -1, -1};  // x0 y0 x1 y1 at last_k
  std::int64_t nest_violations = 0;
  Word word_at_last;
};

struct StabilizationReport {
  PeriodicAddress j;
  Grid window;
  int k_max = 0;
  int slack_px = 1;
  std::vector<ChainRecord> chains;
  std::map<int, int> k_l;  // l -> max K_observed over stabilized chains
  std::vector<PreTiling> levels;
  std::int64_t nest_violations = 0;
  int unstabilized() const;
  std::string table() const;
};

StabilizationReport stabilize(const TilingEngine& engine, const PeriodicAddress& j,
                              const Grid& window, int k_max, int slack_px = 1);

/// Union of the stabilized chains' tiles at the last level.
RasterSet stabilized_union(const StabilizationReport& report);

struct ClearanceStep {
  int n = 0;
  Point2d x;
  double distance = 0;
  double ratio = 0;  // distance / lambda_hat^n
};

struct ClearanceEstimate {
  Point2d x0;
  double lambda_hat = 0;
  double epsilon_hat = 0;
  int steps = 0;
  std::vector<ClearanceStep> table;
  bool default_x0 = false;
  bool default_lambda_hat = false;
};

/// epsilon_hat = min_n d(x_n, C) / lambda_hat^n along x_n = f_{jn}(x_{n-1});
/// zero when an orbit point lies on C, +inf when C is empty.
ClearanceEstimate orbit_clearance(const Ifs& ifs, const PeriodicAddress& j,
                                  std::optional<Point2d> x0,
                                  std::optional<double> lambda_hat, int N,
                                  const RasterSet& critical);

/// Closed-form level threshold (log_b(|A|/(eps lambda)) - 1) / (1 + log_b lambda)
/// with b = lambda_hat / lambda.
double l_threshold(double diameter, double epsilon, double lambda, double lambda_hat);
/// lambda_hat^(k+1) eps - lambda^(k-l) |A|.
double separation_bound(int k, int l, double diameter, double epsilon, double lambda,
                        double lambda_hat);
/// Smallest real k above which separation_bound(k, l) > 0.
double separation_k_threshold(int l, double diameter, double epsilon, double lambda,
                              double lambda_hat);

struct OmegaResult {
  Verdict verdict = Verdict::pass;
  int inconclusive_level = -1;
  std::vector<Word> words;
};

/// Tails i of length l+1 with j_k..j_{l+1}.i in Sigma_{k+1} for l+1 <= k <= k_cap.
OmegaResult omega_l(SigmaHierarchy& sigma, const PeriodicAddress& j, int l, int k_cap);

/// Stabilized tiles cover f_{-j|l} f_{j_{l+1}}^-1 (A_{j_{l+1}}) within 1 px.
bool support_check(const TilingEngine& engine, const StabilizationReport& report, int l);

/// Interiors of f_i(P) cover the interior of P at pixel scale.
bool interior_certificate(const Ifs& ifs, const std::vector<Point2d>& polygon, const Grid& grid);

/// Vertex list `x y` per line, `#` comments.
std::vector<Point2d> load_polygon(const std::string& path);

}  // namespace toptile

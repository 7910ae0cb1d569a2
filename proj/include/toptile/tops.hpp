#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "toptile/raster.hpp"

namespace toptile {

/// Inverse maps f_i^-1 acting on the pixels of an attractor raster.
///
/// pre(i, p) is the pixel containing f_i^-1(center p) when that pixel is in
/// the support. A support pixel with no such preimage for any i instead
/// snaps each preimage to the nearest support pixel within `snap_px`
/// (Chebyshev). Pixels left without any preimage are removed until the
/// support is closed under the dynamics.
class PixelDynamics {
 public:
  PixelDynamics(const Ifs& ifs, const RasterSet& attractor, int snap_px = 2);

  /// Rasterizes the attractor on `grid` first.
  static PixelDynamics build(const Ifs& ifs, const Grid& grid, double tol_px = 0.75,
                             int snap_px = 2);

  const Ifs& ifs() const { return ifs_; }
  const Grid& grid() const { return support_.grid(); }
  const RasterSet& support() const { return support_; }
  int size() const { return ifs_.size(); }
  int snap_px() const { return snap_px_; }

  std::int32_t pre(Symbol i, std::int32_t p) const {
    return pre_[std::size_t(i - 1) * stride_ + p];
  }
  /// Smallest i with a preimage, or 0.
  Symbol top_symbol(std::int32_t p) const;
  /// p in the discrete image f_w(support): the chain of preimages along w
  /// stays in the support.
  bool in_image(const Word& w, std::int32_t p) const;

  std::int64_t snapped_pixels() const { return snapped_; }
  std::int64_t removed_pixels() const { return removed_; }

 private:
  Ifs ifs_;
  int snap_px_ = 0;
  RasterSet support_;
  std::size_t stride_ = 0;
  std::vector<std::int32_t> pre_;
  std::int64_t snapped_ = 0, removed_ = 0;
};

/// Level-one top partition A_i = f_i(A) minus the greater images.
struct TopPartition {
  std::vector<RasterSet> parts;  // parts[i-1] is A_i
  RasterSet attractor;
};

/// Throws when A_M comes out empty.
TopPartition level1_partition(const PixelDynamics& dyn);

struct SigmaOptions {
  int theta = 1;
  /// Keep per-level label maps for every level, not only the newest.
  bool retain_labels = true;
};

/// Words of one depth in descending top order with their pixel labels.
struct SigmaLevel {
  int n = 0;
  std::vector<Word> words;
  /// Index into words per pixel, -1 off the support. Empty when dropped.
  std::vector<std::int32_t> labels;
  bool unreliable = false;
  double max_span_px = 0;
  std::int64_t candidates = 0;
  std::int64_t rejected = 0;
  std::int64_t orphans = 0;
};

/// Sigma_0 .. Sigma_n built inductively from extensions w.s of accepted words.
class SigmaHierarchy {
 public:
  explicit SigmaHierarchy(std::shared_ptr<const PixelDynamics> dyn, SigmaOptions opt = {});

  const PixelDynamics& dynamics() const { return *dyn_; }
  const Grid& grid() const { return dyn_->grid(); }

  /// Builds levels up to n on demand.
  const SigmaLevel& level(int n);
  int depth() const { return static_cast<int>(levels_.size()) - 1; }
  /// Built level; throws when n has not been built.
  const SigmaLevel& built(int n) const;

  bool contains(const Word& w) const;
  /// Index of w within its level, or -1.
  std::int32_t index_of(const Word& w) const;
  /// A_w as a raster; throws if w is not a member or labels were dropped.
  RasterSet pretile(const Word& w) const;
  const WordTrie& trie() const { return trie_; }

 private:
  void build_next();

  std::shared_ptr<const PixelDynamics> dyn_;
  SigmaOptions opt_;
  std::vector<SigmaLevel> levels_;
  WordTrie trie_;
  std::vector<std::int32_t> node_index_;  // trie node -> index within level
};

struct LemmaReport {
  int n = 0;
  std::int64_t words = 0;
  std::int64_t closure_failures = 0;   // prefix or shift missing from level n-1
  std::int64_t extension_failures = 0;   // v in level n-1 with no s.v in level n
  std::int64_t containment_checked = 0;
  std::int64_t containment_failures = 0;   // words with a pixel outside f_k1(A_sk) + 1 px
  std::int64_t containment_bad_pixels = 0;
  std::int64_t interior_failures = 0; // erode-by-1 empty
  bool partition_exact = false;
  std::vector<std::string> messages;
  bool ok() const {
    return closure_failures == 0 && extension_failures == 0 && containment_failures == 0 &&
           interior_failures == 0 && partition_exact;
  }
};

/// Checks the structural lemmas between levels n-1 and n (n >= 1).
LemmaReport check_level(SigmaHierarchy& sigma, int n, bool containment = true);

struct TopAddressResult {
  Word word;
  bool escaped = false;
  int escape_step = -1;  // 0-based step at which no image contained x_k
};

/// Greedy orbit of D: at each step the smallest i with f_i^-1(x) in the
/// support, with 1-px dilated membership.
TopAddressResult top_address(const PixelDynamics& dyn, const Point2d& x, int n);

/// Labels the pending pixels layer by layer from their 4-neighbours, lowest
/// label first; a component with no labeled neighbour gets label 0.
void absorb_orphans(std::vector<std::int32_t>& labels, const Grid& grid,
                    std::vector<std::int32_t> pending);

/// Pixel-scale closure of the internal boundaries of the level-one parts.
RasterSet critical_set(const TopPartition& partition);

}  // namespace toptile

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "infodiv/distribution.hpp"
#include "infodiv/embed.hpp"

namespace infodiv {

/// One element of an aggregate stream: coordinate `coord_index` of point
/// `point_id`, delivered in its entirety.
struct AggregateItem {
  std::string point_id;
  std::size_t coord_index;
  double value;
};

struct SketchParams {
  DivergenceKind kind = DivergenceKind::JS;
  std::size_t d = 1;
  double eps_embed = 0.05;
  double eps_l2 = 0.1;
  double delta = 0.05;
  std::uint64_t seed = 0;
  double width_constant = 6.0;  // m = ceil(width_constant / eps_l2^2)
  double reps_constant = 8.0;   // R = ceil(reps_constant ln(1 / delta))
};

/// Everything two sketches must agree on to be compared or merged.
struct SketchHeader {
  DivergenceKind kind;
  std::size_t d;
  double eps_embed;
  double eps_l2;
  double delta;
  std::uint64_t seed;
  std::size_t reps;
  std::size_t width;
  std::uint64_t grid_digest;
  std::string rng_id;

  friend bool operator==(const SketchHeader&, const SketchHeader&) = default;
};

/// Degree-3 polynomial over GF(2^61 - 1): a 4-wise independent hash family.
class PolyHash4 {
 public:
  PolyHash4() = default;
  explicit PolyHash4(std::uint64_t seed);
  std::uint64_t operator()(std::uint64_t key) const;

 private:
  std::uint64_t coeff_[4] = {0, 0, 0, 0};
};

/// Shared state of all sketches built with one parameter set: the embedding
/// grid, per-repetition bucket and sign hashes over global embedding indices,
/// and a lazily filled per-coordinate cache of hash codes. Thread-safe.
class SketchFamily {
 public:
  static std::shared_ptr<const SketchFamily> create(const SketchParams& params);

  const SketchParams& params() const { return params_; }
  const GridSpec& grid() const { return grid_; }
  const SketchHeader& header() const { return header_; }
  std::size_t reps() const { return header_.reps; }
  std::size_t width() const { return header_.width; }
  std::size_t counter_count() const { return header_.reps * header_.width; }
  /// Dimension of the embedding being sketched, 4 J d.
  std::size_t embedding_dimension() const { return grid_.dimension(); }

  /// Bucket in [0, width) and sign of global embedding index g in repetition r.
  std::uint32_t bucket(std::size_t r, std::uint64_t g) const;
  double sign(std::size_t r, std::uint64_t g) const;

  /// Packed (bucket << 1 | negative) codes for coordinate `coord`, laid out
  /// rep-major over the block; nullptr when the cache would exceed its budget.
  const std::uint32_t* block_codes(std::size_t coord) const;

  SketchFamily(const SketchParams& params, GridSpec grid);

 private:
  SketchParams params_;
  GridSpec grid_;
  SketchHeader header_;
  std::vector<PolyHash4> bucket_hash_;
  std::vector<PolyHash4> sign_hash_;
  bool cache_enabled_;
  mutable std::unique_ptr<std::once_flag[]> cache_once_;
  mutable std::vector<std::unique_ptr<std::uint32_t[]>> cache_;
};

/// Count-sketch style linear sketch of a point's deterministic embedding:
/// R repetitions of m signed buckets. Single writer; the shared family may be
/// used by many sketches concurrently.
class LinearSketch {
 public:
  explicit LinearSketch(std::shared_ptr<const SketchFamily> family);

  const SketchFamily& family() const { return *family_; }
  const SketchHeader& header() const { return family_->header(); }
  std::span<const double> counters() const { return counters_; }
  std::size_t coords_seen() const { return coords_seen_; }
  bool complete() const { return coords_seen_ == family_->grid().d; }

  /// Aggregate-model update. Throws ValidationError for an out-of-range index or
  /// value and DuplicateCoordinateError if the coordinate was already seen.
  void process(std::size_t coord_index, double value);

  /// Adds an arbitrary embedding-space vector of length 4 J d (linearity).
  void add_vector(std::span<const double> embedding);

  /// Adds a block at coordinate position `coord` without duplicate tracking.
  void add_block(std::size_t coord, std::span<const double> block);

  /// Counter-wise sum / difference. Throws SketchMismatchError if incompatible.
  LinearSketch& operator+=(const LinearSketch& other);
  LinearSketch& operator-=(const LinearSketch& other);

  /// Restores counters read from storage.
  void load(std::vector<double> counters, std::vector<bool> seen);
  const std::vector<bool>& seen() const { return seen_; }

 private:
  void require_compatible(const LinearSketch& other) const;

  std::shared_ptr<const SketchFamily> family_;
  std::vector<double> counters_;  // rep-major, R x m
  std::vector<bool> seen_;
  std::size_t coords_seen_ = 0;
};

/// Creates a family and an empty sketch bound to build_grid(kind, d, eps_embed).
LinearSketch new_sketch(DivergenceKind kind, std::size_t d, double eps_embed, double eps_l2,
                        double delta, std::uint64_t seed);

void process_item(LinearSketch& sketch, const AggregateItem& item);

/// Median over repetitions of the summed squared counter differences; estimates
/// the squared embedding distance, hence the divergence. Throws
/// SketchMismatchError for incompatible sketches.
double estimate_divergence(const LinearSketch& a, const LinearSketch& b);

/// Replays an aggregate stream into one sketch per point id.
std::map<std::string, LinearSketch> replay_stream(std::span<const AggregateItem> items,
                                                  std::shared_ptr<const SketchFamily> family);

/// Splits a distribution into aggregate items (coordinate order as given).
std::vector<AggregateItem> to_items(const std::string& id, const Distribution& p);

}  // namespace infodiv

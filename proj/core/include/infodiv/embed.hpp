#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "infodiv/distribution.hpp"

namespace infodiv {

/// Largest embedding dimension 4 J d that build_grid accepts.
inline constexpr std::int64_t kMaxEmbeddingDimension = 100'000'000;

inline constexpr const char* kDetLayout = "coord-major-cos-sin";

/// Quantized frequency grid of the deterministic embedding. Frequencies are
/// w_j = j * step for j = -J..J with step = eps / (32 d); cell j spans
/// [w_j, w_{j+1}) and carries the square root of its kernel mass.
struct GridSpec {
  DivergenceKind kind;
  double eps;
  std::size_t d;
  std::int64_t J;
  double step;
  std::vector<double> interval_roots;  // 2J cells, index j + J

  double omega(std::int64_t j) const { return static_cast<double>(j) * step; }
  std::size_t block_len() const { return static_cast<std::size_t>(4 * J); }
  std::size_t dimension() const { return block_len() * d; }
  std::uint64_t digest() const;
};

/// Grid half-width J = ceil((32 d / eps) ln(c d / eps)), c = 8 for JS, 6 for
/// chi-squared.
std::int64_t grid_half_width(DivergenceKind kind, std::size_t d, double eps);

/// Throws UnsupportedKernel for Hellinger, ConfigError for eps outside (0, 1),
/// d = 0, or 4 J d above kMaxEmbeddingDimension.
GridSpec build_grid(DivergenceKind kind, std::size_t d, double eps);

/// Block of one coordinate: 2J cosine entries then 2J sine entries,
/// sqrt(v) cos(w_j ln v) root_j and sqrt(v) sin(w_j ln v) root_j.
std::vector<double> embed_coordinate(const GridSpec& grid, double value);

/// Writes the block into `out` (size block_len()). Value 0 yields zeros.
void embed_coordinate_into(const GridSpec& grid, double value, std::span<double> out);

struct DetEmbedding {
  std::uint64_t grid_digest;
  std::vector<double> vector;
};

/// Concatenation of the coordinate blocks. Throws DimensionError if p.d() != grid.d.
DetEmbedding embed_point(const GridSpec& grid, const Distribution& p);

/// Coordinate-wise square root; squared distances equal Hellinger exactly.
std::vector<double> hellinger_embed(const Distribution& p);

/// Squared Euclidean distance. Throws DimensionError on length mismatch.
double l22_distance(std::span<const double> a, std::span<const double> b);

/// Throws SketchMismatchError unless both embeddings come from the same grid.
double embedding_distance(const DetEmbedding& a, const DetEmbedding& b);

}  // namespace infodiv

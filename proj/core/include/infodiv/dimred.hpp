#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "infodiv/distribution.hpp"

namespace infodiv {

/// Dense Gaussian map R^D -> R^k with entries N(0, 1) / sqrt(k), regenerable
/// from (seed, k, D).
struct JLProjection {
  std::size_t k;
  std::size_t D;
  std::uint64_t seed;
  std::vector<double> matrix;  // row-major k x D
};

JLProjection make_jl_projection(std::size_t k, std::size_t D, std::uint64_t seed);

/// Throws DimensionError unless x.size() == proj.D.
std::vector<double> jl_project(const JLProjection& proj, std::span<const double> x);

/// k = ceil(c_jl ln n / (eps / 4)^2).
std::size_t jl_dimension(std::size_t n, double eps, double c_jl = 16.0);

/// Isometry R^k -> L = {x in R^{k+1} : sum x = 0} through the Helmert basis
/// b_j = (1, ..., 1, -j, 0, ..., 0) / sqrt(j (j + 1)), j = 1..k. O(k).
std::vector<double> remap_to_zero_sum_plane(std::span<const double> y);

struct BallScaling {
  std::vector<std::vector<double>> points;  // on the simplex, k + 1 coordinates
  double beta;                               // uniform scale applied on L
  double radius;
};

/// Scales points on L by beta = min(1, radius / max norm) and translates them
/// to the simplex centroid. Throws ConfigError if radius >= 1 / (k + 1).
BallScaling scale_into_ball(const std::vector<std::vector<double>>& points_on_plane, double radius);

/// Same, with radius = c0 eps / (k + 1).
BallScaling scale_into_ball(const std::vector<std::vector<double>>& points_on_plane, std::size_t k,
                            double eps, double c0);

/// Limit of D_f(p, q) / |p - q|^2 at the centroid of a simplex with k + 1
/// coordinates: f''(1) (k + 1) / 2.
double local_constant(DivergenceKind kind, std::size_t k);

/// Halves the radius starting at c0_init eps / (k + 1) until `pairs` sampled
/// pairs in the ball satisfy |D_f / (C |p - q|^2) - 1| <= eps / 4.
/// Throws ConvergenceError after 60 halvings.
double calibrate_radius(DivergenceKind kind, std::size_t k, double eps, double c0_init,
                        std::uint64_t seed, std::size_t pairs = 1000);

/// Largest observed |D_f / (C |p - q|^2) - 1| over `pairs` pairs drawn in the ball.
double max_local_deviation(DivergenceKind kind, std::size_t k, double radius, std::uint64_t seed,
                           std::size_t pairs);

/// How points are first mapped into l2^2.
enum class EmbedMode {
  Auto,        // Exact for Hellinger, DetBudget otherwise
  Exact,       // square-root map (Hellinger only)
  DetBudget,   // deterministic grid embedding, additive error eps/4 * min pairwise divergence
  Randomized,  // sampled frequencies, multiplicative error per pair
};

struct ReduceOptions {
  double c0 = 0.1;
  double c_jl = 16.0;
  EmbedMode mode = EmbedMode::Auto;
  std::size_t samples = 2048;  // frequencies for EmbedMode::Randomized
  std::size_t calibration_pairs = 1000;
};

struct ReducedPointSet {
  DivergenceKind kind;
  std::size_t n;
  std::size_t d;
  std::size_t k;  // reduced points have k + 1 coordinates
  double eps;
  std::uint64_t seed;
  double c0;
  double radius;
  double geometric_scale;   // beta
  double local_constant;    // C(k)
  double divergence_scale;  // C(k) beta^2: D(reduced) ~ divergence_scale * D(original)
  EmbedMode mode;
  double eps_embed;              // additive budget used in DetBudget mode, else 0
  std::size_t embed_dimension;   // dimension of the first-stage embedding
  std::vector<Distribution> points;
};

/// Maps n points of the d-simplex onto the (k+1)-coordinate simplex:
/// embed into l2^2, JL-project, remap isometrically onto the zero-sum plane,
/// then shrink into a calibrated ball around the centroid.
///
/// The JL map is applied to exact isometric coordinates of the embedded points
/// in their own span (at most n - 1 dimensions). For a Gaussian map this has
/// the same distribution as projecting the full embedding, and it keeps the
/// matrix k x (n - 1) however large the embedding is.
ReducedPointSet reduce(DivergenceKind kind, std::span<const Distribution> points, double eps,
                       std::uint64_t seed, const ReduceOptions& options = {});

/// Coordinates of x_1 - x_0, ..., x_{n-1} - x_0 (and 0 for x_0) in an
/// orthonormal basis of their span, from the Gram matrix of the differences.
/// Pivoted Cholesky; rank-deficient inputs (duplicates) are handled.
std::vector<std::vector<double>> gram_coordinates(const std::vector<std::vector<double>>& gram);

}  // namespace infodiv

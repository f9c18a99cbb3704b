#pragma once

#include <cstdint>
#include <vector>

#include "infodiv/distribution.hpp"

namespace infodiv {

inline constexpr const char* kRandLayout = "coord-major-cos-sin-sqrt-s";

/// i.i.d. frequencies drawn from the kernel density by inverse transform.
struct FrequencySample {
  DivergenceKind kind;
  std::uint64_t seed;
  std::vector<double> omegas;

  std::size_t s() const { return omegas.size(); }
  std::uint64_t digest() const;
};

/// Throws ConfigError for s = 0 and UnsupportedKernel for Hellinger.
FrequencySample draw_frequencies(DivergenceKind kind, std::size_t s, std::uint64_t seed);

struct RandEmbedding {
  std::uint64_t sample_digest;
  std::vector<double> vector;  // 2 s d entries
};

/// Coordinate-major blocks of 2s entries: sqrt(c p_i / s) cos(w_j ln p_i) then
/// the sines, with c = spectral_scale(kind). The squared distance between two
/// embeddings is c times the sample mean of the spectral integrand, summed over
/// coordinates.
RandEmbedding rand_embed_point(const FrequencySample& sample, const Distribution& p);

/// Throws SketchMismatchError unless both embeddings share a frequency sample.
double rand_embedding_distance(const RandEmbedding& a, const RandEmbedding& b);

struct MomentEstimate {
  double mean;
  double variance;  // unbiased sample variance
};

/// Monte Carlo mean and variance of spectral_scale * spectral_integrand(x, y, W), W ~ kernel.
MomentEstimate moment_check(DivergenceKind kind, double x, double y, std::size_t s,
                            std::uint64_t seed);
MomentEstimate moment_check(const FrequencySample& sample, double x, double y);

/// Variance constant of the single-frequency estimator: 36 for JS, 23 for chi-squared.
double variance_constant(DivergenceKind kind);

/// ceil(c n^2 d^2 / eps^2) with c = variance_constant(kind). Throws ConfigError
/// when the count overflows or when 2 s d exceeds kMaxEmbeddingDimension.
std::uint64_t required_samples(DivergenceKind kind, std::uint64_t n, std::uint64_t d, double eps);

}  // namespace infodiv

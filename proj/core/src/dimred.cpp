#include "infodiv/dimred.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "infodiv/divergence.hpp"
#include "infodiv/embed.hpp"
#include "infodiv/errors.hpp"
#include "infodiv/random.hpp"
#include "infodiv/sample_embed.hpp"

namespace infodiv {

JLProjection make_jl_projection(std::size_t k, std::size_t D, std::uint64_t seed) {
  if (k == 0 || D == 0) throw ConfigError("JL projection needs k, D >= 1");
  JLProjection proj{k, D, seed, std::vector<double>(k * D)};
  Rng rng(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(k));
  for (double& entry : proj.matrix) entry = rng.standard_normal() * scale;
  return proj;
}

std::vector<double> jl_project(const JLProjection& proj, std::span<const double> x) {
  if (x.size() != proj.D) {
    throw DimensionError("jl_project: input has length " + std::to_string(x.size()) +
                         ", projection expects " + std::to_string(proj.D));
  }
  std::vector<double> out(proj.k, 0.0);
  for (std::size_t r = 0; r < proj.k; ++r) {
    const double* row = proj.matrix.data() + r * proj.D;
    double acc = 0.0;
    for (std::size_t c = 0; c < proj.D; ++c) acc += row[c] * x[c];
    out[r] = acc;
  }
  return out;
}

std::size_t jl_dimension(std::size_t n, double eps, double c_jl) {
  if (n < 2) return 1;
  const double target = eps / 4.0;
  return static_cast<std::size_t>(
      std::ceil(c_jl * std::log(static_cast<double>(n)) / (target * target)));
}

std::vector<double> remap_to_zero_sum_plane(std::span<const double> y) {
  const std::size_t k = y.size();
  std::vector<double> out(k + 1, 0.0);
  // Column j (1-based) is 1/sqrt(j(j+1)) on rows 0..j-1 and -j/sqrt(j(j+1)) on row j.
  double suffix = 0.0;  // sum over columns j > i of y_j / sqrt(j(j+1))
  for (std::size_t i = k + 1; i-- > 0;) {
    double value = suffix;
    if (i >= 1) {
      const double j = static_cast<double>(i);
      const double w = y[i - 1] / std::sqrt(j * (j + 1.0));
      value -= j * w;
      suffix += w;
    }
    out[i] = value;
  }
  return out;
}

BallScaling scale_into_ball(const std::vector<std::vector<double>>& points_on_plane,
                            double radius) {
  if (points_on_plane.empty()) return {{}, 1.0, radius};
  const std::size_t dim = points_on_plane.front().size();
  if (dim < 2) throw DimensionError("scale_into_ball: points need at least two coordinates");
  const double centroid = 1.0 / static_cast<double>(dim);
  if (!(radius > 0.0) || radius >= centroid) {
    throw ConfigError("ball radius " + std::to_string(radius) +
                      " must be positive and below 1/(k+1) = " + std::to_string(centroid) +
                      " to stay inside the simplex");
  }
  double max_norm = 0.0;
  for (const auto& p : points_on_plane) {
    if (p.size() != dim) throw DimensionError("scale_into_ball: ragged point set");
    double sq = 0.0;
    for (double v : p) sq += v * v;
    max_norm = std::max(max_norm, std::sqrt(sq));
  }
  const double beta = max_norm > radius ? radius / max_norm : 1.0;
  BallScaling out{{}, beta, radius};
  out.points.reserve(points_on_plane.size());
  for (const auto& p : points_on_plane) {
    std::vector<double> q(dim);
    for (std::size_t i = 0; i < dim; ++i) q[i] = centroid + beta * p[i];
    out.points.push_back(std::move(q));
  }
  return out;
}

BallScaling scale_into_ball(const std::vector<std::vector<double>>& points_on_plane, std::size_t k,
                            double eps, double c0) {
  if (!(c0 > 0.0)) throw ConfigError("c0 must be positive");
  return scale_into_ball(points_on_plane, c0 * eps / static_cast<double>(k + 1));
}

double local_constant(DivergenceKind kind, std::size_t k) {
  return second_derivative_at_one(kind) * static_cast<double>(k + 1) / 2.0;
}

namespace {

// Uniform point of the ball of `radius` around the centroid inside the
// zero-sum plane of R^dim.
void sample_ball_point(Rng& rng, std::size_t dim, double radius, std::vector<double>& out) {
  out.resize(dim);
  double mean = 0.0;
  for (double& v : out) {
    v = rng.standard_normal();
    mean += v;
  }
  mean /= static_cast<double>(dim);
  double sq = 0.0;
  for (double& v : out) {
    v -= mean;
    sq += v * v;
  }
  const double plane_dim = static_cast<double>(dim - 1);
  const double rho = radius * std::pow(rng.uniform(), 1.0 / plane_dim) / std::sqrt(sq);
  const double centroid = 1.0 / static_cast<double>(dim);
  for (double& v : out) v = centroid + rho * v;
}

// Point at distance `radius` from the centroid along the direction of vertex i.
void vertex_direction_point(std::size_t dim, std::size_t i, double radius, double sign,
                            std::vector<double>& out) {
  const double centroid = 1.0 / static_cast<double>(dim);
  const double norm = std::sqrt(1.0 - centroid);  // |e_i - centroid|
  out.assign(dim, centroid - sign * radius * centroid / norm);
  out[i] = centroid + sign * radius * (1.0 - centroid) / norm;
}

double ratio_deviation(DivergenceKind kind, double constant, const std::vector<double>& p,
                       const std::vector<double>& q) {
  double div = 0.0;
  double sq = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    div += scalar_divergence(kind, p[i], q[i]);
    sq += (p[i] - q[i]) * (p[i] - q[i]);
  }
  if (sq == 0.0) return 0.0;
  return std::abs(div / (constant * sq) - 1.0);
}

}  // namespace

double max_local_deviation(DivergenceKind kind, std::size_t k, double radius, std::uint64_t seed,
                           std::size_t pairs) {
  const std::size_t dim = k + 1;
  const double constant = local_constant(kind, k);
  Rng rng(seed);
  std::vector<double> p;
  std::vector<double> q;
  double worst = 0.0;
  for (std::size_t t = 0; t < pairs; ++t) {
    // Every tenth pair is the antipodal vertex-direction pair, where the
    // second-order remainder is largest.
    if (t % 10 == 0) {
      const std::size_t i = rng.below(dim);
      vertex_direction_point(dim, i, radius, 1.0, p);
      vertex_direction_point(dim, i, radius, -1.0, q);
    } else {
      sample_ball_point(rng, dim, radius, p);
      sample_ball_point(rng, dim, radius, q);
    }
    worst = std::max(worst, ratio_deviation(kind, constant, p, q));
  }
  return worst;
}

double calibrate_radius(DivergenceKind kind, std::size_t k, double eps, double c0_init,
                        std::uint64_t seed, std::size_t pairs) {
  if (!(eps > 0.0 && eps < 1.0)) throw ConfigError("calibrate_radius: eps must lie in (0, 1)");
  if (!(c0_init > 0.0)) throw ConfigError("calibrate_radius: c0 must be positive");
  const double centroid = 1.0 / static_cast<double>(k + 1);
  double radius = c0_init * eps * centroid;
  int halvings = 0;
  while (radius >= centroid) {
    radius *= 0.5;
    ++halvings;
  }
  for (; halvings <= 60; ++halvings) {
    if (max_local_deviation(kind, k, radius, derive_seed(seed, "calibrate"), pairs) <= eps / 4.0) {
      return radius;
    }
    radius *= 0.5;
  }
  throw ConvergenceError("calibrate_radius: no radius found after 60 halvings");
}

std::vector<std::vector<double>> gram_coordinates(const std::vector<std::vector<double>>& gram) {
  const std::size_t m = gram.size();  // number of difference vectors
  std::vector<std::vector<double>> lower(m, std::vector<double>(m, 0.0));
  std::vector<std::size_t> perm(m);
  std::vector<double> residual(m);
  double trace = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    perm[i] = i;
    residual[i] = gram[i][i];
    trace += gram[i][i];
  }
  const double tol = 1e-14 * std::max(trace, std::numeric_limits<double>::min());
  std::size_t rank = 0;
  for (std::size_t j = 0; j < m; ++j) {
    std::size_t best = j;
    for (std::size_t i = j + 1; i < m; ++i) {
      if (residual[perm[i]] > residual[perm[best]]) best = i;
    }
    if (residual[perm[best]] <= tol) break;
    std::swap(perm[j], perm[best]);
    const std::size_t pj = perm[j];
    const double pivot = std::sqrt(residual[pj]);
    lower[pj][j] = pivot;
    for (std::size_t i = j + 1; i < m; ++i) {
      const std::size_t pi = perm[i];
      double acc = gram[pi][pj];
      for (std::size_t t = 0; t < j; ++t) acc -= lower[pi][t] * lower[pj][t];
      lower[pi][j] = acc / pivot;
      residual[pi] -= lower[pi][j] * lower[pi][j];
    }
    ++rank;
  }
  const std::size_t width = std::max<std::size_t>(rank, 1);
  std::vector<std::vector<double>> coords(m + 1, std::vector<double>(width, 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    std::copy_n(lower[i].begin(), rank, coords[i + 1].begin());
  }
  return coords;
}

namespace {

using Gram = std::vector<std::vector<double>>;

// Accumulates <x_a - x_0, x_b - x_0> over one block of every point.
void accumulate_difference_gram(const std::vector<std::span<const double>>& blocks, Gram& gram) {
  const std::size_t m = gram.size();
  const auto& base = blocks[0];
  for (std::size_t a = 0; a < m; ++a) {
    const auto& xa = blocks[a + 1];
    for (std::size_t b = a; b < m; ++b) {
      const auto& xb = blocks[b + 1];
      double acc = 0.0;
      for (std::size_t t = 0; t < base.size(); ++t) acc += (xa[t] - base[t]) * (xb[t] - base[t]);
      gram[a][b] += acc;
    }
  }
}

void symmetrize(Gram& gram) {
  for (std::size_t a = 0; a < gram.size(); ++a) {
    for (std::size_t b = 0; b < a; ++b) gram[a][b] = gram[b][a];
  }
}

Gram gram_of_vectors(const std::vector<std::vector<double>>& vectors) {
  const std::size_t n = vectors.size();
  Gram gram(n - 1, std::vector<double>(n - 1, 0.0));
  std::vector<std::span<const double>> blocks(vectors.begin(), vectors.end());
  accumulate_difference_gram(blocks, gram);
  symmetrize(gram);
  return gram;
}

double min_positive_divergence(DivergenceKind kind, std::span<const Distribution> points) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < points.size(); ++a) {
    for (std::size_t b = a + 1; b < points.size(); ++b) {
      const double v = divergence(kind, points[a], points[b]);
      if (v > 0.0) best = std::min(best, v);
    }
  }
  return best;
}

}  // namespace

ReducedPointSet reduce(DivergenceKind kind, std::span<const Distribution> points, double eps,
                       std::uint64_t seed, const ReduceOptions& options) {
  const std::size_t n = points.size();
  if (n < 2) throw ConfigError("reduce needs at least two points");
  if (!(eps > 0.0 && eps < 1.0)) throw ConfigError("reduce: eps must lie in (0, 1)");
  const std::size_t d = points[0].d();
  for (const auto& p : points) {
    if (p.d() != d) throw DimensionError("reduce: points have different dimensions");
  }

  EmbedMode mode = options.mode;
  if (mode == EmbedMode::Auto) {
    mode = kind == DivergenceKind::Hellinger ? EmbedMode::Exact : EmbedMode::DetBudget;
  }
  if (mode == EmbedMode::Exact && kind != DivergenceKind::Hellinger) {
    throw ConfigError("exact embedding exists only for hellinger");
  }
  if (mode != EmbedMode::Exact && kind == DivergenceKind::Hellinger) mode = EmbedMode::Exact;

  // Step 1: Gram matrix of pairwise embedding differences.
  Gram gram;
  double eps_embed = 0.0;
  std::size_t embed_dimension = 0;
  if (mode == EmbedMode::Exact) {
    std::vector<std::vector<double>> vectors;
    for (const auto& p : points) vectors.push_back(hellinger_embed(p));
    embed_dimension = d;
    gram = gram_of_vectors(vectors);
  } else if (mode == EmbedMode::Randomized) {
    const FrequencySample sample =
        draw_frequencies(kind, options.samples, derive_seed(seed, "frequencies"));
    std::vector<std::vector<double>> vectors;
    for (const auto& p : points) vectors.push_back(rand_embed_point(sample, p).vector);
    embed_dimension = 2 * options.samples * d;
    gram = gram_of_vectors(vectors);
  } else {
    const double min_div = min_positive_divergence(kind, points);
    eps_embed = std::isfinite(min_div) ? std::min(eps / 4.0 * min_div, 0.5) : 0.5;
    const GridSpec grid = build_grid(kind, d, eps_embed);
    embed_dimension = grid.dimension();
    gram.assign(n - 1, std::vector<double>(n - 1, 0.0));
    // Coordinate-separable: one block per point at a time keeps memory at n * 4J.
    std::vector<std::vector<double>> blocks(n, std::vector<double>(grid.block_len()));
    std::vector<std::span<const double>> views(blocks.begin(), blocks.end());
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t a = 0; a < n; ++a) embed_coordinate_into(grid, points[a][i], blocks[a]);
      accumulate_difference_gram(views, gram);
    }
    symmetrize(gram);
  }
  const std::vector<std::vector<double>> coords = gram_coordinates(gram);

  // Step 2: JL.
  const std::size_t k = jl_dimension(n, eps, options.c_jl);
  const JLProjection proj = make_jl_projection(k, coords.front().size(), derive_seed(seed, "jl"));

  // Step 3: onto the zero-sum plane, centred at the point-set mean.
  std::vector<std::vector<double>> on_plane;
  on_plane.reserve(n);
  for (const auto& c : coords) on_plane.push_back(remap_to_zero_sum_plane(jl_project(proj, c)));
  std::vector<double> mean(k + 1, 0.0);
  for (const auto& p : on_plane) {
    for (std::size_t i = 0; i <= k; ++i) mean[i] += p[i] / static_cast<double>(n);
  }
  for (auto& p : on_plane) {
    for (std::size_t i = 0; i <= k; ++i) p[i] -= mean[i];
  }

  // Step 4: into the calibrated ball.
  const double radius = calibrate_radius(kind, k, eps, options.c0, derive_seed(seed, "radius"),
                                         options.calibration_pairs);
  BallScaling scaled = scale_into_ball(on_plane, radius);

  ReducedPointSet out;
  out.kind = kind;
  out.n = n;
  out.d = d;
  out.k = k;
  out.eps = eps;
  out.seed = seed;
  out.c0 = options.c0;
  out.radius = radius;
  out.geometric_scale = scaled.beta;
  out.local_constant = local_constant(kind, k);
  out.divergence_scale = out.local_constant * scaled.beta * scaled.beta;
  out.mode = mode;
  out.eps_embed = eps_embed;
  out.embed_dimension = embed_dimension;
  out.points.reserve(n);
  for (const auto& p : scaled.points) out.points.push_back(validate(p));
  return out;
}

}  // namespace infodiv

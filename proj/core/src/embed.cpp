#include "infodiv/embed.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "infodiv/errors.hpp"
#include "infodiv/kernel.hpp"
#include "infodiv/random.hpp"

namespace infodiv {

namespace {

// Exact sincos is recomputed this often; in between the phase advances by a
// fixed rotation, which drifts by O(n * ulp).
constexpr std::int64_t kReanchorEvery = 64;

}  // namespace

std::uint64_t GridSpec::digest() const {
  char buf[160];
  std::snprintf(buf, sizeof buf, "det|%s|%zu|%.17g|%lld|%.17g", std::string(to_string(kind)).c_str(), d,
                eps, static_cast<long long>(J), step);
  return fnv1a64(buf);
}

std::int64_t grid_half_width(DivergenceKind kind, std::size_t d, double eps) {
  const double c = kind == DivergenceKind::JS ? 8.0 : 6.0;
  const double dd = static_cast<double>(d);
  return static_cast<std::int64_t>(std::ceil(32.0 * dd / eps * std::log(c * dd / eps)));
}

GridSpec build_grid(DivergenceKind kind, std::size_t d, double eps) {
  if (kind == DivergenceKind::Hellinger) {
    throw UnsupportedKernel("Hellinger needs no grid; use hellinger_embed");
  }
  if (d == 0) throw ConfigError("build_grid: d must be at least 1");
  if (!(eps > 0.0 && eps < 1.0)) throw ConfigError("build_grid: eps must lie in (0, 1)");

  const std::int64_t J = grid_half_width(kind, d, eps);
  const double dim = 4.0 * static_cast<double>(J) * static_cast<double>(d);
  if (dim > static_cast<double>(kMaxEmbeddingDimension)) {
    std::ostringstream msg;
    msg << "embedding dimension 4*J*d = " << static_cast<long long>(dim) << " exceeds the limit of "
        << kMaxEmbeddingDimension << " (J = ceil((32d/eps) ln(" << (kind == DivergenceKind::JS ? 8 : 6)
        << "d/eps)) = " << J << " for d = " << d << ", eps = " << eps
        << "); increase eps or reduce d";
    throw ConfigError(msg.str());
  }

  GridSpec grid{kind, eps, d, J, eps / (32.0 * static_cast<double>(d)), {}};
  const KernelSpec& kernel = kernel_spec(kind);
  grid.interval_roots.resize(static_cast<std::size_t>(2 * J));
  const double scale = spectral_scale(kind);
  for (std::int64_t j = -J; j < J; ++j) {
    grid.interval_roots[static_cast<std::size_t>(j + J)] =
        std::sqrt(scale * kernel.interval_mass(grid.omega(j), grid.omega(j + 1)));
  }
  return grid;
}

void embed_coordinate_into(const GridSpec& grid, double value, std::span<double> out) {
  if (out.size() != grid.block_len()) throw DimensionError("embed_coordinate: output block size");
  if (!(value >= 0.0 && value <= 1.0)) {
    throw ValidationError("embed_coordinate: value must lie in [0, 1]");
  }
  const std::size_t half = static_cast<std::size_t>(2 * grid.J);
  if (value == 0.0) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  const double amp = std::sqrt(value);
  const double lnv = std::log(value);
  const double dtheta = grid.step * lnv;
  const double rc = std::cos(dtheta);
  const double rs = std::sin(dtheta);
  double c = 0.0;
  double s = 0.0;
  for (std::size_t idx = 0; idx < half; ++idx) {
    const std::int64_t j = static_cast<std::int64_t>(idx) - grid.J;
    if (idx % kReanchorEvery == 0) {
      const double theta = grid.omega(j) * lnv;
      c = std::cos(theta);
      s = std::sin(theta);
    } else {
      const double nc = c * rc - s * rs;
      s = s * rc + c * rs;
      c = nc;
    }
    const double w = amp * grid.interval_roots[idx];
    out[idx] = w * c;
    out[half + idx] = w * s;
  }
}

std::vector<double> embed_coordinate(const GridSpec& grid, double value) {
  std::vector<double> block(grid.block_len());
  embed_coordinate_into(grid, value, block);
  return block;
}

DetEmbedding embed_point(const GridSpec& grid, const Distribution& p) {
  if (p.d() != grid.d) {
    throw DimensionError("embed_point: distribution has d = " + std::to_string(p.d()) +
                         " but the grid was built for d = " + std::to_string(grid.d));
  }
  DetEmbedding out{grid.digest(), std::vector<double>(grid.dimension())};
  const std::size_t len = grid.block_len();
  for (std::size_t i = 0; i < p.d(); ++i) {
    embed_coordinate_into(grid, p[i], std::span<double>(out.vector).subspan(i * len, len));
  }
  return out;
}

std::vector<double> hellinger_embed(const Distribution& p) {
  std::vector<double> out(p.d());
  for (std::size_t i = 0; i < p.d(); ++i) out[i] = std::sqrt(p[i]);
  return out;
}

double l22_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw DimensionError("l22_distance: length mismatch (" + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()) + ")");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    total += diff * diff;
  }
  return total;
}

double embedding_distance(const DetEmbedding& a, const DetEmbedding& b) {
  if (a.grid_digest != b.grid_digest) {
    throw SketchMismatchError("embeddings were built on different grids");
  }
  return l22_distance(a.vector, b.vector);
}

}  // namespace infodiv

#include "infodiv/sample_embed.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

#include "infodiv/embed.hpp"
#include "infodiv/errors.hpp"
#include "infodiv/kernel.hpp"
#include "infodiv/random.hpp"

namespace infodiv {

std::uint64_t FrequencySample::digest() const {
  char buf[160];
  std::snprintf(buf, sizeof buf, "rand|%s|%zu|%llu|%s", std::string(to_string(kind)).c_str(), s(),
                static_cast<unsigned long long>(seed), std::string(kRngId).c_str());
  return fnv1a64(buf);
}

FrequencySample draw_frequencies(DivergenceKind kind, std::size_t s, std::uint64_t seed) {
  if (s == 0) throw ConfigError("draw_frequencies: s must be at least 1");
  const KernelSpec& kernel = kernel_spec(kind);
  FrequencySample sample{kind, seed, std::vector<double>(s)};
  Rng rng(seed);
  for (double& w : sample.omegas) w = kernel.quantile(rng.uniform());
  return sample;
}

RandEmbedding rand_embed_point(const FrequencySample& sample, const Distribution& p) {
  const std::size_t s = sample.s();
  RandEmbedding out{sample.digest(), std::vector<double>(2 * s * p.d(), 0.0)};
  const double inv_root_s = std::sqrt(spectral_scale(sample.kind) / static_cast<double>(s));
  for (std::size_t i = 0; i < p.d(); ++i) {
    const double v = p[i];
    if (v == 0.0) continue;
    const double amp = std::sqrt(v) * inv_root_s;
    const double lnv = std::log(v);
    double* block = out.vector.data() + 2 * s * i;
    for (std::size_t j = 0; j < s; ++j) {
      const double phase = sample.omegas[j] * lnv;
      block[j] = amp * std::cos(phase);
      block[s + j] = amp * std::sin(phase);
    }
  }
  return out;
}

double rand_embedding_distance(const RandEmbedding& a, const RandEmbedding& b) {
  if (a.sample_digest != b.sample_digest) {
    throw SketchMismatchError("randomized embeddings use different frequency samples");
  }
  return l22_distance(a.vector, b.vector);
}

MomentEstimate moment_check(const FrequencySample& sample, double x, double y) {
  if (sample.s() < 2) throw ConfigError("moment_check needs at least two samples");
  // Welford accumulation.
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t count = 0;
  const double scale = spectral_scale(sample.kind);
  for (double w : sample.omegas) {
    const double value = scale * spectral_integrand(x, y, w);
    ++count;
    const double delta = value - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (value - mean);
  }
  return {mean, m2 / static_cast<double>(count - 1)};
}

MomentEstimate moment_check(DivergenceKind kind, double x, double y, std::size_t s,
                            std::uint64_t seed) {
  if (s < 2) throw ConfigError("moment_check needs at least two samples");
  return moment_check(draw_frequencies(kind, s, seed), x, y);
}

double variance_constant(DivergenceKind kind) {
  switch (kind) {
    case DivergenceKind::JS:
      return 36.0;
    case DivergenceKind::ChiSquared:
      return 23.0;
    case DivergenceKind::Hellinger:
      break;
  }
  throw UnsupportedKernel("Hellinger has no randomized spectral embedding");
}

std::uint64_t required_samples(DivergenceKind kind, std::uint64_t n, std::uint64_t d, double eps) {
  const double c = variance_constant(kind);
  if (n == 0 || d == 0) throw ConfigError("required_samples: n and d must be at least 1");
  if (!(eps > 0.0 && eps <= 1.0)) throw ConfigError("required_samples: eps must lie in (0, 1]");
  const double nd = static_cast<double>(n) * static_cast<double>(d);
  const double raw = std::ceil(c * nd * nd / (eps * eps));
  std::ostringstream formula;
  formula << "s = ceil(" << c << " n^2 d^2 / eps^2) with n = " << n << ", d = " << d
          << ", eps = " << eps;
  if (!(raw < 0x1.0p53)) {
    throw ConfigError("required_samples overflows: " + formula.str());
  }
  const auto s = static_cast<std::uint64_t>(raw);
  const double dim = 2.0 * raw * static_cast<double>(d);
  if (dim > static_cast<double>(kMaxEmbeddingDimension)) {
    formula << " gives s = " << s << " and 2 s d = " << dim << " > " << kMaxEmbeddingDimension;
    throw ConfigError("randomized embedding too large: " + formula.str());
  }
  return s;
}

}  // namespace infodiv

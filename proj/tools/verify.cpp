#include "verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <string>

#include "infodiv/dimred.hpp"
#include "infodiv/divergence.hpp"
#include "infodiv/embed.hpp"
#include "infodiv/kernel.hpp"
#include "infodiv/random.hpp"
#include "infodiv/sample_embed.hpp"
#include "infodiv/stream.hpp"

namespace infodiv::cli {

namespace {

Distribution random_point(Rng& rng, std::size_t d) {
  std::vector<double> v(d);
  for (auto& x : v) x = rng.exponential();
  return validate(v, true);
}

constexpr DivergenceKind kSpectral[] = {DivergenceKind::JS, DivergenceKind::ChiSquared};

}  // namespace

int run_verify(std::uint64_t seed, std::ostream& out) {
  int failures = 0;
  const auto check = [&](const std::string& name, const std::function<std::string()>& body) {
    std::string detail;
    bool ok = false;
    try {
      detail = body();
      ok = detail.rfind("ok", 0) == 0;
    } catch (const std::exception& e) {
      detail = std::string("threw: ") + e.what();
    }
    if (!ok) ++failures;
    out << (ok ? "PASS " : "FAIL ") << name << ": " << detail << "\n";
  };

  check("kernel densities integrate to one", [] {
    double worst = 0;
    for (auto kind : kSpectral) {
      const double mass = integrate([kind](double w) { return kernel_density(kind, w); }, -40, 40);
      worst = std::max(worst, std::abs(mass - 1.0));
    }
    return std::string(worst <= 1e-8 ? "ok" : "bad") + " (max deviation " + std::to_string(worst) + ")";
  });

  check("spectral integral reproduces the closed forms", [seed] {
    Rng rng(derive_seed(seed, "identity"));
    double worst = 0;
    for (int t = 0; t < 20; ++t) {
      const double x = rng.uniform(), y = rng.uniform();
      for (auto kind : kSpectral) {
        worst = std::max(worst, std::abs(spectral_divergence(kind, x, y) - scalar_divergence(kind, x, y)));
      }
    }
    return std::string(worst <= 1e-7 ? "ok" : "bad") + " (max error " + std::to_string(worst) + ")";
  });

  check("integrand bounds", [seed] {
    Rng rng(derive_seed(seed, "bounds"));
    for (int t = 0; t < 10000; ++t) {
      const double x = rng.uniform(), y = rng.uniform(), w = 20 * rng.uniform() - 10;
      const double h = spectral_integrand(x, y, w);
      const double r = std::sqrt(x) + std::sqrt(y);
      const double fd = (spectral_integrand(x, y, w + 1e-6) - spectral_integrand(x, y, w - 1e-6)) / 2e-6;
      const double growth = (1 + 2 * std::abs(w)) * (1 + 2 * std::abs(w));
      if (h < 0 || h > r * r + 1e-14 || std::abs(fd) > 16 + 1e-6 ||
          h > scalar_divergence(DivergenceKind::Hellinger, x, y) * growth + 1e-12) {
        return std::string("bad at x=") + std::to_string(x) + " y=" + std::to_string(y);
      }
    }
    return std::string("ok");
  });

  check("ordering f_H <= f_chi <= 2 f_J", [seed] {
    Rng rng(derive_seed(seed, "order"));
    for (int t = 0; t < 10000; ++t) {
      const double x = rng.uniform(), y = rng.uniform();
      const double fh = scalar_divergence(DivergenceKind::Hellinger, x, y);
      const double fc = scalar_divergence(DivergenceKind::ChiSquared, x, y);
      const double fj = scalar_divergence(DivergenceKind::JS, x, y);
      if (fh > fc + 1e-12 || fc > 2 * fj + 1e-12) return std::string("bad");
    }
    return std::string("ok");
  });

  check("deterministic embedding additive error", [seed] {
    Rng rng(derive_seed(seed, "det"));
    double worst = 0;
    for (auto kind : kSpectral) {
      const auto grid = build_grid(kind, 4, 0.2);
      for (int t = 0; t < 50; ++t) {
        const auto p = random_point(rng, 4), q = random_point(rng, 4);
        const double err = std::abs(embedding_distance(embed_point(grid, p), embed_point(grid, q)) -
                                    divergence(kind, p, q));
        worst = std::max(worst, err);
      }
    }
    return std::string(worst <= 0.2 ? "ok" : "bad") + " (max error " + std::to_string(worst) +
           ", bound 0.2)";
  });

  check("randomized embedding is unbiased", [seed] {
    const auto m = moment_check(DivergenceKind::JS, 0.9, 0.1, 200000, derive_seed(seed, "moments"));
    const double exact = scalar_divergence(DivergenceKind::JS, 0.9, 0.1);
    const double rel = std::abs(m.mean / exact - 1.0);
    return std::string(rel <= 0.02 && m.variance <= 36 * exact * exact ? "ok" : "bad") +
           " (relative error " + std::to_string(rel) + ")";
  });

  check("stream order invariance and linearity", [seed] {
    SketchParams params;
    params.d = 4;
    params.eps_embed = 0.2;
    params.eps_l2 = 0.2;
    params.seed = derive_seed(seed, "stream");
    const auto family = SketchFamily::create(params);
    Rng rng(derive_seed(seed, "stream-points"));
    const auto p = random_point(rng, 4);
    LinearSketch forward(family), backward(family), bulk(family);
    for (std::size_t i = 0; i < 4; ++i) forward.process(i, p[i]);
    for (std::size_t i = 4; i-- > 0;) backward.process(i, p[i]);
    bulk.add_vector(embed_point(family->grid(), p).vector);
    double worst = 0;
    for (std::size_t c = 0; c < forward.counters().size(); ++c) {
      worst = std::max(worst, std::abs(forward.counters()[c] - backward.counters()[c]));
      worst = std::max(worst, std::abs(forward.counters()[c] - bulk.counters()[c]));
    }
    return std::string(worst <= 1e-9 ? "ok" : "bad") + " (max counter difference " +
           std::to_string(worst) + ")";
  });

  check("reduced points stay on the simplex inside the ball", [seed] {
    Rng rng(derive_seed(seed, "reduce"));
    std::vector<Distribution> pts;
    for (int i = 0; i < 6; ++i) pts.push_back(random_point(rng, 8));
    const auto r = reduce(DivergenceKind::Hellinger, pts, 0.5, derive_seed(seed, "reduce-run"));
    const double c = 1.0 / static_cast<double>(r.k + 1);
    for (const auto& p : r.points) {
      double sum = 0, dist = 0;
      for (std::size_t i = 0; i < p.d(); ++i) {
        sum += p[i];
        dist += (p[i] - c) * (p[i] - c);
      }
      if (std::abs(sum - 1) > 1e-9 || std::sqrt(dist) > r.radius * (1 + 1e-9)) return std::string("bad");
    }
    return "ok (k = " + std::to_string(r.k) + ")";
  });

  out << (failures == 0 ? "all checks passed" : std::to_string(failures) + " check(s) failed") << "\n";
  return failures;
}

}  // namespace infodiv::cli

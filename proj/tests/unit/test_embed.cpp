#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "infodiv/divergence.hpp"
#include "infodiv/embed.hpp"
#include "infodiv/errors.hpp"
#include "infodiv/kernel.hpp"
#include "oracles.hpp"

using namespace infodiv;

TEST_CASE("grid parameters follow the closed-form half-width") {
  const auto js = build_grid(DivergenceKind::JS, 2, 0.1);
  CHECK(js.J == 3249);
  CHECK(js.step == doctest::Approx(0.1 / 64.0));
  CHECK(js.dimension() == 4u * 3249u * 2u);

  const auto chi = build_grid(DivergenceKind::ChiSquared, 2, 0.1);
  CHECK(chi.J == static_cast<std::int64_t>(std::ceil(640.0 * std::log(120.0))));
  CHECK(chi.J == 3064);

  const auto small = build_grid(DivergenceKind::JS, 1, 0.5);
  CHECK(small.J == 178);
  CHECK(small.step == 1.0 / 64.0);

  for (const auto* g : {&js, &chi, &small}) {
    const double c = g->kind == DivergenceKind::JS ? 8.0 : 6.0;
    CHECK(static_cast<double>(g->J) * g->step >= std::log(c * g->d / g->eps) - 1e-12);
    CHECK(g->interval_roots.size() == static_cast<std::size_t>(2 * g->J));
  }
}

TEST_CASE("build_grid rejects bad configurations") {
  CHECK_THROWS_AS(build_grid(DivergenceKind::Hellinger, 2, 0.1), UnsupportedKernel);
  CHECK_THROWS_AS(build_grid(DivergenceKind::JS, 0, 0.1), ConfigError);
  CHECK_THROWS_AS(build_grid(DivergenceKind::JS, 2, 0.0), ConfigError);
  CHECK_THROWS_AS(build_grid(DivergenceKind::JS, 2, 1.0), ConfigError);
  CHECK_THROWS_AS(build_grid(DivergenceKind::JS, 2000, 0.001), ConfigError);
}

TEST_CASE("coordinate blocks at 0 and 1") {
  const auto g = build_grid(DivergenceKind::JS, 1, 0.5);
  const auto zero = embed_coordinate(g, 0.0);
  CHECK(zero.size() == g.block_len());
  for (double v : zero) CHECK(v == 0.0);

  const auto one = embed_coordinate(g, 1.0);
  const std::size_t half = g.block_len() / 2;
  for (std::size_t j = 0; j < half; ++j) {
    CHECK(one[j] == doctest::Approx(g.interval_roots[j]).epsilon(1e-15));
    CHECK(one[half + j] == 0.0);
  }
  CHECK_THROWS_AS(embed_coordinate(g, 1.5), ValidationError);
  CHECK_THROWS_AS(embed_coordinate(g, -0.1), ValidationError);
}

TEST_CASE("block norm is bounded by the coordinate value") {
  const auto g = build_grid(DivergenceKind::ChiSquared, 2, 0.2);
  for (double v : {0.01, 0.3, 0.999}) {
    const auto block = embed_coordinate(g, v);
    double norm = 0.0;
    for (double x : block) norm += x * x;
    CHECK(norm <= v + 1e-12);
  }
}

TEST_CASE("per-coordinate error is within eps / d") {
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (auto kind : {DivergenceKind::JS, DivergenceKind::ChiSquared}) {
    const std::size_t d = 4;
    const auto g = build_grid(kind, d, 0.1);
    for (int t = 0; t < 50; ++t) {
      const double x = u(gen), y = u(gen);
      const double emb = l22_distance(embed_coordinate(g, x), embed_coordinate(g, y));
      const double exact = kind == DivergenceKind::JS ? oracle::js_pair(x, y) : oracle::chi_pair(x, y);
      CHECK(std::abs(emb - exact) <= g.eps / static_cast<double>(d));
    }
  }
}

TEST_CASE("disjoint point masses under JS") {
  const auto g = build_grid(DivergenceKind::JS, 2, 0.05);
  const auto p = embed_point(g, validate({1.0, 0.0}));
  const auto q = embed_point(g, validate({0.0, 1.0}));
  CHECK(std::abs(embedding_distance(p, q) - 2 * std::numbers::ln2) <= 0.05);
  CHECK(embedding_distance(p, p) == 0.0);
}

TEST_CASE("additive error on random chi-squared pairs") {
  std::mt19937_64 gen(8);
  const auto g = build_grid(DivergenceKind::ChiSquared, 4, 0.05);
  for (int t = 0; t < 20; ++t) {
    const auto p = validate(oracle::dirichlet(gen, 4));
    const auto q = validate(oracle::dirichlet(gen, 4));
    const double exact = divergence(DivergenceKind::ChiSquared, p, q);
    CHECK(std::abs(embedding_distance(embed_point(g, p), embed_point(g, q)) - exact) <= 0.05);
  }
}

TEST_CASE("embeddings are deterministic and coordinate separable") {
  const auto g = build_grid(DivergenceKind::JS, 3, 0.2);
  const auto p = validate({0.2, 0.0, 0.8});
  const auto a = embed_point(g, p);
  const auto b = embed_point(build_grid(DivergenceKind::JS, 3, 0.2), p);
  CHECK(a.vector == b.vector);
  CHECK(a.grid_digest == g.digest());
  for (std::size_t i = 0; i < 3; ++i) {
    const auto block = embed_coordinate(g, p[i]);
    for (std::size_t j = 0; j < g.block_len(); ++j) CHECK(a.vector[i * g.block_len() + j] == block[j]);
  }
  CHECK_THROWS_AS(embed_point(g, validate({0.5, 0.5})), DimensionError);
}

TEST_CASE("embeddings from different grids are not comparable") {
  const auto g1 = build_grid(DivergenceKind::JS, 2, 0.2);
  const auto g2 = build_grid(DivergenceKind::JS, 2, 0.1);
  const auto p = validate({0.5, 0.5});
  CHECK(g1.digest() != g2.digest());
  CHECK_THROWS_AS(embedding_distance(embed_point(g1, p), embed_point(g2, p)), SketchMismatchError);
}

TEST_CASE("Hellinger map") {
  const auto e = hellinger_embed(validate({1.0, 0.0}));
  CHECK(e[0] == 1.0);
  CHECK(e[1] == 0.0);
  const auto h = hellinger_embed(validate({0.25, 0.75}));
  CHECK(h[0] == 0.5);
  CHECK(h[1] == doctest::Approx(0.8660254037844386).epsilon(1e-15));

  std::mt19937_64 gen(21);
  for (int t = 0; t < 200; ++t) {
    const auto p = validate(oracle::dirichlet(gen, 7));
    const auto q = validate(oracle::dirichlet(gen, 7));
    CHECK(std::abs(l22_distance(hellinger_embed(p), hellinger_embed(q)) -
                   divergence(DivergenceKind::Hellinger, p, q)) <= 1e-12);
  }
}

TEST_CASE("l22 distance") {
  const std::vector<double> a{0, 0}, b{3, 4}, c{1, 1}, e{2, 3};
  CHECK(l22_distance(a, b) == 25.0);
  CHECK(l22_distance(c, e) == 5.0);
  CHECK(l22_distance(b, b) == 0.0);
  const std::vector<double> three{1, 2, 3};
  CHECK_THROWS_AS(l22_distance(a, three), DimensionError);
}

TEST_CASE("truncation: grid mass misses at most eps / (4 d)") {
  for (auto kind : {DivergenceKind::JS, DivergenceKind::ChiSquared}) {
    for (double eps : {0.2, 0.05}) {
      const std::size_t d = 2;
      const auto g = build_grid(kind, d, eps);
      double covered = 0.0;
      for (double r : g.interval_roots) covered += r * r;
      covered /= spectral_scale(kind);
      CHECK(1.0 - covered <= eps / (4.0 * d) + 1e-12);
    }
  }
}

TEST_CASE("quantization: left-endpoint sums stay within eps / (2 d) of the grid integral") {
  std::mt19937_64 gen(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (auto kind : {DivergenceKind::JS, DivergenceKind::ChiSquared}) {
    const std::size_t d = 1;
    const double eps = 0.5;
    const auto g = build_grid(kind, d, eps);
    for (int t = 0; t < 10; ++t) {
      const double x = u(gen), y = u(gen);
      double frozen = 0.0;
      for (std::int64_t j = -g.J; j < g.J; ++j) {
        const double r = g.interval_roots[static_cast<std::size_t>(j + g.J)];
        frozen += spectral_integrand(x, y, g.omega(j)) * r * r;
      }
      const auto integrand = [&](double w) {
        const double k = kind == DivergenceKind::JS ? oracle::js_density(w) : oracle::chi_density(w);
        return spectral_integrand(x, y, w) * k;
      };
      const double exact = spectral_scale(kind) *
                           oracle::gauss_legendre(integrand, g.omega(-g.J), g.omega(g.J), 2 * static_cast<int>(g.J));
      CHECK(std::abs(frozen - exact) <= eps / (2.0 * d));
    }
  }
}

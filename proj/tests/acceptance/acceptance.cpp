// Acceptance suite: one PASS/FAIL line per criterion, plus INFO lines for
// informative measurements that do not gate the result.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "infodiv/dimred.hpp"
#include "infodiv/divergence.hpp"
#include "infodiv/embed.hpp"
#include "infodiv/errors.hpp"
#include "infodiv/kernel.hpp"
#include "infodiv/random.hpp"
#include "infodiv/sample_embed.hpp"
#include "infodiv/stream.hpp"
#include "oracles.hpp"

using namespace infodiv;

namespace {

constexpr DivergenceKind kSpectral[] = {DivergenceKind::JS, DivergenceKind::ChiSquared};

int g_failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  if (!pass) ++g_failures;
  std::printf("criterion %d: %s: %s (%s)\n", id, name.c_str(), pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
}

void info(const std::string& text) {
  std::printf("  INFO %s\n", text.c_str());
  std::fflush(stdout);
}

std::string num(double v, int prec = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", prec, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double closed_form(DivergenceKind kind, double x, double y) {
  switch (kind) {
    case DivergenceKind::JS:
      return oracle::js_pair(x, y);
    case DivergenceKind::Hellinger:
      return oracle::hellinger_pair(x, y);
    case DivergenceKind::ChiSquared:
      return oracle::chi_pair(x, y);
  }
  return 0.0;
}

double exact_divergence(DivergenceKind kind, const Distribution& p, const Distribution& q) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.d(); ++i) s += closed_form(kind, p[i], q[i]);
  return s;
}

// Mix of interior and sparse points so zero coordinates are exercised.
Distribution random_point(std::mt19937_64& gen, std::size_t d, bool sparse) {
  auto v = oracle::dirichlet(gen, d);
  if (sparse && d > 1) {
    std::uniform_int_distribution<std::size_t> pick(0, d - 1);
    for (std::size_t z = 0; z < d / 2; ++z) v[pick(gen)] = 0.0;
    double s = 0.0;
    for (double x : v) s += x;
    if (s == 0.0) v[0] = s = 1.0;
    for (double& x : v) x /= s;
  }
  return validate(v, true);
}

double js_normalized(double w) { return oracle::js_density(w); }

// ---------------------------------------------------------------------------

void criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 gen(derive_seed(1, "acceptance"));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst[2] = {0, 0};
  for (int t = 0; t < 100; ++t) {
    const double x = u(gen), y = u(gen);
    for (int k = 0; k < 2; ++k) {
      const auto kind = kSpectral[k];
      worst[k] = std::max(worst[k], std::abs(spectral_divergence(kind, x, y) - closed_form(kind, x, y)));
    }
  }
  const double secs = seconds_since(t0);
  report(1, "kernel identity", worst[0] <= 1e-7 && worst[1] <= 1e-7 && secs < 10.0,
         "max |spectral - closed| JS " + num(worst[0]) + ", chi2 " + num(worst[1]) +
             ", tol 1e-7; " + num(secs, 3) + " s < 10 s");
}

void criterion2() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 gen(derive_seed(2, "acceptance"));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_real_distribution<double> w(-10.0, 10.0);
  std::size_t above2 = 0, negative = 0, corrected = 0, deriv = 0, growth = 0;
  double max_h = 0, max_dh = 0, worst_x = 0, worst_y = 0, worst_w = 0;
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) {
    const double x = u(gen), y = u(gen), om = w(gen);
    const double h = spectral_integrand(x, y, om);
    if (h < 0) ++negative;
    if (h > 2.0) ++above2;
    if (h > max_h) {
      max_h = h;
      worst_x = x;
      worst_y = y;
      worst_w = om;
    }
    const double r = std::sqrt(x) + std::sqrt(y);
    if (h > r * r + 1e-14) ++corrected;
    const double step = 1e-6;
    const double dh =
        (spectral_integrand(x, y, om + step) - spectral_integrand(x, y, om - step)) / (2 * step);
    max_dh = std::max(max_dh, std::abs(dh));
    if (std::abs(dh) > 16.0 + 1e-6) ++deriv;
    const double g = (1 + 2 * std::abs(om)) * (1 + 2 * std::abs(om));
    if (h > closed_form(DivergenceKind::Hellinger, x, y) * g + 1e-12) ++growth;
  }
  const double secs = seconds_since(t0);
  const bool pass = above2 == 0 && negative == 0 && deriv == 0 && growth == 0 && secs < 5.0;
  report(2, "lemma bounds", pass,
         std::to_string(above2) + "/" + std::to_string(trials) + " samples with h > 2 (max h " + num(max_h) +
             " at x=" + num(worst_x) + " y=" + num(worst_y) + " w=" + num(worst_w) + "); " +
             std::to_string(negative) + " negative; max |dh/dw| " + num(max_dh) + " <= 16 violated " +
             std::to_string(deriv) + "x; Hellinger growth violated " + std::to_string(growth) + "x; " +
             num(secs, 3) + " s");
  info("h <= (sqrt x + sqrt y)^2 <= 2(x + y): violated " + std::to_string(corrected) +
       "x; h <= 2 holds whenever x + y <= 1");
}

void criterion3() {
  std::mt19937_64 gen(derive_seed(3, "acceptance"));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::size_t bad1 = 0, bad2 = 0;
  for (int t = 0; t < 10000; ++t) {
    const double x = u(gen), y = u(gen);
    const double fh = scalar_divergence(DivergenceKind::Hellinger, x, y);
    const double fc = scalar_divergence(DivergenceKind::ChiSquared, x, y);
    const double fj = scalar_divergence(DivergenceKind::JS, x, y);
    if (fh > fc + 1e-12) ++bad1;
    if (fc > 2 * fj + 1e-12) ++bad2;
  }
  report(3, "ordering chain", bad1 == 0 && bad2 == 0,
         "f_H > f_chi in " + std::to_string(bad1) + ", f_chi > 2 f_J in " + std::to_string(bad2) +
             " of 10000 pairs, slack 1e-12");
}

void criterion4() {
  bool pass = true;
  std::string detail;
  for (double eps : {0.2, 0.05}) {
    // Tail mass on both sides, by an independent quadrature of the densities.
    const double tj = std::log(4.0 / eps);
    const double tc = std::log(3.0 / eps);
    const double tail_js = 2.0 * oracle::gauss_legendre(js_normalized, tj, 60.0, 2000);
    const double tail_chi = 2.0 * oracle::gauss_legendre(oracle::chi_density, tc, 60.0, 2000);
    pass = pass && tail_js <= eps && tail_chi <= eps;
    detail += "eps " + num(eps) + ": tails JS " + num(tail_js) + ", chi2 " + num(tail_chi);

    std::mt19937_64 gen(derive_seed(4, "acceptance" + num(eps)));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto kind : kSpectral) {
      const auto grid = build_grid(kind, 1, eps);
      double worst = 0.0;
      for (int t = 0; t < 100; ++t) {
        const double x = u(gen), y = u(gen);
        double frozen = 0.0;
        for (std::int64_t j = -grid.J; j < grid.J; ++j) {
          const double r = grid.interval_roots[static_cast<std::size_t>(j + grid.J)];
          frozen += spectral_integrand(x, y, grid.omega(j)) * r * r;
        }
        worst = std::max(worst, std::abs(frozen - closed_form(kind, x, y)));
      }
      pass = pass && worst <= eps;
      detail += ", quantized " + std::string(to_string(kind)) + " max err " + num(worst);
    }
    detail += "; ";
  }
  report(4, "truncation and quantization", pass, detail + "bound eps");
}

void criterion5() {
  bool pass = true;
  std::string detail;
  double slow = 0.0;
  for (auto kind : kSpectral) {
    const double c = kind == DivergenceKind::JS ? 8.0 : 6.0;
    for (std::size_t d : {2, 4, 8}) {
      for (double eps : {0.2, 0.05}) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto grid = build_grid(kind, d, eps);
        const auto J = static_cast<std::int64_t>(std::ceil(32.0 * d / eps * std::log(c * d / eps)));
        const bool dim_ok = grid.J == J && grid.dimension() == static_cast<std::size_t>(4 * J) * d;
        std::mt19937_64 gen(derive_seed(5, std::string(to_string(kind)) + std::to_string(d) + num(eps)));
        int within = 0;
        double worst = 0.0;
        for (int t = 0; t < 200; ++t) {
          const auto p = random_point(gen, d, t % 4 == 0);
          const auto q = random_point(gen, d, t % 4 == 1);
          const double err = std::abs(embedding_distance(embed_point(grid, p), embed_point(grid, q)) -
                                      exact_divergence(kind, p, q));
          worst = std::max(worst, err);
          if (err <= eps) ++within;
        }
        const double secs = seconds_since(t0);
        if (d == 8 && eps == 0.05) slow = std::max(slow, secs);
        pass = pass && dim_ok && within == 200;
        if (!dim_ok || within < 200) {
          detail += std::string(to_string(kind)) + " d=" + std::to_string(d) + " eps=" + num(eps) +
                    " within " + std::to_string(within) + "/200; ";
        }
        info(std::string(to_string(kind)) + " d=" + std::to_string(d) + " eps=" + num(eps) + ": J " +
             std::to_string(grid.J) + ", dimension " + std::to_string(grid.dimension()) + ", max err " +
             num(worst) + ", " + num(secs, 3) + " s");
      }
    }
  }
  pass = pass && slow < 120.0;
  report(5, "deterministic embedding", pass,
         (detail.empty() ? std::string("2400/2400 pairs within eps, dimensions equal 4Jd; ") : detail) +
             "d=8 eps=0.05 took " + num(slow, 3) + " s < 120 s");
}

void criterion6() {
  const std::size_t s = 1000000;
  bool pass = true;
  std::string detail;
  for (auto kind : kSpectral) {
    const double cvar = kind == DivergenceKind::JS ? 36.0 : 23.0;
    const auto sample = draw_frequencies(kind, s, derive_seed(6, to_string(kind)));
    std::mt19937_64 gen(derive_seed(6, "pairs"));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst_mean = 0.0, worst_var = 0.0;
    int mean_ok = 0, var_ok = 0;
    for (int t = 0; t < 50; ++t) {
      const double x = u(gen), y = u(gen);
      const auto m = moment_check(sample, x, y);
      const double f = closed_form(kind, x, y);
      const double rel = std::abs(m.mean / f - 1.0);
      const double vr = m.variance / (f * f);
      worst_mean = std::max(worst_mean, rel);
      worst_var = std::max(worst_var, vr);
      if (rel <= 0.01) ++mean_ok;
      if (vr <= cvar * 1.05) ++var_ok;
    }
    pass = pass && mean_ok == 50 && var_ok == 50;
    detail += std::string(to_string(kind)) + ": mean within 1% " + std::to_string(mean_ok) +
              "/50 (worst " + num(worst_mean) + "), Var/f^2 max " + num(worst_var) + " <= " +
              num(cvar * 1.05) + "; ";
  }
  const auto fourth = [](DivergenceKind kind) {
    return oracle::gauss_legendre(
        [kind](double w) {
          const double a = 1 + 2 * std::abs(w);
          return a * a * a * a * kernel_density(kind, w);
        },
        -40, 40, 2000);
  };
  const double m_js = fourth(DivergenceKind::JS);
  const double m_chi = fourth(DivergenceKind::ChiSquared);
  const bool moments_ok = std::abs(m_js / 8.94 - 1) <= 0.01 && std::abs(m_chi / 22.77 - 1) <= 0.01;
  report(6, "randomized embedding moments", pass && moments_ok,
         detail + "fourth moments " + num(m_js, 5) + " vs 8.94, " + num(m_chi, 5) + " vs 22.77 (1%)");
}

void criterion7() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t n = 20, d = 8;
  SketchParams base;
  base.kind = DivergenceKind::JS;
  base.d = d;
  base.eps_embed = 0.05;
  base.eps_l2 = 0.1;
  base.delta = 0.05;

  std::mt19937_64 gen(derive_seed(7, "points"));
  std::vector<Distribution> pts;
  for (std::size_t i = 0; i < n; ++i) pts.push_back(random_point(gen, d, i % 5 == 0));
  std::vector<AggregateItem> items;
  for (std::size_t i = 0; i < n; ++i) {
    const auto part = to_items("p" + std::to_string(i), pts[i]);
    items.insert(items.end(), part.begin(), part.end());
  }
  std::vector<double> exact(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) exact[i * n + j] = exact_divergence(base.kind, pts[i], pts[j]);
  }

  // Order invariance on the first seed: sequential vs shuffled arrival.
  double order_gap = 0.0;
  std::size_t good = 0, total = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto params = base;
    params.seed = derive_seed(seed, "sketch");
    const auto family = SketchFamily::create(params);
    const auto sketches = replay_stream(items, family);
    if (seed == 0) {
      auto shuffled = items;
      std::shuffle(shuffled.begin(), shuffled.end(), gen);
      const auto other = replay_stream(shuffled, family);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          const auto a = "p" + std::to_string(i), b = "p" + std::to_string(j);
          order_gap = std::max(order_gap, std::abs(estimate_divergence(sketches.at(a), sketches.at(b)) -
                                                   estimate_divergence(other.at(a), other.at(b))));
        }
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double est = estimate_divergence(sketches.at("p" + std::to_string(i)),
                                               sketches.at("p" + std::to_string(j)));
        const double e = exact[i * n + j];
        // Relative error eps_l2 on the embedded distance, which is itself within eps_embed.
        if (std::abs(est - e) <= base.eps_l2 * (e + base.eps_embed) + base.eps_embed) ++good;
        ++total;
      }
    }
  }
  const double frac = static_cast<double>(good) / static_cast<double>(total);

  auto p8 = base, p64 = base;
  p64.d = 64;
  const auto f8 = SketchFamily::create(p8);
  const auto f64 = SketchFamily::create(p64);
  const bool space_ok = f8->counter_count() == f64->counter_count() &&
                        f8->counter_count() == static_cast<std::size_t>(std::ceil(8 * std::log(20.0))) * 600;
  const double secs = seconds_since(t0);
  report(7, "streaming sketch", order_gap <= 1e-9 && frac >= 0.9 && space_ok,
         "order gap " + num(order_gap) + " <= 1e-9; " + std::to_string(good) + "/" + std::to_string(total) +
             " = " + num(100 * frac, 4) + "% pairs within 0.1 relative + 0.05 floor (need 90%); counters " +
             std::to_string(f8->counter_count()) + " at d=8 and " + std::to_string(f64->counter_count()) +
             " at d=64 (embedding dims " + std::to_string(f8->embedding_dimension()) + ", " +
             std::to_string(f64->embedding_dimension()) + "); " + num(secs, 3) + " s");
}

struct DimredOutcome {
  int seeds_ok = 0;
  bool simplex_ok = true;
  bool ball_ok = true;
  double worst_ratio_lo = 1e300, worst_ratio_hi = 0;
  double local_dev = 0;
  std::size_t k = 0;
};

DimredOutcome run_dimred(DivergenceKind kind, const std::vector<Distribution>& pts, double eps, int seeds,
                         const ReduceOptions& opts) {
  DimredOutcome out;
  for (int seed = 0; seed < seeds; ++seed) {
    const auto r = reduce(kind, pts, eps, derive_seed(seed, "dimred"), opts);
    out.k = r.k;
    const double c = 1.0 / static_cast<double>(r.k + 1);
    for (const auto& p : r.points) {
      double sum = 0, dist = 0;
      for (std::size_t i = 0; i < p.d(); ++i) {
        sum += p[i];
        dist += (p[i] - c) * (p[i] - c);
      }
      out.simplex_ok = out.simplex_ok && std::abs(sum - 1.0) <= 1e-9;
      out.ball_ok = out.ball_ok && std::sqrt(dist) <= r.radius * (1 + 1e-9);
    }
    bool all = true;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        const double ratio =
            exact_divergence(kind, r.points[i], r.points[j]) / (r.divergence_scale * exact_divergence(kind, pts[i], pts[j]));
        out.worst_ratio_lo = std::min(out.worst_ratio_lo, ratio);
        out.worst_ratio_hi = std::max(out.worst_ratio_hi, ratio);
        if (ratio < 1 - eps || ratio > 1 + eps) all = false;
      }
    }
    if (all) ++out.seeds_ok;
    if (seed == 0) out.local_dev = max_local_deviation(kind, r.k, r.radius, derive_seed(seed, "fresh"), 1000);
  }
  return out;
}

void criterion8() {
  const auto t0 = std::chrono::steady_clock::now();
  const double eps = 0.25;
  const int seeds = 20;
  std::mt19937_64 gen(derive_seed(8, "points"));
  std::vector<Distribution> pts;
  for (int i = 0; i < 16; ++i) pts.push_back(random_point(gen, 64, false));

  const auto h = run_dimred(DivergenceKind::Hellinger, pts, eps, seeds, {});
  const bool pass = h.simplex_ok && h.ball_ok && h.seeds_ok * 10 >= 7 * seeds && h.local_dev <= eps / 4;
  report(8, "dimensionality reduction (Hellinger)", pass,
         "k " + std::to_string(h.k) + "; simplex " + (h.simplex_ok ? "ok" : "violated") + ", ball " +
             (h.ball_ok ? "ok" : "violated") + "; " + std::to_string(h.seeds_ok) + "/" +
             std::to_string(seeds) + " seeds with all ratios in [0.75, 1.25] (need 70%), ratio range [" +
             num(h.worst_ratio_lo) + ", " + num(h.worst_ratio_hi) + "]; near-centroid max deviation " +
             num(h.local_dev) + " <= " + num(eps / 4) + "; " + num(seconds_since(t0), 3) + " s");

  ReduceOptions det;
  det.mode = EmbedMode::DetBudget;
  ReduceOptions ro;
  ro.mode = EmbedMode::Randomized;
  ro.samples = 8192;
  for (auto kind : kSpectral) {
    const auto t1 = std::chrono::steady_clock::now();
    const int few = 5;
    std::string label = "deterministic step one with budget eps/4 * min divergence";
    DimredOutcome r;
    try {
      r = run_dimred(kind, pts, eps, few, det);
    } catch (const ConfigError& e) {
      info(std::string(to_string(kind)) + " " + label + " rejected: " + e.what());
      label = "randomized step one (s = 8192)";
      r = run_dimred(kind, pts, eps, few, ro);
    }
    info(std::string(to_string(kind)) + " with " + label + ", informative: " +
         std::to_string(r.seeds_ok) + "/" + std::to_string(few) + " seeds with all ratios in [0.75, 1.25], range [" +
         num(r.worst_ratio_lo) + ", " + num(r.worst_ratio_hi) + "], simplex " + (r.simplex_ok ? "ok" : "violated") +
         ", ball " + (r.ball_ok ? "ok" : "violated") + ", near-centroid deviation " + num(r.local_dev) + ", " +
         num(seconds_since(t1), 3) + " s");
  }
}

void criterion9() {
  bool pass = true;
  std::string detail;
  for (auto kind : kSpectral) {
    for (double eps : {0.2, 0.05}) {
      double lo = 1e300, hi = 0;
      for (std::size_t d : {2, 4, 8, 16}) {
        const double dim = 4.0 * static_cast<double>(grid_half_width(kind, d, eps)) * d;
        const double shape = (static_cast<double>(d * d) / eps) * std::log(d / eps);
        lo = std::min(lo, dim / shape);
        hi = std::max(hi, dim / shape);
      }
      pass = pass && hi / lo <= 2.0;
      detail += std::string(to_string(kind)) + " eps=" + num(eps) + " dim/((d^2/eps) ln(d/eps)) in [" +
                num(lo) + ", " + num(hi) + "]; ";
    }
  }
  std::size_t counters_lo = ~std::size_t{0}, counters_hi = 0;
  for (std::size_t d : {2, 4, 8, 16}) {
    SketchParams p;
    p.d = d;
    const auto fam = SketchFamily::create(p);
    counters_lo = std::min(counters_lo, fam->counter_count());
    counters_hi = std::max(counters_hi, fam->counter_count());
  }
  pass = pass && counters_lo == counters_hi;
  detail += "sketch counters " + std::to_string(counters_lo) + " for every d; ";
  double klo = 1e300, khi = 0;
  for (std::size_t n : {16, 64, 256, 1024}) {
    for (double eps : {0.5, 0.25}) {
      const double ratio = static_cast<double>(jl_dimension(n, eps)) / (std::log(double(n)) / (eps * eps));
      klo = std::min(klo, ratio);
      khi = std::max(khi, ratio);
    }
  }
  pass = pass && khi / klo <= 1.05;
  detail += "k/(ln n/eps^2) in [" + num(klo) + ", " + num(khi) + "]";
  report(9, "dimension accounting", pass, detail);
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<std::function<void()>> criteria = {criterion1, criterion2, criterion3,
                                                       criterion4, criterion5, criterion6,
                                                       criterion7, criterion8, criterion9};
  for (const auto& c : criteria) c();
  std::printf("%d of 9 criteria failed; total %.1f s\n", g_failures, seconds_since(t0));
  return g_failures == 0 ? 0 : 1;
}

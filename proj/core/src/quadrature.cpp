#include "infodiv/quadrature.hpp"

#include <cmath>

#include "infodiv/errors.hpp"

namespace infodiv {

namespace {

struct Panel {
  double a, fa, m, fm, b, fb, whole;
};

double simpson(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double refine(const std::function<double(double)>& f, const Panel& p, double tol, int depth) {
  const double lm = 0.5 * (p.a + p.m);
  const double rm = 0.5 * (p.m + p.b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(p.a, p.fa, p.m, p.fm, flm);
  const double right = simpson(p.m, p.fm, p.b, p.fb, frm);
  const double delta = left + right - p.whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return refine(f, {p.a, p.fa, lm, flm, p.m, p.fm, left}, 0.5 * tol, depth - 1) +
         refine(f, {p.m, p.fm, rm, frm, p.b, p.fb, right}, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureConfig& config) {
  if (!(config.abs_tol > 0.0)) throw ConfigError("quadrature abs_tol must be positive");
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double fa = f(a), flm = f(lm), fm = f(m), frm = f(rm), fb = f(b);
  // Start from two halves: a single three-point estimate can vanish on a
  // symmetric oscillation and report false convergence.
  const double tol = 0.5 * config.abs_tol;
  const int depth = config.max_depth - 1;
  return refine(f, {a, fa, lm, flm, m, fm, simpson(a, fa, m, fm, flm)}, tol, depth) +
         refine(f, {m, fm, rm, frm, b, fb, simpson(m, fm, b, fb, frm)}, tol, depth);
}

double integrate_panels(const std::function<double(double)>& f, double a, double b, int pieces,
                        const QuadratureConfig& config) {
  if (pieces < 1) pieces = 1;
  QuadratureConfig share = config;
  share.abs_tol = config.abs_tol / pieces;
  const double width = (b - a) / pieces;
  double total = 0.0;
  for (int i = 0; i < pieces; ++i) {
    const double lo = a + i * width;
    const double hi = (i + 1 == pieces) ? b : a + (i + 1) * width;
    total += integrate(f, lo, hi, share);
  }
  return total;
}

}  // namespace infodiv

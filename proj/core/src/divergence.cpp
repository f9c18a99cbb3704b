#include "infodiv/divergence.hpp"

#include <cmath>
#include <numbers>

#include "infodiv/errors.hpp"

namespace infodiv {

namespace {

// x ln(2x / (x + y)) written through log1p so the sum keeps precision when x ~ y.
double js_term(double x, double y) {
  if (x <= 0.0) return 0.0;
  return x * std::log1p((x - y) / (x + y));
}

}  // namespace

double scalar_divergence(DivergenceKind kind, double x, double y) {
  switch (kind) {
    case DivergenceKind::JS:
      return js_term(x, y) + js_term(y, x);
    case DivergenceKind::Hellinger: {
      // (sqrt x - sqrt y)^2 without the cancellation of the direct form.
      const double root_sum = std::sqrt(x) + std::sqrt(y);
      if (root_sum <= 0.0) return 0.0;
      const double diff = (x - y) / root_sum;
      return diff * diff;
    }
    case DivergenceKind::ChiSquared: {
      const double sum = x + y;
      if (sum <= 0.0) return 0.0;
      return (x - y) * (x - y) / sum;
    }
  }
  return 0.0;
}

double divergence(DivergenceKind kind, const Distribution& p, const Distribution& q) {
  if (p.d() != q.d()) {
    throw DimensionError("divergence: dimension mismatch (" + std::to_string(p.d()) + " vs " +
                         std::to_string(q.d()) + ")");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < p.d(); ++i) total += scalar_divergence(kind, p[i], q[i]);
  return total;
}

double second_derivative_at_one(DivergenceKind kind) {
  switch (kind) {
    case DivergenceKind::JS:
    case DivergenceKind::Hellinger:
      return 0.5;
    case DivergenceKind::ChiSquared:
      return 1.0;
  }
  return 0.0;
}

FDivergenceSpec f_divergence_spec(DivergenceKind kind) {
  constexpr double ln2 = std::numbers::ln2;
  switch (kind) {
    case DivergenceKind::JS:
      return {kind,
              [](double t) { return t * std::log(2.0 * t / (1.0 + t)) + std::log(2.0 / (1.0 + t)); },
              0.5, ln2, ln2};
    case DivergenceKind::Hellinger:
      return {kind,
              [](double t) {
                const double r = std::sqrt(t) - 1.0;
                return r * r;
              },
              0.5, 1.0, 1.0};
    case DivergenceKind::ChiSquared:
      return {kind, [](double t) { return (t - 1.0) * (t - 1.0) / (t + 1.0); }, 1.0, 1.0, 1.0};
  }
  throw ConfigError("unknown divergence kind");
}

double f_divergence(const FDivergenceSpec& spec, const Distribution& p, const Distribution& q) {
  if (p.d() != q.d()) throw DimensionError("f_divergence: dimension mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < p.d(); ++i) {
    const double a = p[i];
    const double b = q[i];
    if (a == 0.0 && b == 0.0) continue;
    if (a == 0.0) {
      total += b * spec.slope_at_infinity;
    } else if (b == 0.0) {
      total += a * spec.f_at_zero;
    } else {
      total += a * spec.f(b / a);
    }
  }
  return total;
}

bool is_well_behaved(const FDivergenceSpec& spec) {
  constexpr double step = 1e-5;
  const double f1 = spec.f(1.0);
  const double slope = (spec.f(1.0 + step) - spec.f(1.0 - step)) / (2.0 * step);
  return std::abs(f1) <= 1e-12 && std::abs(slope) <= 1e-8 && spec.f_second_at_one > 0.0;
}

}  // namespace infodiv

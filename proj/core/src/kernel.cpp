#include "infodiv/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "infodiv/errors.hpp"

namespace infodiv {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTableRadius = 40.0;
constexpr int kTableDensity = 256;  // nodes per unit frequency
constexpr int kTableCells = static_cast<int>(kTableRadius) * kTableDensity;
constexpr double kTableStep = 1.0 / kTableDensity;

double sech(double x) {
  const double ax = std::abs(x);
  if (ax > 350.0) return 0.0;
  const double e = std::exp(-ax);
  return 2.0 * e / (1.0 + e * e);
}

void require_spectral(DivergenceKind kind) {
  if (kind == DivergenceKind::Hellinger) {
    throw UnsupportedKernel(
        "Hellinger has an exact finite-dimensional map and no spectral kernel; use "
        "hellinger_embed");
  }
}

// Leading-order lower tail for omega << 0: the density decays like e^{pi omega}.
double asymptotic_lower_tail(DivergenceKind kind, double omega) {
  return kernel_density(kind, omega) / kPi;
}

}  // namespace

double spectral_integrand(double x, double y, double omega) {
  double re = 0.0;
  double im = 0.0;
  if (x > 0.0) {
    const double phase = omega * std::log(x);
    const double r = std::sqrt(x);
    re += r * std::cos(phase);
    im += r * std::sin(phase);
  }
  if (y > 0.0) {
    const double phase = omega * std::log(y);
    const double r = std::sqrt(y);
    re -= r * std::cos(phase);
    im -= r * std::sin(phase);
  }
  return re * re + im * im;
}

double kernel_density(DivergenceKind kind, double omega) {
  require_spectral(kind);
  const double s = sech(kPi * omega);
  if (kind == DivergenceKind::ChiSquared) return s;
  return 2.0 * s / (std::log(4.0) * (1.0 + 4.0 * omega * omega));
}

KernelSpec::KernelSpec(DivergenceKind kind) : kind_(kind) {
  require_spectral(kind);
  if (kind != DivergenceKind::JS) return;

  table_cdf_.resize(kTableCells + 1);
  table_density_.resize(kTableCells + 1);
  const auto density_fn = [](double w) { return kernel_density(DivergenceKind::JS, w); };
  // Per-cell tolerance keeps the accumulated error of the full table near 1e-12.
  const QuadratureConfig cell_quad{1e-10 / kTableCells, 30};
  double acc = asymptotic_lower_tail(kind, -kTableRadius);
  for (int i = 0; i <= kTableCells; ++i) {
    const double w = -kTableRadius + i * kTableStep;
    if (i > 0) acc += integrate(density_fn, w - kTableStep, w, cell_quad);
    table_cdf_[i] = acc;
    table_density_[i] = density_fn(w);
  }
}

double KernelSpec::lower_cdf(double omega) const {
  if (kind_ == DivergenceKind::ChiSquared) {
    return 2.0 / kPi * std::atan(std::exp(kPi * omega));
  }
  if (omega <= -kTableRadius) return asymptotic_lower_tail(kind_, omega);
  const double pos = (omega + kTableRadius) * kTableDensity;
  const int i = std::min(static_cast<int>(pos), kTableCells - 1);
  const double t = pos - i;
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * table_cdf_[i] + (t3 - 2 * t2 + t) * kTableStep * table_density_[i] +
         (-2 * t3 + 3 * t2) * table_cdf_[i + 1] + (t3 - t2) * kTableStep * table_density_[i + 1];
}

double KernelSpec::cdf(double omega) const {
  if (std::isnan(omega)) return omega;
  if (omega <= 0.0) return lower_cdf(omega);
  return 1.0 - lower_cdf(-omega);
}

double KernelSpec::lower_quantile(double u) const {
  if (kind_ == DivergenceKind::ChiSquared) {
    return std::log(std::tan(0.5 * kPi * u)) / kPi;
  }
  if (u >= table_cdf_.back()) return 0.0;
  if (u <= table_cdf_.front()) {
    // Far tail, below any double a sampler produces; bisect the asymptotic form.
    double lo = -800.0;
    double hi = -kTableRadius;
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
      const double mid = 0.5 * (lo + hi);
      (asymptotic_lower_tail(kind_, mid) < u ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }
  const auto it = std::upper_bound(table_cdf_.begin(), table_cdf_.end(), u);
  const int i = static_cast<int>(it - table_cdf_.begin()) - 1;
  double lo = -kTableRadius + i * kTableStep;
  double hi = lo + kTableStep;
  // Safeguarded Newton on the Hermite interpolant.
  double w = lo + kTableStep * (u - table_cdf_[i]) / (table_cdf_[i + 1] - table_cdf_[i]);
  for (int iter = 0; iter < 100; ++iter) {
    const double f = lower_cdf(w) - u;
    if (f == 0.0) return w;
    (f < 0.0 ? lo : hi) = w;
    const double slope = kernel_density(kind_, w);
    double next = w - f / slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - w) <= 1e-15 * (1.0 + std::abs(w))) return next;
    w = next;
  }
  return w;
}

double KernelSpec::quantile(double u) const {
  if (!(u > 0.0 && u < 1.0)) {
    throw ConfigError("kernel quantile requires 0 < u < 1");
  }
  if (u <= 0.5) return lower_quantile(u);
  return -lower_quantile(1.0 - u);
}

double KernelSpec::interval_mass(double a, double b) const {
  if (!(a <= b)) throw ConfigError("interval_mass requires a <= b");
  double mass;
  if (a >= 0.0) {
    mass = cdf(-a) - cdf(-b);
  } else if (b <= 0.0) {
    mass = cdf(b) - cdf(a);
  } else {
    mass = (0.5 - cdf(a)) + (0.5 - cdf(-b));
  }
  return std::max(mass, 0.0);
}

double KernelSpec::truncation_radius(double eps) const {
  if (!(eps > 0.0)) throw ConfigError("truncation radius requires eps > 0");
  return std::log(tail_constant() / eps);
}

const KernelSpec& kernel_spec(DivergenceKind kind) {
  require_spectral(kind);
  static const KernelSpec js(DivergenceKind::JS);
  static const KernelSpec chi(DivergenceKind::ChiSquared);
  return kind == DivergenceKind::JS ? js : chi;
}

double kernel_cdf(DivergenceKind kind, double omega) { return kernel_spec(kind).cdf(omega); }

double kernel_quantile(DivergenceKind kind, double u) { return kernel_spec(kind).quantile(u); }

double interval_mass(DivergenceKind kind, double a, double b) {
  return kernel_spec(kind).interval_mass(a, b);
}

double spectral_scale(DivergenceKind kind) {
  require_spectral(kind);
  return kind == DivergenceKind::JS ? std::numbers::ln2 : 1.0;
}

double spectral_divergence(DivergenceKind kind, double x, double y, const QuadratureConfig& quad) {
  require_spectral(kind);
  // Both factors are even in omega. Beyond |omega| = 40 the density is below
  // 1e-50 and the integrand is bounded, so the tail is dropped.
  const auto integrand = [kind, x, y](double w) {
    return spectral_integrand(x, y, w) * kernel_density(kind, w);
  };
  QuadratureConfig half = quad;
  half.abs_tol = 0.5 * quad.abs_tol;
  return 2.0 * spectral_scale(kind) * integrate_panels(integrand, 0.0, kTableRadius, static_cast<int>(kTableRadius), half);
}

}  // namespace infodiv

#pragma once

#include <vector>

#include "infodiv/distribution.hpp"
#include "infodiv/quadrature.hpp"

namespace infodiv {

/// |sqrt(x) e^{i w ln x} - sqrt(y) e^{i w ln y}|^2. A zero argument contributes
/// the zero vector regardless of phase.
double spectral_integrand(double x, double y, double omega);

/// Spectral density of the divergence: 2 sech(pi w) / (ln 4 (1 + 4 w^2)) for JS,
/// sech(pi w) for chi-squared. Throws UnsupportedKernel for Hellinger.
double kernel_density(DivergenceKind kind, double omega);

/// Factor relating the normalized density to the natural-log divergence:
/// D(x, y) = spectral_scale * integral of h(x, y, w) density(w) dw. It is ln 2
/// for JS (the normalized density alone yields JS in bits) and 1 for chi-squared.
double spectral_scale(DivergenceKind kind);

/// Frequency distribution of a divergence's spectral representation
/// D(x, y) = integral of spectral_integrand(x, y, w) * density(w) dw.
///
/// The chi-squared CDF has a closed form (a Gudermannian). The JS CDF does not:
/// it is tabulated once on [-40, 0] by adaptive Simpson and evaluated by cubic
/// Hermite interpolation with the exact density as node slopes; the upper half
/// follows from symmetry, so tail probabilities on both sides keep full
/// relative precision. Instances are immutable and safe to share across threads.
class KernelSpec {
 public:
  explicit KernelSpec(DivergenceKind kind);

  DivergenceKind kind() const { return kind_; }
  double density(double omega) const { return kernel_density(kind_, omega); }
  double cdf(double omega) const;
  double quantile(double u) const;

  /// Mass of [a, b], computed on whichever side of zero keeps precision.
  double interval_mass(double a, double b) const;

  /// C with integral_t^inf density <= C e^{-t}: 4 for JS, 3 for chi-squared.
  double tail_constant() const { return kind_ == DivergenceKind::JS ? 4.0 : 3.0; }

  /// Smallest t with tail_constant() * e^{-t} <= eps.
  double truncation_radius(double eps) const;

 private:
  double lower_cdf(double omega) const;  // omega <= 0
  double lower_quantile(double u) const;  // u <= 1/2

  DivergenceKind kind_;
  // JS only: CDF and density at omega_i = -kTableRadius + i / kTableDensity.
  std::vector<double> table_cdf_;
  std::vector<double> table_density_;
};

/// Shared, lazily constructed instance per kind. Throws UnsupportedKernel for Hellinger.
const KernelSpec& kernel_spec(DivergenceKind kind);

double kernel_cdf(DivergenceKind kind, double omega);
double kernel_quantile(DivergenceKind kind, double u);

/// CDF(b) - CDF(a), clamped at zero. Requires a <= b.
double interval_mass(DivergenceKind kind, double a, double b);

/// spectral_scale times the integral of spectral_integrand * density over the
/// real line by quadrature.
/// Independent of the closed forms in scalar_divergence, which it reproduces.
double spectral_divergence(DivergenceKind kind, double x, double y,
                           const QuadratureConfig& quad = {});

}  // namespace infodiv

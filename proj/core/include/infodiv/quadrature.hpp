#pragma once

#include <functional>

namespace infodiv {

struct QuadratureConfig {
  double abs_tol = 1e-10;
  int max_depth = 60;
};

/// Adaptive Simpson quadrature of `f` over [a, b] with Richardson correction.
/// Throws ConfigError if abs_tol is not positive.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureConfig& config = {});

/// Splits [a, b] into `pieces` equal panels and integrates each with an even
/// share of the tolerance. Useful for oscillatory integrands where a single
/// coarse Simpson estimate could falsely converge.
double integrate_panels(const std::function<double(double)>& f, double a, double b, int pieces,
                        const QuadratureConfig& config = {});

}  // namespace infodiv

#pragma once

#include <functional>

#include "infodiv/distribution.hpp"

namespace infodiv {

/// Per-coordinate contribution f(x, y) of the divergence, natural logarithms.
/// Zero coordinates follow the limit conventions (0 ln 0 = 0); no smoothing.
double scalar_divergence(DivergenceKind kind, double x, double y);

/// Sum of scalar_divergence over coordinates. Throws DimensionError when the
/// supports differ.
double divergence(DivergenceKind kind, const Distribution& p, const Distribution& q);

/// f''(1) of the divergence generator: 1/2 for JS and Hellinger, 1 for chi-squared.
double second_derivative_at_one(DivergenceKind kind);

/// Generator description of an f-divergence D_f(p, q) = sum_i p_i f(q_i / p_i).
struct FDivergenceSpec {
  DivergenceKind kind;
  std::function<double(double)> f;
  double f_second_at_one;
  double f_at_zero;          // lim_{u->0} f(u)
  double slope_at_infinity;  // lim_{u->inf} f(u)/u
};

FDivergenceSpec f_divergence_spec(DivergenceKind kind);

/// Generic evaluation through the generator, with the limit rules for zero
/// coordinates. Agrees with divergence() for the three built-in kinds.
double f_divergence(const FDivergenceSpec& spec, const Distribution& p, const Distribution& q);

/// f(1) = 0, f'(1) = 0 (central difference) and f''(1) > 0.
bool is_well_behaved(const FDivergenceSpec& spec);

}  // namespace infodiv

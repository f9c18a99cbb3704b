#pragma once

// Test-only reference computations. Nothing here calls into the library's
// quadrature or kernel tables.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

/// Composite 8-point Gauss-Legendre rule on `panels` equal panels.
inline double gauss_legendre(const std::function<double(double)>& f, double a, double b,
                             int panels) {
  static const double x[4] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                              0.9602898564975363};
  static const double w[4] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                              0.1012285362903763};
  const double h = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    const double half = 0.5 * h;
    for (int i = 0; i < 4; ++i) {
      total += w[i] * half * (f(mid - half * x[i]) + f(mid + half * x[i]));
    }
  }
  return total;
}

inline double js_density(double w) {
  const double pi = 3.14159265358979323846;
  return 2.0 / std::cosh(pi * w) / (std::log(4.0) * (1.0 + 4.0 * w * w));
}

inline double chi_density(double w) { return 1.0 / std::cosh(3.14159265358979323846 * w); }

/// Closed forms written out independently of the library.
inline double js_pair(double x, double y) {
  double t = 0.0;
  if (x > 0) t += x * std::log(2 * x / (x + y));
  if (y > 0) t += y * std::log(2 * y / (x + y));
  return t;
}
inline double hellinger_pair(double x, double y) {
  const double r = std::sqrt(x) - std::sqrt(y);
  return r * r;
}
inline double chi_pair(double x, double y) { return x + y > 0 ? (x - y) * (x - y) / (x + y) : 0.0; }

/// Uniform Dirichlet(1, ..., 1) draw.
inline std::vector<double> dirichlet(std::mt19937_64& gen, std::size_t d) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> v(d);
  double s = 0;
  for (auto& x : v) {
    x = e(gen);
    s += x;
  }
  for (auto& x : v) x /= s;
  return v;
}

}  // namespace oracle

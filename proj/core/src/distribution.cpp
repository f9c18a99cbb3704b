#include "infodiv/distribution.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "infodiv/errors.hpp"

namespace infodiv {

std::string_view to_string(DivergenceKind kind) {
  switch (kind) {
    case DivergenceKind::JS:
      return "js";
    case DivergenceKind::Hellinger:
      return "hellinger";
    case DivergenceKind::ChiSquared:
      return "chi2";
  }
  return "unknown";
}

DivergenceKind parse_kind(std::string_view name) {
  if (name == "js" || name == "JS" || name == "jensen-shannon") return DivergenceKind::JS;
  if (name == "hellinger" || name == "Hellinger" || name == "he") return DivergenceKind::Hellinger;
  if (name == "chi2" || name == "ChiSquared" || name == "chi-squared" || name == "chisq")
    return DivergenceKind::ChiSquared;
  throw ConfigError("unknown divergence kind '" + std::string(name) +
                    "' (expected js, hellinger or chi2)");
}

Distribution validate(std::span<const double> values, bool normalize) {
  if (values.empty()) throw ValidationError("distribution must have at least one coordinate");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw ValidationError("coordinate " + std::to_string(i) + " is not finite");
    }
    if (values[i] < 0.0) {
      std::ostringstream msg;
      msg << "coordinate " << i << " is negative (" << values[i] << ")";
      throw ValidationError(msg.str());
    }
  }
  const double total = std::accumulate(values.begin(), values.end(), 0.0);
  std::vector<double> out(values.begin(), values.end());
  if (normalize) {
    if (!(total > 0.0)) throw ValidationError("cannot normalize a vector with zero total mass");
    for (double& v : out) v /= total;
  } else if (std::abs(total - 1.0) > kSimplexTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "coordinates sum to " << total << ", not 1 (tolerance " << kSimplexTolerance
        << "); pass normalize to rescale";
    throw ValidationError(msg.str());
  }
  return Distribution(std::move(out));
}

}  // namespace infodiv

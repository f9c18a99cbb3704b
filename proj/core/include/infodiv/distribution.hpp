#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace infodiv {

enum class DivergenceKind { JS, Hellinger, ChiSquared };

std::string_view to_string(DivergenceKind kind);

/// Accepts "js", "hellinger", "chi2" (and a few spellings of each).
/// Throws ConfigError on anything else.
DivergenceKind parse_kind(std::string_view name);

/// Absolute tolerance on the coordinate sum of a simplex point.
inline constexpr double kSimplexTolerance = 1e-9;

class Distribution;

/// Checks and wraps raw coordinates. With `normalize` the values are divided by
/// their sum first; otherwise a sum outside 1 +/- kSimplexTolerance is rejected.
/// Throws ValidationError for empty input, non-finite or negative entries, and
/// zero total mass.
Distribution validate(std::span<const double> values, bool normalize = false);

/// A point on the probability simplex: nonnegative coordinates summing to one.
/// Only constructible through validate(), so every instance satisfies the
/// invariant.
class Distribution {
 public:
  std::size_t d() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }

  friend bool operator==(const Distribution&, const Distribution&) = default;

 private:
  explicit Distribution(std::vector<double> values) : values_(std::move(values)) {}
  friend Distribution validate(std::span<const double>, bool);

  std::vector<double> values_;
};

inline Distribution validate(std::initializer_list<double> values, bool normalize = false) {
  return validate(std::span<const double>(values.begin(), values.size()), normalize);
}

}  // namespace infodiv

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace infodiv {

/// Identifier persisted next to every seed. mt19937_64 output is fixed by the
/// standard; the conversions to uniform and normal variates below are ours, so
/// streams are reproducible across compilers and platforms (std:: distributions
/// are not).
inline constexpr std::string_view kRngId = "mt19937_64+u53+box-muller";

std::uint64_t fnv1a64(std::string_view bytes);

std::uint64_t splitmix64(std::uint64_t x);

/// Child seed for a labelled sub-stream, e.g. derive_seed(seed, "jl").
std::uint64_t derive_seed(std::uint64_t seed, std::string_view label);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double standard_normal();

  /// Exp(1) variate.
  double exponential() { return -std::log(uniform()); }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace infodiv

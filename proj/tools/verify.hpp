#pragma once

#include <cstdint>
#include <iosfwd>

namespace infodiv::cli {

/// Runs quick invariant checks across all modules, printing one PASS/FAIL line
/// each. Returns the number of failures.
int run_verify(std::uint64_t seed, std::ostream& out);

}  // namespace infodiv::cli

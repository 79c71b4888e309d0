#pragma once

#include <cstdint>
#include <ostream>

namespace porcheck {

struct SelftestOptions {
  std::uint64_t seed = 1;
  bool quick = false;
  bool corrupt_delta = false;
};

// Prints one line per check; true when all pass.
bool run_selftest(const SelftestOptions& opts, std::ostream& out);

}  // namespace porcheck

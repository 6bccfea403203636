#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace popa {

/// Shared result record for verification sweeps: worst residual seen, the
/// tolerance it was judged against, and itemized notes for failures.
struct Report {
  std::string check;
  bool pass = true;
  double max_residual = 0.0;
  double tolerance = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> notes;
};

}  // namespace popa

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace mcph {

struct AcceptanceOptions {
  std::uint64_t seed = 424242;
  std::size_t trials = 10000;  ///< Monte Carlo trials for the contact criteria
  int workers = 1;
  std::ostream* progress = nullptr;  ///< timing/progress notes; not part of results
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;  ///< deterministic under (seed, trials); never carries timings
};

/// Runs the full acceptance suite. Every tolerance is pinned in code; results
/// are bit-reproducible for a given seed and trial count, independent of the
/// worker count.
std::vector<CriterionResult> run_acceptance_criteria(const AcceptanceOptions& options);

}  // namespace mcph

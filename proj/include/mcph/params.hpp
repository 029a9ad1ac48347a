#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace mcph {

/// Model constants shared by samplers, distance laws and functionals.
/// All lengths are meters, the intensity is points per cubic meter.
struct ProcessParams {
  double lambda_p = 1e-5;  ///< parent point intensity [1/m^3]
  double R = 50.0;         ///< cluster ball radius [m]
  double r0 = 15.0;        ///< exclusion hole radius [m]
  double M1 = 20.0;        ///< mean candidate points per cluster
  double M2 = 20.0;        ///< mean retained points per cluster (self-hole shell model)

  void validate() const {
    if (!std::isfinite(lambda_p) || lambda_p < 0.0) {
      throw std::domain_error("lambda_p must be finite and nonnegative");
    }
    if (!std::isfinite(R) || R <= 0.0) {
      throw std::domain_error("cluster radius R must be positive");
    }
    if (!std::isfinite(r0) || r0 < 0.0 || r0 >= R) {
      throw std::domain_error("hole radius r0 must satisfy 0 <= r0 < R");
    }
    if (!std::isfinite(M1) || M1 <= 0.0 || !std::isfinite(M2) || M2 <= 0.0) {
      throw std::domain_error("cluster means M1, M2 must be positive");
    }
  }
};

/// Which analytic family a distance-law query refers to.
enum class Process { MCP, MCPH };

/// Which point process a sampler realizes. MCPH_SELFHOLE keeps only the
/// hole at a cluster's own center (the bound model); MCPH_EXACT thins by
/// every parent's hole.
enum class SamplerMode { MCP, MCPH_EXACT, MCPH_SELFHOLE };

inline std::string to_string(Process p) { return p == Process::MCP ? "mcp" : "mcph"; }

inline std::string to_string(SamplerMode m) {
  switch (m) {
    case SamplerMode::MCP: return "mcp";
    case SamplerMode::MCPH_EXACT: return "mcph-exact";
    default: return "mcph-selfhole";
  }
}

inline Process parse_process(const std::string& s) {
  if (s == "mcp") return Process::MCP;
  if (s == "mcph") return Process::MCPH;
  throw std::invalid_argument("unknown process '" + s + "' (expected mcp|mcph)");
}

inline SamplerMode parse_sampler_mode(const std::string& s) {
  if (s == "mcp") return SamplerMode::MCP;
  if (s == "mcph-exact") return SamplerMode::MCPH_EXACT;
  if (s == "mcph-selfhole") return SamplerMode::MCPH_SELFHOLE;
  throw std::invalid_argument("unknown mode '" + s +
                              "' (expected mcp|mcph-exact|mcph-selfhole)");
}

}  // namespace mcph

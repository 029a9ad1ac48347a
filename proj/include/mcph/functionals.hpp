#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "mcph/distributions.hpp"
#include "mcph/params.hpp"
#include "mcph/quadrature.hpp"

namespace mcph {

/// The min-clamped moment bracket
///   3/(4 c v) * [ (d^2 - v^2)(m_a^2 - m_b^2)/2 + 2v(m_a^3 - m_b^3)/3
///                 - (m_a^4 - m_b^4)/4 ],  m_x = min(r, x),
/// which is the mass of the lens-derivative density with ball radius d and
/// cubic normalizer c, accumulated over [min(r,b), min(r,a)]. Requires v > 0.
double helper_p(double a, double b, double c, double d, double r, double v);

/// Closed-form cumulative mass of the holey-cluster conditional density up to
/// r, for a cluster at distance v lying in the given case interval. Equals
/// the integral of the density from 0 to r; value in [0, 1].
double region_term(int case_no, double r, double v, const ProcessParams& params);

/// Probability generating function of the point count in b(o, r),
/// E[theta^N], via the min-clamped closed forms (exact for MCP, bound model
/// for MCPH). theta in [0, 1].
double pgf_count(double theta, double r, const ProcessParams& params,
                 Process process, const QuadratureSpec& spec = {});

/// Same quantity with the inner cluster mass taken from the lens-volume CDF
/// route instead of the min-clamped brackets; the two implementations are
/// mutual oracles and must agree to 1e-9.
double pgf_count_from_cdf(double theta, double r, const ProcessParams& params,
                          Process process, const QuadratureSpec& spec = {});

/// Contact distance distribution F_CD(r) = 1 - G_N(0). Nondecreasing, 0 at
/// r = 0, and tends to 1 as r grows (the parent integral diverges).
double contact_cdf(double r, const ProcessParams& params, Process process,
                   const QuadratureSpec& spec = {});

/// Isotropic functional argument v(y) = value(|y|), mapping into [0, 1].
struct RadialProfile {
  std::function<double(double)> value;
  /// Accurate 1 - value(u). Profiles that saturate toward one at large radii
  /// must supply this (for example via expm1); forming the deficit by
  /// subtraction bottoms out at machine epsilon and stalls the outer
  /// truncation search.
  std::function<double(double)> deficit;
  /// Radius beyond which value(u) == 1 exactly; enables an exact outer cutoff.
  std::optional<double> unit_beyond;
  /// Known discontinuities of value(u), added to quadrature breakpoints.
  std::vector<double> extra_breakpoints;
};

struct PgflResult {
  double value = 1.0;
  double truncation_radius = 0.0;
  bool exact = true;  // exact for MCP, bound model for MCPH
};

/// Probability generating functional E[prod v(y)] over process points for an
/// isotropic v. Outer integral truncated where the integrand vanishes
/// (profiles with unit_beyond) or by doubling until the added shell
/// contributes below tolerance twice in a row.
PgflResult pgfl(const RadialProfile& profile, const ProcessParams& params,
                Process process, const QuadratureSpec& spec = {});

/// Non-isotropic arguments need a 3D quadrature plan, which this toolkit does
/// not provide; always throws std::invalid_argument.
PgflResult pgfl(const std::function<double(const Point3&)>& v_fn,
                const ProcessParams& params, Process process,
                const QuadratureSpec& spec = {});

}  // namespace mcph

#include "mcph/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mcph {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kConcentricFrac = 1e-9;

double cube(double x) { return x * x * x; }

// min(r, x)^3; the clamped cubic term of the closed forms.
double mcube(double r, double x) { return cube(std::min(r, x)); }

// Mass of the ring piece (3/4) u (R^2 - r0^2) / ((R^3 - r0^3) v) accumulated
// over [min(lo, r), min(hi, r)].
double ring_mass(double hi, double lo, double r, double v, double R, double r0) {
  const double n3 = cube(R) - cube(r0);
  const double mh = std::min(hi, r), ml = std::min(lo, r);
  return 0.375 * (R * R - r0 * r0) * (mh * mh - ml * ml) / (n3 * v);
}

// Cumulative mass of the holey conditional density; callers guarantee the
// (case_no, v) pairing. v below the concentric guard takes the radial limit.
double region_mass(int case_no, double r, double v, const ProcessParams& p) {
  const double R = p.R, r0 = p.r0;
  const double n3 = cube(R) - cube(r0);
  if (r <= 0.0) return 0.0;
  if (v < kConcentricFrac * R) {
    const double rc = std::min(r, R);
    return rc <= r0 ? 0.0 : (cube(rc) - cube(r0)) / n3;
  }
  switch (case_no) {
    case 1:
      return (mcube(r, R - v) - mcube(r, r0 - v)) / n3 -
             helper_p(v + r0, r0 - v, n3, r0, r, v) +
             helper_p(R + v, R - v, n3, R, r, v);
    case 2:
      return (mcube(r, R - v) - mcube(r, r0 - v)) / n3 -
             helper_p(R - v, r0 - v, n3, r0, r, v) +
             helper_p(R + v, v + r0, n3, R, r, v) +
             ring_mass(v + r0, R - v, r, v, R, r0);
    case 3:
      return mcube(r, R - v) / n3 - helper_p(v + r0, v - r0, n3, r0, r, v) +
             helper_p(R + v, R - v, n3, R, r, v);
    case 4:
      return mcube(r, R - v) / n3 - helper_p(R - v, v - r0, n3, r0, r, v) +
             helper_p(R + v, v + r0, n3, R, r, v) +
             ring_mass(v + r0, R - v, r, v, R, r0);
    case 5:
      return mcube(r, R - v) / n3 + helper_p(v - r0, R - v, n3, R, r, v) +
             helper_p(R + v, v + r0, n3, R, r, v) +
             ring_mass(v + r0, v - r0, r, v, R, r0);
    case 6:
      return helper_p(v - r0, v - R, n3, R, r, v) +
             helper_p(R + v, v + r0, n3, R, r, v) +
             ring_mass(v + r0, v - r0, r, v, R, r0);
    default:
      throw std::domain_error("region term case must be 1..6");
  }
}

// Cumulative conditional mass for the plain cluster, two regimes in v.
double mcp_mass(double r, double v, double R) {
  const double R3 = cube(R);
  if (r <= 0.0) return 0.0;
  if (v < kConcentricFrac * R) return mcube(r, R) / R3;
  if (v < R) {
    return mcube(r, R - v) / R3 + helper_p(R + v, R - v, R3, R, r, v);
  }
  return helper_p(R + v, v - R, R3, R, r, v);
}

// Parent-distance values where the outer integrand changes form: case
// boundaries plus every clamp switch of the inner closed form.
std::vector<double> outer_breakpoints(double r, const ProcessParams& p,
                                      Process process) {
  const double upper = r + p.R;
  std::vector<double> pts{0.0, upper};
  auto add = [&](double v) {
    if (v > 0.0 && v < upper) pts.push_back(v);
  };
  add(p.R);
  add(p.R - r);
  add(r - p.R);
  if (process == Process::MCPH) {
    const double r0 = p.r0;
    add(std::min(r0, 0.5 * (p.R - r0)));
    add(std::max(r0, 0.5 * (p.R - r0)));
    add(r0);
    add(0.5 * (p.R + r0));
    add(r0 - r);
    add(r - r0);
    add(r + r0);
  }
  std::sort(pts.begin(), pts.end());
  std::vector<double> uniq;
  for (const double v : pts) {
    if (uniq.empty() || v - uniq.back() > 1e-12 * upper) uniq.push_back(v);
  }
  uniq.back() = upper;
  return uniq;
}

double pgf_exponent(double theta, double r, const ProcessParams& p,
                    Process process, const QuadratureSpec& spec, bool via_cdf) {
  const double M = process == Process::MCP ? p.M1 : p.M2;
  const double coef = M * (1.0 - theta);
  const auto mass = [&](double v) -> double {
    if (via_cdf) {
      return process == Process::MCP ? mcp_distance_cdf(r, v, p)
                                     : mcph_distance_cdf_ub(r, v, p);
    }
    if (process == Process::MCP) return mcp_mass(r, v, p.R);
    return region_mass(classify_case_no(v, p, Process::MCPH), r, v, p);
  };
  const auto integrand = [&](double v) {
    return -std::expm1(-coef * mass(v)) * v * v;
  };
  const double sum = integrate_segmented(integrand, outer_breakpoints(r, p, process),
                                         spec);
  return 4.0 * kPi * p.lambda_p * sum;
}

double pgf_value(double theta, double r, const ProcessParams& p, Process process,
                 const QuadratureSpec& spec, bool via_cdf) {
  p.validate();
  if (!std::isfinite(theta) || theta < 0.0 || theta > 1.0) {
    throw std::domain_error("theta must lie in [0, 1]");
  }
  if (!std::isfinite(r) || r < 0.0) {
    throw std::domain_error("radius must be finite and nonnegative");
  }
  if (p.lambda_p == 0.0) return 1.0;
  return std::exp(-pgf_exponent(theta, r, p, process, spec, via_cdf));
}

}  // namespace

double helper_p(double a, double b, double c, double d, double r, double v) {
  if (!(v > 0.0)) {
    throw std::domain_error("helper_p requires v > 0; use the concentric limit");
  }
  const double ma = std::min(r, a), mb = std::min(r, b);
  const double ma2 = ma * ma, mb2 = mb * mb;
  return (3.0 / (4.0 * c * v)) *
         ((d * d - v * v) * (ma2 - mb2) / 2.0 + 2.0 * v * (ma2 * ma - mb2 * mb) / 3.0 -
          (ma2 * ma2 - mb2 * mb2) / 4.0);
}

double region_term(int case_no, double r, double v, const ProcessParams& params) {
  params.validate();
  if (!std::isfinite(r) || r < 0.0 || !std::isfinite(v) || v < 0.0) {
    throw std::domain_error("region term requires finite nonnegative r, v");
  }
  if (classify_case_no(v, params, Process::MCPH) != case_no) {
    throw std::domain_error("parent distance v does not lie in the given case interval");
  }
  return region_mass(case_no, r, v, params);
}

double pgf_count(double theta, double r, const ProcessParams& params,
                 Process process, const QuadratureSpec& spec) {
  return pgf_value(theta, r, params, process, spec, /*via_cdf=*/false);
}

double pgf_count_from_cdf(double theta, double r, const ProcessParams& params,
                          Process process, const QuadratureSpec& spec) {
  return pgf_value(theta, r, params, process, spec, /*via_cdf=*/true);
}

double contact_cdf(double r, const ProcessParams& params, Process process,
                   const QuadratureSpec& spec) {
  return 1.0 - pgf_count(0.0, r, params, process, spec);
}

PgflResult pgfl(const RadialProfile& profile, const ProcessParams& params,
                Process process, const QuadratureSpec& spec) {
  params.validate();
  if (!profile.value) throw std::invalid_argument("profile function is empty");
  const auto deficit_of = [&](double u) {
    const double val = profile.deficit ? profile.deficit(u) : 1.0 - profile.value(u);
    if (!std::isfinite(val) || val < -1e-12 || val > 1.0 + 1e-12) {
      throw std::invalid_argument("profile values must lie in [0, 1]");
    }
    return std::clamp(val, 0.0, 1.0);
  };
  const double M = process == Process::MCP ? params.M1 : params.M2;

  // Expected profile deficit E[1 - v(|x + Y|)] of one cluster point given the
  // parent distance. Integrating 1 - v directly keeps full precision where the
  // profile is close to one; the complement 1 - integral(v f) would cancel.
  // The deficit decays like the profile tail, so its quadrature must be
  // relative-tolerance driven or the outer integrand turns jagged.
  QuadratureSpec inner_spec = spec;
  inner_spec.abs_tol = spec.abs_tol * 1e-8;
  const auto deficit = [&](double z) {
    const DistanceCaseTable table = distance_case_table(z, params, process);
    double total = 0.0;
    for (const DistanceBranch& b : table.branches) {
      if (b.pdf_piece == PdfPiece::Zero) continue;
      if (profile.unit_beyond && b.lo >= *profile.unit_beyond) continue;
      std::vector<double> edges{b.lo, b.hi};
      for (const double bp : profile.extra_breakpoints) {
        if (bp > b.lo && bp < b.hi) edges.push_back(bp);
      }
      std::sort(edges.begin(), edges.end());
      const auto f = [&](double u) {
        return deficit_of(u) * std::max(0.0, eval_branch_pdf(table, b, u));
      };
      total += integrate_segmented(f, edges, inner_spec);
    }
    return std::clamp(total, 0.0, 1.0);
  };

  const auto outer = [&](double z) {
    return -std::expm1(-M * deficit(z)) * z * z;
  };

  PgflResult result;
  result.exact = process == Process::MCP;
  if (params.lambda_p == 0.0) {
    result.truncation_radius = profile.unit_beyond.value_or(0.0) + params.R;
    return result;
  }

  double exponent = 0.0;
  double trunc;
  if (profile.unit_beyond) {
    // Every cluster point beyond this parent distance sees v == 1 exactly.
    trunc = *profile.unit_beyond + params.R;
    std::vector<double> edges{0.0};
    for (const double c : outer_breakpoints(*profile.unit_beyond, params, process)) {
      if (c > 0.0 && c < trunc) edges.push_back(c);
    }
    edges.push_back(trunc);
    exponent = integrate_segmented(outer, edges, spec);
  } else {
    double z_lo = 0.0;
    double z_hi = 4.0 * params.R;
    int consecutive_small = 0;
    int doublings = 0;
    exponent = integrate(outer, z_lo, z_hi, spec);
    trunc = z_hi;
    while (consecutive_small < 2) {
      if (++doublings > 40) {
        throw ConvergenceError("pgfl outer integral failed to converge",
                               std::exp(-4.0 * kPi * params.lambda_p * exponent), 0.0);
      }
      z_lo = z_hi;
      z_hi *= 2.0;
      const double segment = integrate(outer, z_lo, z_hi, spec);
      exponent += segment;
      trunc = z_hi;
      const double tol = 0.5 * std::max(spec.abs_tol, spec.rel_tol * std::abs(exponent));
      consecutive_small = std::abs(segment) <= tol ? consecutive_small + 1 : 0;
    }
  }
  result.value = std::exp(-4.0 * kPi * params.lambda_p * exponent);
  result.truncation_radius = trunc;
  return result;
}

PgflResult pgfl(const std::function<double(const Point3&)>&, const ProcessParams&,
                Process, const QuadratureSpec&) {
  throw std::invalid_argument(
      "non-isotropic arguments require a 3D quadrature plan, which is not provided; "
      "supply a RadialProfile instead");
}

}  // namespace mcph

#include "mcph/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace mcph {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kConcentricFrac = 1e-9;

double cube(double x) { return x * x * x; }

void check_query(double x_norm, const ProcessParams& params) {
  params.validate();
  if (!std::isfinite(x_norm) || x_norm < 0.0) {
    throw std::domain_error("conditioning distance must be finite and nonnegative");
  }
}

struct RawBranch {
  double hi;  // lo is the previous hi, starting from 0
  PdfPiece pdf;
  CdfPiece cdf;
};

// Branch layout per case, edges instantiated for (v, R, r0).
std::vector<RawBranch> raw_branches(int case_no, double v, double R, double r0,
                                    Process process) {
  if (process == Process::MCP) {
    if (case_no == 1) {
      return {{R - v, PdfPiece::Radial, CdfPiece::Cube},
              {R + v, PdfPiece::OuterLens, CdfPiece::Lens},
              {kInf, PdfPiece::Zero, CdfPiece::One}};
    }
    return {{v - R, PdfPiece::Zero, CdfPiece::Zero},
            {v + R, PdfPiece::OuterLens, CdfPiece::Lens},
            {kInf, PdfPiece::Zero, CdfPiece::One}};
  }
  switch (case_no) {
    case 1:
      return {{r0 - v, PdfPiece::Zero, CdfPiece::Zero},
              {r0 + v, PdfPiece::HoleLens, CdfPiece::BallMinusHoleLens},
              {R - v, PdfPiece::Radial, CdfPiece::ShellCube},
              {R + v, PdfPiece::OuterLens, CdfPiece::LensMinusHoleBall},
              {kInf, PdfPiece::Zero, CdfPiece::One}};
    case 2:
      return {{r0 - v, PdfPiece::Zero, CdfPiece::Zero},
              {R - v, PdfPiece::HoleLens, CdfPiece::BallMinusHoleLens},
              {r0 + v, PdfPiece::Ring, CdfPiece::LensMinusHoleLens},
              {R + v, PdfPiece::OuterLens, CdfPiece::LensMinusHoleBall},
              {kInf, PdfPiece::Zero, CdfPiece::One}};
    case 3:
      return {{v - r0, PdfPiece::Radial, CdfPiece::Cube},
              {v + r0, PdfPiece::HoleLens, CdfPiece::BallMinusHoleLens},
              {R - v, PdfPiece::Radial, CdfPiece::ShellCube},
              {R + v, PdfPiece::OuterLens, CdfPiece::LensMinusHoleBall},
              {kInf, PdfPiece::Zero, CdfPiece::One}};
    case 4:
      return {{v - r0, PdfPiece::Radial, CdfPiece::Cube},
              {R - v, PdfPiece::HoleLens, CdfPiece::BallMinusHoleLens},
              {v + r0, PdfPiece::Ring, CdfPiece::LensMinusHoleLens},
              {R + v, PdfPiece::OuterLens, CdfPiece::LensMinusHoleBall},
              {kInf, PdfPiece::Zero, CdfPiece::One}};
    case 5:
      return {{R - v, PdfPiece::Radial, CdfPiece::Cube},
              {v - r0, PdfPiece::OuterLens, CdfPiece::Lens},
              {v + r0, PdfPiece::Ring, CdfPiece::LensMinusHoleLens},
              {R + v, PdfPiece::OuterLens, CdfPiece::LensMinusHoleBall},
              {kInf, PdfPiece::Zero, CdfPiece::One}};
    default:
      return {{v - R, PdfPiece::Zero, CdfPiece::Zero},
              {v - r0, PdfPiece::OuterLens, CdfPiece::Lens},
              {v + r0, PdfPiece::Ring, CdfPiece::LensMinusHoleLens},
              {v + R, PdfPiece::OuterLens, CdfPiece::LensMinusHoleBall},
              {kInf, PdfPiece::Zero, CdfPiece::One}};
  }
}

const DistanceBranch& find_branch(const DistanceCaseTable& table, double r) {
  for (const DistanceBranch& b : table.branches) {
    if (r >= b.lo && r < b.hi) return b;
  }
  return table.branches.back();
}

}  // namespace

int classify_case_no(double x_norm, const ProcessParams& params, Process process) {
  check_query(x_norm, params);
  const double R = params.R;
  if (process == Process::MCP) return x_norm < R ? 1 : 2;
  const double r0 = params.r0;
  const double b1 = std::min(r0, 0.5 * (R - r0));
  const double b3 = std::max(r0, 0.5 * (R - r0));
  const double b4 = 0.5 * (R + r0);
  if (x_norm >= R) return 6;
  if (x_norm >= b4) return 5;
  if (x_norm >= b3) return 4;
  if (x_norm >= r0) return 3;
  if (x_norm >= b1) return 2;
  return 1;
}

CaseIndex classify_case(double x_norm, const ProcessParams& params, Process process) {
  return {process, classify_case_no(x_norm, params, process), 0};
}

DistanceCaseTable distance_case_table(double x_norm, const ProcessParams& params,
                                      Process process) {
  check_query(x_norm, params);
  DistanceCaseTable table;
  table.process = process;
  table.case_no = classify_case_no(x_norm, params, process);
  table.R = params.R;
  table.r0_eff = process == Process::MCPH ? params.r0 : 0.0;
  // Clamping tiny conditioning distances to zero empties every 1/v piece's
  // interval, which realizes the concentric limit without special-case code.
  table.x_eff = x_norm < kConcentricFrac * params.R ? 0.0 : x_norm;

  const auto raw = raw_branches(table.case_no, table.x_eff, table.R, table.r0_eff,
                                process);
  double lo = 0.0;
  int next_no = 1;
  for (const RawBranch& rb : raw) {
    if (rb.hi < lo - kConcentricFrac * params.R) {
      throw std::logic_error("branch intervals overlap; invalid case instantiation");
    }
    const double hi = std::max(lo, rb.hi);
    if (hi > lo) {
      table.branches.push_back({lo, hi, next_no++, rb.pdf, rb.cdf});
      lo = hi;
    }
  }
  if (table.branches.empty() || table.branches.front().lo != 0.0 ||
      !std::isinf(table.branches.back().hi)) {
    throw std::logic_error("branch intervals do not cover [0, inf)");
  }
  return table;
}

double eval_branch_pdf(const DistanceCaseTable& table, const DistanceBranch& branch,
                       double r) {
  const double v = table.x_eff, R = table.R, r0 = table.r0_eff;
  const double n3 = cube(R) - cube(r0);
  switch (branch.pdf_piece) {
    case PdfPiece::Zero:
      return 0.0;
    case PdfPiece::Radial:
      return 3.0 * r * r / n3;
    case PdfPiece::HoleLens:
      return (3.0 * r * r - 0.75 * r * (r0 - v + r) * (r0 + v - r) / v) / n3;
    case PdfPiece::Ring:
      return 0.75 * r * (R * R - r0 * r0) / (n3 * v);
    case PdfPiece::OuterLens:
      return 0.75 * r * (R - v + r) * (R + v - r) / (v * n3);
  }
  return 0.0;
}

double eval_branch_cdf(const DistanceCaseTable& table, const DistanceBranch& branch,
                       double r) {
  const double v = table.x_eff, R = table.R, r0 = table.r0_eff;
  const double n3 = cube(R) - cube(r0);
  const double norm_vol = (4.0 / 3.0) * kPi * n3;
  switch (branch.cdf_piece) {
    case CdfPiece::Zero:
      return 0.0;
    case CdfPiece::One:
      return 1.0;
    case CdfPiece::Cube:
      return cube(r) / n3;
    case CdfPiece::ShellCube:
      return (cube(r) - cube(r0)) / n3;
    case CdfPiece::BallMinusHoleLens:
      return ((4.0 / 3.0) * kPi * cube(r) - lens_volume({v, r, r0})) / norm_vol;
    case CdfPiece::Lens:
      return lens_volume({v, r, R}) / norm_vol;
    case CdfPiece::LensMinusHoleLens:
      return (lens_volume({v, r, R}) - lens_volume({v, r, r0})) / norm_vol;
    case CdfPiece::LensMinusHoleBall:
      return (lens_volume({v, r, R}) - (4.0 / 3.0) * kPi * cube(r0)) / norm_vol;
  }
  return 0.0;
}

std::vector<double> distance_breakpoints(const DistanceCaseTable& table) {
  std::vector<double> edges;
  edges.push_back(table.branches.front().lo);
  for (const DistanceBranch& b : table.branches) {
    if (std::isfinite(b.hi)) edges.push_back(b.hi);
  }
  return edges;
}

namespace {

PdfEval pdf_eval(double r, double x_norm, const ProcessParams& params,
                 Process process) {
  const DistanceCaseTable table = distance_case_table(x_norm, params, process);
  if (!std::isfinite(r) || r < 0.0) {
    return {0.0, {process, table.case_no, 0}};
  }
  const DistanceBranch& branch = find_branch(table, r);
  const double value = std::max(0.0, eval_branch_pdf(table, branch, r));
  return {value, {process, table.case_no, branch.branch_no}};
}

double cdf_eval(double r, double x_norm, const ProcessParams& params,
                Process process) {
  const DistanceCaseTable table = distance_case_table(x_norm, params, process);
  if (!std::isfinite(r)) return r > 0.0 ? 1.0 : 0.0;
  if (r < 0.0) return 0.0;
  return eval_branch_cdf(table, find_branch(table, r), r);
}

}  // namespace

PdfEval mcp_distance_pdf(double r, double x_norm, const ProcessParams& params) {
  return pdf_eval(r, x_norm, params, Process::MCP);
}

double mcp_distance_cdf(double r, double x_norm, const ProcessParams& params) {
  return cdf_eval(r, x_norm, params, Process::MCP);
}

PdfEval mcph_distance_pdf_ub(double r, double x_norm, const ProcessParams& params) {
  return pdf_eval(r, x_norm, params, Process::MCPH);
}

double mcph_distance_cdf_ub(double r, double x_norm, const ProcessParams& params) {
  return cdf_eval(r, x_norm, params, Process::MCPH);
}

double hole_correction(double lambda_p, double r0) {
  if (!std::isfinite(lambda_p) || lambda_p < 0.0 || !std::isfinite(r0) || r0 < 0.0) {
    throw std::domain_error("hole_correction requires nonnegative lambda_p, r0");
  }
  const double factor = 1.0 - (4.0 / 3.0) * kPi * lambda_p * cube(r0);
  if (factor <= 0.0) {
    throw std::domain_error("hole correction factor is not positive");
  }
  return factor;
}

}  // namespace mcph

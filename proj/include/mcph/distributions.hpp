#pragma once

#include <vector>

#include "mcph/geometry.hpp"
#include "mcph/params.hpp"

namespace mcph {

/// Piece kinds appearing in the conditional distance density. "OuterLens" is
/// the derivative of the cluster-ball lens volume, "HoleLens" the radial
/// density minus the hole lens derivative, "Ring" the annular piece where the
/// query sphere spans the hole completely.
enum class PdfPiece { Zero, Radial, HoleLens, Ring, OuterLens };

/// Matching closed-form CDF pieces, built from clamped cubes and lens volumes.
enum class CdfPiece {
  Zero,
  One,
  Cube,
  ShellCube,
  BallMinusHoleLens,
  Lens,
  LensMinusHoleLens,
  LensMinusHoleBall
};

/// Identifies which printed case/branch produced a value, for auditability.
/// MCP has cases 1-2, MCPH cases 1-6; branch numbering is the 1-based
/// position of the branch interval in the ordered partition of [0, inf).
/// branch_no == 0 means "not applicable".
struct CaseIndex {
  Process process = Process::MCP;
  int case_no = 0;
  int branch_no = 0;
};

struct PdfEval {
  double value = 0.0;
  CaseIndex index;
};

struct DistanceBranch {
  double lo = 0.0;
  double hi = 0.0;  // half-open [lo, hi); the last branch has hi = +inf
  int branch_no = 0;
  PdfPiece pdf_piece = PdfPiece::Zero;
  CdfPiece cdf_piece = CdfPiece::Zero;
};

/// The instantiated branch partition for one conditioning distance. Branch
/// intervals are ordered by left endpoint, empty intervals are dropped, and
/// construction verifies that the remaining intervals tile [0, inf); a
/// genuinely overlapping instantiation is reported as a data error.
struct DistanceCaseTable {
  Process process = Process::MCP;
  int case_no = 0;
  double x_eff = 0.0;  // conditioning distance, clamped to 0 below 1e-9 * R
  double R = 0.0;
  double r0_eff = 0.0;  // 0 for MCP queries regardless of params.r0
  std::vector<DistanceBranch> branches;
};

int classify_case_no(double x_norm, const ProcessParams& params, Process process);

/// Case whose half-open interval [closed-left, open-right) contains x_norm.
CaseIndex classify_case(double x_norm, const ProcessParams& params, Process process);

DistanceCaseTable distance_case_table(double x_norm, const ProcessParams& params,
                                      Process process);

double eval_branch_pdf(const DistanceCaseTable& table, const DistanceBranch& branch,
                       double r);
double eval_branch_cdf(const DistanceCaseTable& table, const DistanceBranch& branch,
                       double r);

/// Finite branch edges, ascending; useful as quadrature breakpoints.
std::vector<double> distance_breakpoints(const DistanceCaseTable& table);

/// Density of the origin distance of a cluster point, conditioned on the
/// cluster center sitting at distance x_norm. Zero outside
/// [max(0, x_norm - R), x_norm + R].
PdfEval mcp_distance_pdf(double r, double x_norm, const ProcessParams& params);

double mcp_distance_cdf(double r, double x_norm, const ProcessParams& params);

/// Same conditional law for the holey cluster under self-hole thinning only,
/// i.e. the distribution whose CDF upper-bounds the exact process.
PdfEval mcph_distance_pdf_ub(double r, double x_norm, const ProcessParams& params);

double mcph_distance_cdf_ub(double r, double x_norm, const ProcessParams& params);

/// First-order scaling factor 1 - (4/3) pi lambda_p r0^3 accounting for holes
/// of other clusters. An optional approximation knob, off by default
/// everywhere; not part of the bound model.
double hole_correction(double lambda_p, double r0);

}  // namespace mcph

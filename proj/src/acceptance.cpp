#include "mcph/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include "mcph/distributions.hpp"
#include "mcph/format.hpp"
#include "mcph/functionals.hpp"
#include "mcph/geometry.hpp"
#include "mcph/quadrature.hpp"
#include "mcph/rng.hpp"
#include "mcph/sampling.hpp"
#include "mcph/validation.hpp"

namespace mcph {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> contact_grid() {
  std::vector<double> grid;
  for (int r = 0; r <= 100; ++r) grid.push_back(static_cast<double>(r));
  return grid;
}

ProcessParams hole_setup(double lambda_p) {
  ProcessParams p;
  p.lambda_p = lambda_p;
  p.R = 50.0;
  p.r0 = 15.0;
  p.M2 = 20.0;
  p.M1 = derive_m1(p.M2, p.r0, p.R);
  return p;
}

std::vector<double> analytic_contact(const ProcessParams& p, Process process,
                                     const std::vector<double>& grid) {
  std::vector<double> values;
  values.reserve(grid.size());
  for (const double r : grid) values.push_back(contact_cdf(r, p, process));
  return values;
}

double pdf_total_mass(double x_norm, const ProcessParams& p, Process process) {
  const DistanceCaseTable table = distance_case_table(x_norm, p, process);
  double total = 0.0;
  for (const DistanceBranch& b : table.branches) {
    if (b.pdf_piece == PdfPiece::Zero) continue;
    total += integrate([&](double r) { return eval_branch_pdf(table, b, r); },
                       b.lo, b.hi);
  }
  return total;
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

void note(std::ostream* progress, const std::string& line) {
  if (progress != nullptr) *progress << line << '\n' << std::flush;
}

CriterionResult criterion_contact_bound(const AcceptanceOptions& opt) {
  CriterionResult res{1, "contact bound tightness under exact thinning", true, ""};
  const auto grid = contact_grid();
  std::ostringstream detail;
  const double limits[2] = {0.02, 0.04};
  const double lambdas[2] = {1e-5, 2e-5};
  for (int i = 0; i < 2; ++i) {
    const ProcessParams p = hole_setup(lambdas[i]);
    const auto analytic = analytic_contact(p, Process::MCPH, grid);
    const auto mc = mc_contact_distances(p, 200.0, SamplerMode::MCPH_EXACT,
                                         opt.trials, Rng::derive_key(opt.seed, 101 + i),
                                         opt.workers);
    const auto rep = compare([&](double r) { return analytic[static_cast<std::size_t>(std::lround(r))]; },
                             mc.cdf, grid, 3.0);
    bool direction = true;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double fa = std::clamp(rep.analytic[k], 0.0, 1.0);
      const double band =
          3.0 * std::max(rep.se[k], std::sqrt(fa * (1.0 - fa) / opt.trials));
      if (rep.analytic[k] < rep.empirical[k] - band - 1e-12) direction = false;
    }
    const bool ok = rep.sup_distance <= limits[i] && direction;
    res.pass = res.pass && ok;
    detail << "lambda_p=" << fmt_double(lambdas[i]) << " sup=" << fmt_double(rep.sup_distance)
           << " (limit " << fmt_double(limits[i]) << ") bound-direction="
           << (direction ? "ok" : "violated") << (i == 0 ? "; " : "");
  }
  res.detail = detail.str();
  return res;
}

CriterionResult criterion_selfhole_exactness(const AcceptanceOptions& opt) {
  CriterionResult res{2, "contact exactness for the self-hole model", true, ""};
  const auto grid = contact_grid();
  std::ostringstream detail;
  const double lambdas[2] = {1e-5, 2e-5};
  for (int i = 0; i < 2; ++i) {
    const ProcessParams p = hole_setup(lambdas[i]);
    const auto analytic = analytic_contact(p, Process::MCPH, grid);
    const auto mc = mc_contact_distances(p, 200.0, SamplerMode::MCPH_SELFHOLE,
                                         opt.trials, Rng::derive_key(opt.seed, 103 + i),
                                         opt.workers);
    const auto rep = compare([&](double r) { return analytic[static_cast<std::size_t>(std::lround(r))]; },
                             mc.cdf, grid, 3.0);
    const bool ok = rep.violations == 0 && rep.sup_distance <= 0.015;
    res.pass = res.pass && ok;
    detail << "lambda_p=" << fmt_double(lambdas[i]) << " sup=" << fmt_double(rep.sup_distance)
           << " (limit 0.015) band-violations=" << rep.violations << (i == 0 ? "; " : "");
  }
  res.detail = detail.str();
  return res;
}

CriterionResult criterion_mcp_exactness(const AcceptanceOptions& opt) {
  CriterionResult res{3, "contact exactness without holes", true, ""};
  const auto grid = contact_grid();
  ProcessParams p;
  p.lambda_p = 1e-5;
  p.R = 50.0;
  p.r0 = 15.0;
  p.M1 = 20.0;
  p.M2 = 20.0;
  const auto analytic = analytic_contact(p, Process::MCP, grid);
  const auto mc = mc_contact_distances(p, 200.0, SamplerMode::MCP, opt.trials,
                                       Rng::derive_key(opt.seed, 105), opt.workers);
  const auto rep = compare([&](double r) { return analytic[static_cast<std::size_t>(std::lround(r))]; },
                           mc.cdf, grid, 3.0);
  res.pass = rep.sup_distance <= 0.01;
  res.detail = "sup=" + fmt_double(rep.sup_distance) + " (limit 0.01)";
  return res;
}

CriterionResult criterion_hole_count(const AcceptanceOptions&) {
  CriterionResult res{4, "mean overlapping-hole count arithmetic", false, ""};
  const double value = (4.0 / 3.0) * kPi * 50.0 * 50.0 * 50.0 * 2e-5;
  const double to3 = std::round(value * 100.0) / 100.0;
  const double to1 = std::round(value * 10.0) / 10.0;
  res.pass = std::abs(to3 - 10.47) < 1e-12 && std::abs(to1 - 10.5) < 1e-12;
  res.detail = "(4/3)*pi*R^3*lambda_p = " + fmt_double(value) +
               " -> 10.47 (3 s.f.), 10.5 (1 d.p.)";
  return res;
}

CriterionResult criterion_normalization(const AcceptanceOptions&) {
  CriterionResult res{5, "density normalization over every case", true, ""};
  Timer timer;
  double worst = 0.0;
  int combos = 0;

  ProcessParams p;
  p.lambda_p = 1e-5;
  p.R = 50.0;
  p.M1 = 20.0;
  p.M2 = 20.0;
  p.r0 = 15.0;
  for (const double x : {0.0, 10.0, 25.0, 49.9, 50.0, 75.0, 200.0}) {
    worst = std::max(worst, std::abs(pdf_total_mass(x, p, Process::MCP) - 1.0));
    ++combos;
  }
  for (const double r0 : {5.0, 15.0, 24.9}) {
    p.r0 = r0;
    const double b1 = std::min(r0, 0.5 * (p.R - r0));
    const double b3 = std::max(r0, 0.5 * (p.R - r0));
    const double b4 = 0.5 * (p.R + r0);
    const double edges[7] = {0.0, b1, r0, b3, b4, p.R, 2.0 * p.R};
    for (int c = 0; c < 6; ++c) {
      if (!(edges[c + 1] > edges[c])) continue;  // empty case for this r0
      for (const double t : {0.35, 0.72}) {
        const double x = edges[c] + t * (edges[c + 1] - edges[c]);
        worst = std::max(worst, std::abs(pdf_total_mass(x, p, Process::MCPH) - 1.0));
        ++combos;
      }
    }
  }
  const bool runtime_ok = timer.seconds() < 10.0;
  res.pass = worst <= 1e-9 && combos >= 14 && runtime_ok;
  res.detail = "combos=" + std::to_string(combos) + " worst |mass-1|=" + fmt_double(worst) +
               " (limit 1e-09) runtime<10s=" + (runtime_ok ? "yes" : "no");
  return res;
}

CriterionResult criterion_degeneration(const AcceptanceOptions&) {
  CriterionResult res{6, "zero-hole degeneration", true, ""};
  ProcessParams p;
  p.lambda_p = 1e-5;
  p.R = 50.0;
  p.r0 = 0.0;
  p.M1 = 20.0;
  p.M2 = 20.0;

  double worst_density = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double x = i * (100.0 / 99.0);
    for (int j = 0; j < 100; ++j) {
      const double r = j * (160.0 / 99.0);
      worst_density = std::max(
          worst_density, std::abs(mcph_distance_pdf_ub(r, x, p).value -
                                  mcp_distance_pdf(r, x, p).value));
      worst_density = std::max(
          worst_density,
          std::abs(mcph_distance_cdf_ub(r, x, p) - mcp_distance_cdf(r, x, p)));
    }
  }

  double worst_contact = 0.0;
  for (int j = 0; j < 100; ++j) {
    const double r = j * (100.0 / 99.0);
    worst_contact = std::max(worst_contact,
                             std::abs(contact_cdf(r, p, Process::MCPH) -
                                      contact_cdf(r, p, Process::MCP)));
  }
  res.pass = worst_density <= 1e-12 && worst_contact <= 1e-9;
  res.detail = "max density/CDF gap=" + fmt_double(worst_density) +
               " (limit 1e-12); max contact gap=" + fmt_double(worst_contact) +
               " (limit 1e-09)";
  return res;
}

CriterionResult criterion_lens_oracle(const AcceptanceOptions& opt) {
  CriterionResult res{7, "lens volume against rejection counting", true, ""};
  Rng rng(Rng::derive_key(opt.seed, 107));
  const std::size_t n = 1000000;
  double worst_sigma = 0.0;
  for (int g = 0; g < 20; ++g) {
    const double d = 0.5 + 119.5 * rng.next_double();
    const double r = 1.0 + 79.0 * rng.next_double();
    const double R = 1.0 + 79.0 * rng.next_double();
    const double closed = lens_volume({d, r, R});
    std::size_t inside = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const Point3 pt = sample_uniform_ball(Point3{}, r, rng);
      const double dx = pt.x - d;
      if (dx * dx + pt.y * pt.y + pt.z * pt.z < R * R) ++inside;
    }
    const double frac = static_cast<double>(inside) / static_cast<double>(n);
    const double est = frac * ball_volume(r);
    const double se = ball_volume(r) * std::sqrt(frac * (1.0 - frac) / n);
    if (se == 0.0) {
      if (std::abs(closed - est) > 1e-9) res.pass = false;
      continue;
    }
    worst_sigma = std::max(worst_sigma, std::abs(closed - est) / se);
  }
  if (worst_sigma > 3.0) res.pass = false;

  // Tangency identities.
  const double full = lens_volume({10.0, 60.0, 50.0});
  const double inner = lens_volume({10.0, 40.0, 50.0});
  const double outer = lens_volume({100.0, 50.0, 50.0});
  const double dslope = lens_volume_derivative({10.0, 60.0, 50.0});
  const bool tangency =
      std::abs(full - ball_volume(50.0)) <= 1e-9 * ball_volume(50.0) &&
      std::abs(inner - ball_volume(40.0)) <= 1e-9 * ball_volume(40.0) &&
      outer == 0.0 && std::abs(dslope) <= 1e-9;
  res.pass = res.pass && tangency;
  res.detail = "worst |closed-mc|/se=" + fmt_double(worst_sigma) +
               " (limit 3); tangency=" + (tangency ? "exact" : "violated");
  return res;
}

CriterionResult criterion_functional_identities(const AcceptanceOptions&) {
  CriterionResult res{8, "functional identities", true, ""};
  ProcessParams p = hole_setup(1e-5);

  double worst_unity = 0.0;
  for (const Process process : {Process::MCP, Process::MCPH}) {
    for (const double r : {10.0, 50.0}) {
      worst_unity = std::max(worst_unity,
                             std::abs(pgf_count(1.0, r, p, process) - 1.0));
    }
  }

  double worst_identity = 0.0;
  for (const double theta : {0.0, 0.3, 0.7, 1.0}) {
    for (const double r : {10.0, 30.0, 60.0}) {
      RadialProfile profile;
      profile.value = [theta, r](double u) { return u < r ? theta : 1.0; };
      profile.unit_beyond = r;
      profile.extra_breakpoints = {r};
      const double via_pgfl = pgfl(profile, p, Process::MCPH).value;
      const double direct = pgf_count(theta, r, p, Process::MCPH);
      worst_identity = std::max(worst_identity, std::abs(via_pgfl - direct));
    }
  }

  double worst_region = 0.0;
  const auto check_region = [&](const ProcessParams& params, int case_no, double v) {
    for (const double t : {0.35, 0.8}) {
      const double r = t * (v + params.R);
      const DistanceCaseTable table = distance_case_table(v, params, Process::MCPH);
      double mass = 0.0;
      for (const DistanceBranch& b : table.branches) {
        if (b.pdf_piece == PdfPiece::Zero || b.lo >= r) continue;
        mass += integrate([&](double u) { return eval_branch_pdf(table, b, u); },
                          b.lo, std::min(b.hi, r));
      }
      worst_region = std::max(worst_region,
                              std::abs(region_term(case_no, r, v, params) - mass));
    }
  };
  check_region(p, 1, 10.0);
  check_region(p, 3, 16.0);
  check_region(p, 4, 25.0);
  check_region(p, 5, 40.0);
  check_region(p, 6, 60.0);
  ProcessParams wide = p;
  wide.r0 = 24.9;
  wide.M1 = derive_m1(wide.M2, wide.r0, wide.R);
  check_region(wide, 2, 20.0);

  res.pass = worst_unity <= 1e-9 && worst_identity <= 1e-6 && worst_region <= 1e-8;
  res.detail = "|G(1)-1|=" + fmt_double(worst_unity) +
               " (limit 1e-09); |pgfl-pgf|=" + fmt_double(worst_identity) +
               " (limit 1e-06); |region-quadrature|=" + fmt_double(worst_region) +
               " (limit 1e-08)";
  return res;
}

CriterionResult criterion_worker_determinism(const AcceptanceOptions& opt) {
  CriterionResult res{9, "worker-count determinism", true, ""};
  const std::size_t reduced = std::min<std::size_t>(opt.trials, 400);
  const ProcessParams p = hole_setup(2e-5);
  std::string reference;
  for (const int workers : {1, 4, 8}) {
    const auto mc = mc_contact_distances(p, 200.0, SamplerMode::MCPH_EXACT, reduced,
                                         Rng::derive_key(opt.seed, 109), workers);
    std::string repr;
    for (const double d : mc.cdf.samples()) {
      repr += fmt_double(d);
      repr += ';';
    }
    repr += "censored=" + std::to_string(mc.censored);
    if (reference.empty()) {
      reference = repr;
    } else if (repr != reference) {
      res.pass = false;
    }
  }
  res.detail = res.pass ? "samples bit-identical across workers {1,4,8}"
                        : "worker count changed the sampled values";
  return res;
}

}  // namespace

std::vector<CriterionResult> run_acceptance_criteria(const AcceptanceOptions& options) {
  std::vector<CriterionResult> results;
  const auto run = [&](auto&& fn, const char* label) {
    Timer timer;
    results.push_back(fn(options));
    note(options.progress, std::string("criterion ") + label + " took " +
                               fmt_double(timer.seconds()) + " s");
  };
  run(criterion_contact_bound, "1");
  run(criterion_selfhole_exactness, "2");
  run(criterion_mcp_exactness, "3");
  run(criterion_hole_count, "4");
  run(criterion_normalization, "5");
  run(criterion_degeneration, "6");
  run(criterion_lens_oracle, "7");
  run(criterion_functional_identities, "8");
  run(criterion_worker_determinism, "9");
  return results;
}

}  // namespace mcph

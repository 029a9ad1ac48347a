#include <cmath>
#include <sstream>

#include "doctest.h"
#include "mcph/distributions.hpp"
#include "mcph/sampling.hpp"
#include "mcph/validation.hpp"

using namespace mcph;

namespace {

ProcessParams fig_params(double lambda_p) {
  ProcessParams p;
  p.lambda_p = lambda_p;
  p.R = 50.0;
  p.r0 = 15.0;
  p.M2 = 20.0;
  p.M1 = derive_m1(p.M2, p.r0, p.R);
  return p;
}

}  // namespace

TEST_CASE("empirical CDF matches direct counting") {
  const std::vector<double> samples{1.0, 2.0, 2.0, 5.0};
  const EmpiricalCdf cdf(samples, samples.size());
  CHECK(cdf.evaluate(0.5) == 0.0);
  CHECK(cdf.evaluate(1.0) == doctest::Approx(0.25));  // right continuous at samples
  CHECK(cdf.evaluate(2.0) == doctest::Approx(0.75));
  CHECK(cdf.evaluate(4.9) == doctest::Approx(0.75));
  CHECK(cdf.evaluate(5.0) == 1.0);
  CHECK(cdf.standard_error(2.0) ==
        doctest::Approx(std::sqrt(0.75 * 0.25 / 4.0)));

  const EmpiricalCdf empty;
  CHECK_THROWS_AS(empty.evaluate(1.0), std::domain_error);
  CHECK_THROWS_AS(EmpiricalCdf({2.0, 1.0}, 2), std::invalid_argument);
  CHECK_THROWS_AS(EmpiricalCdf({1.0, 2.0}, 1), std::invalid_argument);
}

TEST_CASE("censored trials enter the denominator only") {
  const EmpiricalCdf cdf({1.0, 3.0}, 4);  // two trials censored
  CHECK(cdf.evaluate(2.0) == doctest::Approx(0.25));
  CHECK(cdf.evaluate(100.0) == doctest::Approx(0.5));
}

TEST_CASE("contact sampler is invariant to the worker count") {
  const ProcessParams p = fig_params(2e-5);
  const auto one = mc_contact_distances(p, 120.0, SamplerMode::MCPH_EXACT, 200, 7, 1);
  const auto four = mc_contact_distances(p, 120.0, SamplerMode::MCPH_EXACT, 200, 7, 4);
  REQUIRE(one.cdf.samples() == four.cdf.samples());
  CHECK(one.censored == four.censored);

  // trial i is addressed by substream i of the master stream
  Rng trial3 = Rng::seeded(7).substream(3);
  const double direct =
      nearest_retained_distance(p, 120.0, SamplerMode::MCPH_EXACT, trial3);
  std::size_t rank = 0;
  for (const double d : one.cdf.samples()) {
    if (d == direct) ++rank;
  }
  CHECK(rank >= 1);
}

TEST_CASE("sparse processes censor instead of fabricating distances") {
  ProcessParams p = fig_params(1e-7);
  const auto mc = mc_contact_distances(p, 60.0, SamplerMode::MCP, 200, 11, 2);
  CHECK(mc.censored > 0);
  CHECK(mc.reliable_radius == doctest::Approx(10.0));
  CHECK(mc.cdf.size() == 200);
  CHECK(mc.cdf.evaluate(10.0) <= 1.0);

  const auto none = mc_contact_distances(p, 60.0, SamplerMode::MCP, 0, 11, 1);
  CHECK_THROWS_AS(none.cdf.evaluate(5.0), std::domain_error);
}

TEST_CASE("conditional sampler matches the closed laws uniformly") {
  const ProcessParams p = fig_params(1e-5);
  const std::size_t n = 1000000;

  const EmpiricalCdf ball =
      mc_conditional_distances(20.0, p, ConditionalMode::Ball, n, 13);
  double sup_ball = 0.0;
  for (double r = 0.0; r <= 70.0; r += 0.5) {
    sup_ball = std::max(sup_ball,
                        std::abs(ball.evaluate(r) - mcp_distance_cdf(r, 20.0, p)));
  }
  CHECK(sup_ball < 0.002);

  const EmpiricalCdf shell =
      mc_conditional_distances(30.0, p, ConditionalMode::Shell, n, 14);
  double sup_shell = 0.0;
  for (double r = 0.0; r <= 80.0; r += 0.5) {
    sup_shell = std::max(
        sup_shell, std::abs(shell.evaluate(r) - mcph_distance_cdf_ub(r, 30.0, p)));
  }
  CHECK(sup_shell < 0.002);
}

TEST_CASE("comparison report flags only genuine departures") {
  const ProcessParams p = fig_params(1e-5);
  const EmpiricalCdf ball =
      mc_conditional_distances(20.0, p, ConditionalMode::Ball, 100000, 15);
  std::vector<double> grid;
  for (double r = 2.0; r <= 70.0; r += 3.5) grid.push_back(r);

  const auto self_consistent = compare(
      [&](double r) { return mcp_distance_cdf(r, 20.0, p); }, ball, grid, 3.0);
  CHECK(self_consistent.violations == 0);
  CHECK(self_consistent.sup_distance < 0.01);

  const auto degenerate = compare([](double) { return 0.0; }, ball, grid, 3.0);
  CHECK(degenerate.sup_distance == doctest::Approx(ball.evaluate(grid.back())));
  CHECK(degenerate.violations > 0);
}

TEST_CASE("reports serialize losslessly") {
  const ProcessParams p = fig_params(1e-5);
  const EmpiricalCdf ball =
      mc_conditional_distances(20.0, p, ConditionalMode::Ball, 5000, 16);
  std::vector<double> grid{5.0, 25.0, 45.0, 65.0};
  const auto report = compare(
      [&](double r) { return mcp_distance_cdf(r, 20.0, p); }, ball, grid, 3.0);

  const auto round = report_from_json(report_to_json(report));
  CHECK(round.grid == report.grid);
  CHECK(round.analytic == report.analytic);
  CHECK(round.empirical == report.empirical);
  CHECK(round.se == report.se);
  CHECK(round.sup_distance == report.sup_distance);
  CHECK(round.violations == report.violations);
  CHECK(round.k_sigma == report.k_sigma);
  CHECK(round.n_trials == report.n_trials);

  std::ostringstream csv;
  write_report_csv(report, csv);
  std::istringstream in(csv.str());
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "r,analytic,empirical,se");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == grid.size());
}

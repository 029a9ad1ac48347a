#include "mcph/validation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "mcph/format.hpp"
#include "mcph/geometry.hpp"
#include "mcph/rng.hpp"

namespace mcph {

EmpiricalCdf::EmpiricalCdf(std::vector<double> sorted_samples, std::size_t n_total)
    : samples_(std::move(sorted_samples)), n_total_(n_total) {
  if (!std::is_sorted(samples_.begin(), samples_.end())) {
    throw std::invalid_argument("empirical samples must be sorted ascending");
  }
  if (n_total_ < samples_.size()) {
    throw std::invalid_argument("n_total cannot be below the sample count");
  }
}

double EmpiricalCdf::evaluate(double r) const {
  if (n_total_ == 0) {
    throw std::domain_error("empirical CDF of an empty sample is undefined");
  }
  const auto it = std::upper_bound(samples_.begin(), samples_.end(), r);
  return static_cast<double>(it - samples_.begin()) / static_cast<double>(n_total_);
}

double EmpiricalCdf::standard_error(double r) const {
  const double f = evaluate(r);
  return std::sqrt(f * (1.0 - f) / static_cast<double>(n_total_));
}

ContactMcResult mc_contact_distances(const ProcessParams& params, double W,
                                     SamplerMode mode, std::size_t n_trials,
                                     std::uint64_t master_seed, int workers) {
  params.validate();
  if (!(W > 0.0)) throw std::domain_error("window radius must be positive");
  const Rng master = Rng::seeded(master_seed);

  std::vector<double> nearest(n_trials);
  const int n_workers = std::max(1, std::min<int>(workers, static_cast<int>(
                                                               std::max<std::size_t>(n_trials, 1))));
  const auto run_range = [&](std::atomic<std::size_t>& cursor) {
    for (;;) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= n_trials) return;
      Rng trial = master.substream(i);
      nearest[i] = nearest_retained_distance(params, W, mode, trial);
    }
  };
  if (n_workers == 1) {
    std::atomic<std::size_t> cursor{0};
    run_range(cursor);
  } else {
    std::atomic<std::size_t> cursor{0};
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (int t = 0; t < n_workers; ++t) pool.emplace_back(run_range, std::ref(cursor));
    for (auto& th : pool) th.join();
  }

  ContactMcResult result;
  result.reliable_radius = W - params.R;
  std::vector<double> samples;
  samples.reserve(n_trials);
  for (const double d : nearest) {
    if (std::isfinite(d)) samples.push_back(d);
    if (!(d <= result.reliable_radius)) ++result.censored;
  }
  std::sort(samples.begin(), samples.end());
  result.cdf = EmpiricalCdf(std::move(samples), n_trials);
  return result;
}

EmpiricalCdf mc_conditional_distances(double x_norm, const ProcessParams& params,
                                      ConditionalMode mode, std::size_t n,
                                      std::uint64_t seed) {
  params.validate();
  if (!std::isfinite(x_norm) || x_norm < 0.0) {
    throw std::domain_error("conditioning distance must be nonnegative");
  }
  Rng rng = Rng::seeded(seed);
  const Point3 parent{x_norm, 0.0, 0.0};
  std::vector<double> samples;
  samples.reserve(n);

  switch (mode) {
    case ConditionalMode::Ball:
      for (std::size_t i = 0; i < n; ++i) {
        samples.push_back(norm(sample_uniform_ball(parent, params.R, rng)));
      }
      break;
    case ConditionalMode::Shell:
      for (std::size_t i = 0; i < n; ++i) {
        samples.push_back(norm(sample_uniform_shell(parent, params.r0, params.R, rng)));
      }
      break;
    case ConditionalMode::ExactThinned: {
      // Holes centered farther than R + r0 from the cluster cannot thin it.
      const double env_radius = params.R + params.r0;
      const double r0sq = params.r0 * params.r0;
      std::uint64_t environment = 0;
      const std::uint64_t max_environments = 1000 + 200 * n;
      while (samples.size() < n) {
        if (environment >= max_environments) {
          throw std::runtime_error(
              "thinning retained too few points; hole configuration too dense");
        }
        Rng env_rng = rng.substream(environment++);
        std::vector<Point3> holes = sample_ppp_ball(params.lambda_p, env_radius, env_rng);
        for (Point3& h : holes) {
          h.x += parent.x;
          h.y += parent.y;
          h.z += parent.z;
        }
        const auto candidates = env_rng.poisson(params.M1);
        for (std::uint64_t k = 0; k < candidates; ++k) {
          const Point3 c = sample_uniform_ball(parent, params.R, env_rng);
          if (squared_distance(c, parent) < r0sq) continue;  // self hole
          bool thinned = false;
          for (const Point3& h : holes) {
            if (squared_distance(c, h) < r0sq) {
              thinned = true;
              break;
            }
          }
          if (!thinned) samples.push_back(norm(c));
        }
      }
      samples.resize(n);
      break;
    }
  }
  std::sort(samples.begin(), samples.end());
  const std::size_t total = samples.size();
  return EmpiricalCdf(std::move(samples), total);
}

ComparisonReport compare(const std::function<double(double)>& analytic,
                         const EmpiricalCdf& empirical,
                         const std::vector<double>& grid, double k_sigma) {
  ComparisonReport report;
  report.grid = grid;
  report.k_sigma = k_sigma;
  report.n_trials = empirical.size();
  report.analytic.reserve(grid.size());
  report.empirical.reserve(grid.size());
  report.se.reserve(grid.size());
  const double n = static_cast<double>(empirical.size());
  for (const double r : grid) {
    const double a = analytic(r);
    const double e = empirical.evaluate(r);
    const double s = empirical.standard_error(r);
    report.analytic.push_back(a);
    report.empirical.push_back(e);
    report.se.push_back(s);
    const double diff = std::abs(a - e);
    report.sup_distance = std::max(report.sup_distance, diff);
    // Where the empirical CDF saturates at 0 or 1 its own standard error
    // vanishes; the band falls back to the analytic-implied error so that
    // sub-resolution analytic tails do not count as departures.
    const double fa = std::clamp(a, 0.0, 1.0);
    const double band = std::max(s, std::sqrt(fa * (1.0 - fa) / n));
    if (diff > k_sigma * band) ++report.violations;
  }
  return report;
}

void write_report_csv(const ComparisonReport& report, std::ostream& out) {
  out << "r,analytic,empirical,se\n";
  for (std::size_t i = 0; i < report.grid.size(); ++i) {
    out << fmt_double(report.grid[i]) << ',' << fmt_double(report.analytic[i]) << ','
        << fmt_double(report.empirical[i]) << ',' << fmt_double(report.se[i]) << '\n';
  }
}

std::string report_to_json(const ComparisonReport& report) {
  nlohmann::json j;
  j["grid"] = report.grid;
  j["analytic"] = report.analytic;
  j["empirical"] = report.empirical;
  j["se"] = report.se;
  j["sup_distance"] = report.sup_distance;
  j["violations"] = report.violations;
  j["k_sigma"] = report.k_sigma;
  j["n_trials"] = report.n_trials;
  return j.dump(2);
}

ComparisonReport report_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  ComparisonReport report;
  report.grid = j.at("grid").get<std::vector<double>>();
  report.analytic = j.at("analytic").get<std::vector<double>>();
  report.empirical = j.at("empirical").get<std::vector<double>>();
  report.se = j.at("se").get<std::vector<double>>();
  report.sup_distance = j.at("sup_distance").get<double>();
  report.violations = j.at("violations").get<std::size_t>();
  report.k_sigma = j.at("k_sigma").get<double>();
  report.n_trials = j.at("n_trials").get<std::size_t>();
  return report;
}

}  // namespace mcph

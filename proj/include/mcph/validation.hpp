#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "mcph/params.hpp"
#include "mcph/sampling.hpp"

namespace mcph {

/// Sorted-sample distribution estimate. n_total may exceed the stored sample
/// count when censored trials (values beyond the reliable range, or trials
/// with no point at all) were observed; they contribute to the denominator
/// but never to the numerator, which is the right estimator on any grid that
/// stays inside the reliable range.
class EmpiricalCdf {
 public:
  EmpiricalCdf() = default;
  EmpiricalCdf(std::vector<double> sorted_samples, std::size_t n_total);

  /// Fraction of trials with value <= r; right-continuous step function.
  double evaluate(double r) const;

  /// Binomial standard error sqrt(F (1 - F) / n).
  double standard_error(double r) const;

  std::size_t size() const noexcept { return n_total_; }
  const std::vector<double>& samples() const noexcept { return samples_; }

 private:
  std::vector<double> samples_;
  std::size_t n_total_ = 0;
};

struct ContactMcResult {
  EmpiricalCdf cdf;
  std::size_t censored = 0;       ///< trials with nearest point beyond W - R (or none)
  double reliable_radius = 0.0;   ///< W - R; the grid must not extend past this
};

/// One realization per trial; records the origin distance of the nearest
/// un-thinned point. Trials are independently substreamed from the master
/// seed, so the result is bit-identical for any worker count.
ContactMcResult mc_contact_distances(const ProcessParams& params, double W,
                                     SamplerMode mode, std::size_t n_trials,
                                     std::uint64_t master_seed, int workers = 1);

enum class ConditionalMode { Ball, Shell, ExactThinned };

/// Empirical law of |x + Y| for offspring Y of one cluster whose center sits
/// at distance x_norm. Ball/Shell draw n points directly; ExactThinned draws
/// fresh hole environments and pools retained candidates until n samples are
/// collected.
EmpiricalCdf mc_conditional_distances(double x_norm, const ProcessParams& params,
                                      ConditionalMode mode, std::size_t n,
                                      std::uint64_t seed);

struct ComparisonReport {
  std::vector<double> grid;
  std::vector<double> analytic;
  std::vector<double> empirical;
  std::vector<double> se;  ///< empirical binomial standard errors
  double sup_distance = 0.0;
  /// Grid points with |analytic - empirical| beyond k times the larger of the
  /// empirical and analytic-implied standard errors. The fallback keeps
  /// saturated tails (empirical exactly 0 or 1, where the empirical se
  /// vanishes) from flagging sub-resolution analytic mass.
  std::size_t violations = 0;
  double k_sigma = 0.0;
  std::size_t n_trials = 0;
};

ComparisonReport compare(const std::function<double(double)>& analytic,
                         const EmpiricalCdf& empirical,
                         const std::vector<double>& grid, double k_sigma);

/// CSV columns r,analytic,empirical,se with shortest round-trip numbers.
void write_report_csv(const ComparisonReport& report, std::ostream& out);

std::string report_to_json(const ComparisonReport& report);
ComparisonReport report_from_json(const std::string& text);

}  // namespace mcph

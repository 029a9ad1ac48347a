#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mcph {

/// Tolerance and budget contract for all 1D numerical integration. Infinite
/// upper limits are handled by the callers, which truncate at a radius where
/// the integrand is identically zero or provably negligible.
struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_subdivisions = 2000;
};

/// Subdivision budget exhausted before the error estimate met the tolerance.
/// Carries the best estimate reached.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double best_estimate,
                   double error_estimate)
      : std::runtime_error(what),
        best_(best_estimate),
        err_(error_estimate) {}

  double best_estimate() const noexcept { return best_; }
  double error_estimate() const noexcept { return err_; }

 private:
  double best_;
  double err_;
};

/// Adaptive Gauss-Kronrod (7, 15) integration of f over [a, b]. The returned
/// estimate carries an error bound of at most max(abs_tol, rel_tol * |I|).
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSpec& spec = {});

/// Integrates piecewise over consecutive pairs of sorted breakpoints.
double integrate_segmented(const std::function<double(double)>& f,
                           const std::vector<double>& breakpoints,
                           const QuadratureSpec& spec = {});

}  // namespace mcph

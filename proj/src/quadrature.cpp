#include "mcph/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>

namespace mcph {

namespace {

// 15-point Kronrod rule with embedded 7-point Gauss rule (positive nodes).
constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

constexpr std::array<double, 8> kKronrodW = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

constexpr std::array<double, 4> kGaussW = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b;
  double integral;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel evaluate_panel(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double resg = fc * kGaussW[3];
  double resk = fc * kKronrodW[7];
  std::array<double, 15> values{};
  values[14] = fc;
  for (int j = 0; j < 7; ++j) {
    const double x = h * kNodes[j];
    const double f1 = f(c - x);
    const double f2 = f(c + x);
    values[2 * j] = f1;
    values[2 * j + 1] = f2;
    resk += kKronrodW[j] * (f1 + f2);
    if (j % 2 == 1) resg += kGaussW[(j - 1) / 2] * (f1 + f2);
  }
  const double reskh = 0.5 * resk;
  double resasc = kKronrodW[7] * std::abs(fc - reskh);
  for (int j = 0; j < 7; ++j) {
    resasc += kKronrodW[j] *
              (std::abs(values[2 * j] - reskh) + std::abs(values[2 * j + 1] - reskh));
  }
  resasc *= std::abs(h);
  double err = std::abs((resk - resg) * h);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  return {a, b, resk * h, err};
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSpec& spec) {
  if (!(spec.abs_tol > 0.0) || !(spec.rel_tol > 0.0) || spec.max_subdivisions < 1) {
    throw std::invalid_argument("quadrature spec requires positive tolerances");
  }
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw std::domain_error("integration bounds must be finite");
  }
  if (a == b) return 0.0;

  std::priority_queue<Panel> panels;
  Panel first = evaluate_panel(f, a, b);
  double total = first.integral;
  double total_err = first.error;
  panels.push(first);

  int splits = 0;
  while (total_err > std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
    if (splits >= spec.max_subdivisions) {
      throw ConvergenceError("quadrature subdivision budget exhausted", total,
                             total_err);
    }
    const Panel worst = panels.top();
    if (worst.error == 0.0 || worst.b - worst.a < 1e-15 * std::abs(b - a)) {
      // Cannot be improved further; accept the current estimate.
      break;
    }
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Panel left = evaluate_panel(f, worst.a, mid);
    const Panel right = evaluate_panel(f, mid, worst.b);
    total += left.integral + right.integral - worst.integral;
    total_err += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
    ++splits;
  }
  return total;
}

double integrate_segmented(const std::function<double(double)>& f,
                           const std::vector<double>& breakpoints,
                           const QuadratureSpec& spec) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    total += integrate(f, breakpoints[i], breakpoints[i + 1], spec);
  }
  return total;
}

}  // namespace mcph

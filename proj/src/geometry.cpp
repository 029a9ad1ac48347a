#include "mcph/geometry.hpp"

#include <algorithm>
#include <stdexcept>

namespace mcph {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kConcentricFrac = 1e-9;

void check_lens_inputs(const LensGeometry& g) {
  if (!std::isfinite(g.dist) || !std::isfinite(g.r) || !std::isfinite(g.R) ||
      g.dist < 0.0 || g.r < 0.0 || g.R < 0.0) {
    throw std::domain_error("lens geometry requires finite nonnegative dist, r, R");
  }
}

}  // namespace

double lens_volume(const LensGeometry& g) {
  check_lens_inputs(g);
  const double d = g.dist, r = g.r, R = g.R;
  const double lo = std::min(r, R), hi = std::max(r, R);
  if (lo == 0.0) return 0.0;
  if (d < kConcentricFrac * hi) return ball_volume(lo);
  if (d >= r + R) return 0.0;
  if (d + lo <= hi) return ball_volume(lo);
  // Symmetric grouping keeps lens_volume(d, r, R) == lens_volume(d, R, r) exact.
  const double a = R + r - d;
  const double s =
      d * d + 2.0 * d * (r + R) + 6.0 * (r * R) - 3.0 * (r * r + R * R);
  return kPi * a * a * s / (12.0 * d);
}

double lens_volume_derivative(const LensGeometry& g) {
  check_lens_inputs(g);
  const double d = g.dist, r = g.r, R = g.R;
  if (d < kConcentricFrac * std::max(r, R) || d == 0.0) {
    throw std::domain_error("lens derivative undefined at zero center separation");
  }
  if (r < std::abs(R - d) || r > R + d) {
    throw std::domain_error("lens derivative requires |R - dist| <= r <= R + dist");
  }
  return kPi * r * (R + r - d) * (R - r + d) / d;
}

Point3 sample_uniform_ball(const Point3& center, double R, Rng& rng) {
  if (!std::isfinite(R) || R <= 0.0) {
    throw std::domain_error("ball radius must be positive");
  }
  const auto dir = rng.unit_vector();
  const double rad = R * std::cbrt(rng.next_double());
  return {center.x + rad * dir[0], center.y + rad * dir[1], center.z + rad * dir[2]};
}

Point3 sample_uniform_shell(const Point3& center, double r0, double R, Rng& rng) {
  if (!std::isfinite(R) || R <= 0.0 || !std::isfinite(r0) || r0 < 0.0 || r0 >= R) {
    throw std::domain_error("shell requires 0 <= r0 < R");
  }
  const auto dir = rng.unit_vector();
  const double u = rng.next_double();
  // r0 == 0 reproduces the ball draw bit for bit.
  const double rad = (r0 == 0.0)
                         ? R * std::cbrt(u)
                         : std::cbrt(r0 * r0 * r0 + u * (R * R * R - r0 * r0 * r0));
  return {center.x + rad * dir[0], center.y + rad * dir[1], center.z + rad * dir[2]};
}

}  // namespace mcph

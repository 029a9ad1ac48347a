#pragma once

#include <cmath>
#include <numbers>

#include "mcph/rng.hpp"

namespace mcph {

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

inline double norm(const Point3& p) {
  return std::sqrt(p.x * p.x + p.y * p.y + p.z * p.z);
}

inline double distance(const Point3& a, const Point3& b) {
  const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

inline double squared_distance(const Point3& a, const Point3& b) {
  const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return dx * dx + dy * dy + dz * dz;
}

inline double ball_volume(double radius) {
  return (4.0 / 3.0) * std::numbers::pi * radius * radius * radius;
}

/// Two balls: b(o, r) and a second ball of radius R whose center sits at
/// distance `dist` from the origin.
struct LensGeometry {
  double dist;  ///< center separation [m]
  double r;     ///< radius of the ball at the origin [m]
  double R;     ///< radius of the displaced ball [m]
};

/// Lebesgue volume of the intersection of the two balls. Handles the three
/// regimes (disjoint, lens, containment); continuous and nondecreasing in r.
/// Center separations below 1e-9 * max(r, R) are routed to the concentric
/// formula so the removable 1/dist singularity is never evaluated.
double lens_volume(const LensGeometry& g);

/// d/dr of lens_volume on the open lens regime |R - dist| <= r <= R + dist.
/// Requires dist > 0; concentric callers must use the 4*pi*r^2 branch of the
/// contained regime instead.
double lens_volume_derivative(const LensGeometry& g);

/// Uniform draw in b(center, R): inverse-CDF radius R * U^(1/3) plus an
/// isotropic direction. No rejection loop.
Point3 sample_uniform_ball(const Point3& center, double R, Rng& rng);

/// Uniform draw in the shell b(center, R) \ b(center, r0): radius from the
/// inverse CDF of 3u^2/(R^3 - r0^3) on [r0, R]. Acceptance rate is 1.
Point3 sample_uniform_shell(const Point3& center, double r0, double R, Rng& rng);

}  // namespace mcph

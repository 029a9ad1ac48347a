#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "mcph/geometry.hpp"
#include "mcph/params.hpp"
#include "mcph/rng.hpp"

namespace mcph {

struct Offspring {
  Point3 point;
  std::int32_t parent_index = -1;
  bool thinned = false;
};

/// One sampled realization. Parents live in the inflated ball
/// b(o, window_radius + R) so every cluster that can reach the observation
/// window is present; offspring outside the window are kept and filtered at
/// analysis time.
struct Realization {
  std::vector<Point3> parents;
  std::vector<Offspring> offspring;
  double window_radius = 0.0;
};

/// Homogeneous Poisson process in b(o, W): Poisson(lambda * |b(o,W)|) points,
/// i.i.d. uniform.
std::vector<Point3> sample_ppp_ball(double lambda_p, double W, Rng& rng);

/// Draw a full realization for the requested mode. Cluster i consumes its own
/// derived substream, so the result is reproducible regardless of evaluation
/// order. A point at distance exactly r0 from a hole center is retained
/// (thinning is strict).
Realization sample_realization(const ProcessParams& params, double W,
                               SamplerMode mode, Rng& rng);

/// Distance from the origin to the nearest un-thinned point of a fresh
/// realization, +infinity when the inflated window holds none. Uses the same
/// per-cluster substreams as sample_realization, so for a given rng state it
/// returns exactly the nearest-point distance of that realization; clusters
/// that provably cannot improve the current minimum are skipped.
double nearest_retained_distance(const ProcessParams& params, double W,
                                 SamplerMode mode, Rng& rng);

/// Mean retained count per cluster under self-hole thinning, optionally with
/// the first-order correction for holes of other clusters.
double derive_m2(double M1, double r0, double R, bool apply_overlap_correction,
                 double lambda_p);

/// Candidate mean that makes the self-hole retained mean equal M2.
double derive_m1(double M2, double r0, double R);

/// CSV with columns kind,x,y,z,parent_index,thinned; coordinates carry nine
/// significant digits.
void write_realization_csv(const Realization& realization, std::ostream& out);

}  // namespace mcph

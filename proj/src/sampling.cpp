#include "mcph/sampling.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

#include "mcph/distributions.hpp"

namespace mcph {

namespace {

// Uniform hash grid over parent positions for radius-r0 hole queries.
class ParentGrid {
 public:
  ParentGrid(const std::vector<Point3>& parents, double cell)
      : points_(parents), cell_(cell) {
    cells_.reserve(parents.size() * 2);
    for (std::size_t i = 0; i < parents.size(); ++i) {
      cells_[key_of(parents[i])].push_back(static_cast<std::uint32_t>(i));
    }
  }

  bool any_within(const Point3& q, double radius) const {
    const double r2 = radius * radius;
    const std::int64_t cx = coord(q.x), cy = coord(q.y), cz = coord(q.z);
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        for (std::int64_t dz = -1; dz <= 1; ++dz) {
          const auto it = cells_.find(pack(cx + dx, cy + dy, cz + dz));
          if (it == cells_.end()) continue;
          for (const std::uint32_t idx : it->second) {
            if (squared_distance(points_[idx], q) < r2) return true;
          }
        }
      }
    }
    return false;
  }

 private:
  std::int64_t coord(double v) const {
    return static_cast<std::int64_t>(std::floor(v / cell_));
  }
  static std::uint64_t pack(std::int64_t x, std::int64_t y, std::int64_t z) {
    const std::uint64_t b = 1u << 20;
    return (static_cast<std::uint64_t>(x + b) << 42) |
           (static_cast<std::uint64_t>(y + b) << 21) |
           static_cast<std::uint64_t>(z + b);
  }
  std::uint64_t key_of(const Point3& p) const {
    return pack(coord(p.x), coord(p.y), coord(p.z));
  }

  const std::vector<Point3>& points_;
  double cell_;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> cells_;
};

struct Plan {
  std::uint64_t base = 0;
  std::vector<Point3> parents;
};

Plan make_plan(const ProcessParams& p, double W, Rng& rng) {
  Plan plan;
  plan.base = rng.next_u64();
  Rng parent_rng(Rng::derive_key(plan.base, 0));
  plan.parents = sample_ppp_ball(p.lambda_p, W + p.R, parent_rng);
  return plan;
}

// Offspring of one cluster, drawn from the cluster's own substream.
std::vector<Offspring> draw_cluster(const Plan& plan, std::size_t idx,
                                    const ProcessParams& p, SamplerMode mode,
                                    const ParentGrid* holes) {
  Rng rng(Rng::derive_key(plan.base, idx + 1));
  const Point3& parent = plan.parents[idx];
  std::vector<Offspring> out;
  const auto tag = static_cast<std::int32_t>(idx);
  switch (mode) {
    case SamplerMode::MCP: {
      const auto n = rng.poisson(p.M1);
      out.reserve(n);
      for (std::uint64_t k = 0; k < n; ++k) {
        out.push_back({sample_uniform_ball(parent, p.R, rng), tag, false});
      }
      break;
    }
    case SamplerMode::MCPH_SELFHOLE: {
      const auto n = rng.poisson(p.M2);
      out.reserve(n);
      for (std::uint64_t k = 0; k < n; ++k) {
        out.push_back({sample_uniform_shell(parent, p.r0, p.R, rng), tag, false});
      }
      break;
    }
    case SamplerMode::MCPH_EXACT: {
      const auto n = rng.poisson(p.M1);
      out.reserve(n);
      for (std::uint64_t k = 0; k < n; ++k) {
        const Point3 pt = sample_uniform_ball(parent, p.R, rng);
        const bool thinned = holes != nullptr && holes->any_within(pt, p.r0);
        out.push_back({pt, tag, thinned});
      }
      break;
    }
  }
  return out;
}

void check_window(double W) {
  if (!std::isfinite(W) || W <= 0.0) {
    throw std::domain_error("window radius must be positive");
  }
}

}  // namespace

std::vector<Point3> sample_ppp_ball(double lambda_p, double W, Rng& rng) {
  if (!std::isfinite(lambda_p) || lambda_p < 0.0) {
    throw std::domain_error("intensity must be finite and nonnegative");
  }
  check_window(W);
  const auto n = rng.poisson(lambda_p * ball_volume(W));
  std::vector<Point3> pts;
  pts.reserve(n);
  for (std::uint64_t k = 0; k < n; ++k) {
    pts.push_back(sample_uniform_ball(Point3{}, W, rng));
  }
  return pts;
}

Realization sample_realization(const ProcessParams& params, double W,
                               SamplerMode mode, Rng& rng) {
  params.validate();
  check_window(W);
  const Plan plan = make_plan(params, W, rng);

  const bool thin = mode == SamplerMode::MCPH_EXACT && params.r0 > 0.0;
  const ParentGrid grid(plan.parents, thin ? params.r0 : 1.0);

  Realization real;
  real.window_radius = W;
  real.parents = plan.parents;
  for (std::size_t i = 0; i < plan.parents.size(); ++i) {
    auto cluster = draw_cluster(plan, i, params, mode, thin ? &grid : nullptr);
    real.offspring.insert(real.offspring.end(), cluster.begin(), cluster.end());
  }
  return real;
}

double nearest_retained_distance(const ProcessParams& params, double W,
                                 SamplerMode mode, Rng& rng) {
  params.validate();
  check_window(W);
  const Plan plan = make_plan(params, W, rng);

  const bool thin = mode == SamplerMode::MCPH_EXACT && params.r0 > 0.0;
  const ParentGrid grid(plan.parents, thin ? params.r0 : 1.0);

  std::vector<std::size_t> order(plan.parents.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> norms(plan.parents.size());
  for (std::size_t i = 0; i < plan.parents.size(); ++i) norms[i] = norm(plan.parents[i]);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return norms[a] != norms[b] ? norms[a] < norms[b] : a < b;
  });

  double best = std::numeric_limits<double>::infinity();
  for (const std::size_t idx : order) {
    // A cluster at parent distance v has no point nearer than v - R.
    if (norms[idx] - params.R >= best) break;
    for (const Offspring& off : draw_cluster(plan, idx, params, mode,
                                             thin ? &grid : nullptr)) {
      if (!off.thinned) best = std::min(best, norm(off.point));
    }
  }
  return best;
}

double derive_m2(double M1, double r0, double R, bool apply_overlap_correction,
                 double lambda_p) {
  if (!std::isfinite(R) || R <= 0.0 || !std::isfinite(r0) || r0 < 0.0 || r0 >= R) {
    throw std::domain_error("derive_m2 requires 0 <= r0 < R");
  }
  if (!std::isfinite(M1) || M1 <= 0.0) {
    throw std::domain_error("derive_m2 requires M1 > 0");
  }
  double m2 = M1 * (1.0 - (r0 * r0 * r0) / (R * R * R));
  if (apply_overlap_correction) m2 *= hole_correction(lambda_p, r0);
  return m2;
}

double derive_m1(double M2, double r0, double R) {
  if (!std::isfinite(R) || R <= 0.0 || !std::isfinite(r0) || r0 < 0.0 || r0 >= R) {
    throw std::domain_error("derive_m1 requires 0 <= r0 < R");
  }
  if (!std::isfinite(M2) || M2 <= 0.0) {
    throw std::domain_error("derive_m1 requires M2 > 0");
  }
  return M2 / (1.0 - (r0 * r0 * r0) / (R * R * R));
}

void write_realization_csv(const Realization& realization, std::ostream& out) {
  out << "kind,x,y,z,parent_index,thinned\n";
  char buf[128];
  const auto put = [&](const char* kind, const Point3& p, std::int32_t parent,
                       int thinned) {
    std::snprintf(buf, sizeof buf, "%s,%.9g,%.9g,%.9g,%d,%d\n", kind, p.x, p.y,
                  p.z, parent, thinned);
    out << buf;
  };
  for (const Point3& p : realization.parents) put("parent", p, -1, 0);
  for (const Offspring& o : realization.offspring) {
    put("offspring", o.point, o.parent_index, o.thinned ? 1 : 0);
  }
}

}  // namespace mcph

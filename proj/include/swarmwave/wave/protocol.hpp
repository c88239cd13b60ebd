#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "swarmwave/boundary.hpp"
#include "swarmwave/disc_graph.hpp"
#include "swarmwave/empty_circle.hpp"
#include "swarmwave/geometry.hpp"
#include "swarmwave/wave/egtm.hpp"
#include "swarmwave/wave/segment.hpp"

namespace swarmwave {

// Largest hole the wave protocol may ever open up, starting without 1-holes.
inline constexpr double kWaveHoleBound = 2.24;

struct WaveParams {
  double epsilon = 0.3;
  double viewing_range = 2.0 + std::numbers::sqrt2;
  double hole_check_delta = 1.0;
  // main_step refuses configurations with a hole of diameter >= hole_check_delta.
  // Only the first round is guaranteed hole-free, so loops usually switch this off.
  bool check_holes = true;

  void validate() const {
    if (!(epsilon > 0.0 && epsilon < 0.5)) throw PreconditionError("wave: epsilon must lie in (0, 0.5)");
    if (!(viewing_range > 0.0)) throw PreconditionError("wave: viewing_range must be positive");
    if (!(hole_check_delta > 0.0)) throw PreconditionError("wave: hole_check_delta must be positive");
  }
};

enum class RoleKind { Boundary, Wave, Inner };
enum class Tier { Old, New };  // Old: between this boundary and the next; New: one ring further in

struct RobotRole {
  RoleKind kind = RoleKind::Inner;
  std::size_t segment = 0;
  Tier tier = Tier::Old;
  SegCoord coord;

  std::string label() const {
    switch (kind) {
      case RoleKind::Boundary: return "boundary";
      case RoleKind::Inner: return "inner";
      case RoleKind::Wave: return tier == Tier::Old ? "wave_old" : "wave_new";
    }
    return "?";
  }
};

struct WaveRegions {
  std::vector<Point> current, next, after_next;
  std::vector<WaveSegment> old_ring, new_ring;
  std::vector<BoundingBox> old_boxes, new_boxes;

  const WaveSegment& segment(Tier t, std::size_t k) const { return t == Tier::Old ? old_ring[k] : new_ring[k]; }
};

namespace detail {

inline std::vector<WaveSegment> ring_between(const std::vector<Point>& outer, const std::vector<Point>& inner,
                                             double tol) {
  const std::size_t m = outer.size();
  std::vector<WaveSegment> ring;
  ring.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t k1 = (k + 1) % m;
    ring.push_back(make_segment(k, outer[k], outer[k1], inner[k1], inner[k], tol));
  }
  return ring;
}

inline std::vector<BoundingBox> boxes_of(const std::vector<WaveSegment>& ring) {
  std::vector<BoundingBox> out;
  for (const auto& s : ring) {
    const auto q = s.corners();
    out.push_back(bounding_box(q));
  }
  return out;
}

inline BoundaryCycle cycle_from_positions(const std::vector<Point>& pts) {
  BoundaryCycle c;
  for (std::size_t k = 0; k < pts.size(); ++k) c.indices.push_back(k);
  c.positions = pts;
  c.outline = pts;
  return c;
}

}  // namespace detail

inline WaveRegions wave_regions(std::span<const Point> cycle, double epsilon, double tol = kGeomTol) {
  if (cycle.size() < 3) throw PreconditionError("wave_regions: cycle needs at least 3 robots");
  if (!is_convex_cycle(detail::cycle_from_positions({cycle.begin(), cycle.end()}), tol)) {
    throw PreconditionError("wave_regions: boundary cycle is not convex");
  }
  WaveRegions r;
  r.current.assign(cycle.begin(), cycle.end());
  r.next = egtm_step(r.current, epsilon);
  r.after_next = egtm_step(r.next, epsilon);
  r.old_ring = detail::ring_between(r.current, r.next, tol);
  r.new_ring = detail::ring_between(r.next, r.after_next, tol);
  r.old_boxes = detail::boxes_of(r.old_ring);
  r.new_boxes = detail::boxes_of(r.new_ring);
  return r;
}

inline WaveRegions wave_regions(const BoundaryCycle& cycle, double epsilon, double tol = kGeomTol) {
  if (cycle.degenerate || !is_convex_cycle(cycle, tol)) {
    throw PreconditionError("wave_regions: boundary cycle is not convex");
  }
  return wave_regions(cycle.positions, epsilon, tol);
}

// Old-ring robots move to half their depth in the new ring; new-ring robots to the inner half.
inline Point wave_step(const RobotRole& role, const WaveRegions& regions) {
  if (role.kind != RoleKind::Wave) throw PreconditionError("wave_step: robot is not a wave robot");
  const auto& target = regions.new_ring.at(role.segment);
  const double depth = role.tier == Tier::Old ? 0.5 * role.coord.depth : 0.5 + 0.5 * role.coord.depth;
  return from_seg_coords(target, {depth, role.coord.span});
}

inline Point wave_step(Point p, Tier tier, std::size_t k, const WaveRegions& regions, double tol = kGeomTol) {
  RobotRole role{RoleKind::Wave, k, tier, to_seg_coords(regions.segment(tier, k), p, tol)};
  return wave_step(role, regions);
}

struct RoundPlan {
  BoundaryCycle boundary;
  std::optional<WaveRegions> regions;  // absent for a collinear swarm
  std::vector<RobotRole> roles;
  std::vector<Point> targets;
};

namespace detail {

inline double ring_scale(const WaveRegions& r) {
  const auto box = bounding_box(r.current);
  return std::max(1.0, std::max(box.hi.x - box.lo.x, box.hi.y - box.lo.y));
}

// Every segment of the given tiers that holds p, in (segment, tier) order.
inline std::vector<std::pair<Tier, std::size_t>> containing_segments(Point p, const WaveRegions& r,
                                                                     std::initializer_list<Tier> tiers,
                                                                     double tol) {
  std::vector<std::pair<Tier, std::size_t>> hits;
  const std::size_t m = r.old_ring.size();
  for (std::size_t k = 0; k < m; ++k) {
    for (Tier t : tiers) {
      const auto& box = t == Tier::Old ? r.old_boxes[k] : r.new_boxes[k];
      if (!box.contains(p, tol)) continue;
      const auto q = r.segment(t, k).corners();
      if (locate_in_polygon(p, q, tol) != Containment::Outside) hits.emplace_back(t, k);
    }
  }
  return hits;
}

inline void check_collinear_cycle(const BoundaryCycle& c, double tol) {
  if (!detail::all_collinear(c.positions, tol)) {
    throw PreconditionError("wave: boundary encloses no area but the swarm is not collinear");
  }
}

// Collinear swarm: every robot is on the out-and-back cycle and moves by the boundary rule.
inline std::vector<Point> collinear_targets(const Configuration& z, const BoundaryCycle& c,
                                            const std::vector<Point>& moved, double tol) {
  std::vector<Point> out(z.positions().begin(), z.positions().end());
  std::vector<bool> seen(z.size(), false);
  for (std::size_t k = 0; k < c.size(); ++k) {
    const std::size_t i = c.indices[k];
    if (seen[i] && distance(out[i], moved[k]) > tol) {
      throw PreconditionError("wave: robot " + std::to_string(i) + " gets two different boundary targets");
    }
    out[i] = moved[k];
    seen[i] = true;
  }
  return out;
}

}  // namespace detail

inline void check_wave_preconditions(const Configuration& z, const BoundaryCycle& boundary,
                                     const WaveParams& params, double tol = kGeomTol) {
  if (boundary.degenerate) {
    detail::check_collinear_cycle(boundary, tol);
    return;
  }
  if (!is_convex_cycle(boundary, tol)) throw PreconditionError("wave: connectivity boundary is not convex");
  if (params.check_holes && has_delta_hole(z, boundary, params.hole_check_delta, tol)) {
    throw PreconditionError("wave: swarm contains a hole of diameter >= " + std::to_string(params.hole_check_delta));
  }
}

// Roles and targets for one round, computed by a global observer.
inline RoundPlan plan_round(const Configuration& z, const WaveParams& params, double tol = kGeomTol) {
  params.validate();
  RoundPlan plan;
  plan.boundary = connectivity_boundary(z, tol);
  check_wave_preconditions(z, plan.boundary, params, tol);
  const std::size_t n = z.size();
  plan.roles.assign(n, RobotRole{});
  if (plan.boundary.degenerate) {
    const auto moved = egtm_step(plan.boundary.positions, params.epsilon);
    plan.targets = detail::collinear_targets(z, plan.boundary, moved, tol);
    for (std::size_t k = 0; k < plan.boundary.size(); ++k) {
      plan.roles[plan.boundary.indices[k]] = {RoleKind::Boundary, k, Tier::Old, {}};
    }
    return plan;
  }
  plan.regions = wave_regions(plan.boundary, params.epsilon, tol);
  const WaveRegions& r = *plan.regions;
  const double agree = 1e-9 * detail::ring_scale(r);
  plan.targets.assign(z.positions().begin(), z.positions().end());
  for (std::size_t k = 0; k < plan.boundary.size(); ++k) {
    const std::size_t i = plan.boundary.indices[k];
    plan.roles[i] = {RoleKind::Boundary, k, Tier::Old, {}};
    plan.targets[i] = r.next[k];
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (plan.roles[i].kind == RoleKind::Boundary) continue;
    const auto hits = detail::containing_segments(z[i], r, {Tier::Old, Tier::New}, tol);
    if (hits.empty()) continue;
    std::optional<Point> first;
    for (const auto& [tier, k] : hits) {
      const RobotRole role{RoleKind::Wave, k, tier, to_seg_coords(r.segment(tier, k), z[i], tol)};
      const Point t = wave_step(role, r);
      if (!first) {
        first = t;
        plan.roles[i] = role;
        plan.targets[i] = t;
      } else if (distance(*first, t) > agree) {
        throw GeometryError("wave: robot " + std::to_string(i) + " gets different targets from segments " +
                            std::to_string(plan.roles[i].segment) + " and " + std::to_string(k));
      }
    }
  }
  return plan;
}

inline std::vector<RobotRole> classify_roles(const Configuration& z, const WaveParams& params,
                                             double tol = kGeomTol) {
  return plan_round(z, params, tol).roles;
}

inline Configuration main_step(const Configuration& z, const WaveParams& params, double tol = kGeomTol) {
  return Configuration(plan_round(z, params, tol).targets);
}

// Previous configuration of a main_step output. Positions come back exactly for robots whose
// role is recomputed identically; with `verify` the forward image is checked against `next`.
inline Configuration invert_round(const Configuration& next, const WaveParams& params, bool verify = true,
                                  double tol = kGeomTol) {
  params.validate();
  const BoundaryCycle b1 = connectivity_boundary(next, tol);
  const std::size_t n = next.size();
  std::vector<Point> prev(next.positions().begin(), next.positions().end());
  if (b1.degenerate) {
    detail::check_collinear_cycle(b1, tol);
    const auto back = egtm_invert(b1.positions, params.epsilon);
    prev = detail::collinear_targets(next, b1, back, 1e-8);
  } else {
    if (!is_convex_cycle(b1, tol)) throw GeometryError("invert_round: boundary is not convex, not in the image");
    const auto b0 = egtm_invert(b1.positions, params.epsilon);
    const auto c0 = detail::cycle_from_positions(b0);
    if (!is_convex_cycle(c0, tol)) {
      throw GeometryError("invert_round: recovered boundary is not convex, not in the image");
    }
    for (std::size_t k = 0; k < b0.size(); ++k) {
      if (distance(b0[k], b0[(k + 1) % b0.size()]) > 1.0 + tol) {
        throw GeometryError("invert_round: recovered boundary has an edge longer than 1, not in the image");
      }
    }
    const WaveRegions r = wave_regions(b0, params.epsilon, tol);
    std::vector<bool> on_boundary(n, false);
    for (std::size_t k = 0; k < b1.size(); ++k) {
      prev[b1.indices[k]] = b0[k];
      on_boundary[b1.indices[k]] = true;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (on_boundary[i]) continue;
      Point at = next[i];
      // robots within tol of a boundary robot are indistinguishable from it; use the corner itself
      for (std::size_t k = 0; k < b1.size(); ++k) {
        if (distance(at, b1.positions[k]) <= tol) {
          at = b1.positions[k];
          break;
        }
      }
      const auto hits = detail::containing_segments(at, r, {Tier::New}, tol);
      if (hits.empty()) continue;
      const std::size_t k = hits.front().second;
      const SegCoord c = to_seg_coords(r.new_ring[k], at, tol);
      prev[i] = c.depth < 0.5 ? from_seg_coords(r.old_ring[k], {2.0 * c.depth, c.span})
                              : from_seg_coords(r.new_ring[k], {2.0 * c.depth - 1.0, c.span});
    }
  }
  Configuration out(std::move(prev));
  if (verify) {
    WaveParams fwd = params;
    fwd.check_holes = false;
    Configuration image;
    try {
      image = main_step(out, fwd, tol);
    } catch (const Error& e) {
      throw GeometryError(std::string("invert_round: recovered configuration is invalid, not in the image (") +
                          e.what() + ")");
    }
    const auto box = bounding_box(next.positions());
    const double scale = std::max(1.0, std::max(box.hi.x - box.lo.x, box.hi.y - box.lo.y));
    const double err = max_abs_difference(image, next);
    if (err > 1e-8 * scale) {
      throw GeometryError("invert_round: configuration is not in the image of main_step (mismatch " +
                          std::to_string(err) + ")");
    }
  }
  return out;
}

}  // namespace swarmwave

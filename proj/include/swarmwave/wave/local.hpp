#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "swarmwave/boundary.hpp"
#include "swarmwave/disc_graph.hpp"
#include "swarmwave/hull.hpp"
#include "swarmwave/wave/protocol.hpp"

namespace swarmwave {

struct LocalCheck {
  std::size_t robot = 0;
  bool decided = false;  // the robot could settle its role from what it sees
  bool agrees = false;
  RoleKind global_kind = RoleKind::Inner;
  RoleKind local_kind = RoleKind::Inner;
  Point global_target, local_target;
  std::string note;
};

struct LocalReport {
  std::vector<LocalCheck> robots;

  std::size_t disagreements() const {
    return static_cast<std::size_t>(std::count_if(robots.begin(), robots.end(), [](const LocalCheck& c) {
      return !c.agrees;
    }));
  }
  bool all_agree() const { return disagreements() == 0; }
};

namespace detail {

// Radius of the surrounding a robot inspects to decide whether it is on the boundary.
inline constexpr double kBoundarySurrounding = kWaveHoleBound;

// What one observer can work out. Exterior directions depend only on a robot's own
// surrounding, so they are shared between observers through `cache`.
class LocalView {
 public:
  using OutwardCache = std::vector<std::optional<std::optional<Point>>>;

  LocalView(const Configuration& z, const PointGrid& grid, std::size_t observer, double range, double tol,
            OutwardCache& cache)
      : z_(z), grid_(grid), observer_(observer), range_(range), tol_(tol), cache_(cache) {}

  bool sees_around(std::size_t q, double radius) const {
    return distance(z_[q], z_[observer_]) + radius <= range_ + tol_;
  }

  std::vector<std::size_t> neighbors(std::size_t q) const {
    std::vector<std::size_t> out;
    for (std::size_t w : grid_.within(z_[q], 1.0 + tol_)) {
      if (w != q && distance(z_[w], z_[q]) > tol_) out.push_back(w);
    }
    return out;
  }

  // Exterior direction at q when q lies on the hull border of its surrounding.
  // Empty when q is interior or lies strictly between two hull robots that see each other.
  std::optional<Point> outward(std::size_t q) const {
    if (!cache_[q]) cache_[q] = compute_outward(q);
    return *cache_[q];
  }

  // Next robot after `cur` when arriving from `back_pt`: smallest counterclockwise turn,
  // near-equal directions go to the farther robot.
  std::size_t walk_forward(std::size_t cur, Point back_pt) const {
    return turn_extreme(cur, back_pt - z_[cur], true);
  }
  std::size_t walk_backward(std::size_t cur, Point ahead_pt) const {
    return turn_extreme(cur, ahead_pt - z_[cur], false);
  }

  const Configuration& z() const { return z_; }

 private:
  std::optional<Point> compute_outward(std::size_t q) const {
    const auto near = grid_.within(z_[q], kBoundarySurrounding);
    std::vector<Point> pts;
    std::size_t self = 0;
    for (std::size_t w : near) {
      if (w == q) self = pts.size();
      pts.push_back(z_[w]);
    }
    // exact hull: a tolerant one drops nearly collinear robots arbitrarily
    const auto hull = convex_hull(pts, 0.0);
    const Point p = z_[q];
    if (hull.size() <= 2) {
      // locally collinear: any perpendicular will do, the caller handles lines separately
      if (hull.size() < 2) return Point{0.0, -1.0};
      const Point dir = pts[hull[1]] - pts[hull[0]];
      return Point{dir.y, -dir.x} / norm(dir);
    }
    const std::size_t h = hull.size();
    std::optional<Point> out;
    for (std::size_t k = 0; k < h; ++k) {
      const Point a = pts[hull[k]];
      const Point b = pts[hull[(k + 1) % h]];
      if (hull[k] == self) {
        const Point prev = pts[hull[(k + h - 1) % h]];
        const Point w = (prev - p) / norm(prev - p) + (b - p) / norm(b - p);
        out = norm(w) > tol_ ? -w / norm(w) : Point{(b - p).y, -(b - p).x} / norm(b - p);
        break;
      }
      if (segment_distance(p, a, b) <= tol_) {
        const Point e = b - a;
        out = Point{e.y, -e.x} / norm(e);
        break;
      }
    }
    if (!out) return std::nullopt;
    if (skipped_by_walk(q, *out)) return std::nullopt;
    return out;
  }

  // The walk passes over q when a neighbor u sees a farther robot w on the ray through q
  // and q has no neighbor on the exterior side of u-w.
  bool skipped_by_walk(std::size_t q, Point out) const {
    const auto nq = neighbors(q);
    for (std::size_t u : nq) {
      const Point d = z_[q] - z_[u];
      for (std::size_t w : neighbors(u)) {
        if (w == q || distance(z_[w], z_[q]) <= tol_) continue;
        const Point e = z_[w] - z_[u];
        if (!detail::same_ray(d, e, tol_) || norm2(e) <= norm2(d)) continue;
        const Point unit = e / norm(e);
        const double side = cross(unit, out) < 0.0 ? -1.0 : 1.0;
        bool exits = false;
        for (std::size_t x : nq) {
          if (side * cross(unit, z_[x] - z_[u]) > tol_) {
            exits = true;
            break;
          }
        }
        if (!exits) return true;
      }
    }
    return false;
  }

  std::size_t turn_extreme(std::size_t cur, Point ref, bool ccw) const {
    const auto nb = neighbors(cur);
    if (nb.empty()) return cur;
    std::size_t best = nb.front();
    double best_turn = 10.0;
    for (std::size_t w : nb) {
      const Point d = z_[w] - z_[cur];
      double t = ccw ? detail::ccw_turn(ref, d) : detail::ccw_turn(d, ref);
      if (detail::same_ray(ref, d, tol_)) t = 2.0 * std::numbers::pi;
      if (t < best_turn) {
        best_turn = t;
        best = w;
      }
    }
    return farthest_on_ray(cur, best, ref, nb);
  }

  // robots on one ray from cur: the walk goes to the farthest
  std::size_t farthest_on_ray(std::size_t cur, std::size_t best, Point ref, const std::vector<std::size_t>& nb) const {
    const Point bd = z_[best] - z_[cur];
    for (std::size_t w : nb) {
      const Point d = z_[w] - z_[cur];
      if (w == best || detail::same_ray(ref, d, tol_)) continue;
      if (!detail::same_ray(bd, d, tol_)) continue;
      const bool stacked = z_[w] == z_[best];
      if (stacked ? w < best : norm2(d) > norm2(z_[best] - z_[cur])) best = w;
    }
    return best;
  }

  const Configuration& z_;
  const PointGrid& grid_;
  std::size_t observer_;
  double range_;
  double tol_;
  OutwardCache& cache_;
};

// Boundary neighbors of q from its exterior direction: the walk enters from the robot
// reached last when sweeping counterclockwise from outside, and leaves to the first.
inline std::pair<std::size_t, std::size_t> boundary_neighbors(const LocalView& v, std::size_t q, Point out) {
  const auto nb = v.neighbors(q);
  if (nb.empty()) return {q, q};
  const Point p = v.z()[q];
  const double tol = kGeomTol;
  std::size_t first = nb.front(), last = nb.front();
  double tf = 10.0, tl = -1.0;
  for (std::size_t w : nb) {
    const double t = detail::ccw_turn(out, v.z()[w] - p);
    if (t < tf) {
      tf = t;
      first = w;
    }
    if (t > tl) {
      tl = t;
      last = w;
    }
  }
  // robots on one ray: the walk goes to the farthest
  auto farthest = [&](std::size_t best) {
    const Point bd = v.z()[best] - p;
    for (std::size_t w : nb) {
      const Point d = v.z()[w] - p;
      if (!detail::same_ray(bd, d, tol)) continue;
      const bool stacked = v.z()[w] == v.z()[best];
      if (stacked ? w < best : norm2(d) > norm2(v.z()[best] - p)) best = w;
    }
    return best;
  };
  return {farthest(last), farthest(first)};
}

inline bool has_stacked_partner(const LocalView& v, std::size_t q) {
  const auto& z = v.z();
  for (std::size_t w = 0; w < z.size(); ++w) {
    if (w != q && distance(z[w], z[q]) <= kGeomTol) return true;
  }
  return false;
}

}  // namespace detail

// Recomputes every robot's role and target from what that robot can see, and compares
// with the global round plan.
inline LocalReport verify_local_executability(const Configuration& z, const WaveParams& params,
                                              double tol = kGeomTol) {
  const RoundPlan plan = plan_round(z, params, tol);
  LocalReport report;
  const PointGrid grid(z.positions(), 1.0);
  const double range = params.viewing_range;
  const auto box = bounding_box(z.positions());
  const double agree = 1e-9 * std::max(1.0, std::max(box.hi.x - box.lo.x, box.hi.y - box.lo.y));
  detail::LocalView::OutwardCache cache(z.size());

  for (std::size_t r = 0; r < z.size(); ++r) {
    LocalCheck chk;
    chk.robot = r;
    chk.global_kind = plan.roles[r].kind;
    chk.global_target = plan.targets[r];
    const detail::LocalView view(z, grid, r, range, tol, cache);
    auto finish = [&](RoleKind kind, Point target) {
      chk.decided = true;
      chk.local_kind = kind;
      chk.local_target = target;
      chk.agrees = kind == chk.global_kind && distance(target, chk.global_target) <= agree;
      if (!chk.agrees && chk.note.empty()) chk.note = "role or target differs";
    };
    if (!view.sees_around(r, detail::kBoundarySurrounding)) {
      chk.note = "boundary surrounding not visible";
      report.robots.push_back(chk);
      continue;
    }
    if (plan.boundary.degenerate) {
      // collinear swarm: neighbors along the line
      const auto near = view.neighbors(r);
      const Point dir = plan.boundary.positions.size() > 1
                            ? plan.boundary.positions[plan.boundary.size() / 2] - plan.boundary.positions[0]
                            : Point{1.0, 0.0};
      std::optional<std::size_t> lo, hi;
      for (std::size_t w : near) {
        const double t = dot(z[w] - z[r], dir);
        if (t < 0 && (!lo || t > dot(z[*lo] - z[r], dir))) lo = w;
        if (t > 0 && (!hi || t < dot(z[*hi] - z[r], dir))) hi = w;
      }
      const Point a = lo ? z[*lo] : hi ? z[*hi] : z[r];
      const Point b = hi ? z[*hi] : a;
      finish(RoleKind::Boundary, (a + b) * 0.5 * params.epsilon + z[r] * (1.0 - params.epsilon));
      report.robots.push_back(chk);
      continue;
    }

    // only one robot of a stack is visited; ask the walk step that would enter it
    auto on_walk = [&](std::size_t q, std::size_t pred) {
      if (!detail::has_stacked_partner(view, q)) return true;
      const auto pred_out = view.outward(pred);
      if (!pred_out) return true;
      const auto before_pred = detail::boundary_neighbors(view, pred, *pred_out).first;
      return view.walk_forward(pred, z[before_pred]) == q;
    };
    if (const auto out = view.outward(r)) {
      const auto [pred, succ] = detail::boundary_neighbors(view, r, *out);
      if (on_walk(r, pred)) {
        finish(RoleKind::Boundary, (z[pred] + z[succ]) * 0.5 * params.epsilon + z[r] * (1.0 - params.epsilon));
        report.robots.push_back(chk);
        continue;
      }
    }

    // chains of boundary robots around every boundary robot whose surrounding r can see
    std::optional<Point> target;
    RoleKind kind = RoleKind::Inner;
    for (std::size_t q : grid.within(z[r], range)) {
      if (q == r || !view.sees_around(q, detail::kBoundarySurrounding)) continue;
      const auto out = view.outward(q);
      if (!out) continue;
      const auto [pred, succ] = detail::boundary_neighbors(view, q, *out);
      if (!on_walk(q, pred)) continue;
      // chain[3] = q; slots are filled while the walking robot's 1-surrounding is visible
      std::vector<std::optional<std::size_t>> chain(7);
      chain[3] = q;
      chain[4] = succ;
      chain[2] = pred;
      for (int s = 5; s < 7; ++s) {
        const std::size_t cur = *chain[s - 1];
        if (!view.sees_around(cur, 1.0)) break;
        chain[s] = view.walk_forward(cur, z[*chain[s - 2]]);
      }
      for (int s = 1; s >= 0; --s) {
        const std::size_t cur = *chain[s + 1];
        if (!view.sees_around(cur, 1.0)) break;
        chain[s] = view.walk_backward(cur, z[*chain[s + 2]]);
      }
      auto pos = [&](int s) { return z[*chain[s]]; };
      auto has = [&](int lo, int hi) {
        if (lo < 0 || hi > 6) return false;
        for (int s = lo; s <= hi; ++s) {
          if (!chain[s]) return false;
        }
        return true;
      };
      auto step1 = [&](int s) {
        return (pos(s - 1) + pos(s + 1)) * 0.5 * params.epsilon + pos(s) * (1.0 - params.epsilon);
      };
      auto step2 = [&](int s) {
        return (step1(s - 1) + step1(s + 1)) * 0.5 * params.epsilon + step1(s) * (1.0 - params.epsilon);
      };
      for (int s = 0; s < 6; ++s) {
        for (Tier tier : {Tier::Old, Tier::New}) {
          std::optional<WaveSegment> seg, next_seg;
          if (tier == Tier::Old && has(s - 1, s + 2)) {
            seg = make_segment(0, pos(s), pos(s + 1), step1(s + 1), step1(s), tol);
          }
          if (tier == Tier::New && has(s - 2, s + 3)) {
            seg = make_segment(0, step1(s), step1(s + 1), step2(s + 1), step2(s), tol);
          }
          if (!seg || !has(s - 2, s + 3)) continue;
          next_seg = make_segment(0, step1(s), step1(s + 1), step2(s + 1), step2(s), tol);
          const auto q4 = seg->corners();
          if (locate_in_polygon(z[r], q4, tol) == Containment::Outside) continue;
          const SegCoord c = to_seg_coords(*seg, z[r], tol);
          const double depth = tier == Tier::Old ? 0.5 * c.depth : 0.5 + 0.5 * c.depth;
          const Point t = from_seg_coords(*next_seg, {depth, c.span});
          if (!target) {
            target = t;
            kind = RoleKind::Wave;
          } else if (distance(*target, t) > agree) {
            chk.note = "segments give different targets";
          }
        }
      }
    }
    finish(kind, target.value_or(z[r]));
    report.robots.push_back(chk);
  }
  return report;
}

}  // namespace swarmwave

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "swarmwave/boundary.hpp"
#include "swarmwave/empty_circle.hpp"
#include "swarmwave/geometry.hpp"

namespace swarmwave {

enum class Degeneracy { NonDegenerate, Partial, Full };

inline const char* to_string(Degeneracy d) {
  switch (d) {
    case Degeneracy::NonDegenerate: return "non-degenerate";
    case Degeneracy::Partial: return "partial";
    case Degeneracy::Full: return "full";
  }
  return "?";
}

// Quadrilateral between two consecutive boundary cycles.
// a = old[k], b = old[k+1], c = new[k+1], d = new[k].
struct WaveSegment {
  std::size_t k = 0;
  Point a, b, c, d;
  Degeneracy degeneracy = Degeneracy::NonDegenerate;
  bool convex = true;

  std::array<Point, 4> corners() const { return {a, b, c, d}; }
  double scale() const {
    return std::max({distance(a, b), distance(b, c), distance(c, d), distance(d, a), distance(a, c), distance(b, d)});
  }
};

// depth runs from the old edge a-b (0) to the new edge d-c (1);
// span runs from side a-d (0) to side b-c (1).
struct SegCoord {
  double depth = 0.0;
  double span = 0.0;
};

inline Degeneracy segment_degeneracy(Point a, Point b, Point c, Point d, double tol = kGeomTol) {
  const std::array<Point, 4> all{a, b, c, d};
  if (detail::all_collinear(all, tol)) return Degeneracy::Full;
  for (std::size_t skip = 0; skip < 4; ++skip) {
    std::array<Point, 3> tri;
    std::size_t j = 0;
    for (std::size_t i = 0; i < 4; ++i) {
      if (i != skip) tri[j++] = all[i];
    }
    if (detail::all_collinear(tri, tol)) return Degeneracy::Partial;
  }
  return Degeneracy::NonDegenerate;
}

inline Degeneracy segment_degeneracy(const WaveSegment& s, double tol = kGeomTol) {
  return segment_degeneracy(s.a, s.b, s.c, s.d, tol);
}

// Sides a-b against c-d, or a-d against b-c, properly cross.
inline bool is_twisted(const WaveSegment& s, double tol = kGeomTol) {
  auto proper = [&](Point p, Point q, Point r, Point t) {
    const double o1 = orient(p, q, r), o2 = orient(p, q, t);
    const double o3 = orient(r, t, p), o4 = orient(r, t, q);
    const double e = tol * std::max(1.0, s.scale());
    return ((o1 > e && o2 < -e) || (o1 < -e && o2 > e)) && ((o3 > e && o4 < -e) || (o3 < -e && o4 > e));
  };
  return proper(s.a, s.b, s.c, s.d) || proper(s.a, s.d, s.b, s.c);
}

inline WaveSegment make_segment(std::size_t k, Point a, Point b, Point c, Point d, double tol = kGeomTol) {
  WaveSegment s{k, a, b, c, d, Degeneracy::NonDegenerate, true};
  s.degeneracy = segment_degeneracy(s, tol);
  if (s.degeneracy == Degeneracy::NonDegenerate) {
    const std::array<Point, 4> q{a, b, c, d};
    bool pos = false, neg = false;
    for (std::size_t i = 0; i < 4; ++i) {
      const double o = orient(q[i], q[(i + 1) % 4], q[(i + 2) % 4]);
      pos = pos || o > 0.0;
      neg = neg || o < 0.0;
    }
    s.convex = !(pos && neg);
  }
  return s;
}

namespace detail {

inline Point side_point_ad(const WaveSegment& s, double depth) { return s.a + (s.d - s.a) * depth; }
inline Point side_point_bc(const WaveSegment& s, double depth) { return s.b + (s.c - s.b) * depth; }

// Joint of the two-piece connector at this depth, if the rays meet ahead of both side points.
inline std::optional<Point> connector_joint(const WaveSegment& s, double depth) {
  const Point p0 = side_point_ad(s, depth);
  const Point p1 = side_point_bc(s, depth);
  const Point u = s.b - s.a;
  const Point v = s.d - s.c;
  Point j;
  if (!line_intersection(p0, u, p1, v, j)) return std::nullopt;
  if (dot(j - p0, u) < 0.0 || dot(j - p1, v) < 0.0) return std::nullopt;
  return j;
}

inline Point straight_connector(const WaveSegment& s, SegCoord c) {
  return lerp(side_point_ad(s, c.depth), side_point_bc(s, c.depth), c.span);
}

}  // namespace detail

inline Point from_seg_coords(const WaveSegment& s, SegCoord c) {
  if (s.convex || s.degeneracy != Degeneracy::NonDegenerate) return detail::straight_connector(s, c);
  const auto j = detail::connector_joint(s, c.depth);
  if (!j) return detail::straight_connector(s, c);
  const Point p0 = detail::side_point_ad(s, c.depth);
  const Point p1 = detail::side_point_bc(s, c.depth);
  const double l1 = distance(p0, *j);
  const double l2 = distance(*j, p1);
  const double total = l1 + l2;
  if (total == 0.0) return p0;
  const double t = c.span * total;
  if (t <= l1) return l1 == 0.0 ? p0 : lerp(p0, *j, t / l1);
  return l2 == 0.0 ? p1 : lerp(*j, p1, (t - l1) / l2);
}

namespace detail {

struct CoordCandidate {
  SegCoord c;
  double error;
};

inline void consider(const WaveSegment& s, Point p, double depth, double span, double slack,
                     std::vector<CoordCandidate>& out) {
  if (!std::isfinite(depth) || !std::isfinite(span)) return;
  if (depth < -slack || depth > 1.0 + slack || span < -slack || span > 1.0 + slack) return;
  const SegCoord c{std::clamp(depth, 0.0, 1.0), std::clamp(span, 0.0, 1.0)};
  out.push_back({c, distance(from_seg_coords(s, c), p)});
}

// Straight connector through p: cross(h - d f, e + d g) = 0.
inline void straight_candidates(const WaveSegment& s, Point p, double slack, bool only_without_joint,
                                std::vector<CoordCandidate>& out) {
  const Point e = s.b - s.a, f = s.d - s.a, g = s.a - s.b + s.c - s.d, h = p - s.a;
  const double qa = -cross(f, g);
  const double qb = cross(h, g) - cross(f, e);
  const double qc = cross(h, e);
  auto roots = quadratic_roots(qa, qb, qc);
  if (roots.empty() && std::max({std::abs(qa), std::abs(qb), std::abs(qc)}) <= 1e-300) roots.push_back(0.0);
  if (roots.empty() && std::abs(qc) <= kGeomTol * std::max(1.0, norm2(e))) roots.push_back(0.0);
  for (double depth : roots) {
    if (only_without_joint && connector_joint(s, std::clamp(depth, 0.0, 1.0))) continue;
    const Point w = e + g * depth;
    const double w2 = norm2(w);
    const double span = w2 == 0.0 ? 0.0 : dot(h - f * depth, w) / w2;
    consider(s, p, depth, span, slack, out);
  }
}

// Two-piece connector: p = side point + t * unit ray, linear in (depth, t).
inline void bent_candidates(const WaveSegment& s, Point p, double slack, std::vector<CoordCandidate>& out) {
  const Point u = s.b - s.a;
  const Point v = s.d - s.c;
  auto piece = [&](Point origin, Point side, Point dir, bool first) {
    const double det = cross(side, dir);
    if (std::abs(det) <= 1e-14 * norm(side) * norm(dir)) return;
    const Point h = p - origin;
    const double depth = cross(h, dir) / det;
    const double t = cross(side, h) / det;
    if (depth < -slack || depth > 1.0 + slack) return;
    const double dc = std::clamp(depth, 0.0, 1.0);
    const auto j = connector_joint(s, dc);
    if (!j) return;
    const Point p0 = side_point_ad(s, dc);
    const Point p1 = side_point_bc(s, dc);
    const double l1 = distance(p0, *j);
    const double l2 = distance(*j, p1);
    const double total = l1 + l2;
    if (total == 0.0) return;
    const double along = t * norm(dir);
    const double span = first ? along / total : (total - along) / total;
    consider(s, p, depth, span, slack, out);
  };
  piece(s.a, s.d - s.a, u, true);
  piece(s.b, s.c - s.b, v, false);
}

// Carrier-line parametrization for a segment whose corners are collinear.
inline void line_candidates(const WaveSegment& s, Point p, double tol, std::vector<CoordCandidate>& out) {
  const auto q = s.corners();
  Point lo = q[0], hi = q[0];
  double best = -1.0;
  for (const Point& x : q) {
    for (const Point& y : q) {
      if (distance2(x, y) > best) {
        best = distance2(x, y);
        lo = x;
        hi = y;
      }
    }
  }
  const Point dir = hi - lo;
  const double len2 = norm2(dir);
  if (len2 == 0.0) {
    if (distance(p, lo) <= tol) out.push_back({{0.0, 0.0}, distance(p, lo)});
    return;
  }
  auto param = [&](Point x) { return dot(x - lo, dir) / len2; };
  const double x = param(p);
  const double pa = param(s.a), pb = param(s.b), pc = param(s.c), pd = param(s.d);
  // side points move linearly: p0(d) = pa + d (pd - pa), p1(d) = pb + d (pc - pb)
  const double tol_t = tol / std::sqrt(len2);
  auto inside_at = [&](double depth) {
    const double p0 = pa + depth * (pd - pa), p1 = pb + depth * (pc - pb);
    return x >= std::min(p0, p1) - tol_t && x <= std::max(p0, p1) + tol_t;
  };
  std::vector<double> depths{0.0};
  // (p0 - x)(p1 - x) = 0 at the boundary of the feasible depth set
  const double a0 = pa - x, a1 = pd - pa, b0 = pb - x, b1 = pc - pb;
  for (double r : quadratic_roots(a1 * b1, a0 * b1 + a1 * b0, a0 * b0)) depths.push_back(r);
  std::sort(depths.begin(), depths.end());
  for (double depth : depths) {
    if (depth < -tol_t || depth > 1.0 + tol_t) continue;
    const double dc = std::clamp(depth, 0.0, 1.0);
    if (!inside_at(dc)) continue;
    const double p0 = pa + dc * (pd - pa), p1 = pb + dc * (pc - pb);
    const double span = std::abs(p1 - p0) <= tol_t ? 0.0 : std::clamp((x - p0) / (p1 - p0), 0.0, 1.0);
    const SegCoord c{dc, span};
    out.push_back({c, distance(from_seg_coords(s, c), p)});
    return;
  }
}

}  // namespace detail

// Inverse of from_seg_coords. Among several preimages the smallest depth wins.
inline SegCoord to_seg_coords(const WaveSegment& s, Point p, double tol = kGeomTol) {
  const double scale = std::max(1.0, s.scale());
  const double accept = 10.0 * tol * scale;
  const double slack = 1e-7;
  std::vector<detail::CoordCandidate> cands;
  if (s.degeneracy == Degeneracy::Full) {
    detail::line_candidates(s, p, accept, cands);
  } else if (s.convex || s.degeneracy == Degeneracy::Partial) {
    detail::straight_candidates(s, p, slack, false, cands);
  } else {
    detail::bent_candidates(s, p, slack, cands);
    detail::straight_candidates(s, p, slack, true, cands);
  }
  std::optional<SegCoord> best;
  for (const auto& c : cands) {
    if (c.error > accept) continue;
    if (!best || c.c.depth < best->depth) best = c.c;
  }
  if (!best) {
    throw GeometryError("to_seg_coords: point (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                        ") is outside wave segment " + std::to_string(s.k));
  }
  return *best;
}

}  // namespace swarmwave

#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>
#include <utility>
#include <vector>

#include "swarmwave/disc_graph.hpp"
#include "swarmwave/geometry.hpp"

namespace swarmwave {

// Robots on the outer face of the unit disc graph, counterclockwise.
// A robot appears twice when the outer face pinches at it.
struct BoundaryCycle {
  std::vector<std::size_t> indices;
  std::vector<Point> positions;
  bool degenerate = false;  // no enclosed area: visited out-and-back
  std::vector<Point> outline;  // robots plus edge-crossing points, in walk order
  std::size_t crossings = 0;

  std::size_t size() const { return indices.size(); }
  bool contains_robot(std::size_t robot) const {
    return std::find(indices.begin(), indices.end(), robot) != indices.end();
  }
  double area() const { return signed_area(outline.empty() ? positions : outline); }
};

namespace detail {

// Counterclockwise angle from a to b in (0, 2*pi]; a zero turn counts as a full one.
inline double ccw_turn(Point a, Point b) {
  const double ang = std::atan2(cross(a, b), dot(a, b));
  return ang > 0.0 ? ang : ang + 2.0 * std::numbers::pi;
}

// b points along a within perpendicular distance tol (measured at the shorter vector's tip).
inline bool same_ray(Point a, Point b, double tol) {
  if (dot(a, b) <= 0.0) return false;
  return std::abs(cross(a, b)) <= tol * std::max(norm(a), norm(b));
}

inline bool all_collinear(std::span<const Point> pts, double tol) {
  if (pts.size() <= 2) return true;
  std::size_t far_a = 0;
  std::size_t far_b = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double d = distance2(pts[0], pts[i]);
    if (d > best) {
      best = d;
      far_a = i;
    }
  }
  best = -1.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double d = distance2(pts[far_a], pts[i]);
    if (d > best) {
      best = d;
      far_b = i;
    }
  }
  const Point dir = pts[far_b] - pts[far_a];
  const double len = norm(dir);
  if (len <= tol) return true;
  for (const Point& p : pts) {
    if (std::abs(cross(dir, p - pts[far_a])) / len > tol) return false;
  }
  return true;
}

// Leftmost of the robots within tol of the lowest height, so a robot on the bottom
// edge never starts the walk.
inline std::size_t lowest_robot(std::span<const Point> pts, double tol = 0.0) {
  double low = pts[0].y;
  for (const Point& p : pts) low = std::min(low, p.y);
  std::size_t s = pts.size();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].y > low + tol) continue;
    if (s == pts.size() || pts[i].x < pts[s].x || (pts[i].x == pts[s].x && pts[i].y < pts[s].y)) s = i;
  }
  return s;
}

inline BoundaryCycle collinear_cycle(const Configuration& z) {
  const auto pts = z.positions();
  BoundaryCycle c;
  c.degenerate = true;
  const std::size_t s = lowest_robot(pts);
  std::size_t far = s;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (distance2(pts[s], pts[i]) > distance2(pts[s], pts[far])) far = i;
  }
  const Point dir = pts[far] - pts[s];
  std::vector<std::size_t> order(pts.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dot(pts[a] - pts[s], dir) < dot(pts[b] - pts[s], dir);
  });
  // the start robot leads among robots sharing its spot
  std::stable_partition(order.begin(), order.end(), [&](std::size_t i) { return i == s; });
  std::vector<std::size_t> seq = order;
  for (std::size_t k = order.size() - 1; k-- > 1;) seq.push_back(order[k]);
  c.indices = seq;
  for (std::size_t i : seq) c.positions.push_back(pts[i]);
  c.outline = c.positions;
  return c;
}

}  // namespace detail

// Outer-face walk of the drawn unit disc graph: from the lowest robot, always take the
// smallest counterclockwise turn from the reversed incoming edge. Near-equal turns
// (perpendicular offset within tol) go to the longer edge. Where two edges cross the walk
// turns at the crossing point, so the outline can contain points that are not robots.
inline BoundaryCycle connectivity_boundary(const Configuration& z, double tol = kGeomTol) {
  require_nonempty(z, "connectivity_boundary");
  const DiscGraph g = disc_graph(z, 1.0, tol);
  if (!is_connected(g)) {
    throw PreconditionError("connectivity_boundary: unit disc graph is disconnected (" +
                            std::to_string(component_count(g)) + " components)");
  }
  const auto pts = z.positions();
  if (z.size() <= 2 || detail::all_collinear(pts, tol)) return detail::collinear_cycle(z);
  const PointGrid grid(pts, 1.0);

  auto pick = [&](std::size_t cur, Point back) {
    const auto& nb = g.adjacency[cur];
    std::size_t best = nb.front();
    double best_turn = 10.0;
    for (std::size_t w : nb) {
      const Point dir = pts[w] - pts[cur];
      if (norm(dir) <= tol) continue;  // stacked robots carry no direction
      const double t = detail::same_ray(back, dir, tol) ? 2.0 * std::numbers::pi
                                                        : detail::ccw_turn(back, dir);
      if (t < best_turn) {
        best_turn = t;
        best = w;
      }
    }
    const Point best_dir = pts[best] - pts[cur];
    for (std::size_t w : nb) {
      const Point dir = pts[w] - pts[cur];
      if (norm(dir) <= tol || w == best) continue;
      if (!detail::same_ray(best_dir, dir, tol) || detail::same_ray(back, dir, tol)) continue;
      // coincident robots: the lowest index stands for all
      const bool stacked = pts[w] == pts[best];
      if (stacked ? w < best : norm2(dir) > norm2(pts[best] - pts[cur])) best = w;
    }
    return best;
  };

  std::vector<char> mark(z.size(), 0);
  BoundaryCycle c;
  const std::size_t start = detail::lowest_robot(pts, tol);
  std::size_t first_next = pick(start, {-1.0, 0.0});
  // travel along the edge from -> to, currently at parameter `at` (0 = from, 1 = to)
  std::size_t from = start;
  std::size_t to = first_next;
  double at = 0.0;
  c.indices.push_back(start);
  c.positions.push_back(pts[start]);
  c.outline.push_back(pts[start]);
  const std::size_t limit = 8 * g.edge_count() + 16;
  for (std::size_t steps = 0;; ++steps) {
    if (steps > limit) throw GeometryError("connectivity_boundary: outer-face walk did not close");
    const Point a = pts[from];
    const Point b = pts[to];
    const Point ab = b - a;
    const double len = norm(ab);
    const Point unit = ab / len;
    const double eps_t = tol / len;
    const Point mid = (a + b) * 0.5;

    // nearest event past the current parameter: a robot lying on the edge, or a crossing edge
    double best_t = 1.0;
    std::size_t robot_hit = z.size();
    std::size_t cu = z.size();
    std::size_t cv = z.size();
    const auto local = grid.within(mid, 0.5 * len + 1.0 + tol);
    for (std::size_t u : local) mark[u] = 1;
    for (std::size_t u : local) {
      if (u == from || u == to) continue;
      const double du = cross(unit, pts[u] - a);
      const double tu = dot(pts[u] - a, ab) / (len * len);
      if (std::abs(du) <= tol && tu > at + eps_t && tu < 1.0 - eps_t && tu < best_t) {
        // only a robot with an edge leaving to the exterior side interrupts the edge
        for (std::size_t w : g.adjacency[u]) {
          if (cross(unit, pts[w] - a) < -tol) {
            best_t = tu;
            robot_hit = u;
            break;
          }
        }
      }
      for (std::size_t v : g.adjacency[u]) {
        if ((v < u && mark[v]) || v == from || v == to) continue;
        const double dv = cross(unit, pts[v] - a);
        if (!((du > tol && dv < -tol) || (du < -tol && dv > tol))) continue;
        const Point uv = pts[v] - pts[u];
        const double luv = norm(uv);
        const double da = cross(uv, a - pts[u]) / luv;
        const double db = cross(uv, b - pts[u]) / luv;
        if (!((da > tol && db < -tol) || (da < -tol && db > tol))) continue;
        const double tx = da / (da - db);
        if (tx > at + eps_t && tx < best_t - eps_t) {
          best_t = tx;
          robot_hit = z.size();
          cu = u;
          cv = v;
        }
      }
    }
    for (std::size_t u : local) mark[u] = 0;

    if (robot_hit < z.size() || cu == z.size()) {
      const std::size_t cur = robot_hit < z.size() ? robot_hit : to;
      const Point came_from = a + ab * at;
      const std::size_t next = pick(cur, came_from - pts[cur]);
      // a robot stacked on the start closes the walk as well
      if (distance(pts[cur], pts[start]) <= tol && distance(pts[next], pts[first_next]) <= tol) break;
      c.indices.push_back(cur);
      c.positions.push_back(pts[cur]);
      c.outline.push_back(pts[cur]);
      from = cur;
      to = next;
      at = 0.0;
      continue;
    }
    // turn onto the crossing edge toward its more exterior endpoint
    const Point x = a + ab * best_t;
    const Point back = a - b;
    const bool to_u = detail::ccw_turn(back, pts[cu] - x) < detail::ccw_turn(back, pts[cv] - x);
    from = to_u ? cv : cu;
    to = to_u ? cu : cv;
    const Point e = pts[to] - pts[from];
    at = dot(x - pts[from], e) / norm2(e);
    c.outline.push_back(x);
    ++c.crossings;
  }
  c.degenerate = signed_area(c.outline) <= tol;
  return c;
}

// Every turn is a left turn or straight; reversals and pinches are rejected.
inline bool is_convex_cycle(const BoundaryCycle& c, double tol = kGeomTol) {
  const std::size_t m = c.size();
  if (m <= 2) return true;
  if (c.degenerate) return detail::all_collinear(c.positions, tol);
  if (c.crossings > 0) return false;
  if (std::set<std::size_t>(c.indices.begin(), c.indices.end()).size() != m) return false;
  double total = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const Point e1 = c.positions[k] - c.positions[(k + m - 1) % m];
    const Point e2 = c.positions[(k + 1) % m] - c.positions[k];
    if (norm(e1) <= tol || norm(e2) <= tol) continue;
    const double cr = cross(e1, e2);
    if (cr < -tol) return false;
    if (std::abs(cr) <= tol && dot(e1, e2) < 0.0) return false;
    total += std::atan2(cr, dot(e1, e2));
  }
  return std::abs(total - 2.0 * std::numbers::pi) < 1e-6;
}

}  // namespace swarmwave

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "swarmwave/boundary.hpp"
#include "swarmwave/disc_graph.hpp"
#include "swarmwave/enclosing_circle.hpp"

namespace swarmwave {

namespace detail {

// Oriented line {c : dot(normal, c) + offset = 0}; positive side is the polygon interior.
struct EdgeLine {
  Point normal;
  double offset = 0.0;
  double side(Point c) const { return dot(normal, c) + offset; }
};

struct HalfPlaneCell {
  std::vector<Point> vertices;
  std::vector<std::size_t> cut_by;  // robots whose bisector contributed an edge
};

// Keep the part of the convex polygon where dot(c - mid, dir) <= 0.
inline std::vector<Point> clip_halfplane(const std::vector<Point>& poly, Point mid, Point dir) {
  std::vector<Point> out;
  const std::size_t m = poly.size();
  for (std::size_t k = 0; k < m; ++k) {
    const Point a = poly[k];
    const Point b = poly[(k + 1) % m];
    const double sa = dot(a - mid, dir);
    const double sb = dot(b - mid, dir);
    if (sa <= 0.0) out.push_back(a);
    if ((sa < 0.0 && sb > 0.0) || (sa > 0.0 && sb < 0.0)) out.push_back(a + (b - a) * (sa / (sa - sb)));
  }
  return out;
}

inline double cell_reach(const std::vector<Point>& cell, Point site) {
  double r = 0.0;
  for (const Point& v : cell) r = std::max(r, distance(v, site));
  return r;
}

struct EmptyCircleSearch {
  std::span<const Point> robots;
  std::vector<Point> poly;
  std::vector<EdgeLine> lines;
  std::vector<std::pair<Point, Point>> edges;
  PointGrid grid;
  BoundingBox box;
  Circle best{{}, 0.0};

  EmptyCircleSearch(std::span<const Point> r, std::vector<Point> polygon, double cell)
      : robots(r), poly(std::move(polygon)), grid(r, cell), box(bounding_box(poly)) {
    const std::size_t m = poly.size();
    for (std::size_t k = 0; k < m; ++k) {
      const Point a = poly[k];
      const Point b = poly[(k + 1) % m];
      const double len = distance(a, b);
      if (len <= 0.0) continue;
      const Point nrm = perp(b - a) / len;
      lines.push_back({nrm, -dot(nrm, a)});
      edges.emplace_back(a, b);
    }
  }

  // Radius of the largest robot-free circle centered at c inside the polygon (-1 if c is outside).
  double clearance(Point c) const {
    if (!std::isfinite(c.x) || !std::isfinite(c.y)) return -1.0;
    if (locate_in_polygon(c, poly, 0.0) == Containment::Outside) return -1.0;
    double r = grid.nearest_distance(c);
    for (const auto& [a, b] : edges) r = std::min(r, segment_distance(c, a, b));
    return r;
  }

  void consider(Point c, double predicted) {
    if (!(predicted > best.radius)) return;
    if (!(c.x >= box.lo.x && c.x <= box.hi.x && c.y >= box.lo.y && c.y <= box.hi.y)) return;
    if (!(grid.nearest_distance(c) > best.radius)) return;
    const double r = clearance(c);
    if (r > best.radius) best = {c, r};
  }
};

// Real roots of a t^2 + b t + c = 0.
inline std::vector<double> quadratic_roots(double a, double b, double c) {
  std::vector<double> out;
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(c)});
  if (scale == 0.0) return out;
  if (std::abs(a) <= 1e-14 * scale) {
    if (b != 0.0) out.push_back(-c / b);
    return out;
  }
  double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) {
    if (disc < -1e-12 * b * b) return out;
    disc = 0.0;
  }
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  if (q != 0.0) {
    out.push_back(q / a);
    out.push_back(c / q);
  } else {
    out.push_back(0.0);
  }
  return out;
}

}  // namespace detail

// Largest circle inside the boundary polygon whose open interior holds no robot.
// Candidate centers: equidistant points of every robot/robot/edge-line triple that
// can bound a Voronoi-cell-limited circle, plus the edge-line triples.
inline Circle largest_empty_circle(const Configuration& z, const BoundaryCycle& cycle,
                                   double tol = kGeomTol) {
  require_nonempty(z, "largest_empty_circle");
  if (cycle.degenerate || cycle.size() < 3 || cycle.area() <= tol) return {z[0], 0.0};
  // crossing points on the outline act like robots: the circle may not swallow them
  std::vector<Point> sites(z.begin(), z.end());
  for (const Point& q : cycle.outline) {
    if (std::find(sites.begin(), sites.end(), q) == sites.end()) sites.push_back(q);
  }
  const std::span<const Point> robots = sites;
  const std::vector<Point>& outline = cycle.outline.empty() ? cycle.positions : cycle.outline;
  const BoundingBox box = bounding_box(outline);
  const double span = std::max(box.hi.x - box.lo.x, box.hi.y - box.lo.y);
  const double cell = std::max(span / std::sqrt(static_cast<double>(robots.size())), 1e-6);
  detail::EmptyCircleSearch search(robots, outline, cell);
  search.best = {outline[0], 0.0};
  const auto& lines = search.lines;

  // robots sorted once per site by distance through the grid would be tighter; n is small
  std::vector<std::size_t> order(robots.size());
  std::iota(order.begin(), order.end(), 0);
  // centers outside the outline's box are never valid, so cells start from that box
  const double pad = tol + 1e-12 * span;
  std::vector<detail::HalfPlaneCell> cells(robots.size());
  for (std::size_t i = 0; i < robots.size(); ++i) {
    const Point p = robots[i];
    std::vector<std::size_t> others = order;
    std::sort(others.begin(), others.end(), [&](std::size_t a, std::size_t b) {
      return distance2(robots[a], p) < distance2(robots[b], p);
    });
    detail::HalfPlaneCell& cell_i = cells[i];
    cell_i.vertices = {{box.lo.x - pad, box.lo.y - pad}, {box.hi.x + pad, box.lo.y - pad},
                       {box.hi.x + pad, box.hi.y + pad}, {box.lo.x - pad, box.hi.y + pad}};
    for (std::size_t j : others) {
      const Point q = robots[j];
      const double d = distance(p, q);
      if (d <= tol) continue;
      if (d > 2.0 * detail::cell_reach(cell_i.vertices, p)) break;
      auto clipped = detail::clip_halfplane(cell_i.vertices, (p + q) * 0.5, q - p);
      if (clipped.size() != cell_i.vertices.size() ||
          !std::equal(clipped.begin(), clipped.end(), cell_i.vertices.begin())) {
        cell_i.vertices = std::move(clipped);
        cell_i.cut_by.push_back(j);
      }
      if (cell_i.vertices.empty()) break;
    }
    // robot/robot/robot: Voronoi vertices
    for (const Point& v : cell_i.vertices) search.consider(v, distance(v, p));
  }

  for (std::size_t i = 0; i < robots.size(); ++i) {
    const Point p = robots[i];
    const detail::HalfPlaneCell& cell_i = cells[i];
    if (cell_i.vertices.empty()) continue;
    const double reach = detail::cell_reach(cell_i.vertices, p);
    // no circle through p centered in its cell is larger than reach
    if (!(reach > search.best.radius)) continue;

    std::vector<std::size_t> near_lines;
    for (std::size_t k = 0; k < lines.size(); ++k) {
      if (std::abs(lines[k].side(p)) <= 2.0 * reach + tol) near_lines.push_back(k);
    }

    // robot/robot/edge: bisector point equidistant to an edge line
    for (std::size_t j : cell_i.cut_by) {
      const Point q = robots[j];
      const Point mid = (p + q) * 0.5;
      const Point u = perp(q - p) / distance(p, q);
      const double h2 = distance2(mid, p);
      for (std::size_t k : near_lines) {
        const double a = lines[k].side(mid);
        const double b = dot(lines[k].normal, u);
        for (double t : detail::quadratic_roots(1.0 - b * b, -2.0 * a * b, h2 - a * a)) {
          const Point c = mid + u * t;
          search.consider(c, std::sqrt(h2 + t * t));
        }
      }
    }

    // robot/edge/edge
    for (std::size_t x = 0; x < near_lines.size(); ++x) {
      for (std::size_t y = x + 1; y < near_lines.size(); ++y) {
        const auto& L1 = lines[near_lines[x]];
        const auto& L2 = lines[near_lines[y]];
        const double det = cross(L1.normal, L2.normal);
        if (std::abs(det) > 1e-12) {
          // normal_k . c + offset_k = r  =>  c = c0 + r v
          auto solve = [&](double r1, double r2) {
            return Point{(r1 * L2.normal.y - r2 * L1.normal.y) / det,
                         (L1.normal.x * r2 - L2.normal.x * r1) / det};
          };
          const Point c0 = solve(-L1.offset, -L2.offset);
          const Point v = solve(1.0, 1.0);
          const Point w = c0 - p;
          for (double r : detail::quadratic_roots(norm2(v) - 1.0, 2.0 * dot(w, v), norm2(w))) {
            if (r > 0.0) search.consider(c0 + v * r, r);
          }
        } else if (dot(L1.normal, L2.normal) < 0.0) {
          // facing parallel edges: centers on the midline
          const double width = L1.offset + L2.offset;
          if (width <= 0.0) continue;
          const double r = 0.5 * width;
          const Point m = L1.normal * (r - L1.offset);
          const Point u = perp(L1.normal);
          const Point w = m - p;
          for (double t : detail::quadratic_roots(1.0, 2.0 * dot(w, u), norm2(w) - r * r)) {
            search.consider(m + u * t, r);
          }
        }
      }
    }
  }

  // edge/edge/edge: incircle-type centers
  for (std::size_t a = 0; a < lines.size(); ++a) {
    for (std::size_t b = a + 1; b < lines.size(); ++b) {
      for (std::size_t c = b + 1; c < lines.size(); ++c) {
        const auto& La = lines[a];
        const auto& Lb = lines[b];
        const auto& Lc = lines[c];
        // [nx ny -1] [cx cy r]^T = -offset
        const double m[3][3] = {{La.normal.x, La.normal.y, -1.0},
                                {Lb.normal.x, Lb.normal.y, -1.0},
                                {Lc.normal.x, Lc.normal.y, -1.0}};
        const double rhs[3] = {-La.offset, -Lb.offset, -Lc.offset};
        auto det3 = [](const double k[3][3]) {
          return k[0][0] * (k[1][1] * k[2][2] - k[1][2] * k[2][1]) -
                 k[0][1] * (k[1][0] * k[2][2] - k[1][2] * k[2][0]) +
                 k[0][2] * (k[1][0] * k[2][1] - k[1][1] * k[2][0]);
        };
        const double d = det3(m);
        if (std::abs(d) <= 1e-12) continue;
        double sol[3];
        for (int col = 0; col < 3; ++col) {
          double k[3][3];
          for (int r = 0; r < 3; ++r) {
            for (int q = 0; q < 3; ++q) k[r][q] = q == col ? rhs[r] : m[r][q];
          }
          sol[col] = det3(k) / d;
        }
        if (sol[2] > 0.0) search.consider({sol[0], sol[1]}, sol[2]);
      }
    }
  }
  return search.best;
}

inline Circle largest_empty_circle(const Configuration& z, double tol = kGeomTol) {
  return largest_empty_circle(z, connectivity_boundary(z, tol), tol);
}

inline bool has_delta_hole(const Configuration& z, const BoundaryCycle& cycle, double delta,
                           double tol = kGeomTol) {
  if (!(delta > 0.0)) throw PreconditionError("has_delta_hole: delta must be positive");
  return 2.0 * largest_empty_circle(z, cycle, tol).radius >= delta - tol;
}

inline bool has_delta_hole(const Configuration& z, double delta, double tol = kGeomTol) {
  return has_delta_hole(z, connectivity_boundary(z, tol), delta, tol);
}

}  // namespace swarmwave

#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "swarmwave/geometry.hpp"

namespace swarmwave {

// Counterclockwise hull vertex indices starting at the lowest-leftmost point.
// Collinear non-extreme points and duplicates are dropped.
inline std::vector<std::size_t> convex_hull(std::span<const Point> pts, double tol = kGeomTol) {
  const std::size_t n = pts.size();
  if (n == 0) throw PreconditionError("convex_hull: no points");
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (pts[a].y != pts[b].y) return pts[a].y < pts[b].y;
    if (pts[a].x != pts[b].x) return pts[a].x < pts[b].x;
    return a < b;
  });
  // drop exact duplicates, keeping the lowest index
  std::vector<std::size_t> u;
  for (std::size_t i : idx) {
    if (u.empty() || distance(pts[u.back()], pts[i]) > tol) u.push_back(i);
  }
  if (u.size() <= 2) return u;
  // Andrew's monotone chain on (y, x) order
  auto turn = [&](std::size_t a, std::size_t b, std::size_t c) {
    const Point ab = pts[b] - pts[a];
    const Point ac = pts[c] - pts[a];
    const double scale = std::max(norm(ab), norm(ac));
    return cross(ab, ac) / (scale > 0.0 ? scale : 1.0);
  };
  std::vector<std::size_t> h;
  for (int pass = 0; pass < 2; ++pass) {
    const std::size_t base = h.size();
    for (std::size_t k = 0; k < u.size(); ++k) {
      const std::size_t i = pass == 0 ? u[k] : u[u.size() - 1 - k];
      while (h.size() >= base + 2 && turn(h[h.size() - 2], h.back(), i) <= tol) h.pop_back();
      h.push_back(i);
    }
    h.pop_back();
  }
  if (h.size() == 2 && h[0] == h[1]) h.pop_back();
  return h;
}

inline std::vector<std::size_t> convex_hull(const Configuration& z, double tol = kGeomTol) {
  return convex_hull(z.positions(), tol);
}

inline double hull_area(const Configuration& z) {
  if (z.empty()) return 0.0;
  std::vector<Point> poly;
  for (std::size_t i : convex_hull(z)) poly.push_back(z[i]);
  return signed_area(poly);
}

}  // namespace swarmwave

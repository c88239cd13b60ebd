#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <vector>

#include "swarmwave/geometry.hpp"

namespace swarmwave {

struct Circle {
  Point center;
  double radius = 0.0;

  bool contains(Point p, double tol = kGeomTol) const { return distance(p, center) <= radius + tol; }
};

namespace detail {

inline Circle circle_from(Point a, Point b) { return {(a + b) * 0.5, distance(a, b) * 0.5}; }

inline Circle circle_from(Point a, Point b, Point c) {
  const Point ab = b - a;
  const Point ac = c - a;
  const double den = 2.0 * cross(ab, ac);
  if (std::abs(den) <= 1e-300) {
    // collinear: the widest pair spans the circle
    Circle best = circle_from(a, b);
    for (Circle cand : {circle_from(a, c), circle_from(b, c)}) {
      if (cand.radius > best.radius) best = cand;
    }
    return best;
  }
  const Point off{(ac.y * norm2(ab) - ab.y * norm2(ac)) / den,
                  (ab.x * norm2(ac) - ac.x * norm2(ab)) / den};
  const Point center = a + off;
  return {center, std::max({distance(center, a), distance(center, b), distance(center, c)})};
}

inline bool covers(const Circle& c, Point p) {
  return distance(p, c.center) <= c.radius * (1.0 + 1e-12) + 1e-15;
}

}  // namespace detail

// Welzl's move-to-front algorithm on a seeded shuffle; the result does not depend on the seed.
inline Circle smallest_enclosing_circle(std::span<const Point> points, std::uint64_t seed = 0x5eed) {
  if (points.empty()) throw PreconditionError("smallest_enclosing_circle: no points");
  std::vector<Point> p(points.begin(), points.end());
  std::mt19937_64 rng(seed);
  std::shuffle(p.begin(), p.end(), rng);
  Circle c{p[0], 0.0};
  for (std::size_t i = 1; i < p.size(); ++i) {
    if (detail::covers(c, p[i])) continue;
    c = {p[i], 0.0};
    for (std::size_t j = 0; j < i; ++j) {
      if (detail::covers(c, p[j])) continue;
      c = detail::circle_from(p[i], p[j]);
      for (std::size_t k = 0; k < j; ++k) {
        if (detail::covers(c, p[k])) continue;
        c = detail::circle_from(p[i], p[j], p[k]);
      }
    }
  }
  return c;
}

inline Circle smallest_enclosing_circle(const Configuration& z, std::uint64_t seed = 0x5eed) {
  return smallest_enclosing_circle(z.positions(), seed);
}

}  // namespace swarmwave

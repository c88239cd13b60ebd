#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace swarmwave {

inline constexpr double kGeomTol = 1e-9;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input violates a documented precondition (disconnected swarm, non-convex boundary, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A geometric construction could not be carried out.
class GeometryError : public Error {
 public:
  using Error::Error;
};

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point operator-(Point a) { return {-a.x, -a.y}; }
  friend constexpr Point operator*(Point a, double s) { return {a.x * s, a.y * s}; }
  friend constexpr Point operator*(double s, Point a) { return {a.x * s, a.y * s}; }
  friend constexpr Point operator/(Point a, double s) { return {a.x / s, a.y / s}; }
  friend constexpr bool operator==(Point a, Point b) = default;
  Point& operator+=(Point o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  Point& operator-=(Point o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
};

inline constexpr double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline constexpr double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline constexpr double norm2(Point a) { return dot(a, a); }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double distance(Point a, Point b) { return norm(a - b); }
inline constexpr double distance2(Point a, Point b) { return norm2(a - b); }
// Positive when a, b, c turn counterclockwise.
inline constexpr double orient(Point a, Point b, Point c) { return cross(b - a, c - a); }
inline constexpr Point perp(Point a) { return {-a.y, a.x}; }
inline bool is_finite(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }

inline Point rotate(Point p, double angle, Point center = {}) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const Point d = p - center;
  return {center.x + c * d.x - s * d.y, center.y + s * d.x + c * d.y};
}

inline Point lerp(Point a, Point b, double t) { return a + (b - a) * t; }

// Distance from p to the closed segment [a, b].
inline double segment_distance(Point p, Point a, Point b) {
  const Point ab = b - a;
  const double len2 = norm2(ab);
  if (len2 == 0.0) return distance(p, a);
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return distance(p, a + ab * t);
}

// Intersection of the lines p + t*u and q + s*v; false when (nearly) parallel.
inline bool line_intersection(Point p, Point u, Point q, Point v, Point& out, double tol = 1e-12) {
  const double den = cross(u, v);
  if (std::abs(den) <= tol * norm(u) * norm(v)) return false;
  const double t = cross(q - p, v) / den;
  out = p + u * t;
  return true;
}

// Robot positions in a common global frame (robots themselves never see it).
class Configuration {
 public:
  Configuration() = default;
  explicit Configuration(std::vector<Point> positions) : positions_(std::move(positions)) {
    for (std::size_t i = 0; i < positions_.size(); ++i) {
      if (!is_finite(positions_[i])) {
        throw PreconditionError("configuration: robot " + std::to_string(i) +
                                " has a non-finite coordinate");
      }
    }
  }

  std::size_t size() const { return positions_.size(); }
  bool empty() const { return positions_.empty(); }
  const Point& operator[](std::size_t i) const { return positions_[i]; }
  Point& operator[](std::size_t i) { return positions_[i]; }
  std::span<const Point> positions() const { return positions_; }
  std::vector<Point>& mutable_positions() { return positions_; }
  auto begin() const { return positions_.begin(); }
  auto end() const { return positions_.end(); }

  friend bool operator==(const Configuration&, const Configuration&) = default;

 private:
  std::vector<Point> positions_;
};

inline void require_nonempty(const Configuration& z, const char* who) {
  if (z.empty()) throw PreconditionError(std::string(who) + ": configuration has no robots");
}

inline double max_abs_difference(const Configuration& a, const Configuration& b) {
  if (a.size() != b.size()) throw PreconditionError("max_abs_difference: size mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max({m, std::abs(a[i].x - b[i].x), std::abs(a[i].y - b[i].y)});
  }
  return m;
}

// Shoelace area, positive for counterclockwise vertex order.
inline double signed_area(std::span<const Point> poly) {
  const std::size_t m = poly.size();
  if (m < 3) return 0.0;
  double s = 0.0;
  for (std::size_t k = 0; k < m; ++k) s += cross(poly[k], poly[(k + 1) % m]);
  return 0.5 * s;
}

enum class Containment { Outside, OnBoundary, Inside };

// Points within tol of an edge count as OnBoundary.
inline Containment locate_in_polygon(Point p, std::span<const Point> poly, double tol = kGeomTol) {
  const std::size_t m = poly.size();
  if (m == 0) return Containment::Outside;
  for (std::size_t k = 0; k < m; ++k) {
    if (segment_distance(p, poly[k], poly[(k + 1) % m]) <= tol) return Containment::OnBoundary;
  }
  if (m < 3) return Containment::Outside;
  int winding = 0;
  for (std::size_t k = 0; k < m; ++k) {
    const Point a = poly[k];
    const Point b = poly[(k + 1) % m];
    if (a.y <= p.y) {
      if (b.y > p.y && orient(a, b, p) > 0) ++winding;
    } else if (b.y <= p.y && orient(a, b, p) < 0) {
      --winding;
    }
  }
  return winding != 0 ? Containment::Inside : Containment::Outside;
}

struct BoundingBox {
  Point lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  Point hi{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};

  void add(Point p) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
  }
  bool contains(Point p, double tol) const {
    return p.x >= lo.x - tol && p.x <= hi.x + tol && p.y >= lo.y - tol && p.y <= hi.y + tol;
  }
};

inline BoundingBox bounding_box(std::span<const Point> pts) {
  BoundingBox box;
  for (const Point& p : pts) box.add(p);
  return box;
}

}  // namespace swarmwave

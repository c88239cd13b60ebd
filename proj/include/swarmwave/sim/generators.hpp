#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "swarmwave/geometry.hpp"
#include "swarmwave/sim/scenario.hpp"

namespace swarmwave {

enum class GridShape { Square, Triangle, Hexagon };

inline GridShape parse_grid_shape(const std::string& s) {
  if (s == "square") return GridShape::Square;
  if (s == "triangle") return GridShape::Triangle;
  if (s == "hexagon") return GridShape::Hexagon;
  throw PreconditionError("unknown grid shape '" + s + "' (expected square, triangle or hexagon)");
}

inline const char* to_string(GridShape s) {
  switch (s) {
    case GridShape::Square: return "square";
    case GridShape::Triangle: return "triangle";
    case GridShape::Hexagon: return "hexagon";
  }
  return "?";
}

// Lattice points filling the shape, centered on the origin. side_count robots per side.
inline Configuration grid_polygon(GridShape shape, std::size_t side_count, double spacing) {
  if (side_count == 0) throw PreconditionError("grid_polygon: side_count must be at least 1");
  if (!(spacing > 0.0 && spacing < 1.0)) throw PreconditionError("grid_polygon: spacing must lie in (0, 1)");
  const int k = static_cast<int>(side_count);
  const double h = std::sqrt(3.0) / 2.0;
  std::vector<Point> pts;
  switch (shape) {
    case GridShape::Square:
      for (int r = 0; r < k; ++r) {
        for (int c = 0; c < k; ++c) pts.push_back({(c - 0.5 * (k - 1)) * spacing, (r - 0.5 * (k - 1)) * spacing});
      }
      break;
    case GridShape::Triangle: {
      // centroid sits a third of the way up
      const double cy = (k - 1) * h * spacing / 3.0;
      for (int r = 0; r < k; ++r) {
        for (int i = 0; i < k - r; ++i) pts.push_back({(i - 0.5 * (k - 1 - r)) * spacing, r * h * spacing - cy});
      }
      break;
    }
    case GridShape::Hexagon:
      for (int r = -(k - 1); r <= k - 1; ++r) {
        for (int q = -(k - 1); q <= k - 1; ++q) {
          if (std::abs(q + r) > k - 1) continue;
          pts.push_back({(q + 0.5 * r) * spacing, r * h * spacing});
        }
      }
      break;
  }
  return Configuration(std::move(pts));
}

// Base points copied under the m rotations about the origin. Each base point gets one
// random offset, rotated along with it, so the symmetry stays exact.
inline Configuration m_fold(std::size_t m, const std::vector<Point>& base, double jitter, std::uint64_t seed) {
  if (m == 0) throw PreconditionError("m_fold: m must be at least 1");
  if (base.empty()) throw PreconditionError("m_fold: no base points");
  if (!(jitter >= 0.0)) throw PreconditionError("m_fold: jitter must be non-negative");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-jitter, jitter);
  std::vector<Point> moved;
  for (const Point& b : base) {
    const Point p = jitter > 0.0 ? b + Point{u(rng), u(rng)} : b;
    if (m > 1 && norm(p) <= kGeomTol) {
      throw PreconditionError("m_fold: a base point at the center forces symmetricity 1");
    }
    moved.push_back(p);
  }
  std::vector<Point> pts;
  for (std::size_t j = 0; j < m; ++j) {
    const double a = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(m);
    for (const Point& p : moved) pts.push_back(j == 0 ? p : rotate(p, a));
  }
  return Configuration(std::move(pts));
}

// Rectangular ring around an empty middle with two robots inside.
inline Configuration figure1a_positions(double width = 2.5, double height = 1.5, double spacing = 0.25,
                                        double inner_offset = 0.2) {
  std::vector<Point> pts;
  const int nx = static_cast<int>(std::lround(width / spacing));
  const int ny = static_cast<int>(std::lround(height / spacing));
  const double x0 = -0.5 * width, y0 = -0.5 * height;
  for (int i = 0; i < nx; ++i) pts.push_back({x0 + i * spacing, y0});
  for (int j = 0; j < ny; ++j) pts.push_back({-x0, y0 + j * spacing});
  for (int i = 0; i < nx; ++i) pts.push_back({-x0 - i * spacing, -y0});
  for (int j = 0; j < ny; ++j) pts.push_back({x0, -y0 - j * spacing});
  pts.push_back({-inner_offset, 0.0});
  pts.push_back({inner_offset, 0.0});
  return Configuration(std::move(pts));
}

// Two square clusters side by side on one lattice of spacing 1/sqrt(2).
inline Configuration figure1b_positions(std::size_t cluster_side = 4) {
  const double s = 1.0 / std::numbers::sqrt2;
  const int rows = static_cast<int>(cluster_side);
  const int cols = 2 * rows;
  std::vector<Point> pts;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) pts.push_back({(c - 0.5 * (cols - 1)) * s, (r - 0.5 * (rows - 1)) * s});
  }
  return Configuration(std::move(pts));
}

inline Scenario make_scenario(std::string name, Protocol protocol, Configuration positions) {
  Scenario sc;
  sc.name = std::move(name);
  sc.protocol = protocol;
  sc.positions = std::move(positions);
  return sc;
}

inline Scenario figure1a(Protocol protocol = Protocol::Gta) {
  Scenario sc = make_scenario("figure1a", protocol, figure1a_positions());
  sc.qualitative = true;
  sc.max_rounds = 20000;
  sc.audits = {"symmetry_preserved", "collision_free", "hull_area_monotone"};
  return sc;
}

inline Scenario figure1b(Protocol protocol = Protocol::Gta) {
  Scenario sc = make_scenario("figure1b", protocol, figure1b_positions());
  sc.qualitative = true;
  sc.max_rounds = 2000;
  sc.audits = {"symmetry_preserved", "collision_free"};
  return sc;
}

// Starts that meet every wave precondition: connected, convex boundary, no 1-hole.
inline std::vector<Scenario> valid_wave_suite() {
  std::vector<Scenario> out;
  for (std::size_t k = 5; k <= 15; ++k) {
    out.push_back(make_scenario("square" + std::to_string(k), Protocol::Wave,
                                grid_polygon(GridShape::Square, k, 0.7)));
  }
  for (std::size_t k = 3; k <= 6; ++k) {
    out.push_back(make_scenario("hexagon" + std::to_string(k), Protocol::Wave,
                                grid_polygon(GridShape::Hexagon, k, 0.8)));
  }
  for (auto& sc : out) sc.audits = {"all"};
  return out;
}

}  // namespace swarmwave

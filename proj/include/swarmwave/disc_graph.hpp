#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <unordered_map>
#include <vector>

#include "swarmwave/geometry.hpp"

namespace swarmwave {

// Uniform bucket grid over a fixed point set for radius and nearest queries.
class PointGrid {
 public:
  PointGrid(std::span<const Point> pts, double cell) : pts_(pts.begin(), pts.end()), cell_(cell) {
    if (!(cell_ > 0.0)) throw PreconditionError("PointGrid: cell size must be positive");
    for (std::size_t i = 0; i < pts_.size(); ++i) buckets_[cell_of(pts_[i])].push_back(i);
  }

  // Indices j with |p - pts[j]| <= r, ascending.
  std::vector<std::size_t> within(Point p, double r) const {
    std::vector<std::size_t> out;
    const auto lo = cell_of(p - Point{r, r});
    const auto hi = cell_of(p + Point{r, r});
    const double r2 = r * r;
    for (std::int64_t cx = lo.first; cx <= hi.first; ++cx) {
      for (std::int64_t cy = lo.second; cy <= hi.second; ++cy) {
        auto it = buckets_.find({cx, cy});
        if (it == buckets_.end()) continue;
        for (std::size_t j : it->second) {
          if (distance2(p, pts_[j]) <= r2) out.push_back(j);
        }
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  // Distance to the nearest stored point (infinity when empty).
  double nearest_distance(Point p) const {
    if (pts_.empty()) return std::numeric_limits<double>::infinity();
    const auto c = cell_of(p);
    double best2 = std::numeric_limits<double>::infinity();
    for (std::int64_t ring = 0;; ++ring) {
      for (std::int64_t cx = c.first - ring; cx <= c.first + ring; ++cx) {
        for (std::int64_t cy = c.second - ring; cy <= c.second + ring; ++cy) {
          if (std::max(std::abs(cx - c.first), std::abs(cy - c.second)) != ring) continue;
          auto it = buckets_.find({cx, cy});
          if (it == buckets_.end()) continue;
          for (std::size_t j : it->second) best2 = std::min(best2, distance2(p, pts_[j]));
        }
      }
      // every point outside the scanned rings is at least ring * cell away
      const double reach = static_cast<double>(ring) * cell_;
      if (best2 <= reach * reach) break;
      if (ring >= 64) {
        for (const Point& q : pts_) best2 = std::min(best2, distance2(p, q));
        break;
      }
    }
    return std::sqrt(best2);
  }

 private:
  std::pair<std::int64_t, std::int64_t> cell_of(Point p) const {
    return {static_cast<std::int64_t>(std::floor(p.x / cell_)),
            static_cast<std::int64_t>(std::floor(p.y / cell_))};
  }
  using Cell = std::pair<std::int64_t, std::int64_t>;
  struct CellHash {
    std::size_t operator()(const Cell& c) const {
      return static_cast<std::size_t>(static_cast<std::uint64_t>(c.first) * 0x9E3779B97F4A7C15ULL ^
                                      static_cast<std::uint64_t>(c.second));
    }
  };

  std::vector<Point> pts_;
  double cell_;
  std::unordered_map<Cell, std::vector<std::size_t>, CellHash> buckets_;
};

struct DiscGraph {
  std::size_t n = 0;
  double radius = 1.0;
  std::vector<std::vector<std::size_t>> adjacency;  // sorted neighbor lists

  bool adjacent(std::size_t i, std::size_t j) const {
    return std::binary_search(adjacency[i].begin(), adjacency[i].end(), j);
  }
  std::size_t edge_count() const {
    std::size_t s = 0;
    for (const auto& a : adjacency) s += a.size();
    return s / 2;
  }
};

inline DiscGraph disc_graph(const Configuration& z, double radius, double tol = kGeomTol) {
  if (!(radius > 0.0)) throw PreconditionError("disc_graph: radius must be positive");
  DiscGraph g;
  g.n = z.size();
  g.radius = radius;
  g.adjacency.resize(g.n);
  if (g.n == 0) return g;
  PointGrid grid(z.positions(), radius);
  for (std::size_t i = 0; i < g.n; ++i) {
    for (std::size_t j : grid.within(z[i], radius + tol)) {
      if (j != i) g.adjacency[i].push_back(j);
    }
  }
  return g;
}

// Component label per vertex, labels numbered in order of smallest member.
inline std::vector<std::size_t> connected_components(const DiscGraph& g) {
  constexpr auto kUnset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> label(g.n, kUnset);
  std::size_t next = 0;
  for (std::size_t s = 0; s < g.n; ++s) {
    if (label[s] != kUnset) continue;
    std::queue<std::size_t> q;
    q.push(s);
    label[s] = next;
    while (!q.empty()) {
      const std::size_t u = q.front();
      q.pop();
      for (std::size_t v : g.adjacency[u]) {
        if (label[v] == kUnset) {
          label[v] = next;
          q.push(v);
        }
      }
    }
    ++next;
  }
  return label;
}

inline std::size_t component_count(const DiscGraph& g) {
  const auto label = connected_components(g);
  return label.empty() ? 0 : *std::max_element(label.begin(), label.end()) + 1;
}

inline bool is_connected(const DiscGraph& g) { return component_count(g) <= 1; }

inline double diameter(const Configuration& z) {
  double best2 = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    for (std::size_t j = i + 1; j < z.size(); ++j) best2 = std::max(best2, distance2(z[i], z[j]));
  }
  return std::sqrt(best2);
}

inline double min_pairwise_distance(const Configuration& z) {
  double best2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < z.size(); ++i) {
    for (std::size_t j = i + 1; j < z.size(); ++j) best2 = std::min(best2, distance2(z[i], z[j]));
  }
  return std::sqrt(best2);
}

inline bool is_near_gathering(const Configuration& z, double range, double tol = kGeomTol) {
  if (!(range > 0.0)) throw PreconditionError("is_near_gathering: range must be positive");
  return diameter(z) <= range + tol;
}

}  // namespace swarmwave

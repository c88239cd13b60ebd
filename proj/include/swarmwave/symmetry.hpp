#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <numeric>
#include <string>
#include <unordered_map>
#include <vector>

#include "swarmwave/enclosing_circle.hpp"
#include "swarmwave/geometry.hpp"

namespace swarmwave {

inline constexpr double kSymmetryTol = 1e-6;

struct Rotation {
  double angle = 0.0;  // [0, 2pi)
  Point center;

  Point apply(Point p) const { return rotate(p, angle, center); }
};

inline double normalize_angle(double a) {
  const double two_pi = 2.0 * std::numbers::pi;
  a = std::fmod(a, two_pi);
  if (a < 0.0) a += two_pi;
  if (a >= two_pi) a -= two_pi;
  return a;
}

class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<std::size_t> map) : map_(std::move(map)) {
    std::vector<bool> seen(map_.size(), false);
    for (std::size_t v : map_) {
      if (v >= map_.size() || seen[v]) throw PreconditionError("Permutation: mapping is not a bijection");
      seen[v] = true;
    }
  }
  static Permutation identity(std::size_t n) {
    std::vector<std::size_t> m(n);
    std::iota(m.begin(), m.end(), 0);
    return Permutation(std::move(m));
  }

  std::size_t size() const { return map_.size(); }
  std::size_t operator[](std::size_t i) const { return map_[i]; }
  const std::vector<std::size_t>& mapping() const { return map_; }
  bool is_identity() const {
    for (std::size_t i = 0; i < map_.size(); ++i) {
      if (map_[i] != i) return false;
    }
    return true;
  }
  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<std::size_t> map_;
};

// The block-matrix product "permute after rotate": output_i = rotation(input_{permutation[i]}).
struct SymmetryElement {
  Rotation rotation;
  Permutation permutation;
};

// Composite element acting as first `a`, then `b`.
inline SymmetryElement compose(const SymmetryElement& b, const SymmetryElement& a) {
  if (a.permutation.size() != b.permutation.size()) throw PreconditionError("compose: size mismatch");
  std::vector<std::size_t> m(a.permutation.size());
  // (B (A z))_i = rb((A z)_{kb(i)}) = rb(ra(z_{ka(kb(i))}))
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = a.permutation[b.permutation[i]];
  return {{normalize_angle(a.rotation.angle + b.rotation.angle), a.rotation.center},
          Permutation(std::move(m))};
}

struct SymmetryGroup {
  Point center;
  std::vector<SymmetryElement> elements;  // sorted by angle, identity first

  std::size_t order() const { return elements.size(); }
};

inline Configuration apply_symmetry(const SymmetryElement& e, const Configuration& z) {
  if (e.permutation.size() != z.size()) {
    throw PreconditionError("apply_symmetry: permutation size " + std::to_string(e.permutation.size()) +
                            " does not match configuration size " + std::to_string(z.size()));
  }
  std::vector<Point> out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = e.rotation.apply(z[e.permutation[i]]);
  return Configuration(std::move(out));
}

namespace detail {

class ToleranceHash {
 public:
  ToleranceHash(std::span<const Point> pts, double tol) : pts_(pts), cell_(std::max(tol, 1e-300) * 4.0) {
    for (std::size_t i = 0; i < pts.size(); ++i) cells_[{coord(pts[i].x), coord(pts[i].y)}].push_back(i);
  }

  // All indices within tol of p, ascending.
  std::vector<std::size_t> near(Point p, double tol) const {
    std::vector<std::size_t> out;
    const std::int64_t cx = coord(p.x);
    const std::int64_t cy = coord(p.y);
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        auto it = cells_.find({cx + dx, cy + dy});
        if (it == cells_.end()) continue;
        for (std::size_t j : it->second) {
          if (distance(pts_[j], p) <= tol) out.push_back(j);
        }
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  std::int64_t coord(double v) const { return static_cast<std::int64_t>(std::floor(v / cell_)); }
  using Cell = std::pair<std::int64_t, std::int64_t>;
  struct CellHash {
    std::size_t operator()(const Cell& c) const {
      return static_cast<std::size_t>(static_cast<std::uint64_t>(c.first) * 0x9E3779B97F4A7C15ULL ^
                                      static_cast<std::uint64_t>(c.second));
    }
  };

  std::span<const Point> pts_;
  double cell_;
  std::unordered_map<Cell, std::vector<std::size_t>, CellHash> cells_;
};

// source[i] for each target i such that rot(z[source[i]]) ~ z[i]; empty when the rotation fails.
// Throws when two robots fall within tol of one rotated position.
inline std::vector<std::size_t> match_rotation(std::span<const Point> pts, const ToleranceHash& hash,
                                               const Rotation& rot, double tol, bool strict) {
  const std::size_t n = pts.size();
  std::vector<std::size_t> source(n, n);
  std::vector<std::vector<std::size_t>> all_hits(n);
  bool clash = false;
  for (std::size_t j = 0; j < n; ++j) {
    auto hits = hash.near(rot.apply(pts[j]), tol);
    if (hits.empty()) return {};
    if (hits.size() > 1 && strict) {
      throw GeometryError("detect_symmetries: ambiguous matching, robots " + std::to_string(hits[0]) +
                          " and " + std::to_string(hits[1]) + " are both within tolerance of the image of robot " +
                          std::to_string(j));
    }
    std::size_t pick = hits[0];
    for (std::size_t h : hits) {
      if (distance(pts[h], rot.apply(pts[j])) < distance(pts[pick], rot.apply(pts[j]))) pick = h;
    }
    if (source[pick] != n) clash = true;
    source[pick] = j;
    all_hits[j] = std::move(hits);
  }
  if (!clash) return source;
  // stacked robots are interchangeable: look for any bijection among the hits
  std::fill(source.begin(), source.end(), n);
  std::vector<char> seen(n);
  std::function<bool(std::size_t)> augment = [&](std::size_t j) {
    for (std::size_t h : all_hits[j]) {
      if (seen[h]) continue;
      seen[h] = 1;
      if (source[h] == n || augment(source[h])) {
        source[h] = j;
        return true;
      }
    }
    return false;
  };
  for (std::size_t j = 0; j < n; ++j) {
    std::fill(seen.begin(), seen.end(), 0);
    if (!augment(j)) return {};
  }
  return source;
}

struct RadiusClasses {
  Point center;
  bool robot_at_center = false;
  std::size_t gcd = 0;  // gcd of class sizes over robots off the center
};

inline RadiusClasses radius_classes(std::span<const Point> pts, double tol) {
  RadiusClasses rc;
  rc.center = smallest_enclosing_circle(pts).center;
  std::vector<double> radii;
  for (const Point& p : pts) {
    const double r = distance(p, rc.center);
    if (r <= tol) {
      rc.robot_at_center = true;
    } else {
      radii.push_back(r);
    }
  }
  std::sort(radii.begin(), radii.end());
  std::size_t run = 0;
  for (std::size_t k = 0; k < radii.size(); ++k) {
    ++run;
    if (k + 1 == radii.size() || radii[k + 1] - radii[k] > tol) {
      rc.gcd = std::gcd(rc.gcd, run);
      run = 0;
    }
  }
  return rc;
}

// Largest m such that rotation by 2pi/m about the center maps the set onto itself.
inline std::size_t rotation_order(std::span<const Point> pts, const RadiusClasses& rc,
                                  const ToleranceHash& hash, double tol, bool strict) {
  for (std::size_t m = rc.gcd; m >= 2; --m) {
    if (rc.gcd % m != 0) continue;
    const Rotation rot{2.0 * std::numbers::pi / static_cast<double>(m), rc.center};
    if (!match_rotation(pts, hash, rot, tol, strict).empty()) return m;
  }
  return 1;
}

}  // namespace detail

inline std::size_t symmetricity(std::span<const Point> pts, double tol = kSymmetryTol) {
  if (pts.empty()) throw PreconditionError("symmetricity: no points");
  const auto rc = detail::radius_classes(pts, tol);
  if (rc.robot_at_center) return 1;
  const detail::ToleranceHash hash(pts, tol);
  return detail::rotation_order(pts, rc, hash, tol, false);
}

inline std::size_t symmetricity(const Configuration& z, double tol = kSymmetryTol) {
  return symmetricity(z.positions(), tol);
}

// Rotations about the enclosing-circle center that fix the configuration, with the
// induced reindexing. A robot at the center is fixed by every rotation, so the group
// can be larger than the symmetricity in that case.
inline SymmetryGroup detect_symmetries(const Configuration& z, double tol = kSymmetryTol) {
  require_nonempty(z, "detect_symmetries");
  const auto pts = z.positions();
  const auto rc = detail::radius_classes(pts, tol);
  const detail::ToleranceHash hash(pts, tol);
  SymmetryGroup g;
  g.center = rc.center;
  const std::size_t m = detail::rotation_order(pts, rc, hash, tol, true);
  for (std::size_t j = 0; j < m; ++j) {
    const Rotation rot{2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(m), rc.center};
    auto source = j == 0 ? Permutation::identity(z.size()).mapping()
                         : detail::match_rotation(pts, hash, rot, tol, true);
    if (source.empty()) throw GeometryError("detect_symmetries: rotation group is not closed");
    g.elements.push_back({rot, Permutation(std::move(source))});
  }
  return g;
}

struct SymmetryReport {
  std::size_t order_before = 1;
  std::size_t order_after = 1;
  std::size_t gained = 0;
  std::size_t lost = 0;
  bool preserved = true;
};

inline SymmetryReport symmetry_preserved(const Configuration& before, const Configuration& after,
                                         double tol = kSymmetryTol) {
  if (before.size() != after.size()) throw PreconditionError("symmetry_preserved: size mismatch");
  SymmetryReport r;
  r.order_before = detect_symmetries(before, tol).order();
  r.order_after = detect_symmetries(after, tol).order();
  // angle sets are the multiples of 2pi/order; shared angles correspond to gcd(order)
  const std::size_t common = std::gcd(r.order_before, r.order_after);
  r.gained = r.order_after - common;
  r.lost = r.order_before - common;
  r.preserved = r.gained == 0 && r.lost == 0;
  return r;
}

// Max robot displacement between step(M z) and M step(z).
template <class Step>
double check_equivariance(Step&& step, const Configuration& z, const SymmetryElement& e) {
  const Configuration lhs = step(apply_symmetry(e, z));
  const Configuration rhs = apply_symmetry(e, step(z));
  double worst = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) worst = std::max(worst, distance(lhs[i], rhs[i]));
  return worst;
}

}  // namespace swarmwave

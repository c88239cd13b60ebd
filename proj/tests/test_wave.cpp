#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

#include "support/oracles.hpp"
#include "support/wave_oracles.hpp"
#include "swarmwave/boundary.hpp"
#include "swarmwave/disc_graph.hpp"
#include "swarmwave/empty_circle.hpp"
#include "swarmwave/hull.hpp"
#include "swarmwave/symmetry.hpp"
#include "swarmwave/wave/egtm.hpp"
#include "swarmwave/wave/local.hpp"
#include "swarmwave/wave/protocol.hpp"
#include "swarmwave/wave/segment.hpp"

using namespace swarmwave;

namespace {

Configuration cfg(std::vector<Point> p) { return Configuration(std::move(p)); }

WaveParams no_hole_check(double eps = 0.3) {
  WaveParams p;
  p.epsilon = eps;
  p.check_holes = false;
  return p;
}

// previous cycle from a dense solve of the circulant system
std::vector<Point> dense_invert(const std::vector<Point>& next, double eps) {
  const int m = static_cast<int>(next.size());
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(m, m);
  Eigen::VectorXd bx(m), by(m);
  for (int k = 0; k < m; ++k) {
    M(k, k) += 1 - eps;
    M(k, (k + m - 1) % m) += eps / 2;
    M(k, (k + 1) % m) += eps / 2;
    bx(k) = next[k].x;
    by(k) = next[k].y;
  }
  const Eigen::VectorXd x = M.fullPivLu().solve(bx);
  const Eigen::VectorXd y = M.fullPivLu().solve(by);
  std::vector<Point> out;
  for (int k = 0; k < m; ++k) out.push_back({x(k), y(k)});
  return out;
}

bool same_multiset(std::vector<Point> a, std::vector<Point> b, double tol) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (const Point& p : a) {
    bool found = false;
    for (std::size_t j = 0; j < b.size() && !found; ++j) {
      if (!used[j] && distance(p, b[j]) <= tol) {
        used[j] = true;
        found = true;
      }
    }
    if (!found) return false;
  }
  return true;
}

// ring of a rows x cols grid, counterclockwise from the lower-left corner
std::vector<std::size_t> grid_ring(std::size_t rows, std::size_t cols) {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c + 1 < cols; ++c) out.push_back(c);
  for (std::size_t r = 0; r + 1 < rows; ++r) out.push_back(r * cols + cols - 1);
  for (std::size_t c = cols - 1; c > 0; --c) out.push_back((rows - 1) * cols + c);
  for (std::size_t r = rows - 1; r > 0; --r) out.push_back(r * cols);
  return out;
}

std::vector<Point> filled_hexagon(std::uint64_t seed, double radius = 2.7) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ph(0, 1);
  return oracle::filled_polygon(oracle::regular_polygon(6, radius, ph(rng)), 0.9, 0.6, 0.3, 0.05, rng);
}

std::vector<Point> filled_random_polygon(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ang(0, 2 * std::numbers::pi), rad(2.4, 3.2);
  std::vector<double> angles;
  for (int k = 0; k < 7; ++k) angles.push_back(ang(rng));
  std::sort(angles.begin(), angles.end());
  std::vector<Point> corners;
  for (double a : angles) corners.push_back({rad(rng) * std::cos(a), rad(rng) * std::sin(a)});
  return oracle::filled_polygon(corners, 0.85, 0.6, 0.3, 0.05, rng);
}

// valid start: connected, convex boundary, no 1-hole
bool valid_start(const Configuration& z) {
  if (!is_connected(disc_graph(z, 1.0))) return false;
  const auto c = connectivity_boundary(z);
  if (c.degenerate || !is_convex_cycle(c)) return false;
  return !has_delta_hole(z, c, 1.0);
}

}  // namespace

// ---------------------------------------------------------------- ε-go-to-the-middle

TEST(EgtmStep, Examples) {
  const std::vector<Point> line{{0, 0}, {1, 0}, {2, 0}, {1, 1}};
  EXPECT_EQ(egtm_step(line, 0.3)[1], (Point{1, 0}));
  const std::vector<Point> tri{{0, 0}, {1, 0}, {1, 1}};
  const Point moved = egtm_step(tri, 0.4)[1];
  EXPECT_NEAR(moved.x, 0.8, 1e-15);
  EXPECT_NEAR(moved.y, 0.2, 1e-15);
}

TEST(EgtmStep, RegularPolygonScales) {
  for (std::size_t m = 3; m <= 12; ++m) {
    const Point c{0.4, -1.1};
    const auto p = oracle::regular_polygon(m, 1.3, 0.2, c);
    const double eps = 0.35;
    const double factor = 1 - eps * (1 - std::cos(2 * std::numbers::pi / m));
    const auto q = egtm_step(p, eps);
    for (std::size_t k = 0; k < m; ++k) {
      EXPECT_NEAR(q[k].x, c.x + factor * (p[k].x - c.x), 1e-12);
      EXPECT_NEAR(q[k].y, c.y + factor * (p[k].y - c.y), 1e-12);
    }
  }
}

TEST(EgtmStep, Errors) {
  EXPECT_THROW(egtm_step(std::vector<Point>{}, 0.3), PreconditionError);
  EXPECT_THROW(egtm_step(std::vector<Point>{{0, 0}, {1, 0}, {0, 1}}, 0.5), PreconditionError);
  EXPECT_THROW(egtm_step(std::vector<Point>{{0, 0}, {1, 0}, {0, 1}}, -0.1), PreconditionError);
}

TEST(EgtmInvert, ZeroEpsilonIsIdentity) {
  std::mt19937_64 rng(1);
  const auto p = oracle::random_points(rng, 9, -2, 2);
  EXPECT_EQ(egtm_invert(p, 0.0), p);
}

TEST(EgtmInvert, RoundTripRandomCycles) {
  std::mt19937_64 rng(2);
  for (std::size_t m = 1; m <= 30; ++m) {
    const auto p = oracle::random_points(rng, m, -3, 3);
    for (double eps : {0.05, 0.3, 0.49}) {
      const auto back = egtm_invert(egtm_step(p, eps), eps);
      for (std::size_t k = 0; k < m; ++k) EXPECT_LE(distance(back[k], p[k]), 1e-9) << m << " " << eps;
    }
  }
}

TEST(EgtmInvert, MatchesDenseSolve) {
  std::mt19937_64 rng(3);
  for (std::size_t m = 1; m <= 40; m += 3) {
    const auto p = oracle::random_points(rng, m, -3, 3);
    const auto fast = egtm_invert(p, 0.37);
    const auto dense = dense_invert(p, 0.37);
    for (std::size_t k = 0; k < m; ++k) EXPECT_LE(distance(fast[k], dense[k]), 1e-10) << m;
  }
}

TEST(EgtmInvert, ScaledPolygonRecoversOriginal) {
  const double eps = 0.3;
  for (std::size_t m = 3; m <= 10; ++m) {
    const auto p = oracle::regular_polygon(m, 2.0, 0.1);
    const double factor = 1 - eps * (1 - std::cos(2 * std::numbers::pi / m));
    const auto scaled = oracle::regular_polygon(m, 2.0 * factor, 0.1);
    const auto back = egtm_invert(scaled, eps);
    for (std::size_t k = 0; k < m; ++k) EXPECT_LE(distance(back[k], p[k]), 1e-12);
  }
}

TEST(EgtmInvert, CycleOverloadsKeepIndices) {
  const auto z = cfg(oracle::regular_polygon(5, 0.8));
  const auto c = connectivity_boundary(z);
  const auto next = egtm_step(c, 0.3);
  EXPECT_EQ(next.indices, c.indices);
  const auto back = egtm_invert(next, 0.3);
  for (std::size_t k = 0; k < c.size(); ++k) EXPECT_LE(distance(back.positions[k], c.positions[k]), 1e-12);
}

TEST(EgtmProperty, ConvexityAndContainment) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ang(0, 2 * std::numbers::pi), rad(1, 3);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> a;
    for (int k = 0; k < 3 + rep % 9; ++k) a.push_back(ang(rng));
    std::sort(a.begin(), a.end());
    std::vector<Point> poly;
    for (double t : a) poly.push_back({rad(rng) * std::cos(t), rad(rng) * std::sin(t)});
    // convex hull of the samples, counterclockwise
    std::vector<Point> hull;
    for (std::size_t i : convex_hull(poly)) hull.push_back(poly[i]);
    if (hull.size() < 3) continue;
    const auto next = egtm_step(hull, 0.3);
    BoundaryCycle c;
    for (std::size_t k = 0; k < next.size(); ++k) c.indices.push_back(k);
    c.positions = next;
    c.outline = next;
    EXPECT_TRUE(is_convex_cycle(c)) << rep;
    for (const Point& p : next) EXPECT_NE(locate_in_polygon(p, hull), Containment::Outside);
  }
}

// ---------------------------------------------------------------- regions and segments

TEST(WaveRegions, SquareGivesCongruentTrapezoids) {
  const std::vector<Point> sq{{0, 0}, {0.9, 0}, {0.9, 0.9}, {0, 0.9}};
  const auto r = wave_regions(sq, 0.3);
  ASSERT_EQ(r.old_ring.size(), 4u);
  // corner (0,0) moves to 0.3 * (0.45, 0.45)
  const double in = 0.135;
  const double inner_side = 0.9 - 2 * in;
  const double trapezoid = 0.5 * (0.9 + inner_side) * in;
  for (const auto& s : r.old_ring) {
    const auto q = s.corners();
    EXPECT_NEAR(oracle::shoelace({q.begin(), q.end()}), trapezoid, 1e-12);
    EXPECT_NEAR(distance(s.a, s.b), 0.9, 1e-12);
    EXPECT_NEAR(distance(s.d, s.c), inner_side, 1e-12);
    EXPECT_EQ(s.degeneracy, Degeneracy::NonDegenerate);
  }
  // the next ring is the same picture scaled by 0.7 about the center
  const double in2 = 0.7 * in;
  for (const auto& s : r.new_ring) {
    const auto q = s.corners();
    EXPECT_NEAR(oracle::shoelace({q.begin(), q.end()}), 0.5 * (inner_side + 0.7 * inner_side) * in2, 1e-12);
  }
}

TEST(WaveRegions, HexagonRingAreaMatchesShoelace) {
  const auto hex = oracle::regular_polygon(6, 0.9, 0.3, {1, 2});
  const auto r = wave_regions(hex, 0.3);
  double ring = 0;
  for (const auto& s : r.old_ring) {
    const auto q = s.corners();
    ring += oracle::shoelace({q.begin(), q.end()});
  }
  EXPECT_NEAR(ring, oracle::shoelace(hex) - oracle::shoelace(r.next), 1e-12);
  for (std::size_t k = 1; k < 6; ++k) {
    EXPECT_NEAR(distance(r.old_ring[k].a, r.old_ring[k].c), distance(r.old_ring[0].a, r.old_ring[0].c), 1e-12);
  }
}

TEST(WaveRegions, CollinearRobotsDegenerateThenRecover) {
  const std::vector<Point> b{{0, 0}, {0.5, 0}, {1, 0}, {1, 1}, {0, 1}};
  const auto r = wave_regions(b, 0.3);
  EXPECT_EQ(r.old_ring[0].degeneracy, Degeneracy::Partial);
  EXPECT_EQ(r.old_ring[1].degeneracy, Degeneracy::Partial);
  EXPECT_EQ(r.new_ring[0].degeneracy, Degeneracy::NonDegenerate);
  EXPECT_EQ(r.new_ring[1].degeneracy, Degeneracy::NonDegenerate);
}

TEST(WaveRegions, RejectsNonConvexCycle) {
  const std::vector<Point> dent{{0, 0}, {1, 0}, {0.5, 0.2}, {1, 1}, {0, 1}};
  EXPECT_THROW(wave_regions(dent, 0.3), PreconditionError);
}

TEST(SegmentDegeneracy, Examples) {
  EXPECT_EQ(segment_degeneracy({0, 0}, {2, 0}, {1.5, 1}, {0.5, 1}), Degeneracy::NonDegenerate);
  EXPECT_EQ(segment_degeneracy({0, 0}, {1, 0}, {2, 0}, {0.5, 1}), Degeneracy::Partial);
  EXPECT_EQ(segment_degeneracy({0, 0}, {1, 0}, {3, 0}, {2, 0}), Degeneracy::Full);
}

TEST(SegCoords, RectangleMidpoint) {
  const auto s = make_segment(0, {0, 0}, {2, 0}, {2, 1}, {0, 1});
  const auto c = to_seg_coords(s, {1, 0.5});
  EXPECT_NEAR(c.depth, 0.5, 1e-12);
  EXPECT_NEAR(c.span, 0.5, 1e-12);
  const auto a = to_seg_coords(s, s.a);
  EXPECT_NEAR(a.depth, 0, 1e-12);
  EXPECT_NEAR(a.span, 0, 1e-12);
  const auto cc = to_seg_coords(s, s.c);
  EXPECT_NEAR(cc.depth, 1, 1e-12);
  EXPECT_NEAR(cc.span, 1, 1e-12);
}

TEST(SegCoords, RandomConvexRoundTrip) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0, 1), ang(0, 2 * std::numbers::pi);
  for (int rep = 0; rep < 20; ++rep) {
    std::array<double, 4> a{};
    for (double& t : a) t = ang(rng);
    std::sort(a.begin(), a.end());
    std::array<Point, 4> q;
    for (int i = 0; i < 4; ++i) q[i] = {std::cos(a[i]) * (1 + u(rng)), std::sin(a[i]) * (1 + u(rng))};
    const auto s = make_segment(0, q[0], q[1], q[2], q[3]);
    if (!s.convex || s.degeneracy != Degeneracy::NonDegenerate) continue;
    EXPECT_LE(distance(from_seg_coords(s, {0, 0}), s.a), 1e-15);
    EXPECT_LE(distance(from_seg_coords(s, {1, 1}), s.c), 1e-15);
    for (int i = 0; i < 100; ++i) {
      const SegCoord c{u(rng), u(rng)};
      const Point p = from_seg_coords(s, c);
      const SegCoord back = to_seg_coords(s, p);
      EXPECT_LE(std::abs(back.depth - c.depth), 1e-9);
      EXPECT_LE(std::abs(back.span - c.span), 1e-9);
      EXPECT_LE(distance(from_seg_coords(s, back), p), 1e-9);
    }
  }
}

TEST(SegCoords, NonConvexUsesBentConnector) {
  // reflex corner at d
  const auto s = make_segment(0, {0, 0}, {4, 0}, {4, 1}, {1, 0.2});
  ASSERT_FALSE(s.convex);
  const auto quad = s.corners();
  // at depth 0.5 the connector runs parallel to a-b, then parallel to d-c
  const Point bend = from_seg_coords(s, {0.5, 0.4});
  EXPECT_NEAR(bend.y, 0.1, 1e-12);
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 300; ++i) {
    const SegCoord c{u(rng), u(rng)};
    const Point p = from_seg_coords(s, c);
    EXPECT_NE(locate_in_polygon(p, quad), Containment::Outside) << c.depth << " " << c.span;
    const SegCoord back = to_seg_coords(s, p);
    EXPECT_LE(std::abs(back.depth - c.depth), 1e-9);
    EXPECT_LE(std::abs(back.span - c.span), 1e-9);
  }
  EXPECT_LE(distance(from_seg_coords(s, {0, 0}), s.a), 1e-15);
  EXPECT_LE(distance(from_seg_coords(s, {1, 1}), s.c), 1e-15);
}

TEST(SegCoords, FullyDegenerateUsesCarrierLine) {
  const auto s = make_segment(0, {0, 0}, {1, 0}, {0.8, 0}, {0.2, 0});
  ASSERT_EQ(s.degeneracy, Degeneracy::Full);
  for (double x : {0.0, 0.1, 0.5, 0.9, 1.0}) {
    const SegCoord c = to_seg_coords(s, {x, 0});
    EXPECT_LE(distance(from_seg_coords(s, c), Point{x, 0}), 1e-12);
    EXPECT_EQ(c.depth, 0.0);  // every point is already covered at depth 0
  }
  EXPECT_THROW(to_seg_coords(s, {0.5, 0.1}), GeometryError);
}

TEST(SegCoords, OutsidePointThrows) {
  const auto s = make_segment(3, {0, 0}, {2, 0}, {2, 1}, {0, 1});
  EXPECT_THROW(to_seg_coords(s, {3, 0.5}), GeometryError);
  EXPECT_THROW(to_seg_coords(s, {1, -0.01}), GeometryError);
  EXPECT_NO_THROW(to_seg_coords(s, {1, -1e-11}));
}

TEST(SegCoords, PartiallyDegenerateTriangle) {
  const auto s = make_segment(0, {0, 0}, {1, 0}, {0.7, 0.3}, {0, 0});
  ASSERT_EQ(s.degeneracy, Degeneracy::Partial);
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.05, 1);
  for (int i = 0; i < 100; ++i) {
    const SegCoord c{u(rng), u(rng)};
    const Point p = from_seg_coords(s, c);
    const SegCoord back = to_seg_coords(s, p);
    EXPECT_LE(distance(from_seg_coords(s, back), p), 1e-9);
    EXPECT_NEAR(back.depth, c.depth, 1e-9);
  }
}

// ---------------------------------------------------------------- wave step

TEST(WaveStep, Examples) {
  // rectangle ring, robots every 0.8
  std::vector<Point> ring;
  for (int i = 0; i < 3; ++i) ring.push_back({0.8 * i, 0});
  for (int i = 0; i < 2; ++i) ring.push_back({2.4, 0.8 * i});
  for (int i = 3; i > 0; --i) ring.push_back({0.8 * i, 1.6});
  for (int i = 2; i > 0; --i) ring.push_back({0, 0.8 * i});
  const auto r = wave_regions(ring, 0.3);
  const std::size_t k = 0;
  const auto& old_seg = r.old_ring[k];
  const auto& new_seg = r.new_ring[k];

  const Point on_edge = from_seg_coords(old_seg, {0, 0.4});
  const Point a = wave_step(on_edge, Tier::Old, k, r);
  EXPECT_LE(distance(a, from_seg_coords(new_seg, {0, 0.4})), 1e-12);
  EXPECT_LE(segment_distance(a, new_seg.a, new_seg.b), 1e-12);

  const Point shared = from_seg_coords(old_seg, {1, 0.7});
  EXPECT_LE(distance(wave_step(shared, Tier::Old, k, r), from_seg_coords(new_seg, {0.5, 0.7})), 1e-12);
  // the same point read in the next ring lands at the same spot
  EXPECT_LE(distance(wave_step(shared, Tier::New, k, r), from_seg_coords(new_seg, {0.5, 0.7})), 1e-12);

  const Point p = from_seg_coords(old_seg, {0.6, 0.25});
  const Point q = wave_step(p, Tier::Old, k, r);
  const auto c = to_seg_coords(new_seg, q);
  EXPECT_NEAR(c.depth, 0.3, 1e-9);
  EXPECT_NEAR(c.span, 0.25, 1e-9);

  const Point deep = from_seg_coords(new_seg, {0.4, 0.5});
  const auto d = to_seg_coords(new_seg, wave_step(deep, Tier::New, k, r));
  EXPECT_NEAR(d.depth, 0.7, 1e-9);
  EXPECT_NEAR(d.span, 0.5, 1e-9);

  EXPECT_THROW(wave_step(RobotRole{}, r), PreconditionError);
}

// ---------------------------------------------------------------- roles and rounds

TEST(ClassifyRoles, GridBoundary) {
  const auto z = cfg(oracle::square_grid(5, 5, 0.9));
  const auto roles = classify_roles(z, no_hole_check());
  std::size_t boundary = 0;
  for (const auto& r : roles) boundary += r.kind == RoleKind::Boundary;
  EXPECT_EQ(boundary, 16u);
  EXPECT_EQ(roles[12].kind, RoleKind::Inner);
  EXPECT_EQ(roles[0].kind, RoleKind::Boundary);
  for (std::size_t i : grid_ring(5, 5)) EXPECT_EQ(roles[i].kind, RoleKind::Boundary);
}

TEST(ClassifyRoles, GridWithHoleCheckIsRefused) {
  // square cells of side 0.9 hold an empty circle of diameter 0.9 * sqrt(2) > 1
  const auto z = cfg(oracle::square_grid(5, 5, 0.9));
  EXPECT_THROW(classify_roles(z, WaveParams{}), PreconditionError);
}

TEST(ClassifyRoles, WaveRobotNearCorner) {
  const auto z = cfg({{0, 0}, {0.9, 0}, {0.9, 0.9}, {0, 0.9}, {0.2, 0.05}});
  const auto roles = classify_roles(z, no_hole_check());
  EXPECT_EQ(roles[4].kind, RoleKind::Wave);
  EXPECT_EQ(roles[4].tier, Tier::Old);
  EXPECT_EQ(roles[4].label(), "wave_old");
  const auto plan = plan_round(z, no_hole_check());
  const auto& r = *plan.regions;
  EXPECT_NE(locate_in_polygon(plan.targets[4], r.new_ring[roles[4].segment].corners()), Containment::Outside);
}

TEST(MainStep, ConvexRingIsPureEgtm) {
  // the ring encloses a 1-hole, so the hole check is off
  const auto z = cfg(oracle::regular_polygon(6, 0.9, 0.2));
  const auto next = main_step(z, no_hole_check());
  const auto expect = egtm_step(z.positions(), 0.3);
  const auto c = connectivity_boundary(z);
  for (std::size_t k = 0; k < c.size(); ++k) EXPECT_LE(distance(next[c.indices[k]], expect[c.indices[k]]), 1e-15);
}

TEST(MainStep, GridBoundaryFollowsEgtmArithmetic) {
  const auto z = cfg(oracle::square_grid(5, 5, 0.9));
  const auto next = main_step(z, no_hole_check());
  const auto ring = grid_ring(5, 5);
  const std::size_t m = ring.size();
  for (std::size_t k = 0; k < m; ++k) {
    const Point prev = z[ring[(k + m - 1) % m]], cur = z[ring[k]], nxt = z[ring[(k + 1) % m]];
    const Point want{0.3 * (prev.x + nxt.x) / 2 + 0.7 * cur.x, 0.3 * (prev.y + nxt.y) / 2 + 0.7 * cur.y};
    EXPECT_LE(distance(next[ring[k]], want), 1e-15) << k;
  }
  for (std::size_t i : {6u, 7u, 8u, 11u, 12u, 13u, 16u, 17u, 18u}) EXPECT_EQ(next[i], z[i]);
}

TEST(MainStep, NearGatheredStillContracts) {
  auto p = oracle::regular_polygon(6, 0.3);
  p.push_back({0, 0});
  const auto z = cfg(p);
  const auto next = main_step(z, WaveParams{});
  EXPECT_LT(hull_area(next), hull_area(z));
}

TEST(MainStep, CollinearSwarmMovesAlongLine) {
  const auto z = cfg({{0, 0}, {0.8, 0}, {1.6, 0}, {2.0, 0}});
  const auto next = main_step(z, WaveParams{});
  EXPECT_NEAR(next[0].x, 0.3 * 0.8, 1e-15);
  EXPECT_NEAR(next[1].x, 0.8, 1e-15);
  EXPECT_NEAR(next[3].x, 2.0 - 0.3 * 0.4, 1e-15);
  for (const Point& q : next) EXPECT_EQ(q.y, 0.0);
  const auto back = invert_round(next, WaveParams{});
  EXPECT_LE(max_abs_difference(back, z), 1e-12);
}

TEST(MainStep, PreconditionErrors) {
  EXPECT_THROW(main_step(cfg({{0, 0}, {3, 0}}), WaveParams{}), PreconditionError);
  // a dented ring is not convex
  const auto dent = cfg({{0, 0}, {0.8, 0}, {1.6, 0}, {1.6, 0.8}, {1.6, 1.6}, {0.8, 0.9}, {0, 1.6}, {0, 0.8}});
  EXPECT_THROW(main_step(dent, no_hole_check()), PreconditionError);
  WaveParams bad;
  bad.epsilon = 0.5;
  EXPECT_THROW(main_step(cfg(oracle::regular_polygon(4, 0.5)), bad), PreconditionError);
  bad.epsilon = 0.0;
  EXPECT_THROW(main_step(cfg(oracle::regular_polygon(4, 0.5)), bad), PreconditionError);
}

TEST(InvertRound, GridRoundTrip) {
  const auto z = cfg(oracle::square_grid(5, 5, 0.9));
  const auto next = main_step(z, no_hole_check());
  EXPECT_LE(max_abs_difference(invert_round(next, no_hole_check()), z), 1e-8);
}

TEST(InvertRound, FilledHexagonRoundTrip) {
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    const auto z = cfg(filled_hexagon(seed));
    if (!valid_start(z)) continue;
    ++checked;
    const auto next = main_step(z, WaveParams{});
    EXPECT_LE(max_abs_difference(invert_round(next, WaveParams{}), z), 1e-8) << seed;
  }
  EXPECT_GE(checked, 6);
}

TEST(InvertRound, RejectsInputsOutsideTheImage) {
  // every side exactly 1: the preimage would need longer sides
  const double r = 0.5 / std::sin(std::numbers::pi / 8);
  EXPECT_THROW(invert_round(cfg(oracle::regular_polygon(8, r)), WaveParams{}), GeometryError);
  const auto dent = cfg({{0, 0}, {0.8, 0}, {1.6, 0}, {1.6, 0.8}, {1.6, 1.6}, {0.8, 0.9}, {0, 1.6}, {0, 0.8}});
  EXPECT_THROW(invert_round(dent, WaveParams{}), GeometryError);
}

// ---------------------------------------------------------------- local executability

TEST(LocalExecutability, GridAgrees) {
  const auto z = cfg(oracle::square_grid(5, 5, 0.9));
  const auto rep = verify_local_executability(z, no_hole_check());
  EXPECT_EQ(rep.robots.size(), 25u);
  for (const auto& c : rep.robots) EXPECT_TRUE(c.agrees) << c.robot << " " << c.note;
}

TEST(LocalExecutability, ShortRangeDisagrees) {
  const auto z = cfg(oracle::square_grid(5, 5, 0.9));
  auto p = no_hole_check();
  p.viewing_range = 1.5;
  const auto rep = verify_local_executability(z, p);
  EXPECT_GT(rep.disagreements(), 0u);
}

TEST(LocalExecutability, SingleRobot) {
  EXPECT_TRUE(verify_local_executability(cfg({{1, 1}}), WaveParams{}).all_agree());
}

TEST(LocalExecutability, FilledPolygonsAgree) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const auto z = cfg(filled_hexagon(seed));
    if (!valid_start(z)) continue;
    const auto rep = verify_local_executability(z, WaveParams{});
    for (const auto& c : rep.robots) EXPECT_TRUE(c.agrees) << seed << " robot " << c.robot << " " << c.note;
  }
}

// ---------------------------------------------------------------- multi-round properties

namespace {

void check_round_properties(const Configuration& z, const Configuration& next, const WaveParams& params,
                            const std::string& tag) {
  const auto plan = plan_round(z, params);
  const auto& r = *plan.regions;
  const double eps = params.epsilon;
  // rings do not overlap
  for (const auto* ring : {&r.old_ring, &r.new_ring}) {
    for (std::size_t i = 0; i < ring->size(); ++i) {
      for (std::size_t j = i + 1; j < ring->size(); ++j) {
        EXPECT_LE(oracle::quad_overlap_area((*ring)[i].corners(), (*ring)[j].corners()), 1e-12) << tag;
      }
      EXPECT_FALSE(is_twisted((*ring)[i])) << tag;
    }
  }
  // a partially degenerate segment is followed by a proper one
  for (std::size_t k = 0; k < r.old_ring.size(); ++k) {
    if (r.old_ring[k].degeneracy == Degeneracy::Partial) {
      EXPECT_EQ(r.new_ring[k].degeneracy, Degeneracy::NonDegenerate) << tag << " segment " << k;
    }
  }
  // corners stay near the old boundary edge
  const std::size_t m = r.current.size();
  bool short_edges = true;
  for (std::size_t k = 0; k < m; ++k) short_edges = short_edges && distance(r.current[k], r.current[(k + 1) % m]) <= 1 + 1e-9;
  if (short_edges) {
    const double bound = 1 + eps * eps / 2 + 1e-9;
    for (std::size_t k = 0; k < m; ++k) {
      for (const auto* seg : {&r.old_ring[k], &r.new_ring[k]}) {
        for (const Point& q : seg->corners()) {
          EXPECT_LE(distance(q, r.current[k]), bound) << tag;
          EXPECT_LE(distance(q, r.current[(k + 1) % m]), bound) << tag;
        }
      }
    }
  }
  // boundary of the image is the stepped boundary
  EXPECT_TRUE(same_multiset(connectivity_boundary(next).positions, r.next, 1e-9)) << tag;
  // no collisions, no big holes, invertible, hull shrinks
  if (min_pairwise_distance(z) > 0) {
    EXPECT_GT(min_pairwise_distance(next), 0.0) << tag;
  }
  EXPECT_FALSE(has_delta_hole(next, kWaveHoleBound)) << tag;
  EXPECT_LE(max_abs_difference(invert_round(next, params), z), 1e-8) << tag;
  EXPECT_LT(hull_area(next), hull_area(z)) << tag;
}

// returns how many wave-robot moves were exercised
std::size_t run_rounds(Configuration z, int rounds, const std::string& tag) {
  WaveParams params;
  std::size_t waves = 0;
  for (int t = 0; t < rounds; ++t) {
    for (const auto& r : classify_roles(z, params)) waves += r.kind == RoleKind::Wave;
    const auto next = main_step(z, params);
    check_round_properties(z, next, no_hole_check(), tag + " round " + std::to_string(t));
    params.check_holes = false;
    z = next;
  }
  return waves;
}

}  // namespace

TEST(WaveProperty, FilledHexagons) {
  int runs = 0;
  std::size_t waves = 0;
  for (std::uint64_t seed = 20; seed < 26; ++seed) {
    const auto z = cfg(filled_hexagon(seed, 2.2));
    if (!valid_start(z)) continue;
    ++runs;
    waves += run_rounds(z, 12, "hexagon " + std::to_string(seed));
  }
  EXPECT_GE(runs, 3);
  EXPECT_GT(waves, 0u);
}

TEST(WaveProperty, FilledRandomPolygons) {
  int runs = 0;
  std::size_t waves = 0;
  for (std::uint64_t seed = 40; seed < 52 && runs < 4; ++seed) {
    const auto z = cfg(filled_random_polygon(seed));
    if (!valid_start(z)) continue;
    ++runs;
    waves += run_rounds(z, 10, "polygon " + std::to_string(seed));
  }
  EXPECT_GE(runs, 2);
  EXPECT_GT(waves, 0u);
}

TEST(WaveProperty, SymmetricityConstantOnSymmetricGrid) {
  auto z = cfg(oracle::square_grid(4, 4, 0.7));
  ASSERT_TRUE(valid_start(z));
  const std::size_t sym = symmetricity(z);
  EXPECT_EQ(sym, 4u);
  WaveParams params;
  for (int t = 0; t < 40; ++t) {
    const auto next = main_step(z, params);
    params.check_holes = false;
    EXPECT_EQ(symmetricity(next), sym) << t;
    EXPECT_LT(hull_area(next), hull_area(z)) << t;
    z = next;
  }
}

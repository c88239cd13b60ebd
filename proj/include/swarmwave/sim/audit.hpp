#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "swarmwave/boundary.hpp"
#include "swarmwave/disc_graph.hpp"
#include "swarmwave/empty_circle.hpp"
#include "swarmwave/gta.hpp"
#include "swarmwave/hull.hpp"
#include "swarmwave/sim/scenario.hpp"
#include "swarmwave/symmetry.hpp"
#include "swarmwave/wave/local.hpp"
#include "swarmwave/wave/protocol.hpp"

namespace swarmwave {

struct AuditResult {
  bool passed = true;
  double value = 0.0;  // residual or count behind the verdict
  std::string detail;
};

using AuditMap = std::map<std::string, AuditResult>;

inline std::size_t count_failures(const AuditMap& m) {
  return static_cast<std::size_t>(std::count_if(m.begin(), m.end(), [](const auto& kv) { return !kv.second.passed; }));
}

namespace detail {

inline double convex_overlap(std::vector<Point> subject, const std::array<Point, 3>& clip) {
  for (std::size_t k = 0; k < 3 && subject.size() >= 3; ++k) {
    const Point a = clip[k], b = clip[(k + 1) % 3];
    std::vector<Point> kept;
    for (std::size_t i = 0; i < subject.size(); ++i) {
      const Point p = subject[i], q = subject[(i + 1) % subject.size()];
      const double sp = orient(a, b, p), sq = orient(a, b, q);
      if (sp >= 0.0) kept.push_back(p);
      if ((sp >= 0.0) != (sq >= 0.0)) kept.push_back(lerp(p, q, sp / (sp - sq)));
    }
    subject = std::move(kept);
  }
  return subject.size() >= 3 ? std::abs(signed_area(subject)) : 0.0;
}

// Counterclockwise triangles of a simple quadrilateral, split along an inner diagonal.
inline std::array<std::array<Point, 3>, 2> split_quad(std::array<Point, 4> q) {
  if (signed_area(q) < 0.0) std::swap(q[1], q[3]);
  if (orient(q[0], q[1], q[2]) >= 0.0 && orient(q[0], q[2], q[3]) >= 0.0) {
    return {{{q[0], q[1], q[2]}, {q[0], q[2], q[3]}}};
  }
  return {{{q[1], q[2], q[3]}, {q[1], q[3], q[0]}}};
}

inline double segment_overlap_area(const WaveSegment& s, const WaveSegment& t) {
  double area = 0.0;
  for (const auto& a : split_quad(s.corners())) {
    for (const auto& b : split_quad(t.corners())) area += convex_overlap({a.begin(), a.end()}, b);
  }
  return area;
}

inline double multiset_mismatch(std::vector<Point> a, std::vector<Point> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  auto lex = [](Point p, Point q) { return p.x < q.x || (p.x == q.x && p.y < q.y); };
  std::sort(a.begin(), a.end(), lex);
  std::vector<bool> used(b.size(), false);
  double worst = 0.0;
  for (const Point& p : a) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t at = 0;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      const double d = distance(p, b[j]);
      if (d < best) {
        best = d;
        at = j;
      }
    }
    used[at] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

inline AuditResult verdict(bool passed, double value, std::string detail = {}) {
  return {passed, value, passed ? std::string() : std::move(detail)};
}

}  // namespace detail

// Checks one round. Failures are recorded, never thrown.
inline AuditMap audit_round(const Configuration& before, const Configuration& after, const Scenario& sc,
                            const std::vector<std::string>& names) {
  AuditMap out;
  auto wants = [&](const char* n) { return std::find(names.begin(), names.end(), n) != names.end(); };
  auto guarded = [&](const char* n, auto&& check) {
    if (!wants(n)) return;
    try {
      out[n] = check();
    } catch (const std::exception& e) {
      out[n] = {false, std::numeric_limits<double>::quiet_NaN(), e.what()};
    }
  };

  guarded("symmetry_preserved", [&] {
    try {
      const auto r = symmetry_preserved(before, after);
      return detail::verdict(r.preserved, static_cast<double>(r.gained + r.lost),
                             "group order " + std::to_string(r.order_before) + " -> " + std::to_string(r.order_after));
    } catch (const GeometryError&) {
      // robots stacked closer than the matching tolerance: compare symmetricity instead
      const std::size_t s0 = symmetricity(before), s1 = symmetricity(after);
      return detail::verdict(s0 == s1, std::abs(static_cast<double>(s1) - static_cast<double>(s0)),
                             "symmetricity " + std::to_string(s0) + " -> " + std::to_string(s1) +
                                 " (stacked robots, group matching ambiguous)");
    }
  });
  guarded("collision_free", [&] {
    const double d0 = min_pairwise_distance(before), d1 = min_pairwise_distance(after);
    return detail::verdict(!(d0 > 0.0) || d1 > 0.0, d1, "two robots now share a position");
  });

  if (sc.protocol == Protocol::Gta) {
    const GtaParams p = sc.gta_params();
    guarded("gershgorin_certified", [&] {
      const auto cert = gershgorin_certify(gta_jacobian(before, p));
      double margin = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < cert.centers.size(); ++i) margin = std::min(margin, cert.centers[i] - cert.radii[i]);
      return detail::verdict(cert.certified, margin, "a Gershgorin disc reaches zero");
    });
    guarded("hull_area_monotone", [&] {
      const double a0 = hull_area(before), a1 = hull_area(after);
      return detail::verdict(a1 <= a0 + 1e-12 * std::max(1.0, a0), a0 - a1, "hull area grew");
    });
    return out;
  }

  WaveParams p = sc.wave_params();
  p.check_holes = false;
  RoundPlan plan;
  BoundaryCycle next_boundary;
  try {
    plan = plan_round(before, p);
    next_boundary = connectivity_boundary(after);
  } catch (const std::exception& e) {
    for (const auto& n : audit_names(Protocol::Wave)) {
      if (wants(n.c_str()) && !out.count(n)) out[n] = {false, std::numeric_limits<double>::quiet_NaN(), e.what()};
    }
    return out;
  }

  guarded("boundary_identity", [&] {
    const double err = detail::multiset_mismatch(next_boundary.positions,
                                                 plan.regions ? plan.regions->next
                                                              : egtm_step(plan.boundary.positions, p.epsilon));
    return detail::verdict(err <= 1e-9, err,
                           "new boundary is not the stepped old boundary");
  });
  guarded("convexity", [&] {
    if (next_boundary.degenerate) return detail::verdict(detail::all_collinear(next_boundary.positions, kGeomTol), 0.0,
                                                         "degenerate boundary is not collinear");
    bool inside = true;
    if (!plan.boundary.degenerate) {
      for (const Point& q : next_boundary.positions) {
        inside = inside && locate_in_polygon(q, plan.boundary.positions) != Containment::Outside;
      }
    }
    return detail::verdict(is_convex_cycle(next_boundary) && inside, 0.0,
                           inside ? "boundary lost convexity" : "boundary left the old boundary polygon");
  });
  if (plan.regions) {
    const WaveRegions& r = *plan.regions;
    const std::size_t m = r.old_ring.size();
    guarded("segment_nonoverlap", [&] {
      double worst = 0.0;
      for (const auto* ring : {&r.old_ring, &r.new_ring}) {
        const auto& boxes = ring == &r.old_ring ? r.old_boxes : r.new_boxes;
        for (std::size_t i = 0; i < m; ++i) {
          for (std::size_t j = i + 1; j < m; ++j) {
            if (boxes[i].hi.x < boxes[j].lo.x || boxes[j].hi.x < boxes[i].lo.x || boxes[i].hi.y < boxes[j].lo.y ||
                boxes[j].hi.y < boxes[i].lo.y) {
              continue;
            }
            worst = std::max(worst, detail::segment_overlap_area((*ring)[i], (*ring)[j]));
          }
          if (is_twisted((*ring)[i])) worst = std::max(worst, 1.0);
        }
      }
      return detail::verdict(worst <= 1e-12, worst, "segments overlap or twist");
    });
    guarded("degeneracy_flow", [&] {
      std::size_t bad = 0;
      for (std::size_t k = 0; k < m; ++k) {
        bad += r.old_ring[k].degeneracy == Degeneracy::Partial && r.new_ring[k].degeneracy != Degeneracy::NonDegenerate;
      }
      return detail::verdict(bad == 0, static_cast<double>(bad), "a partial segment is followed by a degenerate one");
    });
    guarded("corner_distance", [&] {
      const double bound = 1.0 + p.epsilon * p.epsilon / 2.0 + 1e-9;
      double worst = 0.0;
      for (std::size_t k = 0; k < m; ++k) {
        const Point a = r.current[k], b = r.current[(k + 1) % m];
        if (distance(a, b) > 1.0 + kGeomTol) continue;
        for (const auto* seg : {&r.old_ring[k], &r.new_ring[k]}) {
          for (const Point& q : seg->corners()) worst = std::max({worst, distance(q, a), distance(q, b)});
        }
      }
      return detail::verdict(worst <= bound, worst, "segment corner too far from its boundary robots");
    });
  }
  guarded("hole_bound", [&] {
    const double d = 2.0 * largest_empty_circle(after, next_boundary).radius;
    return detail::verdict(d < kWaveHoleBound - kGeomTol, d, "hole of diameter >= 2.24");
  });
  guarded("invert_roundtrip", [&] {
    const double err = max_abs_difference(invert_round(after, p), before);
    return detail::verdict(err <= 1e-8, err, "inverse round does not recover the previous configuration");
  });
  guarded("hull_area_monotone", [&] {
    const double a0 = hull_area(before), a1 = hull_area(after);
    const bool flat = plan.boundary.degenerate;
    return detail::verdict(flat ? a1 <= a0 : a1 < a0, a0 - a1, "hull area did not shrink");
  });
  guarded("local_executability", [&] {
    const auto rep = verify_local_executability(before, p);
    std::string who;
    for (const auto& c : rep.robots) {
      if (!c.agrees && who.size() < 200) who += " " + std::to_string(c.robot) + (c.note.empty() ? "" : "(" + c.note + ")");
    }
    return detail::verdict(rep.all_agree(), static_cast<double>(rep.disagreements()), "disagreeing robots:" + who);
  });
  return out;
}

}  // namespace swarmwave

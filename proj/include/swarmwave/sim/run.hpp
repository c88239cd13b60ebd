#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "swarmwave/boundary.hpp"
#include "swarmwave/disc_graph.hpp"
#include "swarmwave/empty_circle.hpp"
#include "swarmwave/gta.hpp"
#include "swarmwave/sim/audit.hpp"
#include "swarmwave/sim/scenario.hpp"
#include "swarmwave/symmetry.hpp"
#include "swarmwave/wave/protocol.hpp"

namespace swarmwave {

struct RoundRecord {
  std::size_t round = 0;
  Configuration positions;
  std::vector<std::string> roles;  // wave only
  double diameter = 0.0;
  std::size_t symmetricity = 1;
  bool connected = false;
  bool convex_boundary = false;
  double max_hole = std::numeric_limits<double>::quiet_NaN();  // NaN when not computable
  double min_dist = 0.0;
  AuditMap audits;
};

enum class TerminationKind { NearGathering, MaxRounds, Error };

inline const char* to_string(TerminationKind k) {
  switch (k) {
    case TerminationKind::NearGathering: return "near_gathering";
    case TerminationKind::MaxRounds: return "max_rounds";
    case TerminationKind::Error: return "error";
  }
  return "?";
}

struct Termination {
  TerminationKind kind = TerminationKind::MaxRounds;
  std::string detail;
};

struct Trace {
  Scenario scenario;
  std::vector<RoundRecord> records;
  Termination termination;

  std::size_t rounds() const { return records.empty() ? 0 : records.back().round; }
  std::size_t audit_failures() const {
    std::size_t s = 0;
    for (const auto& r : records) s += count_failures(r.audits);
    return s;
  }
};

// Metrics from positions alone.
inline RoundRecord measure(std::size_t round, const Configuration& z) {
  RoundRecord r;
  r.round = round;
  r.positions = z;
  r.diameter = diameter(z);
  r.symmetricity = symmetricity(z);
  r.connected = is_connected(disc_graph(z, 1.0));
  r.min_dist = z.size() > 1 ? min_pairwise_distance(z) : 0.0;
  if (r.connected) {
    try {
      const auto c = connectivity_boundary(z);
      r.convex_boundary = is_convex_cycle(c);
      r.max_hole = 2.0 * largest_empty_circle(z, c).radius;
    } catch (const Error&) {
      r.convex_boundary = false;
    }
  }
  return r;
}

struct RunHooks {
  // called after every recorded round; return false to stop early
  std::function<bool(const RoundRecord&)> on_round;
};

inline Trace run(const Scenario& sc, const RunHooks& hooks = {}) {
  sc.validate();
  Trace trace;
  trace.scenario = sc;
  const auto audits = sc.enabled_audits();
  const double threshold = sc.resolved_threshold();
  Configuration z = sc.positions;

  auto roles_of = [&](const Configuration& w, const WaveParams& p) {
    std::vector<std::string> out;
    for (const auto& role : classify_roles(w, p)) out.push_back(role.label());
    return out;
  };
  auto push = [&](RoundRecord rec) {
    trace.records.push_back(std::move(rec));
    return !hooks.on_round || hooks.on_round(trace.records.back());
  };

  RoundRecord first = measure(0, z);
  WaveParams wp;
  GtaParams gp;
  try {
    if (sc.protocol == Protocol::Wave) {
      wp = sc.wave_params();
      first.roles = roles_of(z, wp);
    } else {
      gp = sc.gta_params();
      gp.validate();
    }
  } catch (const Error& e) {
    push(std::move(first));
    trace.termination = {TerminationKind::Error, std::string("round 0: ") + e.what()};
    return trace;
  }
  if (!push(std::move(first))) return trace;
  if (is_near_gathering(z, threshold)) {
    trace.termination = {TerminationKind::NearGathering, ""};
    return trace;
  }

  for (std::size_t t = 0; t < sc.max_rounds; ++t) {
    Configuration next;
    RoundRecord rec;
    try {
      if (sc.protocol == Protocol::Wave) {
        // only the starting configuration is promised to be free of 1-holes
        wp.check_holes = t == 0;
        next = main_step(z, wp);
        wp.check_holes = false;
        rec = measure(t + 1, next);
        try {
          rec.roles = roles_of(next, wp);
        } catch (const Error&) {
          // the next step reports the problem
        }
      } else {
        next = gta_step(z, gp);
        rec = measure(t + 1, next);
      }
    } catch (const Error& e) {
      trace.termination = {TerminationKind::Error, "round " + std::to_string(t + 1) + ": " + e.what()};
      return trace;
    }
    if (!audits.empty() && (t + 1) % sc.audit_every == 0) rec.audits = audit_round(z, next, sc, audits);
    z = std::move(next);
    if (!push(std::move(rec))) return trace;
    if (is_near_gathering(z, threshold)) {
      trace.termination = {TerminationKind::NearGathering, ""};
      return trace;
    }
  }
  trace.termination = {TerminationKind::MaxRounds, "no near-gathering after " + std::to_string(sc.max_rounds) + " rounds"};
  return trace;
}

}  // namespace swarmwave

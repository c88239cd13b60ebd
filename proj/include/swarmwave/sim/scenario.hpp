#pragma once

#include <algorithm>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "swarmwave/geometry.hpp"
#include "swarmwave/gta.hpp"
#include "swarmwave/wave/protocol.hpp"

namespace swarmwave {

enum class Protocol { Gta, Wave };

inline const char* to_string(Protocol p) { return p == Protocol::Gta ? "gta" : "wave"; }

inline Protocol parse_protocol(const std::string& s) {
  if (s == "gta") return Protocol::Gta;
  if (s == "wave") return Protocol::Wave;
  throw PreconditionError("unknown protocol '" + s + "' (expected gta or wave)");
}

inline const std::vector<std::string>& audit_names(Protocol p) {
  static const std::vector<std::string> gta{"symmetry_preserved", "collision_free", "gershgorin_certified",
                                            "hull_area_monotone"};
  static const std::vector<std::string> wave{
      "symmetry_preserved", "collision_free", "boundary_identity", "convexity",
      "segment_nonoverlap", "degeneracy_flow", "corner_distance", "hole_bound",
      "invert_roundtrip",   "hull_area_monotone", "local_executability"};
  return p == Protocol::Gta ? gta : wave;
}

struct Scenario {
  std::string name = "unnamed";
  Protocol protocol = Protocol::Wave;
  std::optional<double> epsilon;  // empty: protocol default
  std::optional<double> viewing_range;
  std::size_t max_rounds = 10000;
  std::optional<double> near_gathering_threshold;  // empty: the viewing range
  std::uint64_t seed = 0;
  std::vector<std::string> audits;
  double hole_check_delta = 1.0;
  std::size_t audit_every = 1;
  bool qualitative = false;  // reconstructed layout, only the outcome matters
  Configuration positions;

  double resolved_epsilon() const {
    if (epsilon) return *epsilon;
    if (protocol == Protocol::Wave) return WaveParams{}.epsilon;
    return GtaParams::with_default_epsilon(positions.size()).epsilon;
  }
  double resolved_viewing_range() const {
    if (viewing_range) return *viewing_range;
    return protocol == Protocol::Wave ? WaveParams{}.viewing_range : 1.0;
  }
  double resolved_threshold() const { return near_gathering_threshold.value_or(resolved_viewing_range()); }

  GtaParams gta_params() const { return {resolved_epsilon(), positions.size(), resolved_viewing_range()}; }
  WaveParams wave_params() const {
    WaveParams p;
    p.epsilon = resolved_epsilon();
    p.viewing_range = resolved_viewing_range();
    p.hole_check_delta = hole_check_delta;
    return p;
  }

  void validate() const {
    if (positions.empty()) throw PreconditionError("scenario field 'positions': no robots");
    const double eps = resolved_epsilon();
    if (protocol == Protocol::Wave && !(eps > 0.0 && eps < 0.5)) {
      throw PreconditionError("scenario field 'epsilon': wave needs epsilon in (0, 0.5), got " + std::to_string(eps));
    }
    if (protocol == Protocol::Gta && !(eps > 0.0 && eps < 1.0)) {
      throw PreconditionError("scenario field 'epsilon': gta needs epsilon in (0, 1), got " + std::to_string(eps));
    }
    if (!(resolved_viewing_range() > 0.0)) throw PreconditionError("scenario field 'viewing_range': must be positive");
    if (!(resolved_threshold() > 0.0)) {
      throw PreconditionError("scenario field 'near_gathering_threshold': must be positive");
    }
    if (!(hole_check_delta > 0.0)) throw PreconditionError("scenario field 'hole_check_delta': must be positive");
    if (audit_every == 0) throw PreconditionError("scenario field 'audit_every': must be at least 1");
    const auto& known = audit_names(protocol);
    for (const auto& a : audits) {
      if (a != "all" && std::find(known.begin(), known.end(), a) == known.end()) {
        throw PreconditionError("scenario field 'audits': '" + a + "' is not an audit of protocol " +
                                to_string(protocol));
      }
    }
  }

  std::vector<std::string> enabled_audits() const {
    if (std::find(audits.begin(), audits.end(), "all") != audits.end()) return audit_names(protocol);
    return audits;
  }
};

}  // namespace swarmwave

#pragma once

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "swarmwave/io/scenario_io.hpp"
#include "swarmwave/sim/run.hpp"

namespace swarmwave {

// Shortest decimal that reads back to the same double.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline void write_positions_csv(const Trace& t, std::ostream& out) {
  out << "round,robot,x,y,role\n";
  for (const auto& r : t.records) {
    for (std::size_t i = 0; i < r.positions.size(); ++i) {
      out << r.round << ',' << i << ',' << format_number(r.positions[i].x) << ','
          << format_number(r.positions[i].y) << ',' << (i < r.roles.size() ? r.roles[i] : "") << '\n';
    }
  }
}

inline void write_metrics_csv(const Trace& t, std::ostream& out) {
  out << "round,diameter,symmetricity,connected,convex_boundary,max_hole,min_dist,audits_failed\n";
  for (const auto& r : t.records) {
    out << r.round << ',' << format_number(r.diameter) << ',' << r.symmetricity << ',' << (r.connected ? 1 : 0)
        << ',' << (r.convex_boundary ? 1 : 0) << ',' << format_number(r.max_hole) << ','
        << format_number(r.min_dist) << ',' << count_failures(r.audits) << '\n';
  }
}

namespace detail {

// NaN has no JSON spelling
inline Json json_number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

inline double number_or_nan(const Json& v) {
  return v.is_number() ? v.get<double>() : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace detail

inline Json to_json(const Trace& t) {
  Json j;
  j["scenario"] = to_json(t.scenario);
  j["termination"] = {{"kind", to_string(t.termination.kind)}, {"detail", t.termination.detail}};
  j["rounds"] = t.rounds();
  j["qualitative"] = t.scenario.qualitative;
  Json recs = Json::array();
  for (const auto& r : t.records) {
    Json rec;
    rec["round"] = r.round;
    Json pos = Json::array();
    for (const Point& p : r.positions) pos.push_back({p.x, p.y});
    rec["positions"] = std::move(pos);
    if (!r.roles.empty()) rec["roles"] = r.roles;
    rec["diameter"] = detail::json_number(r.diameter);
    rec["symmetricity"] = r.symmetricity;
    rec["connected"] = r.connected;
    rec["convex_boundary"] = r.convex_boundary;
    rec["max_hole"] = detail::json_number(r.max_hole);
    rec["min_dist"] = detail::json_number(r.min_dist);
    if (!r.audits.empty()) {
      Json a;
      for (const auto& [name, res] : r.audits) {
        a[name] = {{"passed", res.passed}, {"value", detail::json_number(res.value)}, {"detail", res.detail}};
      }
      rec["audits"] = std::move(a);
    }
    recs.push_back(std::move(rec));
  }
  j["records"] = std::move(recs);
  return j;
}

inline Trace trace_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("records") || !j.contains("termination")) {
    throw ParseError("trace: expected an object with records and termination");
  }
  Trace t;
  t.scenario = scenario_from_json(j);
  const std::string kind = j["termination"].value("kind", "");
  t.termination.kind = kind == "near_gathering" ? TerminationKind::NearGathering
                       : kind == "error"        ? TerminationKind::Error
                                                : TerminationKind::MaxRounds;
  t.termination.detail = j["termination"].value("detail", "");
  for (const auto& rj : j["records"]) {
    RoundRecord r;
    r.round = rj.at("round").get<std::size_t>();
    std::vector<Point> pts;
    for (const auto& p : rj.at("positions")) pts.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    r.positions = Configuration(std::move(pts));
    if (rj.contains("roles")) r.roles = rj["roles"].get<std::vector<std::string>>();
    r.diameter = detail::number_or_nan(rj.value("diameter", Json()));
    r.symmetricity = rj.value("symmetricity", std::size_t{1});
    r.connected = rj.value("connected", false);
    r.convex_boundary = rj.value("convex_boundary", false);
    r.max_hole = detail::number_or_nan(rj.value("max_hole", Json()));
    r.min_dist = detail::number_or_nan(rj.value("min_dist", Json()));
    if (rj.contains("audits")) {
      for (const auto& [name, a] : rj["audits"].items()) {
        r.audits[name] = {a.value("passed", false), detail::number_or_nan(a.value("value", Json())),
                          a.value("detail", "")};
      }
    }
    t.records.push_back(std::move(r));
  }
  return t;
}

inline Trace load_trace(const std::string& path) {
  try {
    return trace_from_json(read_json_file(path));
  } catch (const Json::exception& e) {
    throw ParseError("'" + path + "' is not a trace: " + e.what());
  }
}

namespace detail {

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write '" + p.string() + "'");
  out << text;
}

}  // namespace detail

inline void write_trace_csv(const Trace& t, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ostringstream pos, met;
  write_positions_csv(t, pos);
  write_metrics_csv(t, met);
  detail::write_file(dir / "positions.csv", pos.str());
  detail::write_file(dir / "metrics.csv", met.str());
}

inline void write_trace_json(const Trace& t, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  detail::write_file(dir / "trace.json", to_json(t).dump(1) + "\n");
}

}  // namespace swarmwave

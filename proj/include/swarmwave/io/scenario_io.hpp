#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "swarmwave/sim/scenario.hpp"

namespace swarmwave {

using Json = nlohmann::json;

class ParseError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline const std::vector<std::string>& scenario_fields() {
  static const std::vector<std::string> f{"name",     "protocol", "epsilon", "viewing_range", "max_rounds",
                                          "near_gathering_threshold", "seed", "audits", "positions",
                                          "hole_check_delta", "audit_every", "qualitative"};
  return f;
}

[[noreturn]] inline void bad_field(const std::string& key, const std::string& what) {
  throw ParseError("scenario field '" + key + "': " + what);
}

inline double number_field(const Json& j, const std::string& key) {
  const Json& v = j.at(key);
  if (!v.is_number()) bad_field(key, "expected a number, got " + v.dump());
  return v.get<double>();
}

inline std::uint64_t count_field(const Json& j, const std::string& key) {
  const Json& v = j.at(key);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
  bad_field(key, "expected a non-negative integer, got " + v.dump());
}

inline std::optional<double> optional_number(const Json& j, const std::string& key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return number_field(j, key);
}

}  // namespace detail

inline Json to_json(const Scenario& sc) {
  Json j;
  j["name"] = sc.name;
  j["protocol"] = to_string(sc.protocol);
  j["epsilon"] = sc.resolved_epsilon();
  j["viewing_range"] = sc.resolved_viewing_range();
  j["max_rounds"] = sc.max_rounds;
  j["near_gathering_threshold"] = sc.resolved_threshold();
  j["seed"] = sc.seed;
  j["audits"] = sc.audits;
  j["hole_check_delta"] = sc.hole_check_delta;
  j["audit_every"] = sc.audit_every;
  if (sc.qualitative) j["qualitative"] = true;
  Json pos = Json::array();
  for (const Point& p : sc.positions) pos.push_back({p.x, p.y});
  j["positions"] = std::move(pos);
  return j;
}

// Accepts a scenario document, or a trace.json envelope holding one under "scenario".
inline Scenario scenario_from_json(const Json& doc) {
  if (!doc.is_object()) throw ParseError("scenario: expected a JSON object");
  const Json& j = doc.contains("scenario") && doc.contains("termination") ? doc.at("scenario") : doc;
  if (!j.is_object()) throw ParseError("scenario: expected a JSON object");
  const auto& known = detail::scenario_fields();
  for (const auto& [key, _] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) detail::bad_field(key, "unknown field");
  }

  Scenario sc;
  if (j.contains("name")) {
    if (!j["name"].is_string()) detail::bad_field("name", "expected a string");
    sc.name = j["name"].get<std::string>();
  }
  if (!j.contains("protocol")) detail::bad_field("protocol", "missing");
  if (!j["protocol"].is_string()) detail::bad_field("protocol", "expected \"gta\" or \"wave\"");
  try {
    sc.protocol = parse_protocol(j["protocol"].get<std::string>());
  } catch (const PreconditionError& e) {
    detail::bad_field("protocol", e.what());
  }
  sc.epsilon = detail::optional_number(j, "epsilon");
  sc.viewing_range = detail::optional_number(j, "viewing_range");
  sc.near_gathering_threshold = detail::optional_number(j, "near_gathering_threshold");
  if (j.contains("max_rounds")) sc.max_rounds = detail::count_field(j, "max_rounds");
  if (j.contains("seed")) sc.seed = detail::count_field(j, "seed");
  if (j.contains("audit_every")) sc.audit_every = detail::count_field(j, "audit_every");
  if (j.contains("hole_check_delta")) sc.hole_check_delta = detail::number_field(j, "hole_check_delta");
  if (j.contains("qualitative")) {
    if (!j["qualitative"].is_boolean()) detail::bad_field("qualitative", "expected true or false");
    sc.qualitative = j["qualitative"].get<bool>();
  }
  if (j.contains("audits")) {
    if (!j["audits"].is_array()) detail::bad_field("audits", "expected an array of names");
    for (const auto& a : j["audits"]) {
      if (!a.is_string()) detail::bad_field("audits", "expected an array of names");
      sc.audits.push_back(a.get<std::string>());
    }
  }
  if (!j.contains("positions")) detail::bad_field("positions", "missing");
  if (!j["positions"].is_array()) detail::bad_field("positions", "expected an array of [x, y] pairs");
  std::vector<Point> pts;
  for (std::size_t i = 0; i < j["positions"].size(); ++i) {
    const Json& p = j["positions"][i];
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
      detail::bad_field("positions", "entry " + std::to_string(i) + " is not an [x, y] pair of numbers");
    }
    pts.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  try {
    sc.positions = Configuration(std::move(pts));
  } catch (const Error& e) {
    detail::bad_field("positions", e.what());
  }
  sc.validate();
  return sc;
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError("'" + path + "' is not valid JSON: " + e.what());
  }
}

inline Scenario load_scenario(const std::string& path) { return scenario_from_json(read_json_file(path)); }

inline void save_scenario(const Scenario& sc, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << to_json(sc).dump(2) << '\n';
}

// key=value against the scenario's own fields. Values are read as JSON when they parse,
// as plain strings otherwise; audits also take a comma list.
inline Scenario apply_override(const Scenario& sc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ParseError("override '" + assignment + "': expected key=value");
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  const auto& known = detail::scenario_fields();
  if (std::find(known.begin(), known.end(), key) == known.end()) detail::bad_field(key, "unknown field");
  if (key == "positions") detail::bad_field(key, "cannot be overridden");

  Json value;
  if (key == "audits") {
    value = Json::array();
    std::stringstream ss(text);
    for (std::string a; std::getline(ss, a, ',');) {
      if (!a.empty()) value.push_back(a);
    }
  } else {
    try {
      value = Json::parse(text);
    } catch (const Json::parse_error&) {
      value = text;
    }
  }
  Json j = to_json(sc);
  // keep protocol defaults when the protocol itself changes
  if (key == "protocol") {
    j.erase("epsilon");
    j.erase("viewing_range");
    j.erase("near_gathering_threshold");
    j["audits"] = Json::array();
    for (const auto& a : sc.audits) {
      if (a == "all") j["audits"].push_back(a);
    }
  }
  j[key] = std::move(value);
  if (key != "protocol") {
    if (!sc.epsilon && key != "epsilon") j.erase("epsilon");
    if (!sc.viewing_range && key != "viewing_range") j.erase("viewing_range");
    if (!sc.near_gathering_threshold && key != "near_gathering_threshold") j.erase("near_gathering_threshold");
  }
  return scenario_from_json(j);
}

}  // namespace swarmwave

#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "nflab/errors.hpp"

namespace nflab {

using Json = nlohmann::ordered_json;

enum class Verdict { Pass, Fail, Indeterminate, HypothesisFailed };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "Pass";
    case Verdict::Fail: return "Fail";
    case Verdict::Indeterminate: return "Indeterminate";
    case Verdict::HypothesisFailed: return "HypothesisFailed";
  }
  return "?";
}

// Machine-readable outcome of one check.  Every Fail carries the offending
// sample point or value in `offending`.
struct CheckReport {
  std::string id;
  Verdict verdict{Verdict::Pass};
  std::vector<std::pair<std::string, double>> margins;
  std::vector<std::pair<std::string, std::string>> values;
  Json grid = Json::object();
  Json tolerances = Json::object();
  Json offending;  // null unless verdict == Fail
  double timing_ms{0.0};

  void margin(const std::string& name, double v) { margins.emplace_back(name, v); }
  void value(const std::string& name, std::string v) { values.emplace_back(name, std::move(v)); }

  void fail(const std::string& why, const Json& offender = Json()) {
    verdict = Verdict::Fail;
    offending = Json::object();
    offending["reason"] = why;
    if (!offender.is_null()) offending["sample"] = offender;
  }
};

struct Config {
  int disk_radial{48};
  int disk_angular{192};
  int verify_radial{24};
  int verify_angular{64};
  double circle_density{1.0};
  double b_used{4.5};
  double t0_log_squared{8.0};
  double bound_tolerance{1e-6};
  double form_radius{2000.0};

  Json to_json() const {
    Json j;
    j["disk_radial"] = disk_radial;
    j["disk_angular"] = disk_angular;
    j["verify_radial"] = verify_radial;
    j["verify_angular"] = verify_angular;
    j["circle_density"] = circle_density;
    j["b_used"] = b_used;
    j["t0_log_squared"] = t0_log_squared;
    j["bound_tolerance"] = bound_tolerance;
    j["form_radius"] = form_radius;
    return j;
  }

  static Config from_json(const Json& j) {
    Config c;
    auto get = [&](const char* key, auto& slot) {
      if (j.contains(key)) {
        if (!j[key].is_number()) throw Error(ErrorCode::SchemaError, std::string("config field '") + key + "' must be numeric");
        slot = j[key].get<std::decay_t<decltype(slot)>>();
      }
    };
    get("disk_radial", c.disk_radial);
    get("disk_angular", c.disk_angular);
    get("verify_radial", c.verify_radial);
    get("verify_angular", c.verify_angular);
    get("circle_density", c.circle_density);
    get("b_used", c.b_used);
    get("t0_log_squared", c.t0_log_squared);
    get("bound_tolerance", c.bound_tolerance);
    get("form_radius", c.form_radius);
    return c;
  }

  static Config load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open config '" + path + "'");
    Json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::SchemaError, std::string("invalid config JSON: ") + e.what());
    }
    return from_json(j);
  }
};

// FNV-1a over the canonical config dump; stable across runs and platforms.
inline std::string config_hash(const Config& cfg) {
  const std::string s = cfg.to_json().dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline Json report_to_json(const CheckReport& rep, const std::string& cfg_hash,
                           bool deterministic) {
  Json j;
  j["check"] = rep.id;
  j["verdict"] = verdict_name(rep.verdict);
  Json margins = Json::object();
  for (const auto& [k, v] : rep.margins) margins[k] = v;
  j["margins"] = margins;
  if (!rep.values.empty()) {
    Json values = Json::object();
    for (const auto& [k, v] : rep.values) values[k] = v;
    j["values"] = values;
  }
  if (!rep.grid.empty()) j["grid"] = rep.grid;
  if (!rep.tolerances.empty()) j["tolerances"] = rep.tolerances;
  if (!rep.offending.is_null()) j["offending"] = rep.offending;
  j["config"] = cfg_hash;
  if (!deterministic) j["timing_ms"] = rep.timing_ms;
  return j;
}

}  // namespace nflab

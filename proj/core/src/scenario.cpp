#include "radiomap/scenario.hpp"

#include <cctype>
#include <set>

#include <json.hpp>

#include "radiomap/error.hpp"

namespace radiomap {

namespace {

using json = nlohmann::json;

const json& require(const json& obj, const std::string& key, const std::string& ptr) {
  if (!obj.is_object()) throw SchemaError(ptr, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(ptr + "/" + key, "missing required field");
  return *it;
}

double number(const json& v, const std::string& ptr) {
  if (!v.is_number()) throw SchemaError(ptr, "expected a number");
  return v.get<double>();
}

double number_or(const json& obj, const std::string& key, double fallback, const std::string& ptr) {
  const auto it = obj.find(key);
  return it == obj.end() ? fallback : number(*it, ptr + "/" + key);
}

std::uint64_t count(const json& v, const std::string& ptr) {
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw SchemaError(ptr, "expected a non-negative integer");
  return v.get<std::uint64_t>();
}

LocalPoint point(const json& v, const std::string& ptr) {
  if (!v.is_array() || v.size() != 2) throw SchemaError(ptr, "expected [x, y]");
  return {number(v[0], ptr + "/0"), number(v[1], ptr + "/1")};
}

GridSpec parse_grid(const json& g, const std::string& ptr) {
  GridSpec spec;
  const auto& origin = require(g, "origin", ptr);
  spec.origin.lat = number(require(origin, "lat", ptr + "/origin"), ptr + "/origin/lat");
  spec.origin.lon = number(require(origin, "lon", ptr + "/origin"), ptr + "/origin/lon");
  spec.cell_size = number(require(g, "cell_size", ptr), ptr + "/cell_size");
  spec.rows = count(require(g, "rows", ptr), ptr + "/rows");
  spec.cols = count(require(g, "cols", ptr), ptr + "/cols");
  try {
    validate(spec);
  } catch (const Error& e) {
    throw SchemaError(ptr, e.what());
  }
  return spec;
}

PathLossField parse_field(const json& f, const std::string& ptr, std::uint64_t seed) {
  PathLossField field;
  field.tx = point(require(f, "tx", ptr), ptr + "/tx");
  field.p0 = number_or(f, "p0_dbm", field.p0, ptr);
  field.n = number_or(f, "path_loss_exponent", field.n, ptr);
  field.d0 = number_or(f, "d0_m", field.d0, ptr);
  field.noise_sigma = number_or(f, "shadowing_sigma_db", field.noise_sigma, ptr);
  field.shadow_cell = number_or(f, "shadowing_cell_m", field.shadow_cell, ptr);
  if (const auto it = f.find("flat"); it != f.end()) {
    if (!it->is_boolean()) throw SchemaError(ptr + "/flat", "expected a boolean");
    field.flat = it->get<bool>();
  }
  field.seed = seed;
  if (!(field.n > 0.0)) throw SchemaError(ptr + "/path_loss_exponent", "must be > 0");
  if (!(field.d0 > 0.0)) throw SchemaError(ptr + "/d0_m", "must be > 0");
  if (!(field.noise_sigma >= 0.0)) throw SchemaError(ptr + "/shadowing_sigma_db", "must be >= 0");
  if (!(field.shadow_cell > 0.0)) throw SchemaError(ptr + "/shadowing_cell_m", "must be > 0");
  return field;
}

DefectScript parse_defects(const json& d, const std::string& ptr) {
  DefectScript script;
  if (!d.is_object()) throw SchemaError(ptr, "expected an object");
  if (const auto it = d.find("stuck_windows"); it != d.end()) {
    if (!it->is_array()) throw SchemaError(ptr + "/stuck_windows", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const auto p = ptr + "/stuck_windows/" + std::to_string(i);
      const auto& w = (*it)[i];
      StuckWindow sw{number(require(w, "start_t", p), p + "/start_t"),
                     number(require(w, "end_t", p), p + "/end_t")};
      if (!(sw.start_t < sw.end_t)) throw SchemaError(p, "start_t must be < end_t");
      script.stuck_windows.push_back(sw);
    }
    try {
      DefectScript{script.stuck_windows, {}}.validate();
    } catch (const Error& e) {
      throw SchemaError(ptr + "/stuck_windows", e.what());
    }
  }
  if (const auto it = d.find("noise_windows"); it != d.end()) {
    if (!it->is_array()) throw SchemaError(ptr + "/noise_windows", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const auto p = ptr + "/noise_windows/" + std::to_string(i);
      const auto& w = (*it)[i];
      NoiseWindow nw{number(require(w, "start_t", p), p + "/start_t"),
                     number(require(w, "end_t", p), p + "/end_t"),
                     number(require(w, "pos_sigma_m", p), p + "/pos_sigma_m")};
      if (!(nw.start_t < nw.end_t)) throw SchemaError(p, "start_t must be < end_t");
      if (!(nw.pos_sigma >= 0.0)) throw SchemaError(p + "/pos_sigma_m", "must be >= 0");
      script.noise_windows.push_back(nw);
    }
    try {
      DefectScript{{}, script.noise_windows}.validate();
    } catch (const Error& e) {
      throw SchemaError(ptr + "/noise_windows", e.what());
    }
  }
  return script;
}

bool valid_id(const std::string& id) {
  if (id.empty()) return false;
  for (char c : id)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
  return true;
}

WalkerSpec parse_walker(const json& w, const std::string& ptr) {
  WalkerSpec spec;
  const auto& id = require(w, "id", ptr);
  if (!id.is_string() || !valid_id(id.get<std::string>()))
    throw SchemaError(ptr + "/id", "expected a non-empty [A-Za-z0-9_-] string");
  spec.id = id.get<std::string>();
  spec.speed = number(require(w, "speed_mps", ptr), ptr + "/speed_mps");
  if (!(spec.speed > 0.0)) throw SchemaError(ptr + "/speed_mps", "must be > 0");
  spec.start_t = number_or(w, "start_t", spec.start_t, ptr);
  spec.sample_period = number_or(w, "sample_period_s", spec.sample_period, ptr);
  if (!(spec.sample_period > 0.0)) throw SchemaError(ptr + "/sample_period_s", "must be > 0");
  const auto& wps = require(w, "waypoints", ptr);
  if (!wps.is_array() || wps.empty())
    throw SchemaError(ptr + "/waypoints", "expected a non-empty array");
  for (std::size_t i = 0; i < wps.size(); ++i)
    spec.waypoints.push_back(point(wps[i], ptr + "/waypoints/" + std::to_string(i)));
  if (const auto it = w.find("defects"); it != w.end())
    spec.defects = parse_defects(*it, ptr + "/defects");
  return spec;
}

}  // namespace

Scenario parse_scenario(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SchemaError("", std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw SchemaError("", "expected an object");
  Scenario s;
  if (const auto it = root.find("seed"); it != root.end()) s.seed = count(*it, "/seed");
  s.grid = parse_grid(require(root, "grid", ""), "/grid");
  s.field = parse_field(require(root, "field", ""), "/field", s.seed);
  const auto& walkers = require(root, "walkers", "");
  if (!walkers.is_array() || walkers.empty())
    throw SchemaError("/walkers", "expected a non-empty array");
  std::set<std::string> ids;
  for (std::size_t i = 0; i < walkers.size(); ++i) {
    const auto ptr = "/walkers/" + std::to_string(i);
    s.walkers.push_back(parse_walker(walkers[i], ptr));
    if (!ids.insert(s.walkers.back().id).second) throw SchemaError(ptr + "/id", "duplicate walker id");
  }
  return s;
}

SimulationOutput run_scenario(const Scenario& scenario) {
  SimulationOutput out;
  for (const auto& w : scenario.walkers) {
    const auto path = sample_polyline(w.waypoints, w.speed, w.start_t, w.sample_period);
    out.traces.push_back(
        generate_trace(scenario.field, path, w.defects, scenario.grid, w.id, scenario.seed));
  }
  out.truth = truth_grid(scenario.field, scenario.grid);
  return out;
}

}  // namespace radiomap

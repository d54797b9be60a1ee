//-----------------------------------------------------------------------------
// Copyright 2026 The hemofsi authors
// SPDX-License-Identifier: Apache-2.0
//-----------------------------------------------------------------------------
#include "hemofsi/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hemofsi/error.hpp"

namespace hemofsi {

namespace {

using json = nlohmann::ordered_json;

struct UnitEntry {
  std::string_view kind;
  std::string_view unit;
  double factor;
};

// Factors into the canonical unit of each kind (listed first).
constexpr UnitEntry kUnits[] = {
    {"length", "cm", 1.0},           {"length", "mm", 0.1},          {"length", "m", 100.0},
    {"time", "s", 1.0},              {"time", "ms", 1e-3},
    {"velocity", "cm/s", 1.0},       {"velocity", "mm/s", 0.1},      {"velocity", "m/s", 100.0},
    {"viscosity", "Pa.s", 1.0},      {"viscosity", "Pa*s", 1.0},     {"viscosity", "mPa.s", 1e-3},
    {"viscosity", "P", 0.1},         {"viscosity", "poise", 0.1},    {"viscosity", "cP", 1e-3},
    {"density", "g/cm3", 1.0},       {"density", "kg/m3", 1e-3},
    {"wall_coefficient", "N/cm2", 1.0}, {"wall_coefficient", "Pa", 1e-4}, {"wall_coefficient", "kPa", 0.1},
    {"wall_coefficient", "MPa", 100.0}, {"wall_coefficient", "dyn/cm2", 1e-5},
    {"modulus", "MPa", 1.0},         {"modulus", "GPa", 1e3},        {"modulus", "kPa", 1e-3},
    {"modulus", "Pa", 1e-6},         {"modulus", "N/cm2", 1e-2},     {"modulus", "dyn/cm2", 1e-7},
};

std::string_view canonical_unit(std::string_view kind) {
  for (const auto& u : kUnits) {
    if (u.kind == kind) return u.unit;
  }
  return "";
}

class Reader {
 public:
  Reader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(where() + ": must be an object");
  }

  bool has(const std::string& key) const { return obj_.contains(key); }

  void number(const std::string& key, std::string_view kind, double& out) {
    if (!take(key)) return;
    const json& v = obj_.at(key);
    if (v.is_number()) {
      out = v.get<double>();
    } else if (v.is_string()) {
      out = parse_quantity(v.get<std::string>(), kind, key);
    } else {
      throw ConfigError(where(key) + ": expected a number or \"<value> <unit>\"");
    }
    if (!std::isfinite(out)) throw ConfigError(where(key) + ": must be finite");
  }

  void integer(const std::string& key, int& out) {
    if (!take(key)) return;
    const json& v = obj_.at(key);
    if (!v.is_number_integer()) throw ConfigError(where(key) + ": expected an integer");
    out = v.get<int>();
  }

  void string(const std::string& key, std::string& out) {
    if (!take(key)) return;
    const json& v = obj_.at(key);
    if (!v.is_string()) throw ConfigError(where(key) + ": expected a string");
    out = v.get<std::string>();
  }

  template <typename E>
  void choice(const std::string& key, std::initializer_list<std::pair<std::string_view, E>> options, E& out) {
    std::string s;
    string(key, s);
    if (s.empty()) return;
    for (const auto& [name, value] : options) {
      if (name == s) {
        out = value;
        return;
      }
    }
    std::string allowed;
    for (const auto& o : options) allowed += (allowed.empty() ? "" : ", ") + std::string(o.first);
    throw ConfigError(where(key) + ": unknown value \"" + s + "\" (expected one of " + allowed + ")");
  }

  Reader child(const std::string& key) {
    take(key);
    return Reader(obj_.at(key), where(key));
  }

  const json& raw(const std::string& key) {
    take(key);
    return obj_.at(key);
  }

  std::string where(const std::string& key = {}) const {
    if (key.empty()) return path_.empty() ? "<root>" : path_;
    return path_.empty() ? key : path_ + "." + key;
  }

  void finish() const {
    for (const auto& item : obj_.items()) {
      if (!seen_.contains(item.key())) throw ConfigError(where(item.key()) + ": unknown key");
    }
  }

 private:
  bool take(const std::string& key) {
    seen_.insert(key);
    return obj_.contains(key);
  }

  double parse_quantity(const std::string& text, std::string_view kind, const std::string& key) const {
    const auto space = text.find_first_of(" \t");
    const std::string num = text.substr(0, space);
    double value = 0.0;
    const auto res = std::from_chars(num.data(), num.data() + num.size(), value);
    if (res.ec != std::errc{} || res.ptr != num.data() + num.size()) {
      throw ConfigError(where(key) + ": cannot parse \"" + text + "\"");
    }
    std::string unit = space == std::string::npos ? std::string() : text.substr(space);
    unit.erase(0, unit.find_first_not_of(" \t"));
    unit.erase(unit.find_last_not_of(" \t") + 1);
    if (unit.empty()) return value;
    if (kind == "none") throw ConfigError(where(key) + ": dimensionless, got unit \"" + unit + "\"");
    try {
      return value * unit_factor(kind, unit);
    } catch (const ConfigError& e) {
      throw ConfigError(where(key) + ": " + e.what());
    }
  }

  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

RunConfig from_json(const json& root) {
  RunConfig cfg;
  if (root.is_null()) {
    cfg.validate();
    return cfg;
  }
  Reader r(root, "");
  if (r.has("geometry")) {
    Reader g = r.child("geometry");
    auto& geo = cfg.geometry;
    g.number("length", "length", geo.length);
    g.number("height", "length", geo.height);
    g.number("wall_thickness", "length", geo.wall_thickness);
    g.number("bump_center", "length", geo.bump_center);
    g.number("bump_half_width", "length", geo.bump_half_width);
    g.number("occlusion", "none", geo.occlusion);
    g.number("mesh_size", "length", geo.mesh_size);
    g.choice<WallSupport>("support", {{"outer", WallSupport::Outer}, {"ends", WallSupport::Ends}}, geo.support);
    g.finish();
  }
  auto& c = cfg.coupling;
  if (r.has("fluid")) {
    Reader f = r.child("fluid");
    f.number("rho", "density", c.fluid.rho);
    f.number("epsilon", "none", c.fluid.epsilon);
    f.number("newtonian_mu", "viscosity", c.newtonian_mu);
    f.choice<ViscosityModel>("viscosity_model",
                             {{"newtonian", ViscosityModel::Newtonian},
                              {"carreau", ViscosityModel::Carreau},
                              {"modified_carreau", ViscosityModel::ModifiedCarreau}},
                             c.viscosity);
    f.finish();
  }
  if (r.has("inlet")) {
    Reader in = r.child("inlet");
    in.number("amplitude", "velocity", c.fluid.inlet_amplitude);
    in.choice<InletWaveform>("waveform",
                             {{"sine_squared", InletWaveform::SineSquared},
                              {"gated", InletWaveform::Gated},
                              {"constant", InletWaveform::Constant}},
                             c.fluid.waveform);
    in.finish();
  }
  if (r.has("time")) {
    Reader t = r.child("time");
    t.number("dt", "time", c.fluid.dt);
    t.number("detection_time", "time", cfg.detection_time);
    t.number("end_time", "time", cfg.end_time);
    t.finish();
  }
  if (r.has("carreau")) {
    Reader k = r.child("carreau");
    k.number("mu0", "viscosity", c.carreau.mu0);
    k.number("mu_inf", "viscosity", c.carreau.mu_inf);
    k.number("lambda", "time", c.carreau.lambda);
    k.number("n", "none", c.carreau.n);
    k.finish();
  }
  if (r.has("wall")) {
    Reader w = r.child("wall");
    w.number("c0", "wall_coefficient", c.wall.c0);
    w.number("c1", "wall_coefficient", c.wall.c1);
    w.number("c2", "wall_coefficient", c.wall.c2);
    w.finish();
  }
  if (r.has("newton")) {
    Reader n = r.child("newton");
    n.number("tol", "length", c.newton.tol);
    n.integer("max_iterations", c.newton.max_iterations);
    n.number("epsilon", "none", c.newton.epsilon);
    n.integer("max_halvings", c.newton.max_halvings);
    n.finish();
  }
  if (r.has("clot")) {
    Reader k = r.child("clot");
    k.number("young", "modulus", cfg.clot.young);
    k.number("poisson", "none", cfg.clot.poisson);
    k.finish();
  }
  if (r.has("detection")) {
    Reader d = r.child("detection");
    d.number("mu_threshold", "viscosity", cfg.detection.mu_threshold);
    d.number("speed_threshold", "velocity", cfg.detection.speed_threshold);
    d.number("downstream_of", "length", cfg.detection.downstream_of);
    d.finish();
  }
  if (r.has("probes")) {
    const json& arr = r.raw("probes");
    if (!arr.is_array()) throw ConfigError("probes: must be an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      Reader p(arr[i], "probes[" + std::to_string(i) + "]");
      ProbePoint pt;
      pt.name = "P" + std::to_string(i);
      p.string("name", pt.name);
      if (!p.has("x") || !p.has("y")) throw ConfigError(p.where() + ": needs x and y");
      p.number("x", "length", pt.position.x);
      p.number("y", "length", pt.position.y);
      p.finish();
      cfg.probes.push_back(pt);
    }
  }
  if (r.has("output")) {
    Reader o = r.child("output");
    o.string("directory", cfg.output.directory);
    o.integer("vtk_every", cfg.output.vtk_every);
    o.integer("csv_every", cfg.output.csv_every);
    o.finish();
  }
  r.finish();
  cfg.validate();
  return cfg;
}

template <typename E>
std::string_view name_of(E value, std::initializer_list<std::pair<std::string_view, E>> options) {
  for (const auto& [name, v] : options) {
    if (v == value) return name;
  }
  return "";
}

}  // namespace

double unit_factor(std::string_view kind, std::string_view unit) {
  bool known_kind = false;
  for (const auto& u : kUnits) {
    if (u.kind != kind) continue;
    known_kind = true;
    if (u.unit == unit) return u.factor;
  }
  if (!known_kind) throw ConfigError("unknown quantity kind \"" + std::string(kind) + "\"");
  throw ConfigError("unit \"" + std::string(unit) + "\" is not a " + std::string(kind) + " unit (expected e.g. " +
                    std::string(canonical_unit(kind)) + ")");
}

void RunConfig::validate() const {
  try {
    geometry.validate();
  } catch (const MeshError& e) {
    throw ConfigError(e.what());
  }
  coupling.validate();
  clot.validate();
  if (!(detection.mu_threshold > 0.0)) throw ConfigError("detection.mu_threshold: must be positive");
  if (!(detection.speed_threshold > 0.0)) throw ConfigError("detection.speed_threshold: must be positive");
  if (!(detection_time >= 0.0)) throw ConfigError("time.detection_time: must be non-negative");
  if (!(end_time >= detection_time)) throw ConfigError("time.end_time: must not precede time.detection_time");
  if (output.directory.empty()) throw ConfigError("output.directory: must not be empty");
  if (output.vtk_every < 0) throw ConfigError("output.vtk_every: must be non-negative");
  if (output.csv_every < 1) throw ConfigError("output.csv_every: must be at least 1");
}

int RunConfig::detection_step() const { return static_cast<int>(std::llround(detection_time / coupling.fluid.dt)); }

int RunConfig::final_step() const { return static_cast<int>(std::llround(end_time / coupling.fluid.dt)); }

RunConfig parse_config(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return from_json(json());
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("<root>: malformed JSON: ") + e.what());
  }
  return from_json(root);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string dump_config(const RunConfig& cfg) {
  const auto& c = cfg.coupling;
  json j;
  j["geometry"] = {{"length", cfg.geometry.length},
                   {"height", cfg.geometry.height},
                   {"wall_thickness", cfg.geometry.wall_thickness},
                   {"bump_center", cfg.geometry.bump_center},
                   {"bump_half_width", cfg.geometry.bump_half_width},
                   {"occlusion", cfg.geometry.occlusion},
                   {"mesh_size", cfg.geometry.mesh_size},
                   {"support", name_of<WallSupport>(cfg.geometry.support,
                                                    {{"outer", WallSupport::Outer}, {"ends", WallSupport::Ends}})}};
  j["fluid"] = {{"rho", c.fluid.rho},
                {"epsilon", c.fluid.epsilon},
                {"newtonian_mu", c.newtonian_mu},
                {"viscosity_model", name_of<ViscosityModel>(c.viscosity,
                                                            {{"newtonian", ViscosityModel::Newtonian},
                                                             {"carreau", ViscosityModel::Carreau},
                                                             {"modified_carreau", ViscosityModel::ModifiedCarreau}})}};
  j["inlet"] = {{"amplitude", c.fluid.inlet_amplitude},
                {"waveform", name_of<InletWaveform>(c.fluid.waveform,
                                                    {{"sine_squared", InletWaveform::SineSquared},
                                                     {"gated", InletWaveform::Gated},
                                                     {"constant", InletWaveform::Constant}})}};
  j["time"] = {{"dt", c.fluid.dt}, {"detection_time", cfg.detection_time}, {"end_time", cfg.end_time}};
  j["carreau"] = {{"mu0", c.carreau.mu0}, {"mu_inf", c.carreau.mu_inf}, {"lambda", c.carreau.lambda}, {"n", c.carreau.n}};
  j["wall"] = {{"c0", c.wall.c0}, {"c1", c.wall.c1}, {"c2", c.wall.c2}};
  j["newton"] = {{"tol", c.newton.tol},
                 {"max_iterations", c.newton.max_iterations},
                 {"epsilon", c.newton.epsilon},
                 {"max_halvings", c.newton.max_halvings}};
  j["clot"] = {{"young", cfg.clot.young}, {"poisson", cfg.clot.poisson}};
  j["detection"] = {{"mu_threshold", cfg.detection.mu_threshold}, {"speed_threshold", cfg.detection.speed_threshold}};
  if (std::isfinite(cfg.detection.downstream_of)) j["detection"]["downstream_of"] = cfg.detection.downstream_of;
  json probes = json::array();
  for (const auto& p : cfg.probes) probes.push_back({{"name", p.name}, {"x", p.position.x}, {"y", p.position.y}});
  j["probes"] = probes;
  j["output"] = {{"directory", cfg.output.directory}, {"vtk_every", cfg.output.vtk_every}, {"csv_every", cfg.output.csv_every}};
  return j.dump(2) + "\n";
}

}  // namespace hemofsi

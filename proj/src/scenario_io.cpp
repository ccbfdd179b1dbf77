#include "autorvo/scenario_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "autorvo/errors.hpp"

namespace autorvo::sim {

namespace {

using dynamics::DynamicsParams;

const std::set<std::string> kTopLevelKeys = {"agents",   "obstacles", "agent_types", "nav",
                                             "duration", "seed",      "goal_radius", "name",
                                             "description"};
const std::set<std::string> kAgentKeys = {"id",    "type", "disks", "position",        "theta",
                                          "goal",  "v",    "phi",   "reference_offset"};
const std::set<std::string> kObstacleKeys = {"id", "disks", "position", "theta"};
const std::vector<AgentType> kAllTypes = {AgentType::Pedestrian, AgentType::Bicycle,
                                          AgentType::Tricycle, AgentType::Car};

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ValidationError(path + ": " + what);
}

double number_at(const Json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "must be finite");
  return v;
}

Vec2 point_at(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) fail(path, "expected [x, y]");
  return {number_at(j[0], path + "[0]"), number_at(j[1], path + "[1]")};
}

std::vector<geometry::Disk> disks_at(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty list of [x, y, r]");
  std::vector<geometry::Disk> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    if (!j[i].is_array() || j[i].size() != 3) fail(p, "expected [x, y, r]");
    const double r = number_at(j[i][2], p + "[2]");
    if (r < 0.0) fail(p, "radius must be >= 0");
    out.push_back({{number_at(j[i][0], p + "[0]"), number_at(j[i][1], p + "[1]")}, r});
  }
  return out;
}

void check_keys(const Json& obj, const std::set<std::string>& allowed, const std::string& path) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) fail(path.empty() ? key : path + "." + key, "unknown key");
  }
}

// Recursively merges `user` into `base`; every user key must already exist.
void merge_known(Json& base, const Json& user, const std::string& path) {
  if (!user.is_object()) fail(path, "expected an object");
  for (const auto& [key, value] : user.items()) {
    const std::string p = path + "." + key;
    if (!base.contains(key)) fail(p, "unknown key");
    if (base[key].is_object()) {
      merge_known(base[key], value, p);
    } else {
      base[key] = value;
    }
  }
}

std::string id_at(const Json& j, const std::string& path) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  fail(path, "expected a string or integer id");
}

nav::NavConfig nav_from_json(const Json& j) {
  nav::NavConfig c;
  auto num = [&](const char* key) { return number_at(j.at(key), std::string("nav.") + key); };
  auto integer = [&](const char* key) {
    const Json& v = j.at(key);
    if (!v.is_number_integer()) fail(std::string("nav.") + key, "expected an integer");
    return v.get<int>();
  };
  auto boolean = [&](const char* key) {
    const Json& v = j.at(key);
    if (!v.is_boolean()) fail(std::string("nav.") + key, "expected true/false");
    return v.get<bool>();
  };
  c.sigma = num("sigma");
  c.detection_radius = num("detection_radius");
  c.tau = num("tau");
  c.kappa = num("kappa");
  c.substeps_collision = integer("substeps_collision");
  c.integration_substeps = integer("integration_substeps");
  c.samples_v = integer("samples_v");
  c.samples_phi = integer("samples_phi");
  c.speedup_factor = num("speedup_factor");
  c.dynamics = boolean("dynamics");
  c.f3_clamp_nonnegative = boolean("f3_clamp_nonnegative");
  c.safety_margin = num("safety_margin");
  c.guard_stopped_neighbors = boolean("guard_stopped_neighbors");
  c.min_heading_window = num("min_heading_window");
  const Json& w = j.at("weights");
  for (const char* key : {"a", "b", "c", "d", "e"}) {
    number_at(w.at(key), std::string("nav.weights.") + key);
  }
  c.weights = {w.at("a").get<double>(), w.at("b").get<double>(), w.at("c").get<double>(),
               w.at("d").get<double>(), w.at("e").get<double>()};
  c.validate();
  return c;
}

DynamicsParams params_from_json(AgentType type, const Json& j, const std::string& path) {
  DynamicsParams p = dynamics::default_params(type);
  auto num = [&](const char* key) { return number_at(j.at(key), path + "." + key); };
  p.wheelbase = num("L");
  p.phi_max = num("phi_max");
  p.v_max_type = num("v_max_type");
  p.a_throttle = num("a_throttle");
  p.a_brake = num("a_brake");
  p.phi_rate_max = num("phi_rate_max");
  p.steer_gain = num("steer_gain");
  p.g = num("g");
  p.mu = num("mu");
  p.t_react = num("t_react");
  try {
    p.validate();
  } catch (const ValidationError& e) {
    fail(path, e.what());
  }
  return p;
}

Json resolve_override_target(Json& doc, const std::string& path, Json** target) {
  std::stringstream ss(path);
  std::string segment;
  Json* node = &doc;
  std::string walked;
  while (std::getline(ss, segment, '.')) {
    walked += walked.empty() ? segment : "." + segment;
    if (node->is_object()) {
      if (!node->contains(segment)) fail(walked, "unknown override path");
      node = &(*node)[segment];
    } else if (node->is_array()) {
      std::size_t idx = 0;
      try {
        std::size_t used = 0;
        idx = std::stoul(segment, &used);
        if (used != segment.size()) throw std::invalid_argument(segment);
      } catch (const std::exception&) {
        fail(walked, "unknown override path");
      }
      if (idx >= node->size()) fail(walked, "unknown override path");
      node = &(*node)[idx];
    } else {
      fail(walked, "unknown override path");
    }
  }
  *target = node;
  return *node;
}

}  // namespace

Override parse_override(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ValidationError(std::string(text) + ": override must look like key=value");
  }
  return {std::string(text.substr(0, eq)), std::string(text.substr(eq + 1))};
}

Json nav_to_json(const nav::NavConfig& c) {
  return Json{{"sigma", c.sigma},
              {"detection_radius", c.detection_radius},
              {"tau", c.tau},
              {"kappa", c.kappa},
              {"substeps_collision", c.substeps_collision},
              {"integration_substeps", c.integration_substeps},
              {"samples_v", c.samples_v},
              {"samples_phi", c.samples_phi},
              {"speedup_factor", c.speedup_factor},
              {"dynamics", c.dynamics},
              {"f3_clamp_nonnegative", c.f3_clamp_nonnegative},
              {"safety_margin", c.safety_margin},
              {"guard_stopped_neighbors", c.guard_stopped_neighbors},
              {"min_heading_window", c.min_heading_window},
              {"weights",
               {{"a", c.weights.a},
                {"b", c.weights.b},
                {"c", c.weights.c},
                {"d", c.weights.d},
                {"e", c.weights.e}}}};
}

nav::NavConfig apply_nav_overrides(const nav::NavConfig& base, const Json& partial) {
  Json j = nav_to_json(base);
  merge_known(j, partial, "nav");
  return nav_from_json(j);
}

Json params_to_json(const DynamicsParams& p) {
  return Json{{"L", p.wheelbase},         {"phi_max", p.phi_max},   {"v_max_type", p.v_max_type},
              {"a_throttle", p.a_throttle}, {"a_brake", p.a_brake},   {"phi_rate_max", p.phi_rate_max},
              {"steer_gain", p.steer_gain}, {"g", p.g},               {"mu", p.mu},
              {"t_react", p.t_react}};
}

Json agent_types_to_json(const std::map<AgentType, DynamicsParams>& types) {
  Json out = Json::object();
  for (const auto& [type, params] : types) out[std::string(dynamics::to_string(type))] = params_to_json(params);
  return out;
}

Vec2 default_reference_offset(AgentType type, std::span<const geometry::Disk> disks,
                              double wheelbase) {
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  for (const auto& d : disks) {
    x_lo = std::min(x_lo, d.center.x - d.radius);
    x_hi = std::max(x_hi, d.center.x + d.radius);
    y_lo = std::min(y_lo, d.center.y - d.radius);
    y_hi = std::max(y_hi, d.center.y + d.radius);
  }
  const Vec2 mid{(x_lo + x_hi) / 2, (y_lo + y_hi) / 2};
  if (!dynamics::is_vehicle(type)) return mid;
  return {mid.x + wheelbase / 2, mid.y};
}

Json effective_document(std::string_view text, std::span<const Override> overrides) {
  Json user;
  try {
    user = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed scenario: ") + e.what());
  }
  if (!user.is_object()) throw ParseError("scenario must be a JSON object");
  check_keys(user, kTopLevelKeys, "");

  Json doc = {{"duration", 60.0}, {"seed", 0}, {"goal_radius", 0.5}, {"agents", Json::array()},
              {"obstacles", Json::array()}};
  doc["nav"] = nav_to_json(nav::NavConfig{});
  if (user.contains("nav")) merge_known(doc["nav"], user["nav"], "nav");

  Json types = Json::object();
  for (AgentType t : kAllTypes) types[std::string(dynamics::to_string(t))] = params_to_json(dynamics::default_params(t));
  if (user.contains("agent_types")) {
    const Json& ut = user["agent_types"];
    if (!ut.is_object()) fail("agent_types", "expected an object");
    for (const auto& [name, value] : ut.items()) {
      if (!dynamics::agent_type_from_string(name)) fail("agent_types." + name, "unknown agent type");
      merge_known(types[name], value, "agent_types." + name);
    }
  }
  doc["agent_types"] = types;
  for (const char* key : {"duration", "seed", "goal_radius", "agents", "obstacles", "name", "description"}) {
    if (user.contains(key)) doc[key] = user[key];
  }

  for (const Override& o : overrides) {
    Json* target = nullptr;
    resolve_override_target(doc, o.path, &target);
    Json value;
    try {
      value = Json::parse(o.value);
    } catch (const Json::parse_error&) {
      value = o.value;
    }
    *target = value;
  }
  return doc;
}

Scenario load_scenario(std::string_view text, std::span<const Override> overrides) {
  const Json doc = effective_document(text, overrides);
  Scenario s;
  s.nav = nav_from_json(doc["nav"]);
  s.duration = number_at(doc["duration"], "duration");
  if (!(s.duration > 0.0)) fail("duration", "must be > 0");
  s.goal_radius = number_at(doc["goal_radius"], "goal_radius");
  if (!(s.goal_radius >= 0.0)) fail("goal_radius", "must be >= 0");
  if (!doc["seed"].is_number_integer()) fail("seed", "expected an integer");
  s.seed = doc["seed"].get<std::uint64_t>();

  for (AgentType t : kAllTypes) {
    const std::string name(dynamics::to_string(t));
    s.agent_types[t] = params_from_json(t, doc["agent_types"][name], "agent_types." + name);
  }

  std::set<std::string> ids;
  const Json& agents = doc["agents"];
  if (!agents.is_array()) fail("agents", "expected a list");
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const std::string path = "agents[" + std::to_string(i) + "]";
    const Json& a = agents[i];
    if (!a.is_object()) fail(path, "expected an object");
    check_keys(a, kAgentKeys, path);
    for (const char* key : {"id", "type", "position", "goal"}) {
      if (!a.contains(key)) fail(path + "." + key, "missing");
    }
    const std::string id = id_at(a["id"], path + ".id");
    if (!ids.insert(id).second) fail(path + ".id", "duplicate id '" + id + "'");
    if (!a["type"].is_string()) fail(path + ".type", "expected a string");
    const auto type = dynamics::agent_type_from_string(a["type"].get<std::string>());
    if (!type) fail(path + ".type", "unknown agent type '" + a["type"].get<std::string>() + "'");
    const DynamicsParams& dyn = s.agent_types.at(*type);
    auto disks = a.contains("disks") ? disks_at(a["disks"], path + ".disks") : dynamics::default_shape(*type);
    const Vec2 ref = a.contains("reference_offset")
                         ? point_at(a["reference_offset"], path + ".reference_offset")
                         : default_reference_offset(*type, disks, dyn.wheelbase);
    geometry::CtmatShape shape(std::move(disks), ref);
    if (!(shape.width() > 0.0)) fail(path + ".disks", "shape width must be > 0");
    const Vec2 position = point_at(a["position"], path + ".position");
    const Vec2 goal = point_at(a["goal"], path + ".goal");
    const double theta = a.contains("theta") ? number_at(a["theta"], path + ".theta") : 0.0;
    const double v = a.contains("v") ? number_at(a["v"], path + ".v") : 0.0;
    if (v < 0.0) fail(path + ".v", "must be >= 0");
    double phi = 0.0;
    if (a.contains("phi")) {
      phi = number_at(a["phi"], path + ".phi");
      if (dynamics::is_vehicle(*type) && std::abs(phi) > dyn.phi_max) fail(path + ".phi", "exceeds phi_max");
    }
    s.agents.push_back(make_agent(id, *type, std::move(shape), dyn, position, theta, goal, v, phi));
  }

  const Json& obstacles = doc["obstacles"];
  if (!obstacles.is_array()) fail("obstacles", "expected a list");
  for (std::size_t i = 0; i < obstacles.size(); ++i) {
    const std::string path = "obstacles[" + std::to_string(i) + "]";
    const Json& o = obstacles[i];
    if (!o.is_object()) fail(path, "expected an object");
    check_keys(o, kObstacleKeys, path);
    for (const char* key : {"id", "disks"}) {
      if (!o.contains(key)) fail(path + "." + key, "missing");
    }
    const std::string id = id_at(o["id"], path + ".id");
    if (!ids.insert(id).second) fail(path + ".id", "duplicate id '" + id + "'");
    geometry::CtmatShape local(disks_at(o["disks"], path + ".disks"));
    const Vec2 position = o.contains("position") ? point_at(o["position"], path + ".position") : Vec2{};
    const double theta = o.contains("theta") ? number_at(o["theta"], path + ".theta") : 0.0;
    s.obstacles.push_back({id, geometry::place_shape(local, {position, theta})});
  }

  // Initial overlaps.
  for (std::size_t i = 0; i < s.agents.size(); ++i) {
    const auto pi = s.agents[i].placed();
    for (std::size_t j = i + 1; j < s.agents.size(); ++j) {
      if (geometry::shapes_overlap(pi, s.agents[j].placed())) {
        throw ValidationError("agents: '" + s.agents[i].id + "' and '" + s.agents[j].id +
                              "' overlap initially");
      }
    }
    for (const Obstacle& o : s.obstacles) {
      if (geometry::shapes_overlap(pi, o.placed)) {
        throw ValidationError("agents: '" + s.agents[i].id + "' overlaps obstacle '" + o.id + "'");
      }
    }
  }

  s.config_echo = Json{{"nav", doc["nav"]},
                       {"agent_types", doc["agent_types"]},
                       {"duration", doc["duration"]},
                       {"goal_radius", doc["goal_radius"]},
                       {"seed", doc["seed"]}}
                      .dump();
  return s;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string() + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Scenario load_scenario_file(const std::filesystem::path& path, std::span<const Override> overrides) {
  return load_scenario(read_text_file(path), overrides);
}

Json scenario_to_json(const Scenario& s) {
  Json agents = Json::array();
  for (const AgentState& a : s.agents) {
    if (a.arrived) continue;
    Json disks = Json::array();
    for (const auto& d : a.shape.disks()) disks.push_back({d.center.x, d.center.y, d.radius});
    const Vec2 p = a.reference_point();
    const Vec2 off = a.shape.reference_offset();
    Json j = {{"id", a.id},
              {"type", std::string(dynamics::to_string(a.type))},
              {"disks", disks},
              {"reference_offset", {off.x, off.y}},
              {"position", {p.x, p.y}},
              {"theta", a.heading()},
              {"goal", {a.goal.x, a.goal.y}},
              {"v", a.speed()}};
    if (a.is_vehicle()) j["phi"] = a.steering();
    agents.push_back(j);
  }
  Json obstacles = Json::array();
  for (const Obstacle& o : s.obstacles) {
    Json disks = Json::array();
    for (const auto& d : o.placed.disks()) disks.push_back({d.center.x, d.center.y, d.radius});
    obstacles.push_back({{"id", o.id}, {"disks", disks}});
  }
  return Json{{"agents", agents},
              {"obstacles", obstacles},
              {"agent_types", agent_types_to_json(s.agent_types)},
              {"nav", nav_to_json(s.nav)},
              {"duration", s.duration},
              {"goal_radius", s.goal_radius},
              {"seed", s.seed}};
}

}  // namespace autorvo::sim

// Copyright 2026 The mafsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mafsim/scenario.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "mafsim/error.hpp"

namespace mafsim {

namespace {

using nlohmann::json;

const json* find(const json& j, const std::string& key) {
  auto it = j.find(key);
  return it == j.end() || it->is_null() ? nullptr : &*it;
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) {
    throw SimError(ErrorCode::ParseError, path + " must be a number");
  }
  return j.get<double>();
}

double number_or(const json& section, const std::string& key, const std::string& path,
                 double fallback) {
  const json* v = find(section, key);
  return v ? get_number(*v, path + "." + key) : fallback;
}

std::string string_or(const json& section, const std::string& key, const std::string& path,
                      const std::string& fallback) {
  const json* v = find(section, key);
  if (!v) return fallback;
  if (!v->is_string()) throw SimError(ErrorCode::ParseError, path + "." + key + " must be a string");
  return v->get<std::string>();
}

bool bool_or(const json& section, const std::string& key, const std::string& path,
             bool fallback) {
  const json* v = find(section, key);
  if (!v) return fallback;
  if (!v->is_boolean()) throw SimError(ErrorCode::ParseError, path + "." + key + " must be a bool");
  return v->get<bool>();
}

Vec2 get_vec2(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) {
    throw SimError(ErrorCode::ParseError, path + " must be [x, y]");
  }
  return {get_number(j[0], path + "[0]"), get_number(j[1], path + "[1]")};
}

std::vector<Vec2> get_points(const json& j, const std::string& path) {
  if (!j.is_array()) throw SimError(ErrorCode::ParseError, path + " must be an array of [x, y]");
  std::vector<Vec2> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(get_vec2(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

json vec2_json(const Vec2& v) { return json::array({v.x, v.y}); }

json points_json(const std::vector<Vec2>& pts) {
  json out = json::array();
  for (const Vec2& p : pts) out.push_back(vec2_json(p));
  return out;
}

std::vector<int> get_adjacency(const json& j, int n, const std::string& path) {
  if (!j.is_array()) throw SimError(ErrorCode::ParseError, path + " must be an array");
  std::vector<double> flat;
  if (!j.empty() && j[0].is_array()) {
    for (const auto& row : j) {
      for (const auto& v : row) flat.push_back(get_number(v, path));
    }
  } else {
    for (const auto& v : j) flat.push_back(get_number(v, path));
  }
  if (static_cast<int>(flat.size()) != n * n) {
    throw SimError(ErrorCode::ValidationError,
                   path + " has " + std::to_string(flat.size()) + " entries, expected " +
                       std::to_string(n * n));
  }
  std::vector<int> out;
  out.reserve(flat.size());
  for (double v : flat) {
    if (v != 0.0 && v != 1.0) {
      throw SimError(ErrorCode::NonBinaryEntry, path + " entry " + std::to_string(v));
    }
    out.push_back(v == 1.0 ? 1 : 0);
  }
  return out;
}

std::vector<int> complete_graph(int n) {
  std::vector<int> a(static_cast<std::size_t>(n) * n, 1);
  for (int i = 0; i < n; ++i) a[static_cast<std::size_t>(i) * n + i] = 0;
  return a;
}

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt3 = std::numbers::sqrt3;

json builtin_json(const std::string& name) {
  // Shared experiment setup: five obstacles, unit action radius, goal (14,14),
  // at most 800 steps.
  json j;
  j["environment"] = {
      {"obstacles", json::array({json::array({0.0, 1.5}), json::array({4.0, 3.0}),
                                 json::array({3.0, 8.8}), json::array({7.0, 5.0}),
                                 json::array({15.0, 16.0})})},
      {"rho_m", 1.0},
      {"target", json::array({14.0, 14.0})},
  };
  j["apf"] = {{"eta", 0.5},         {"k_r", 0.15},      {"eps_lmp", 1e-3},
              {"eps_goal", 0.5},    {"stall_window", 50}, {"stall_tol", 1e-4}};
  j["srm"] = {{"enabled", true}, {"gamma", 0.5}, {"mode", "add"}};
  j["control"] = {{"mode", "lilf"}, {"epsilon", 8.0}, {"gamma", 0.5},
                  {"mu", 1.0},      {"beta", 1.0},    {"leader_bias", "error"}};
  j["sim"] = {{"k_max", 800}, {"dt", 0.02}, {"seed", 1}};
  j["provenance"] = {
      {"environment.obstacles", "reference"}, {"environment.rho_m", "reference"},
      {"environment.target", "reference"},    {"sim.k_max", "reference"},
      {"sim.initial", "reference"},           {"topology.adjacency", "reference"},
      {"formation.offsets", "reference"},     {"formation.leader", "reference"},
      {"sim.dt", "tuned"},                    {"sim.seed", "tuned"},
      {"apf", "tuned"},                       {"srm", "tuned"},
      {"control", "tuned"},
  };

  if (name == "triangle") {
    j["name"] = "triangle";
    j["description"] =
        "Three agents forming a fixed triangle behind the leader while driving to the goal "
        "through the shared obstacle field.";
    j["topology"] = {{"mode", "static"}, {"adjacency", json::array({0, 1, 1, 1, 0, 1, 1, 1, 0})}};
    j["formation"] = {
        {"leader", 2},
        {"offsets", json::array({json::array({-1.5, 1.5}), json::array({-1.5, -1.5}),
                                 json::array({0.0, 0.0})})}};
    j["sim"]["initial"] = json::array({json::array({-4.0, -1.5, 0.0}),
                                       json::array({-2.5, -4.0, kPi / 4}),
                                       json::array({-6.0, -2.6, -kPi / 4})});
    return j;
  }
  if (name == "square") {
    j["name"] = "square";
    j["description"] =
        "Four agents on a 4-cycle holding a side-3 square while driving to the goal.";
    j["topology"] = {{"mode", "static"},
                     {"adjacency", json::array({0, 1, 0, 1, 1, 0, 1, 0, 0, 1, 0, 1, 1, 0, 1, 0})}};
    j["formation"] = {
        {"leader", 3},
        {"offsets", json::array({json::array({-3.0, 0.0}), json::array({-3.0, -3.0}),
                                 json::array({0.0, -3.0}), json::array({0.0, 0.0})})}};
    j["sim"]["initial"] = json::array(
        {json::array({-6.0, -0.5, 0.0}), json::array({-4.0, -4.5, kPi / 4}),
         json::array({-3.0, -3.0, -kPi / 4}), json::array({-3.5, -2.0, kPi / 4})});
    return j;
  }
  if (name == "hexagon") {
    j["name"] = "hexagon";
    j["description"] =
        "Six agents on a ring topology holding a side-2 hexagon while driving to the goal.";
    j["topology"] = {{"mode", "static"},
                     {"adjacency", json::array({0, 1, 0, 0, 0, 1, 1, 0, 1, 0, 0, 0,
                                                0, 1, 0, 1, 0, 0, 0, 0, 1, 0, 1, 0,
                                                0, 0, 0, 1, 0, 1, 1, 0, 0, 0, 1, 0})}};
    j["formation"] = {
        {"leader", 5},
        {"offsets",
         json::array({json::array({-1.0, kSqrt3}), json::array({-3.0, kSqrt3}),
                      json::array({-4.0, 0.0}), json::array({-3.0, -kSqrt3}),
                      json::array({-1.0, -kSqrt3}), json::array({0.0, 0.0})})}};
    j["sim"]["initial"] = json::array(
        {json::array({-4.0, -1.5, 0.0}), json::array({-2.5, -4.0, kPi / 4}),
         json::array({-6.0, -2.4, -kPi / 4}), json::array({-5.0, -2.0, kPi / 4}),
         json::array({-3.0, -1.5, kPi / 6}), json::array({-2.0, -3.0, -kPi / 6})});
    j["control"]["epsilon"] = 12.0;
    j["control"]["gamma"] = 0.55;
    j["apf"]["eta"] = 0.55;
    return j;
  }
  throw SimError(ErrorCode::UnknownScenario, "no builtin scenario named '" + name + "'");
}

}  // namespace

std::vector<std::string> builtin_scenario_names() { return {"triangle", "square", "hexagon"}; }

Scenario builtin_scenario(const std::string& name) {
  return scenario_from_json(builtin_json(name));
}

Scenario scenario_from_json(const json& j) {
  if (!j.is_object()) throw SimError(ErrorCode::ParseError, "scenario must be a JSON object");

  Scenario s;
  s.name = string_or(j, "name", "", "scenario");
  s.description = string_or(j, "description", "", "");

  const json* formation = find(j, "formation");
  if (!formation) throw SimError(ErrorCode::ParseError, "missing required section 'formation'");
  const json* offsets_j = find(*formation, "offsets");
  if (!offsets_j) throw SimError(ErrorCode::ParseError, "missing formation.offsets");
  std::vector<Vec2> offsets = get_points(*offsets_j, "formation.offsets");
  const int n = static_cast<int>(offsets.size());
  const int leader = static_cast<int>(number_or(*formation, "leader", "formation", n - 1));
  s.config.formation = FormationSpec::create(std::move(offsets), leader);

  json topo = find(j, "topology") ? *find(j, "topology") : json::object();
  const std::string topo_mode = string_or(topo, "mode", "topology", "static");
  if (topo_mode == "static") {
    std::vector<int> adj = find(topo, "adjacency")
                               ? get_adjacency(*find(topo, "adjacency"), n, "topology.adjacency")
                               : complete_graph(n);
    s.config.topology = Topology::from_flat_adjacency(n, adj);
  } else if (topo_mode == "radius") {
    const json* r = find(topo, "comm_radius");
    if (!r) throw SimError(ErrorCode::ParseError, "radius topology needs topology.comm_radius");
    s.config.topology = Topology::radius_based(n, get_number(*r, "topology.comm_radius"));
  } else {
    throw SimError(ErrorCode::ValidationError, "topology.mode must be 'static' or 'radius'");
  }

  json env = find(j, "environment") ? *find(j, "environment") : json::object();
  s.config.env.target =
      find(env, "target") ? get_vec2(*find(env, "target"), "environment.target") : Vec2{14.0, 14.0};
  s.config.env.rho_m = number_or(env, "rho_m", "environment", 1.0);
  if (find(env, "obstacles")) {
    s.config.env.obstacles = get_points(*find(env, "obstacles"), "environment.obstacles");
  }

  json apf = find(j, "apf") ? *find(j, "apf") : json::object();
  s.config.apf.eta = number_or(apf, "eta", "apf", 0.3);
  s.config.apf.k_r = number_or(apf, "k_r", "apf", 0.1);
  s.config.apf.eps_lmp = number_or(apf, "eps_lmp", "apf", 1e-3);
  s.config.apf.eps_goal = number_or(apf, "eps_goal", "apf", 0.5);
  s.config.apf.stall_window = static_cast<int>(number_or(apf, "stall_window", "apf", 50));
  s.config.apf.stall_tol = number_or(apf, "stall_tol", "apf", 1e-4 * s.config.env.rho_m);
  s.config.rho_a = number_or(apf, "rho_a", "apf", 0.0);

  json srm = find(j, "srm") ? *find(j, "srm") : json::object();
  s.config.srm_enabled = bool_or(srm, "enabled", "srm", true);
  s.config.apf.gamma_srm = number_or(srm, "gamma", "srm", 0.5);
  s.config.srm_mode = srm_mode_from_string(string_or(srm, "mode", "srm", "add"));

  json control = find(j, "control") ? *find(j, "control") : json::object();
  s.config.mode = control_mode_from_string(string_or(control, "mode", "control", "lilf"));
  s.config.gains.epsilon = number_or(control, "epsilon", "control", 1.0);
  s.config.gains.gamma = number_or(control, "gamma", "control", 0.3);
  s.config.gains.mu = number_or(control, "mu", "control", 1.0);
  s.config.gains.beta = number_or(control, "beta", "control", 1.0);
  s.config.leader_bias = leader_bias_from_string(string_or(control, "leader_bias", "control",
                                                           "error"));

  json sim = find(j, "sim") ? *find(j, "sim") : json::object();
  s.config.k_max = static_cast<int>(number_or(sim, "k_max", "sim", 800));
  s.config.dt = number_or(sim, "dt", "sim", 1.0);
  s.config.seed = static_cast<std::uint64_t>(number_or(sim, "seed", "sim", 1));
  if (find(sim, "initial")) {
    const json& init = *find(sim, "initial");
    if (!init.is_array()) throw SimError(ErrorCode::ParseError, "sim.initial must be an array");
    for (std::size_t i = 0; i < init.size(); ++i) {
      const json& row = init[i];
      const std::string path = "sim.initial[" + std::to_string(i) + "]";
      if (!row.is_array() || row.size() < 2 || row.size() > 3) {
        throw SimError(ErrorCode::ParseError, path + " must be [x, y] or [x, y, heading]");
      }
      AgentState st;
      st.position = {get_number(row[0], path), get_number(row[1], path)};
      st.heading = row.size() == 3 ? wrap_angle(get_number(row[2], path)) : 0.0;
      s.config.initial_states.push_back(st);
    }
  } else {
    // Default launch: every agent already at its formation slot.
    for (const Vec2& o : s.config.formation.offsets) {
      s.config.initial_states.push_back(AgentState{o, 0.0, {}});
    }
  }

  if (find(j, "provenance")) {
    const json& prov = *find(j, "provenance");
    if (!prov.is_object()) throw SimError(ErrorCode::ParseError, "provenance must be an object");
    for (auto it = prov.begin(); it != prov.end(); ++it) {
      if (!it.value().is_string()) {
        throw SimError(ErrorCode::ParseError, "provenance values must be strings");
      }
      s.provenance[it.key()] = it.value().get<std::string>();
    }
  }

  s.config.finalize();
  s.config.validate();
  s.warnings = s.config.env.soft_warnings();
  return s;
}

json scenario_to_json(const Scenario& s) {
  const SimConfig& c = s.config;
  json j;
  j["name"] = s.name;
  j["description"] = s.description;

  json topo;
  if (c.topology.mode() == TopologyMode::Static) {
    topo["mode"] = "static";
    topo["adjacency"] = c.topology.adjacency();
  } else {
    topo["mode"] = "radius";
    topo["comm_radius"] = c.topology.comm_radius();
  }
  j["topology"] = topo;

  j["formation"] = {{"leader", c.formation.leader}, {"offsets", points_json(c.formation.offsets)}};
  j["environment"] = {{"target", vec2_json(c.env.target)},
                      {"rho_m", c.env.rho_m},
                      {"obstacles", points_json(c.env.obstacles)}};
  j["apf"] = {{"eta", c.apf.eta},
              {"k_r", c.apf.k_r},
              {"eps_lmp", c.apf.eps_lmp},
              {"eps_goal", c.apf.eps_goal},
              {"stall_window", c.apf.stall_window},
              {"stall_tol", c.apf.stall_tol},
              {"rho_a", c.rho_a}};
  j["srm"] = {{"enabled", c.srm_enabled},
              {"gamma", c.apf.gamma_srm},
              {"mode", to_string(c.srm_mode)}};
  j["control"] = {{"mode", to_string(c.mode)},       {"epsilon", c.gains.epsilon},
                  {"gamma", c.gains.gamma},          {"mu", c.gains.mu},
                  {"beta", c.gains.beta},            {"leader_bias", to_string(c.leader_bias)}};
  json initial = json::array();
  for (const AgentState& st : c.initial_states) {
    initial.push_back(json::array({st.position.x, st.position.y, st.heading}));
  }
  j["sim"] = {{"k_max", c.k_max},
              {"dt", c.dt},
              {"seed", c.seed},
              {"initial", initial}};
  j["provenance"] = s.provenance.empty() ? json::object() : json(s.provenance);
  return j;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SimError(ErrorCode::IoError, "cannot open '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SimError(ErrorCode::ParseError, path + ": " + e.what());
  }
  Scenario s = scenario_from_json(j);
  if (s.name.empty()) s.name = "scenario";
  return s;
}

void save_scenario(const Scenario& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw SimError(ErrorCode::IoError, "cannot write '" + path + "'");
  out << scenario_to_json(s).dump(2) << "\n";
  if (!out) throw SimError(ErrorCode::IoError, "write failed for '" + path + "'");
}

void apply_override(json& config, const std::string& dotted_key, const std::string& value) {
  if (dotted_key.empty()) throw SimError(ErrorCode::ValidationError, "empty override key");
  json* node = &config;
  std::stringstream keys(dotted_key);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(keys, part, '.')) parts.push_back(part);
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    node = &(*node)[parts[i]];
    if (!node->is_object() && !node->is_null()) {
      throw SimError(ErrorCode::ValidationError,
                     "override key '" + dotted_key + "' crosses a non-object field");
    }
  }
  json parsed;
  try {
    parsed = json::parse(value);
  } catch (const json::parse_error&) {
    parsed = value;  // bare strings like "radius" arrive unquoted
  }
  (*node)[parts.back()] = parsed;
}

bool operator==(const Scenario& a, const Scenario& b) {
  return scenario_to_json(a) == scenario_to_json(b);
}

}  // namespace mafsim

#include "dto/cli/scenario_file.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

namespace dto::cli {

namespace {

using nlohmann::json;

double number(const json& node, const char* key) {
  const json& v = node.at(key);
  if (!v.is_number()) throw ScenarioFileError(std::string("'") + key + "' must be a number");
  return v.get<double>();
}

ControllerGains parse_gains(const json& node, ControllerGains gains) {
  if (!node.is_object()) throw ScenarioFileError("'gains' must be an object");
  for (const auto& [key, value] : node.items()) {
    if (!value.is_number()) throw ScenarioFileError("gain '" + key + "' must be a number");
    const double v = value.get<double>();
    if (key == "k0") gains.k0 = v;
    else if (key == "k1") gains.k1 = v;
    else if (key == "k2") gains.k2 = v;
    else if (key == "rho1") gains.rho1 = v;
    else if (key == "rho2") gains.rho2 = v;
    else if (key == "beta") gains.beta = v;
    else throw ScenarioFileError("unknown gain '" + key + "'");
  }
  return gains;
}

BarrierSchedule parse_barrier(const json& node) {
  if (!node.is_object()) throw ScenarioFileError("barrier entries must be objects");
  try {
    return BarrierSchedule(number(node, "a1"), number(node, "a2"), number(node, "a3"),
                           number(node, "a4"));
  } catch (const json::exception& e) {
    throw ScenarioFileError(std::string("barrier: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ScenarioFileError(std::string("barrier: ") + e.what());
  }
}

Vector parse_state(const json& node, std::size_t dimension) {
  Vector x(static_cast<Eigen::Index>(dimension));
  if (node.is_number() && dimension == 1) {
    x(0) = node.get<double>();
    return x;
  }
  if (!node.is_array() || node.size() != dimension) {
    throw ScenarioFileError("each initial state must have " + std::to_string(dimension) +
                            " components");
  }
  for (std::size_t k = 0; k < dimension; ++k) {
    if (!node[k].is_number()) throw ScenarioFileError("initial state entries must be numbers");
    x(static_cast<Eigen::Index>(k)) = node[k].get<double>();
  }
  return x;
}

Graph parse_graph(const json& root) {
  if (!root.contains("nodes") || !root["nodes"].is_number_unsigned()) {
    throw ScenarioFileError("'nodes' must be a positive integer");
  }
  const auto nodes = root["nodes"].get<std::size_t>();
  std::vector<Graph::Edge> edges;
  if (root.contains("edge")) {
    const json& list = root["edge"];
    if (!list.is_array()) throw ScenarioFileError("'edge' must be a list of [i, j] pairs");
    for (const json& e : list) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number_unsigned() ||
          !e[1].is_number_unsigned()) {
        throw ScenarioFileError("every edge must be a pair [i, j] of 1-based node indices");
      }
      edges.emplace_back(e[0].get<std::size_t>(), e[1].get<std::size_t>());
    }
  }
  try {
    return Graph::from_one_based(nodes, edges);
  } catch (const std::invalid_argument& e) {
    throw ScenarioFileError(std::string("topology: ") + e.what());
  }
}

std::optional<double> optional_number(const json& root, const char* key) {
  if (!root.contains(key)) return std::nullopt;
  return number(root, key);
}

}  // namespace

LoadedScenario parse_scenario(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ScenarioFileError(std::string("not valid JSON: ") + e.what());
  }
  if (!root.is_object() || !root.contains("scenario") || !root["scenario"].is_string()) {
    throw ScenarioFileError("missing string key 'scenario' (\"a\", \"b\" or \"custom\")");
  }
  const auto name = root["scenario"].get<std::string>();
  std::optional<ProblemInstance> base;
  if (name == "a") {
    base.emplace(scenario_a());
  } else if (name == "b") {
    base.emplace(scenario_b());
  } else if (name == "custom") {
    if (!root.contains("nodes")) throw ScenarioFileError("custom scenarios need 'nodes' and 'edge'");
    base.emplace(scenario_a());
  } else {
    throw ScenarioFileError("unknown scenario '" + name + "'");
  }

  Graph graph = base->graph();
  if (root.contains("nodes")) graph = parse_graph(root);
  if (graph.node_count() != base->agent_count()) {
    throw ScenarioFileError("topology has " + std::to_string(graph.node_count()) +
                            " nodes but the scenario defines " +
                            std::to_string(base->agent_count()) + " agents");
  }

  std::vector<AgentProblem> agents = base->agents();
  if (root.contains("barrier")) {
    const json& b = root["barrier"];
    if (b.is_array()) {
      if (b.size() != agents.size()) {
        throw ScenarioFileError("'barrier' list needs one entry per agent");
      }
      for (std::size_t i = 0; i < agents.size(); ++i) agents[i].barrier = parse_barrier(b[i]);
    } else {
      const BarrierSchedule shared = parse_barrier(b);
      for (AgentProblem& a : agents) a.barrier = shared;
    }
  }
  if (root.contains("initial_state")) {
    const json& s = root["initial_state"];
    if (!s.is_array() || s.size() != agents.size()) {
      throw ScenarioFileError("'initial_state' needs one entry per agent");
    }
    for (std::size_t i = 0; i < agents.size(); ++i) {
      agents[i].initial_state = parse_state(s[i], base->dimension());
    }
  }

  ControllerGains gains = experiment_gains();
  if (root.contains("gains")) gains = parse_gains(root["gains"], gains);

  ProblemInstance instance(std::move(graph), std::move(agents), base->disturbance_bound(),
                           InstanceOptions{.derivative_self_check = false});
  for (const auto& [key, value] : base->metadata()) instance.set_metadata(key, value);

  LoadedScenario loaded{std::move(instance), gains, std::nullopt, std::nullopt, std::nullopt,
                        std::nullopt};
  loaded.dt = optional_number(root, "dt");
  loaded.t_end = optional_number(root, "t_end");
  loaded.sign_epsilon = optional_number(root, "sign_epsilon");
  if (root.contains("stride")) {
    if (!root["stride"].is_number_unsigned() || root["stride"].get<std::size_t>() == 0) {
      throw ScenarioFileError("'stride' must be a positive integer");
    }
    loaded.stride = root["stride"].get<std::size_t>();
  }
  return loaded;
}

LoadedScenario load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioFileError("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

}  // namespace dto::cli

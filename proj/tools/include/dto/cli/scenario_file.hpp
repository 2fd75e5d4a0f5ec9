#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>

#include "dto/controller.hpp"
#include "dto/errors.hpp"
#include "dto/problem.hpp"

namespace dto::cli {

/// Malformed or inconsistent scenario file.
class ScenarioFileError : public Error {
 public:
  using Error::Error;
};

struct LoadedScenario {
  ProblemInstance instance;
  ControllerGains gains;
  std::optional<double> dt;
  std::optional<double> t_end;
  std::optional<std::size_t> stride;
  std::optional<double> sign_epsilon;
};

/// Parses a JSON scenario file:
///
///   {
///     "scenario": "a" | "b" | "custom",
///     "nodes": 4, "edge": [[1, 2], [2, 3]],          // 1-based; required for custom
///     "gains": {"k0": 10, "k1": 3, "k2": 3, "rho1": 0.5, "rho2": 3, "beta": 3},
///     "barrier": {"a1": 10, "a2": 0.05, "a3": 30, "a4": 1},  // or one object per agent
///     "initial_state": [-2, -1, 1, 3],              // or [[..], ..] for n > 1
///     "sign_epsilon": 0, "dt": 1e-4, "t_end": 20, "stride": 100
///   }
///
/// Every key except "scenario" is optional; missing gains fields keep the
/// experiment defaults. "custom" keeps the four experiment agents and takes
/// the topology from the file.
LoadedScenario parse_scenario(const std::string& json_text);
LoadedScenario load_scenario_file(const std::filesystem::path& path);

}  // namespace dto::cli

#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dto/barrier.hpp"
#include "dto/function.hpp"
#include "dto/graph.hpp"
#include "dto/types.hpp"

namespace dto {

/// Additive input disturbance d_i(t). Only the integrator sees it.
using Disturbance = std::function<Vector(Seconds)>;

/// Disturbance built from one scalar signal per coordinate.
Disturbance make_disturbance(std::vector<Signal> components);
Disturbance zero_disturbance(std::size_t dimension);

struct AgentProblem {
  FunctionPtr cost;
  /// Scalar inequality constraints g_ij(x, t) <= 0.
  std::vector<FunctionPtr> constraints;
  BarrierSchedule barrier;
  Disturbance disturbance;
  Vector initial_state;
};

struct InstanceOptions {
  /// Run check_derivatives on every cost and constraint at construction.
  bool derivative_self_check = true;
};

/// Full multi-agent problem. Immutable after construction.
class ProblemInstance {
 public:
  /// Validates agent count against the graph, shared dimension, and (when
  /// enabled) the analytic derivatives against finite differences. Throws
  /// std::invalid_argument on any mismatch.
  ProblemInstance(Graph graph, std::vector<AgentProblem> agents, double disturbance_bound,
                  InstanceOptions options = {});

  const Graph& graph() const noexcept { return graph_; }
  const std::vector<AgentProblem>& agents() const noexcept { return agents_; }
  const AgentProblem& agent(std::size_t i) const { return agents_.at(i); }
  std::size_t agent_count() const noexcept { return agents_.size(); }
  std::size_t dimension() const noexcept { return dimension_; }

  /// Declared D0 with ||d_i(t)||_inf <= D0 for all i, t.
  double disturbance_bound() const noexcept { return disturbance_bound_; }

  /// Reported parameters that no equation consumes (nu, rho in the
  /// four-agent experiments). Kept for provenance only.
  const std::map<std::string, double>& metadata() const noexcept { return metadata_; }
  void set_metadata(std::string key, double value) { metadata_[std::move(key)] = value; }

  /// Throws InfeasibleStartError unless g_ij(x_i(0), 0) < sigma_i(0) for
  /// every agent and constraint.
  void check_initial_feasibility() const;

  /// Copy with a different topology (same agents).
  ProblemInstance with_graph(Graph graph) const;
  /// Copy with replaced initial states.
  ProblemInstance with_initial_states(const std::vector<Vector>& states) const;

 private:
  Graph graph_;
  std::vector<AgentProblem> agents_;
  std::size_t dimension_ = 0;
  double disturbance_bound_ = 0.0;
  std::map<std::string, double> metadata_;
};

/// F(x, t) = sum_i f_i(x, t).
double global_cost(const ProblemInstance& instance, const Vector& x, Seconds t);

/// Four agents on a ring: costs (x - sin t)^2 + 5, (x + 3 sin t)^2 + cos t,
/// (x - cos t)^2 - 5, (x - sin t)^2; constraint x - cos t <= 0 for everyone;
/// rho(t) = 10 e^{0.05 t}, sigma(t) = 30 e^{-t}; x(0) = (-2, -1, 1, 3).
ProblemInstance scenario_a();
/// Same agents as scenario_a on the path 1-2-3-4.
ProblemInstance scenario_b();

}  // namespace dto

#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "dto/controller.hpp"
#include "dto/problem.hpp"
#include "dto/types.hpp"

namespace dto {

struct SimConfig {
  SimConfig(ProblemInstance problem, ControllerGains controller_gains)
      : instance(std::move(problem)), gains(controller_gains) {}

  ProblemInstance instance;
  ControllerGains gains;
  Seconds dt = 1e-4;
  Seconds t_end = 20.0;
  /// Record every stride-th integration step (the final step is always kept).
  std::size_t record_stride = 100;
  /// Boundary-layer width for sign(); 0 keeps the discontinuous sign.
  double sign_epsilon = 0.0;
  /// Ablation switches; both on for the faithful closed loop.
  bool sliding_enabled = true;
  bool disturbances_enabled = true;

  /// Throws std::invalid_argument unless dt > 0, t_end >= 0, stride >= 1 and
  /// sign_epsilon >= 0.
  void validate() const;
};

struct AgentRecord {
  Vector x;
  Vector s;
  Vector u1;
  Vector u2;
  /// g_j(x, t) - sigma(t) for each constraint; negative inside the domain.
  std::vector<double> margins;
  Vector disturbance;
};

struct Trajectory {
  std::size_t agent_count = 0;
  std::size_t dimension = 0;
  std::vector<Seconds> times;
  /// records[k][i] is agent i at times[k].
  std::vector<std::vector<AgentRecord>> records;

  std::vector<double> consensus_error;
  /// max_i ||x_i - x*(t)|| against the constrained optimum.
  std::vector<double> tracking_error_true;
  /// max_i ||x_i - x~*(t)|| against the penalized optimum.
  std::vector<double> tracking_error_penalized;
  /// sum_i f_i(x_i(t), t).
  std::vector<double> global_cost;
  std::vector<double> manifold_norm;

  std::size_t size() const noexcept { return times.size(); }
  /// Index of the record at time t. With exact = true, throws
  /// std::out_of_range unless a record lies within 1e-9 s of t.
  std::size_t index_of(Seconds t, bool exact = true) const;
};

struct Controls {
  std::vector<Vector> u1;
  std::vector<Vector> u2;
};

/// Evaluates u1 and u2 for every agent. Throws SimulationError tagged with
/// the failing agent.
Controls evaluate_controls(const std::vector<Vector>& states,
                           const std::vector<ControllerState>& controller_states, Seconds t,
                           const SimConfig& config);

struct StepResult {
  std::vector<Vector> states;
  std::vector<ControllerState> controller_states;
  /// True when the step had to be redone as ten substeps of dt / 10.
  bool refined = false;
};

/// One explicit Euler step x <- x + dt (u1 + u2 + d), z <- z + dt u1. If any
/// agent leaves its penalized domain the step is redone once as ten
/// substeps of dt / 10; a second violation throws SimulationError.
StepResult step(const std::vector<Vector>& states,
                const std::vector<ControllerState>& controller_states, Seconds t, Seconds dt,
                const SimConfig& config);

/// Integrates the closed loop over [0, t_end]. Deterministic.
Trajectory run(const SimConfig& config);

double consensus_error(const std::vector<Vector>& states);
double consensus_error(const Trajectory& trajectory, Seconds t, bool exact = true);

/// First recorded time with consensus_error < threshold.
std::optional<Seconds> consensus_time(const Trajectory& trajectory, double threshold = 1e-2);

/// Minimizer of sum_i f_i(x, t) subject to every g_ij(x, t) <= 0, computed
/// centrally without any of the distributed controller code. Throws Error
/// when the constraints are infeasible at t.
Vector optimal_trajectory(const ProblemInstance& instance, Seconds t);

/// Root of sum_i grad L_i(x, t) by damped Newton seeded at
/// optimal_trajectory(instance, t); tolerance 1e-10, at most 100 iterations.
Vector penalized_optimal_trajectory(const ProblemInstance& instance, Seconds t);

struct TrackingErrors {
  std::vector<double> true_optimum;
  std::vector<double> penalized_optimum;
};

TrackingErrors tracking_errors(const Trajectory& trajectory, const ProblemInstance& instance);

/// max_i ||s_i||_inf per record.
std::vector<double> manifold_norms(const Trajectory& trajectory);

/// Width of the discrete sliding band 2 dt (k0 + k1 + k2 + D0).
double chatter_band(const ControllerGains& gains, double disturbance_bound, Seconds dt);

}  // namespace dto

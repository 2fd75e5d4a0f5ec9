#include "dto/sim.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "dto/errors.hpp"
#include "dto/penalty.hpp"

namespace dto {

void SimConfig::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(t_end >= 0.0)) throw std::invalid_argument("t_end must be nonnegative");
  if (record_stride < 1) throw std::invalid_argument("record_stride must be >= 1");
  if (!(sign_epsilon >= 0.0)) throw std::invalid_argument("sign_epsilon must be nonnegative");
}

std::size_t Trajectory::index_of(Seconds t, bool exact) const {
  if (times.empty()) throw std::out_of_range("empty trajectory");
  const auto it = std::lower_bound(times.begin(), times.end(), t);
  std::size_t idx = static_cast<std::size_t>(it - times.begin());
  if (idx == times.size() || (idx > 0 && t - times[idx - 1] < times[idx] - t)) --idx;
  if (exact && std::abs(times[idx] - t) > 1e-9) {
    std::ostringstream msg;
    msg << "t=" << t << " is not on the recorded grid (nearest " << times[idx] << ")";
    throw std::out_of_range(msg.str());
  }
  return idx;
}

Controls evaluate_controls(const std::vector<Vector>& states,
                           const std::vector<ControllerState>& controller_states, Seconds t,
                           const SimConfig& config) {
  const ProblemInstance& inst = config.instance;
  const std::size_t n_agents = inst.agent_count();
  Controls c;
  c.u1.reserve(n_agents);
  c.u2.reserve(n_agents);
  for (std::size_t i = 0; i < n_agents; ++i) {
    try {
      c.u1.push_back(nominal_control(i, states, t, inst.graph(), inst.agent(i),
                                     config.gains.beta, config.sign_epsilon));
    } catch (const DomainError& e) {
      throw SimulationError("penalty", t, i, e.what());
    } catch (const SingularHessianError& e) {
      throw SimulationError("controller", t, i, e.what());
    }
    if (config.sliding_enabled) {
      c.u2.push_back(sliding_control(controller_states[i].manifold(states[i]), config.gains,
                                     config.sign_epsilon));
    } else {
      c.u2.push_back(Vector::Zero(states[i].size()));
    }
  }
  return c;
}

namespace {

Vector applied_disturbance(const SimConfig& config, std::size_t agent, Seconds t) {
  if (!config.disturbances_enabled) {
    return Vector::Zero(static_cast<Eigen::Index>(config.instance.dimension()));
  }
  return config.instance.agent(agent).disturbance(t);
}

StepResult euler(const std::vector<Vector>& states,
                 const std::vector<ControllerState>& controller_states, const Controls& controls,
                 Seconds t, Seconds dt, const SimConfig& config) {
  StepResult r{states, controller_states, false};
  for (std::size_t i = 0; i < states.size(); ++i) {
    r.states[i] += dt * (controls.u1[i] + controls.u2[i] + applied_disturbance(config, i, t));
    r.controller_states[i] = update_manifold(std::move(r.controller_states[i]), controls.u1[i], dt);
  }
  return r;
}

// First agent whose new state is non-finite or outside its penalized domain.
std::optional<std::size_t> first_violation(const std::vector<Vector>& states, Seconds t,
                                           const ProblemInstance& inst) {
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (!states[i].allFinite() || !in_domain(inst.agent(i), states[i], t)) return i;
  }
  return std::nullopt;
}

StepResult refine(const std::vector<Vector>& states,
                  const std::vector<ControllerState>& controller_states, Seconds t, Seconds dt,
                  const SimConfig& config) {
  constexpr int kSubsteps = 10;
  const Seconds h = dt / kSubsteps;
  StepResult r{states, controller_states, true};
  for (int k = 0; k < kSubsteps; ++k) {
    const Seconds tk = t + k * h;
    const Controls c = evaluate_controls(r.states, r.controller_states, tk, config);
    r = euler(r.states, r.controller_states, c, tk, h, config);
    r.refined = true;
    if (auto bad = first_violation(r.states, tk + h, config.instance)) {
      throw SimulationError("sim", tk + h, *bad,
                            "state left the penalized domain (or became non-finite) after "
                            "retrying the step with dt/10");
    }
  }
  return r;
}

StepResult advance(const std::vector<Vector>& states,
                   const std::vector<ControllerState>& controller_states, const Controls& controls,
                   Seconds t, Seconds dt, const SimConfig& config) {
  StepResult r = euler(states, controller_states, controls, t, dt, config);
  if (first_violation(r.states, t + dt, config.instance)) {
    return refine(states, controller_states, t, dt, config);
  }
  return r;
}

AgentRecord make_record(const AgentProblem& agent, const Vector& x, const ControllerState& cs,
                        const Vector& u1, const Vector& u2, Vector disturbance, Seconds t) {
  AgentRecord rec{x, cs.manifold(x), u1, u2, {}, std::move(disturbance)};
  const double slack = agent.barrier.slack(t);
  rec.margins.reserve(agent.constraints.size());
  for (const FunctionPtr& g : agent.constraints) rec.margins.push_back(g->value(x, t) - slack);
  return rec;
}

}  // namespace

StepResult step(const std::vector<Vector>& states,
                const std::vector<ControllerState>& controller_states, Seconds t, Seconds dt,
                const SimConfig& config) {
  if (!(dt > 0.0)) throw std::invalid_argument("step needs dt > 0");
  const Controls c = evaluate_controls(states, controller_states, t, config);
  return advance(states, controller_states, c, t, dt, config);
}

Trajectory run(const SimConfig& config) {
  config.validate();
  const ProblemInstance& inst = config.instance;
  inst.check_initial_feasibility();
  config.gains.validate(inst.disturbance_bound());

  const std::size_t n_agents = inst.agent_count();
  std::vector<Vector> states;
  std::vector<ControllerState> cstates;
  for (const AgentProblem& a : inst.agents()) {
    states.push_back(a.initial_state);
    cstates.push_back(ControllerState::zero(inst.dimension()));
  }

  Trajectory traj;
  traj.agent_count = n_agents;
  traj.dimension = inst.dimension();

  const auto n_steps = static_cast<std::size_t>(std::llround(config.t_end / config.dt));
  const std::size_t n_records = n_steps / config.record_stride + 2;
  traj.times.reserve(n_records);
  traj.records.reserve(n_records);

  for (std::size_t k = 0;; ++k) {
    const Seconds t = static_cast<double>(k) * config.dt;
    const Controls c = evaluate_controls(states, cstates, t, config);
    if (k % config.record_stride == 0 || k == n_steps) {
      std::vector<AgentRecord> row;
      row.reserve(n_agents);
      for (std::size_t i = 0; i < n_agents; ++i) {
        row.push_back(make_record(inst.agent(i), states[i], cstates[i], c.u1[i], c.u2[i],
                                  applied_disturbance(config, i, t), t));
      }
      traj.times.push_back(t);
      traj.records.push_back(std::move(row));
    }
    if (k == n_steps) break;
    StepResult next = advance(states, cstates, c, t, config.dt, config);
    states = std::move(next.states);
    cstates = std::move(next.controller_states);
  }

  for (std::size_t k = 0; k < traj.size(); ++k) {
    std::vector<Vector> xs;
    xs.reserve(n_agents);
    double cost = 0.0;
    for (std::size_t i = 0; i < n_agents; ++i) {
      xs.push_back(traj.records[k][i].x);
      cost += inst.agent(i).cost->value(traj.records[k][i].x, traj.times[k]);
    }
    traj.consensus_error.push_back(consensus_error(xs));
    traj.global_cost.push_back(cost);
  }
  TrackingErrors tracking = tracking_errors(traj, inst);
  traj.tracking_error_true = std::move(tracking.true_optimum);
  traj.tracking_error_penalized = std::move(tracking.penalized_optimum);
  traj.manifold_norm = manifold_norms(traj);
  return traj;
}

double consensus_error(const std::vector<Vector>& states) {
  double worst = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (std::size_t j = i + 1; j < states.size(); ++j) {
      worst = std::max(worst, (states[i] - states[j]).norm());
    }
  }
  return worst;
}

double consensus_error(const Trajectory& trajectory, Seconds t, bool exact) {
  const std::size_t k = trajectory.index_of(t, exact);
  std::vector<Vector> xs;
  for (const AgentRecord& r : trajectory.records[k]) xs.push_back(r.x);
  return consensus_error(xs);
}

std::optional<Seconds> consensus_time(const Trajectory& trajectory, double threshold) {
  for (std::size_t k = 0; k < trajectory.size(); ++k) {
    std::vector<Vector> xs;
    for (const AgentRecord& r : trajectory.records[k]) xs.push_back(r.x);
    if (consensus_error(xs) < threshold) return trajectory.times[k];
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Centralized oracles. Nothing below touches the penalty module except
// penalized_optimal_trajectory, which needs the penalized gradients by
// definition.

namespace {

constexpr double kSearchHalfWidth = 1e3;
constexpr double kGoldenRatio = 0.6180339887498949;

double max_violation(const ProblemInstance& inst, const Vector& x, Seconds t) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const AgentProblem& a : inst.agents()) {
    for (const FunctionPtr& g : a.constraints) worst = std::max(worst, g->value(x, t));
  }
  return worst;
}

bool has_constraints(const ProblemInstance& inst) {
  return std::any_of(inst.agents().begin(), inst.agents().end(),
                     [](const AgentProblem& a) { return !a.constraints.empty(); });
}

Vector total_gradient(const ProblemInstance& inst, const Vector& x, Seconds t) {
  Vector g = Vector::Zero(x.size());
  for (const AgentProblem& a : inst.agents()) g += a.cost->gradient(x, t);
  return g;
}

Matrix total_hessian(const ProblemInstance& inst, const Vector& x, Seconds t) {
  Matrix h = Matrix::Zero(x.size(), x.size());
  for (const AgentProblem& a : inst.agents()) h += a.cost->hessian(x, t);
  return h;
}

// Golden-section search for the minimizer of a unimodal phi on [a, b].
// Returns the final bracket.
template <typename Fn>
std::pair<double, double> golden_section(Fn&& phi, double a, double b, double tol) {
  double c = b - kGoldenRatio * (b - a);
  double d = a + kGoldenRatio * (b - a);
  double fc = phi(c);
  double fd = phi(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kGoldenRatio * (b - a);
      fc = phi(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kGoldenRatio * (b - a);
      fd = phi(d);
    }
  }
  return {a, b};
}

// Bisection for the boundary between a feasible point and an infeasible one.
template <typename Pred>
double bisect_boundary(Pred&& feasible, double inside, double outside) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (inside + outside);
    if (mid == inside || mid == outside) break;
    (feasible(mid) ? inside : outside) = mid;
  }
  return inside;
}

double scalar_optimum(const ProblemInstance& inst, Seconds t) {
  auto at = [](double v) { return Vector::Constant(1, v); };
  double lo = -kSearchHalfWidth;
  double hi = kSearchHalfWidth;

  if (has_constraints(inst)) {
    auto violation = [&](double v) { return max_violation(inst, at(v), t); };
    auto [a, b] = golden_section(violation, lo, hi, 1e-12);
    const double x_feasible = 0.5 * (a + b);
    if (violation(x_feasible) > 0.0) {
      std::ostringstream msg;
      msg << "constraints are infeasible at t=" << t << " (min max g = " << violation(x_feasible)
          << ")";
      throw Error(msg.str());
    }
    auto feasible = [&](double v) { return violation(v) <= 0.0; };
    if (!feasible(lo)) lo = bisect_boundary(feasible, x_feasible, lo);
    if (!feasible(hi)) hi = bisect_boundary(feasible, x_feasible, hi);
  }

  auto cost = [&](double v) { return global_cost(inst, at(v), t); };
  auto [a, b] = golden_section(cost, lo, hi, 1e-7);

  // Value comparisons stall at ~sqrt(eps) relative accuracy; finish inside
  // the final bracket by bisection on the sign of dF/dx.
  auto slope = [&](double v) { return total_gradient(inst, at(v), t)(0); };
  if (slope(a) >= 0.0) return a;
  if (slope(b) <= 0.0) return b;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (a + b);
    if (mid == a || mid == b) break;
    (slope(mid) > 0.0 ? b : a) = mid;
  }
  return 0.5 * (a + b);
}

// Smoothed max of the constraints, minimized to find a strictly feasible point.
Vector phase_one(const ProblemInstance& inst, Seconds t, Vector x) {
  constexpr double kappa = 50.0;
  for (int it = 0; it < 200 && max_violation(inst, x, t) >= 0.0; ++it) {
    std::vector<double> gv;
    std::vector<Vector> grads;
    std::vector<Matrix> hesses;
    for (const AgentProblem& a : inst.agents()) {
      for (const FunctionPtr& g : a.constraints) {
        gv.push_back(g->value(x, t));
        grads.push_back(g->gradient(x, t));
        hesses.push_back(g->hessian(x, t));
      }
    }
    const double top = *std::max_element(gv.begin(), gv.end());
    double z = 0.0;
    std::vector<double> w(gv.size());
    for (std::size_t j = 0; j < gv.size(); ++j) z += (w[j] = std::exp(kappa * (gv[j] - top)));
    Vector mean_grad = Vector::Zero(x.size());
    Matrix h = 1e-9 * Matrix::Identity(x.size(), x.size());
    for (std::size_t j = 0; j < gv.size(); ++j) {
      w[j] /= z;
      mean_grad += w[j] * grads[j];
      h += w[j] * (hesses[j] + kappa * grads[j] * grads[j].transpose());
    }
    h -= kappa * mean_grad * mean_grad.transpose();
    Vector dx = -h.ldlt().solve(mean_grad);
    if (!dx.allFinite()) dx = -mean_grad;
    double step = 1.0;
    const double current = top;
    while (step > 1e-12 && max_violation(inst, x + step * dx, t) >= current) step *= 0.5;
    if (step <= 1e-12) break;
    x += step * dx;
  }
  if (max_violation(inst, x, t) >= 0.0) {
    std::ostringstream msg;
    msg << "no strictly feasible point found at t=" << t;
    throw Error(msg.str());
  }
  return x;
}

double log_barrier_objective(const ProblemInstance& inst, const Vector& x, Seconds t, double mu) {
  double v = global_cost(inst, x, t);
  for (const AgentProblem& a : inst.agents()) {
    for (const FunctionPtr& g : a.constraints) {
      const double gv = g->value(x, t);
      if (!(gv < 0.0)) return std::numeric_limits<double>::infinity();
      v -= mu * std::log(-gv);
    }
  }
  return v;
}

// Centralized interior-point solve for n > 1: Newton on
// F(x) - mu sum log(-g) with backtracking, mu driven to 1e-14.
Vector vector_optimum(const ProblemInstance& inst, Seconds t) {
  Vector x = Vector::Zero(static_cast<Eigen::Index>(inst.dimension()));
  for (const AgentProblem& a : inst.agents()) x += a.initial_state;
  x /= static_cast<double>(inst.agent_count());
  if (has_constraints(inst)) x = phase_one(inst, t, x);

  for (double mu = 1.0; mu >= 1e-14; mu *= 0.1) {
    for (int it = 0; it < 100; ++it) {
      Vector grad = total_gradient(inst, x, t);
      Matrix hess = total_hessian(inst, x, t);
      for (const AgentProblem& a : inst.agents()) {
        for (const FunctionPtr& g : a.constraints) {
          const double gv = g->value(x, t);
          const Vector dg = g->gradient(x, t);
          grad -= mu * dg / gv;
          hess += mu * (-g->hessian(x, t) / gv + dg * dg.transpose() / (gv * gv));
        }
      }
      const Vector dx = -hess.ldlt().solve(grad);
      const double decrement = -grad.dot(dx);
      if (!(decrement > 1e-24)) break;
      const double f0 = log_barrier_objective(inst, x, t, mu);
      double step = 1.0;
      while (step > 1e-16 &&
             !(log_barrier_objective(inst, x + step * dx, t, mu) <= f0 - 0.25 * step * decrement)) {
        step *= 0.5;
      }
      if (step <= 1e-16) break;
      x += step * dx;
    }
    if (!has_constraints(inst)) break;
  }
  return x;
}

}  // namespace

Vector optimal_trajectory(const ProblemInstance& instance, Seconds t) {
  if (instance.dimension() == 1) return Vector::Constant(1, scalar_optimum(instance, t));
  return vector_optimum(instance, t);
}

Vector penalized_optimal_trajectory(const ProblemInstance& instance, Seconds t) {
  const auto all_in_domain = [&](const Vector& x) {
    return std::all_of(instance.agents().begin(), instance.agents().end(),
                       [&](const AgentProblem& a) { return in_domain(a, x, t); });
  };
  const auto residual = [&](const Vector& x) {
    Vector g = Vector::Zero(x.size());
    for (const AgentProblem& a : instance.agents()) g += penalized_gradient(a, x, t);
    return g;
  };

  Vector x = optimal_trajectory(instance, t);
  if (!all_in_domain(x)) {
    throw Error("penalized optimum: seed lies outside the common penalized domain");
  }
  for (int it = 0; it < 100; ++it) {
    const Vector g = residual(x);
    const double norm = g.norm();
    if (norm < 1e-10) return x;
    Matrix h = Matrix::Zero(x.size(), x.size());
    for (const AgentProblem& a : instance.agents()) h += penalized_hessian(a, x, t);
    const Vector dx = -h.ldlt().solve(g);
    double step = 1.0;
    for (int halving = 0; halving < 60; ++halving, step *= 0.5) {
      const Vector trial = x + step * dx;
      if (all_in_domain(trial) && residual(trial).norm() < (1.0 - 1e-4 * step) * norm) break;
    }
    const Vector trial = x + step * dx;
    if (!all_in_domain(trial)) break;
    if (trial == x) {
      // No representable progress; accept if we are at rounding level.
      if (norm < 1e-8) return x;
      break;
    }
    x = trial;
  }
  std::ostringstream msg;
  msg << "penalized optimum: Newton did not reach ||sum grad L|| < 1e-10 within 100 iterations at t="
      << t;
  throw Error(msg.str());
}

TrackingErrors tracking_errors(const Trajectory& trajectory, const ProblemInstance& instance) {
  TrackingErrors e;
  e.true_optimum.reserve(trajectory.size());
  e.penalized_optimum.reserve(trajectory.size());
  for (std::size_t k = 0; k < trajectory.size(); ++k) {
    const Seconds t = trajectory.times[k];
    const Vector opt = optimal_trajectory(instance, t);
    const Vector pen = penalized_optimal_trajectory(instance, t);
    double worst_true = 0.0;
    double worst_pen = 0.0;
    for (const AgentRecord& r : trajectory.records[k]) {
      worst_true = std::max(worst_true, (r.x - opt).norm());
      worst_pen = std::max(worst_pen, (r.x - pen).norm());
    }
    e.true_optimum.push_back(worst_true);
    e.penalized_optimum.push_back(worst_pen);
  }
  return e;
}

std::vector<double> manifold_norms(const Trajectory& trajectory) {
  std::vector<double> out;
  out.reserve(trajectory.size());
  for (const auto& row : trajectory.records) {
    double worst = 0.0;
    for (const AgentRecord& r : row) worst = std::max(worst, r.s.lpNorm<Eigen::Infinity>());
    out.push_back(worst);
  }
  return out;
}

double chatter_band(const ControllerGains& gains, double disturbance_bound, Seconds dt) {
  return 2.0 * dt * (gains.k0 + gains.k1 + gains.k2 + disturbance_bound);
}

}  // namespace dto

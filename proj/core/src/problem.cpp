#include "dto/problem.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "dto/errors.hpp"
#include "dto/finite_difference.hpp"

namespace dto {

Disturbance make_disturbance(std::vector<Signal> components) {
  return [components = std::move(components)](Seconds t) {
    Vector d(components.size());
    for (std::size_t k = 0; k < components.size(); ++k) d(k) = components[k].value(t);
    return d;
  };
}

Disturbance zero_disturbance(std::size_t dimension) {
  return [dimension](Seconds) { return Vector::Zero(static_cast<Eigen::Index>(dimension)); };
}

namespace {

void self_check(const TimeVaryingFunction& f, const Vector& x, const char* role, std::size_t agent) {
  for (const Seconds t : {0.0, 0.5, 1.7}) {
    const DerivativeCheck check = check_derivatives(f, x, t);
    if (!check.ok()) {
      std::ostringstream msg;
      msg << role << " of agent " << agent + 1 << " failed the derivative self-check at t=" << t
          << " (gradient " << check.gradient_ok << ", hessian " << check.hessian_ok
          << ", time partial " << check.time_partial_ok << ", grad time partial "
          << check.grad_time_partial_ok << ")";
      throw std::invalid_argument(msg.str());
    }
  }
}

}  // namespace

ProblemInstance::ProblemInstance(Graph graph, std::vector<AgentProblem> agents,
                                 double disturbance_bound, InstanceOptions options)
    : graph_(std::move(graph)), agents_(std::move(agents)), disturbance_bound_(disturbance_bound) {
  if (agents_.size() != graph_.node_count()) {
    throw std::invalid_argument("graph has " + std::to_string(graph_.node_count()) +
                                " nodes but " + std::to_string(agents_.size()) +
                                " agents were given");
  }
  if (!(disturbance_bound >= 0.0)) {
    throw std::invalid_argument("disturbance bound must be nonnegative");
  }
  dimension_ = static_cast<std::size_t>(agents_.front().initial_state.size());
  if (dimension_ == 0) throw std::invalid_argument("state dimension must be >= 1");
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    const AgentProblem& a = agents_[i];
    if (!a.cost || !a.disturbance) {
      throw std::invalid_argument("agent " + std::to_string(i + 1) +
                                  " lacks a cost or disturbance");
    }
    if (static_cast<std::size_t>(a.initial_state.size()) != dimension_ ||
        a.cost->dimension() != dimension_) {
      throw std::invalid_argument("agent " + std::to_string(i + 1) +
                                  " does not share the instance dimension");
    }
    for (const FunctionPtr& g : a.constraints) {
      if (!g || g->dimension() != dimension_) {
        throw std::invalid_argument("constraint of agent " + std::to_string(i + 1) +
                                    " has the wrong dimension");
      }
    }
    if (options.derivative_self_check) {
      self_check(*a.cost, a.initial_state, "cost", i);
      for (const FunctionPtr& g : a.constraints) self_check(*g, a.initial_state, "constraint", i);
    }
  }
}

void ProblemInstance::check_initial_feasibility() const {
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    const AgentProblem& a = agents_[i];
    const double slack0 = a.barrier.slack(0.0);
    for (std::size_t j = 0; j < a.constraints.size(); ++j) {
      const double g = a.constraints[j]->value(a.initial_state, 0.0);
      if (!(g < slack0)) {
        std::ostringstream msg;
        msg << "initial state of agent " << i + 1 << " violates g_" << i + 1 << j + 1
            << "(x(0), 0) < sigma(0): g = " << g << ", sigma(0) = " << slack0;
        throw InfeasibleStartError(msg.str());
      }
    }
  }
}

ProblemInstance ProblemInstance::with_graph(Graph graph) const {
  ProblemInstance copy = *this;
  if (graph.node_count() != agents_.size()) {
    throw std::invalid_argument("replacement graph has the wrong node count");
  }
  copy.graph_ = std::move(graph);
  return copy;
}

ProblemInstance ProblemInstance::with_initial_states(const std::vector<Vector>& states) const {
  if (states.size() != agents_.size()) {
    throw std::invalid_argument("expected " + std::to_string(agents_.size()) + " initial states");
  }
  ProblemInstance copy = *this;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (static_cast<std::size_t>(states[i].size()) != dimension_) {
      throw std::invalid_argument("initial state " + std::to_string(i + 1) +
                                  " has the wrong dimension");
    }
    copy.agents_[i].initial_state = states[i];
  }
  return copy;
}

double global_cost(const ProblemInstance& instance, const Vector& x, Seconds t) {
  double total = 0.0;
  for (const AgentProblem& a : instance.agents()) total += a.cost->value(x, t);
  return total;
}

namespace {

std::vector<AgentProblem> experiment_agents() {
  const BarrierSchedule schedule(10.0, 0.05, 30.0, 1.0);
  const auto constraint = std::make_shared<AffineConstraint>(Vector::Ones(1), Signal::cosine(1.0));

  auto agent = [&](Signal reference, Signal offset, Signal disturbance, double x0) {
    return AgentProblem{
        std::make_shared<TrackingQuadratic>(std::vector<Signal>{std::move(reference)},
                                            std::move(offset)),
        {constraint},
        schedule,
        make_disturbance({std::move(disturbance)}),
        Vector::Constant(1, x0)};
  };

  constexpr double half_pi = 0.5 * std::numbers::pi;
  std::vector<AgentProblem> agents;
  agents.push_back(agent(Signal::sine(1.0), Signal::constant(5.0),
                         Signal::sine(3.0) + Signal::constant(2.0), -2.0));
  agents.push_back(agent(Signal::sine(-3.0), Signal::cosine(1.0), Signal::sine(2.0, half_pi), -1.0));
  agents.push_back(agent(Signal::cosine(1.0), Signal::constant(-5.0), Signal::constant(2.0), 1.0));
  agents.push_back(agent(Signal::sine(1.0), Signal::constant(0.0),
                         Signal::cosine(1.5) + Signal::constant(0.5), 3.0));
  return agents;
}

ProblemInstance experiment(Graph graph) {
  // sup|3 sin t + 2| = 5 dominates the other three disturbances.
  ProblemInstance instance(std::move(graph), experiment_agents(), 5.0);
  instance.set_metadata("nu", 3.0);
  instance.set_metadata("rho", 18.0);
  return instance;
}

}  // namespace

ProblemInstance scenario_a() { return experiment(Graph::ring(4)); }

ProblemInstance scenario_b() { return experiment(Graph::path(4)); }

}  // namespace dto

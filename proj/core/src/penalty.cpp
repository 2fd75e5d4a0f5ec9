#include "dto/penalty.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "dto/errors.hpp"

namespace dto {

BarrierSchedule::BarrierSchedule(double a1, double a2, double a3, double a4)
    : a1_(a1), a2_(a2), a3_(a3), a4_(a4) {
  if (!(a1 > 0.0 && a2 > 0.0 && a3 > 0.0 && a4 > 0.0)) {
    std::ostringstream msg;
    msg << "barrier schedule coefficients must all be positive, got (" << a1 << ", " << a2 << ", "
        << a3 << ", " << a4 << ")";
    throw std::invalid_argument(msg.str());
  }
}

namespace {

// sigma - g_j, or DomainError if the gap is below kMinBarrierGap (or NaN).
double barrier_gap(const AgentProblem& agent, std::size_t j, const Vector& x, Seconds t,
                   double slack) {
  const double gap = slack - agent.constraints[j]->value(x, t);
  if (!(gap >= kMinBarrierGap)) {
    std::ostringstream msg;
    msg << "constraint " << j + 1 << " outside the penalized domain at t=" << t
        << ": sigma - g = " << gap;
    throw DomainError(j, gap, msg.str());
  }
  return gap;
}

}  // namespace

bool in_domain(const AgentProblem& agent, const Vector& x, Seconds t) {
  const double slack = agent.barrier.slack(t);
  for (const FunctionPtr& g : agent.constraints) {
    if (!(g->value(x, t) < slack)) return false;
  }
  return true;
}

double penalized_value(const AgentProblem& agent, const Vector& x, Seconds t) {
  const double slack = agent.barrier.slack(t);
  double log_sum = 0.0;
  for (std::size_t j = 0; j < agent.constraints.size(); ++j) {
    log_sum += std::log(barrier_gap(agent, j, x, t, slack));
  }
  return agent.cost->value(x, t) - log_sum / agent.barrier.barrier_parameter(t);
}

PenalizedDerivatives penalized_derivatives(const AgentProblem& agent, const Vector& x, Seconds t) {
  const BarrierSchedule& b = agent.barrier;
  const double rho = b.barrier_parameter(t);
  const double rho_rate = b.barrier_parameter_rate(t);
  const double slack = b.slack(t);
  const double slack_rate = b.slack_rate(t);

  PenalizedDerivatives d{agent.cost->gradient(x, t), agent.cost->hessian(x, t),
                         agent.cost->grad_time_partial(x, t)};

  // Accumulate the barrier sums, then scale once.
  Vector grad_sum = Vector::Zero(x.size());
  Matrix hess_sum = Matrix::Zero(x.size(), x.size());
  Vector time_sum = Vector::Zero(x.size());
  for (std::size_t j = 0; j < agent.constraints.size(); ++j) {
    const TimeVaryingFunction& g = *agent.constraints[j];
    const double gap = barrier_gap(agent, j, x, t, slack);
    const Vector dg = g.gradient(x, t);
    grad_sum += dg / gap;
    hess_sum += g.hessian(x, t) / gap + dg * dg.transpose() / (gap * gap);
    time_sum += g.grad_time_partial(x, t) / gap - dg * (slack_rate - g.time_partial(x, t)) / (gap * gap);
  }
  d.gradient += grad_sum / rho;
  d.hessian += hess_sum / rho;
  d.grad_time_partial += time_sum / rho - (rho_rate / (rho * rho)) * grad_sum;
  return d;
}

Vector penalized_gradient(const AgentProblem& agent, const Vector& x, Seconds t) {
  const double rho = agent.barrier.barrier_parameter(t);
  const double slack = agent.barrier.slack(t);
  Vector grad = agent.cost->gradient(x, t);
  for (std::size_t j = 0; j < agent.constraints.size(); ++j) {
    const double gap = barrier_gap(agent, j, x, t, slack);
    grad += agent.constraints[j]->gradient(x, t) / (rho * gap);
  }
  return grad;
}

Matrix penalized_hessian(const AgentProblem& agent, const Vector& x, Seconds t) {
  return penalized_derivatives(agent, x, t).hessian;
}

Vector penalized_grad_time_partial(const AgentProblem& agent, const Vector& x, Seconds t) {
  return penalized_derivatives(agent, x, t).grad_time_partial;
}

}  // namespace dto

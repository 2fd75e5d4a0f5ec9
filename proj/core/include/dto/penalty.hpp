#pragma once

#include <cstddef>

#include "dto/problem.hpp"
#include "dto/types.hpp"

namespace dto {

/// sigma - g_j below this counts as leaving the domain; 1/(sigma - g)^2
/// overflows long before the gap reaches zero.
inline constexpr double kMinBarrierGap = 1e-12;

/// True iff g_ij(x, t) < sigma_i(t) for every constraint of the agent.
bool in_domain(const AgentProblem& agent, const Vector& x, Seconds t);

/// L(x, t) = f(x, t) - (1/rho(t)) * sum_j log(sigma(t) - g_j(x, t)).
/// Throws DomainError naming the first violating constraint.
double penalized_value(const AgentProblem& agent, const Vector& x, Seconds t);

Vector penalized_gradient(const AgentProblem& agent, const Vector& x, Seconds t);
Matrix penalized_hessian(const AgentProblem& agent, const Vector& x, Seconds t);
/// d(grad L)/dt with x fixed; includes the rho and sigma schedule rates.
Vector penalized_grad_time_partial(const AgentProblem& agent, const Vector& x, Seconds t);

struct PenalizedDerivatives {
  Vector gradient;
  Matrix hessian;
  Vector grad_time_partial;
};

/// All three derivative channels from a single pass over the constraints.
PenalizedDerivatives penalized_derivatives(const AgentProblem& agent, const Vector& x, Seconds t);

}  // namespace dto

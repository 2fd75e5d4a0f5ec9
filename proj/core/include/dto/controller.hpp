#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "dto/graph.hpp"
#include "dto/problem.hpp"
#include "dto/types.hpp"

namespace dto {

struct ControllerGains {
  double k0 = 0.0;    ///< switching gain, must dominate the disturbance bound
  double k1 = 0.0;    ///< gain on sig(s)^rho1
  double k2 = 0.0;    ///< gain on sig(s)^rho2
  double rho1 = 0.0;  ///< in (0, 1)
  double rho2 = 0.0;  ///< > 1
  double beta = 0.0;  ///< consensus gain

  /// Throws std::invalid_argument unless k0 > D0, k1, k2, beta > 0 and
  /// 0 < rho1 < 1 < rho2.
  void validate(double disturbance_bound) const;

  friend bool operator==(const ControllerGains&, const ControllerGains&) = default;
};

/// Gains of the four-agent experiments: k0 = 10, k1 = k2 = 3, rho1 = 0.5,
/// rho2 = 3, beta = 3.
ControllerGains experiment_gains();

/// Running integral z = int_0^t u1 dt of one agent; s = x - z.
struct ControllerState {
  Vector z;

  static ControllerState zero(std::size_t dimension) {
    return {Vector::Zero(static_cast<Eigen::Index>(dimension))};
  }
  Vector manifold(const Vector& x) const { return x - z; }
};

/// z <- z + dt * u1 (explicit Euler, same rule as the state update).
ControllerState update_manifold(ControllerState state, const Vector& u1, Seconds dt);

/// Element-wise sign with sign(0) = 0. With epsilon > 0 the boundary-layer
/// approximation w / (|w| + epsilon) is used instead.
Vector sign(const Vector& v, double epsilon = 0.0);

/// Element-wise sign(v_k) * |v_k|^alpha.
Vector sig(const Vector& v, double alpha);

/// Newton tracking direction psi = H^{-1} (grad L + d/dt grad L) of one agent.
/// Throws SingularHessianError when cond(H) > 1e12 or H is not positive
/// definite, DomainError outside the penalized domain.
Vector newton_direction(const AgentProblem& agent, const Vector& x, Seconds t);

/// Nominal term u1 of agent i:
///   -beta H^{-1} sum_{j in N_i} sign(x_i - x_j) - H^{-1}(grad L + d/dt grad L).
Vector nominal_control(std::size_t agent_index, std::span<const Vector> states, Seconds t,
                       const Graph& graph, const AgentProblem& agent, double beta,
                       double sign_epsilon = 0.0);

/// Sliding term u2 = -k0 sign(s) - k1 sig(s)^rho1 - k2 sig(s)^rho2.
Vector sliding_control(const Vector& s, const ControllerGains& gains, double sign_epsilon = 0.0);

/// Upper bound on the fixed reaching time of the sliding manifold:
///   1 / (2^((rho1-1)/2) k1 (1-rho1)) + 1 / (2^((rho2-1)/2) k2 (N n)^((1-rho2)/2) (rho2-1)).
double reaching_time_bound(const ControllerGains& gains, std::size_t agent_count,
                           std::size_t dimension);

/// Sufficient consensus gain 2 psi_bar n^2 |E| / lambda_min(H^{-1}) + epsilon.
/// Throws std::invalid_argument if lambda_min_inv_hess <= 0.
double beta_lower_bound(double psi_bar, std::size_t dimension, std::size_t edge_count,
                        double lambda_min_inv_hess, double epsilon);

inline constexpr double kPsiSafetyFactor = 2.0;

struct PsiEstimate {
  /// kPsiSafetyFactor * max ||psi_i|| over valid samples. An estimate only.
  double psi_bar = 0.0;
  /// min over samples of lambda_min(H_i^{-1}) = 1 / lambda_max(H_i).
  double lambda_min_inv_hess = 0.0;
  std::size_t valid_samples = 0;
};

struct SampleBox {
  double lower = -1.0;
  double upper = 1.0;
};

/// Random sampling of ||psi_i(x, t)|| over x in box^n, t in [0, t_max], all
/// agents. Samples outside an agent's domain are skipped; throws Error if no
/// sample is valid.
PsiEstimate estimate_psi_bound(const ProblemInstance& instance, SampleBox box, Seconds t_max,
                               std::size_t samples, std::uint64_t seed = 0x5eed);

}  // namespace dto

#include "dto/controller.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "dto/errors.hpp"
#include "dto/penalty.hpp"

namespace dto {

namespace {

constexpr double kMaxConditionNumber = 1e12;

double sign_of(double w, double epsilon) {
  if (epsilon > 0.0) return w / (std::abs(w) + epsilon);
  return static_cast<double>((w > 0.0) - (w < 0.0));
}

// Solves H y = rhs for the symmetric penalized Hessian with a condition guard.
Vector solve_hessian(const Matrix& hessian, const Vector& rhs) {
  if (hessian.rows() == 1) {
    const double h = hessian(0, 0);
    if (!(h > 0.0) || !std::isfinite(h)) {
      throw SingularHessianError("penalized Hessian is not positive definite: " +
                                 std::to_string(h));
    }
    return rhs / h;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(hessian);
  if (eig.info() != Eigen::Success) throw SingularHessianError("Hessian eigensolve failed");
  const Vector& lambda = eig.eigenvalues();
  const double lo = lambda.minCoeff();
  const double hi = lambda.maxCoeff();
  if (!(lo > 0.0) || hi / lo > kMaxConditionNumber) {
    std::ostringstream msg;
    msg << "penalized Hessian singular or indefinite (eigenvalues in [" << lo << ", " << hi
        << "])";
    throw SingularHessianError(msg.str());
  }
  const Matrix& v = eig.eigenvectors();
  return v * (v.transpose() * rhs).cwiseQuotient(lambda);
}

}  // namespace

void ControllerGains::validate(double disturbance_bound) const {
  std::ostringstream msg;
  if (!(k0 > disturbance_bound)) {
    msg << "k0 = " << k0 << " must exceed the disturbance bound D0 = " << disturbance_bound;
  } else if (!(k1 > 0.0 && k2 > 0.0)) {
    msg << "k1 and k2 must be positive";
  } else if (!(rho1 > 0.0 && rho1 < 1.0)) {
    msg << "rho1 = " << rho1 << " must lie in (0, 1)";
  } else if (!(rho2 > 1.0)) {
    msg << "rho2 = " << rho2 << " must exceed 1";
  } else if (!(beta > 0.0)) {
    msg << "beta must be positive";
  } else {
    return;
  }
  throw std::invalid_argument(msg.str());
}

ControllerGains experiment_gains() {
  return ControllerGains{.k0 = 10.0, .k1 = 3.0, .k2 = 3.0, .rho1 = 0.5, .rho2 = 3.0, .beta = 3.0};
}

ControllerState update_manifold(ControllerState state, const Vector& u1, Seconds dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("update_manifold needs dt > 0");
  state.z += dt * u1;
  return state;
}

Vector sign(const Vector& v, double epsilon) {
  return v.unaryExpr([epsilon](double w) { return sign_of(w, epsilon); });
}

Vector sig(const Vector& v, double alpha) {
  return v.unaryExpr([alpha](double w) { return sign_of(w, 0.0) * std::pow(std::abs(w), alpha); });
}

Vector newton_direction(const AgentProblem& agent, const Vector& x, Seconds t) {
  const PenalizedDerivatives d = penalized_derivatives(agent, x, t);
  return solve_hessian(d.hessian, d.gradient + d.grad_time_partial);
}

Vector nominal_control(std::size_t agent_index, std::span<const Vector> states, Seconds t,
                       const Graph& graph, const AgentProblem& agent, double beta,
                       double sign_epsilon) {
  const Vector& xi = states[agent_index];
  Vector consensus = Vector::Zero(xi.size());
  for (std::size_t j : graph.neighbors(agent_index)) {
    consensus += sign(xi - states[j], sign_epsilon);
  }
  const PenalizedDerivatives d = penalized_derivatives(agent, xi, t);
  return -solve_hessian(d.hessian, beta * consensus + d.gradient + d.grad_time_partial);
}

Vector sliding_control(const Vector& s, const ControllerGains& gains, double sign_epsilon) {
  return -gains.k0 * sign(s, sign_epsilon) - gains.k1 * sig(s, gains.rho1) -
         gains.k2 * sig(s, gains.rho2);
}

double reaching_time_bound(const ControllerGains& gains, std::size_t agent_count,
                           std::size_t dimension) {
  const double nn = static_cast<double>(agent_count * dimension);
  const double first =
      1.0 / (std::pow(2.0, (gains.rho1 - 1.0) / 2.0) * gains.k1 * (1.0 - gains.rho1));
  const double second = 1.0 / (std::pow(2.0, (gains.rho2 - 1.0) / 2.0) * gains.k2 *
                               std::pow(nn, (1.0 - gains.rho2) / 2.0) * (gains.rho2 - 1.0));
  return first + second;
}

double beta_lower_bound(double psi_bar, std::size_t dimension, std::size_t edge_count,
                        double lambda_min_inv_hess, double epsilon) {
  if (!(lambda_min_inv_hess > 0.0)) {
    throw std::invalid_argument("lambda_min of the inverse Hessian must be positive");
  }
  const double n = static_cast<double>(dimension);
  return 2.0 * psi_bar * n * n * static_cast<double>(edge_count) / lambda_min_inv_hess + epsilon;
}

PsiEstimate estimate_psi_bound(const ProblemInstance& instance, SampleBox box, Seconds t_max,
                               std::size_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(box.lower, box.upper);
  std::uniform_real_distribution<double> time(0.0, t_max);
  const auto n = static_cast<Eigen::Index>(instance.dimension());

  double psi_max = 0.0;
  double lambda_min = std::numeric_limits<double>::infinity();
  std::size_t valid = 0;
  Vector x(n);
  for (std::size_t k = 0; k < samples; ++k) {
    for (Eigen::Index c = 0; c < n; ++c) x(c) = coord(rng);
    const Seconds t = time(rng);
    for (const AgentProblem& agent : instance.agents()) {
      if (!in_domain(agent, x, t)) continue;
      try {
        const PenalizedDerivatives d = penalized_derivatives(agent, x, t);
        const Vector psi = solve_hessian(d.hessian, d.gradient + d.grad_time_partial);
        const double h_max = Eigen::SelfAdjointEigenSolver<Matrix>(d.hessian, Eigen::EigenvaluesOnly)
                                 .eigenvalues()
                                 .maxCoeff();
        psi_max = std::max(psi_max, psi.norm());
        lambda_min = std::min(lambda_min, 1.0 / h_max);
        ++valid;
      } catch (const Error&) {
        // sample skipped
      }
    }
  }
  if (valid == 0) throw Error("psi estimation: every sample fell outside the agents' domains");
  return {kPsiSafetyFactor * psi_max, lambda_min, valid};
}

}  // namespace dto

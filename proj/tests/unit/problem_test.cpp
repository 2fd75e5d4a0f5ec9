#include "dto/problem.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "dto/errors.hpp"
#include "dto/finite_difference.hpp"

namespace dto {
namespace {

Vector scalar(double v) { return Vector::Constant(1, v); }

std::shared_ptr<LambdaFunction> lambda_function(std::function<double(double, double)> value,
                                                std::function<double(double, double)> grad) {
  LambdaFunction::Channels c;
  c.value = [value](const Vector& x, Seconds t) { return value(x(0), t); };
  c.gradient = [grad](const Vector& x, Seconds t) { return scalar(grad(x(0), t)); };
  c.hessian = [](const Vector&, Seconds) { return Matrix::Constant(1, 1, 2.0); };
  c.time_partial = [](const Vector&, Seconds) { return 0.0; };
  c.grad_time_partial = [](const Vector&, Seconds) { return scalar(0.0); };
  return std::make_shared<LambdaFunction>(1, std::move(c));
}

TEST(FiniteDifferenceTest, QuadraticIsExactUnderCentralDifferences) {
  TrackingQuadratic f({Signal::constant(0.0)}, Signal::constant(0.0));
  EXPECT_NEAR(fd_gradient(f, scalar(3.0), 0.0, 1e-5)(0), 6.0, 1e-8);
}

TEST(FiniteDifferenceTest, TimeVaryingQuadratic) {
  TrackingQuadratic f({Signal::sine(1.0)}, Signal::constant(5.0));
  EXPECT_NEAR(fd_gradient(f, scalar(-2.0), 0.0)(0), -4.0, 1e-8);
}

TEST(FiniteDifferenceTest, ConstantFunctionHasZeroGradient) {
  auto f = lambda_function([](double, double) { return 7.0; }, [](double, double) { return 0.0; });
  EXPECT_EQ(fd_gradient(*f, scalar(1.5), 2.0)(0), 0.0);
}

TEST(FiniteDifferenceTest, NonFiniteValueIsReportedAsDomainViolation) {
  auto f = lambda_function([](double x, double) { return std::log(x); },
                           [](double x, double) { return 1.0 / x; });
  EXPECT_THROW(fd_gradient(*f, scalar(0.0), 0.0), Error);
  EXPECT_THROW(fd_gradient(*f, scalar(1.0), 0.0, 0.0), Error);
}

TEST(ScenarioTest, ScenarioAMatchesExperimentDefinition) {
  const ProblemInstance a = scenario_a();
  ASSERT_EQ(a.agent_count(), 4u);
  EXPECT_EQ(a.dimension(), 1u);
  EXPECT_DOUBLE_EQ(a.agent(0).cost->value(scalar(-2.0), 0.0), 9.0);
  EXPECT_NO_THROW(a.check_initial_feasibility());
  const double expected_x0[] = {-2.0, -1.0, 1.0, 3.0};
  for (std::size_t i = 0; i < 4; ++i) {
    const AgentProblem& agent = a.agent(i);
    EXPECT_EQ(agent.initial_state(0), expected_x0[i]);
    ASSERT_EQ(agent.constraints.size(), 1u);
    EXPECT_LT(agent.constraints[0]->value(agent.initial_state, 0.0), agent.barrier.slack(0.0));
    EXPECT_EQ(agent.barrier, BarrierSchedule(10.0, 0.05, 30.0, 1.0));
  }
  EXPECT_EQ(a.graph().laplacian(), Graph::ring(4).laplacian());
  EXPECT_EQ(a.disturbance_bound(), 5.0);
  EXPECT_EQ(a.metadata().at("nu"), 3.0);
  EXPECT_EQ(a.metadata().at("rho"), 18.0);
}

TEST(ScenarioTest, CostsAndDisturbancesAtSamplePoints) {
  const ProblemInstance a = scenario_a();
  const double t = 0.7;
  const double x = 0.3;
  const double s = std::sin(t), c = std::cos(t);
  EXPECT_DOUBLE_EQ(a.agent(0).cost->value(scalar(x), t), (x - s) * (x - s) + 5);
  EXPECT_DOUBLE_EQ(a.agent(1).cost->value(scalar(x), t), (x + 3 * s) * (x + 3 * s) + c);
  EXPECT_DOUBLE_EQ(a.agent(2).cost->value(scalar(x), t), (x - c) * (x - c) - 5);
  EXPECT_DOUBLE_EQ(a.agent(3).cost->value(scalar(x), t), (x - s) * (x - s));
  EXPECT_DOUBLE_EQ(a.agent(0).disturbance(t)(0), 3 * s + 2);
  EXPECT_DOUBLE_EQ(a.agent(1).disturbance(t)(0), 2 * std::sin(0.5 * M_PI * t));
  EXPECT_DOUBLE_EQ(a.agent(2).disturbance(t)(0), 2.0);
  EXPECT_DOUBLE_EQ(a.agent(3).disturbance(t)(0), 1.5 * c + 0.5);
  EXPECT_DOUBLE_EQ(a.agent(0).constraints[0]->value(scalar(x), t), x - c);
}

TEST(ScenarioTest, DisturbancesRespectDeclaredBound) {
  const ProblemInstance a = scenario_a();
  for (double t = 0.0; t <= 20.0; t += 1e-3) {
    for (const AgentProblem& agent : a.agents()) {
      ASSERT_LE(agent.disturbance(t).lpNorm<Eigen::Infinity>(), a.disturbance_bound() + 1e-12);
    }
  }
}

TEST(ScenarioTest, ScenarioBDiffersOnlyInTopology) {
  const ProblemInstance a = scenario_a();
  const ProblemInstance b = scenario_b();
  EXPECT_EQ(b.graph().laplacian(), Graph::path(4).laplacian());
  EXPECT_TRUE(b.graph().is_connected());
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> xs(-5, 5), ts(0, 10);
  for (std::size_t i = 0; i < 4; ++i) {
    const AgentProblem& pa = a.agent(i);
    const AgentProblem& pb = b.agent(i);
    EXPECT_EQ(pa.initial_state, pb.initial_state);
    EXPECT_EQ(pa.barrier, pb.barrier);
    for (int k = 0; k < 20; ++k) {
      const Vector x = scalar(xs(rng));
      const double t = ts(rng);
      EXPECT_EQ(pa.cost->value(x, t), pb.cost->value(x, t));
      EXPECT_EQ(pa.constraints[0]->value(x, t), pb.constraints[0]->value(x, t));
      EXPECT_EQ(pa.disturbance(t), pb.disturbance(t));
    }
  }
}

TEST(GlobalCostTest, ScenarioAAtOrigin) {
  // 5 + 1 + (1 - 5) + 0
  EXPECT_DOUBLE_EQ(global_cost(scenario_a(), scalar(0.0), 0.0), 2.0);
  // Oracle value from tests/oracles/derive_expected.py.
  EXPECT_DOUBLE_EQ(global_cost(scenario_a(), scalar(0.25), 0.0), 1.75);
}

TEST(GlobalCostTest, SingleAgentEqualsItsCost) {
  const ProblemInstance a = scenario_a();
  ProblemInstance single(Graph(1, {}), {a.agent(2)}, 5.0);
  EXPECT_EQ(global_cost(single, scalar(0.4), 1.3), a.agent(2).cost->value(scalar(0.4), 1.3));
}

TEST(ProblemInstanceTest, RejectsInconsistentInstances) {
  const ProblemInstance a = scenario_a();
  EXPECT_THROW(ProblemInstance(Graph::ring(3), {a.agent(0), a.agent(1)}, 5.0),
               std::invalid_argument);
  AgentProblem wide = a.agent(0);
  wide.initial_state = Vector::Zero(2);
  EXPECT_THROW(ProblemInstance(Graph(2, {{0, 1}}), {a.agent(0), wide}, 5.0),
               std::invalid_argument);
}

TEST(ProblemInstanceTest, SelfCheckCatchesInconsistentDerivatives) {
  AgentProblem agent = scenario_a().agent(0);
  agent.cost = lambda_function([](double x, double) { return x * x; },
                               [](double x, double) { return 3.0 * x; });  // wrong: should be 2x
  agent.initial_state = scalar(1.0);
  EXPECT_THROW(ProblemInstance(Graph(1, {}), {agent}, 5.0), std::invalid_argument);
  EXPECT_NO_THROW(ProblemInstance(Graph(1, {}), {agent}, 5.0,
                                  InstanceOptions{.derivative_self_check = false}));
}

TEST(ProblemInstanceTest, LambdaFunctionNeedsAllChannels) {
  LambdaFunction::Channels c;
  c.value = [](const Vector&, Seconds) { return 0.0; };
  EXPECT_THROW(LambdaFunction(1, c), std::invalid_argument);
}

TEST(ProblemInstanceTest, InfeasibleStartIsRejected) {
  const ProblemInstance a = scenario_a();
  const ProblemInstance bad =
      a.with_initial_states({scalar(-2.0), scalar(-1.0), scalar(1.0), scalar(31.0)});
  EXPECT_THROW(bad.check_initial_feasibility(), InfeasibleStartError);
}

// Every analytic derivative channel of the scenario functions agrees with
// central differences at 100 random (x, t) draws.
TEST(ProblemProperty, ScenarioDerivativesMatchFiniteDifferences) {
  const ProblemInstance a = scenario_a();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> xs(-5, 5), ts(0, 10);
  for (int k = 0; k < 100; ++k) {
    const Vector x = scalar(xs(rng));
    const double t = ts(rng);
    for (const AgentProblem& agent : a.agents()) {
      const DerivativeCheck cost = check_derivatives(*agent.cost, x, t);
      EXPECT_TRUE(cost.ok()) << "cost at x=" << x(0) << " t=" << t;
      const DerivativeCheck g = check_derivatives(*agent.constraints[0], x, t);
      EXPECT_TRUE(g.ok()) << "constraint at x=" << x(0) << " t=" << t;
      EXPECT_EQ(agent.cost->hessian(x, t)(0, 0), 2.0);
      EXPECT_EQ(agent.constraints[0]->hessian(x, t)(0, 0), 0.0);
    }
  }
}

TEST(ProblemProperty, MultiDimensionalQuadraticDerivatives) {
  TrackingQuadratic f({Signal::sine(2.0, 0.5), Signal::cosine(1.0) + Signal::constant(1.0),
                       Signal::constant(-3.0)},
                      Signal::sine(1.0, 3.0));
  AffineConstraint g((Vector(3) << 1.0, -2.0, 0.5).finished(), Signal::cosine(2.0, 0.3));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> xs(-5, 5), ts(0, 10);
  for (int k = 0; k < 100; ++k) {
    const Vector x = Vector::NullaryExpr(3, [&] { return xs(rng); });
    const double t = ts(rng);
    EXPECT_TRUE(check_derivatives(f, x, t).ok());
    EXPECT_TRUE(check_derivatives(g, x, t).ok());
  }
}

// Power-sum inequalities for nonnegative q_1..q_m:
//   p in (0, 1]: sum q^p >= (sum q)^p
//   p > 1:       sum q^p >= m^(1-p) (sum q)^p
TEST(ProblemProperty, PowerSumInequalities) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> count(1, 10);
  std::uniform_real_distribution<double> q_dist(0.0, 10.0);
  std::uniform_real_distribution<double> small_p(1e-3, 1.0);
  std::uniform_real_distribution<double> large_p(1.0 + 1e-3, 5.0);
  for (int draw = 0; draw < 1000; ++draw) {
    const int m = count(rng);
    std::vector<double> q(m);
    for (double& v : q) v = q_dist(rng);
    if (draw % 7 == 0) q[0] = 0.0;
    double sum = 0.0;
    for (double v : q) sum += v;

    const double p1 = draw == 0 ? 1.0 : small_p(rng);
    double lhs1 = 0.0;
    for (double v : q) lhs1 += std::pow(v, p1);
    ASSERT_GE(lhs1, std::pow(sum, p1) * (1 - 1e-12));

    const double p2 = large_p(rng);
    double lhs2 = 0.0;
    for (double v : q) lhs2 += std::pow(v, p2);
    ASSERT_GE(lhs2, std::pow(m, 1 - p2) * std::pow(sum, p2) * (1 - 1e-12));
  }
}

}  // namespace
}  // namespace dto

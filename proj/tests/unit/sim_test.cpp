#include "dto/sim.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "dto/errors.hpp"

namespace dto {
namespace {

Vector scalar(double v) { return Vector::Constant(1, v); }

std::vector<ControllerState> zero_states(std::size_t n, std::size_t dim) {
  return std::vector<ControllerState>(n, ControllerState::zero(dim));
}

std::vector<Vector> initial_states(const ProblemInstance& inst) {
  std::vector<Vector> x;
  for (const AgentProblem& a : inst.agents()) x.push_back(a.initial_state);
  return x;
}

// f = k/2 (x - c)^2 but reporting unit curvature, so u1 = -k (x - c) is
// stiff under explicit Euler. The derivative self-check is disabled on
// purpose.
ProblemInstance stiff_instance(double k) {
  LambdaFunction::Channels ch;
  ch.value = [k](const Vector& x, Seconds) { return 0.5 * k * (x(0) - 0.9) * (x(0) - 0.9); };
  ch.gradient = [k](const Vector& x, Seconds) { return scalar(k * (x(0) - 0.9)); };
  ch.hessian = [](const Vector&, Seconds) { return Matrix::Identity(1, 1); };
  ch.time_partial = [](const Vector&, Seconds) { return 0.0; };
  ch.grad_time_partial = [](const Vector&, Seconds) { return scalar(0.0); };
  AgentProblem agent{std::make_shared<LambdaFunction>(1, ch),
                     {std::make_shared<AffineConstraint>(scalar(1.0), Signal::constant(0.0))},
                     BarrierSchedule(1e6, 1e-12, 1.0, 1e-12),
                     zero_disturbance(1),
                     scalar(0.0)};
  return ProblemInstance(Graph(1, {}), {agent}, 0.0,
                         InstanceOptions{.derivative_self_check = false});
}

TEST(StepTest, DisturbanceOnlyMovesTheState) {
  AgentProblem agent{
      std::make_shared<TrackingQuadratic>(std::vector<Signal>{Signal::constant(1.0)},
                                          Signal::constant(0.0)),
      {},
      BarrierSchedule(1.0, 1.0, 1.0, 1.0),
      make_disturbance({Signal::constant(2.0)}),
      scalar(1.0)};
  SimConfig cfg(ProblemInstance(Graph(1, {}), {agent}, 2.0), experiment_gains());
  cfg.sliding_enabled = false;
  const StepResult r = step({scalar(1.0)}, zero_states(1, 1), 0.0, 1e-3, cfg);
  EXPECT_DOUBLE_EQ(r.states[0](0), 1.002);
  EXPECT_EQ(r.controller_states[0].z(0), 0.0);
  EXPECT_FALSE(r.refined);
}

TEST(StepTest, FirstStepOfScenarioA) {
  const SimConfig cfg(scenario_a(), experiment_gains());
  const StepResult r = step(initial_states(cfg.instance), zero_states(4, 1), 0.0, 1e-3, cfg);
  // tests/oracles/derive_expected.py
  const double x[] = {-1.9537604514574103508, -0.98600285142327034813, 0.98599675018054552525,
                      2.9008005569708269438};
  const double z[] = {0.0059969078554703640788, -0.0020028514232703481275,
                      -3.2498194544747514027e-6, -0.0050032906064664243352};
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_NEAR(r.states[i](0), x[i], 1e-12) << "agent " << i;
    EXPECT_NEAR(r.controller_states[i].z(0), z[i], 1e-14) << "agent " << i;
  }
}

TEST(StepTest, StiffStepIsRefined) {
  SimConfig cfg(stiff_instance(5000.0), experiment_gains());
  cfg.sliding_enabled = false;
  const StepResult r = step({scalar(0.0)}, zero_states(1, 1), 0.0, 1e-3, cfg);
  EXPECT_TRUE(r.refined);
  EXPECT_GT(r.states[0](0), 0.89);
  EXPECT_LT(r.states[0](0), 1.0);
}

TEST(StepTest, RefinementFailureNamesTheAgent) {
  SimConfig cfg(stiff_instance(25000.0), experiment_gains());
  cfg.sliding_enabled = false;
  try {
    step({scalar(0.0)}, zero_states(1, 1), 0.0, 1e-3, cfg);
    FAIL() << "expected SimulationError";
  } catch (const SimulationError& e) {
    EXPECT_EQ(e.agent(), 0u);
    EXPECT_NE(std::string(e.what()).find("agent=1"), std::string::npos) << e.what();
  }
}

TEST(StepTest, RejectsNonPositiveDt) {
  const SimConfig cfg(scenario_a(), experiment_gains());
  EXPECT_THROW(step(initial_states(cfg.instance), zero_states(4, 1), 0.0, 0.0, cfg),
               std::invalid_argument);
}

TEST(RunTest, ZeroHorizonRecordsOnlyTheStart) {
  SimConfig cfg(scenario_a(), experiment_gains());
  cfg.t_end = 0.0;
  const Trajectory traj = run(cfg);
  ASSERT_EQ(traj.size(), 1u);
  EXPECT_EQ(traj.times[0], 0.0);
  EXPECT_EQ(traj.records[0][3].x(0), 3.0);
  EXPECT_DOUBLE_EQ(traj.consensus_error[0], 5.0);
  EXPECT_NEAR(traj.tracking_error_true[0], 2.75, 1e-9);
  EXPECT_DOUBLE_EQ(traj.manifold_norm[0], 3.0);
  EXPECT_NEAR(traj.records[0][0].u1(0), 5.9969078554703640788, 1e-12);
  EXPECT_DOUBLE_EQ(traj.records[0][0].margins[0], -2.0 - 1.0 - 30.0);
}

TEST(RunTest, RecordsOnTheStrideAndTheFinalStep) {
  SimConfig cfg(scenario_a(), experiment_gains());
  cfg.dt = 1e-3;
  cfg.t_end = 0.105;
  cfg.record_stride = 20;
  const Trajectory traj = run(cfg);
  ASSERT_EQ(traj.size(), 7u);
  EXPECT_NEAR(traj.times[5], 0.1, 1e-12);
  EXPECT_NEAR(traj.times.back(), 0.105, 1e-12);
  EXPECT_EQ(traj.index_of(0.1), 5u);
  EXPECT_THROW(traj.index_of(0.05), std::out_of_range);
  EXPECT_EQ(traj.index_of(0.045, false), 2u);
}

TEST(RunTest, ManifoldStaysAtZeroWithoutDisturbances) {
  SimConfig cfg(scenario_a().with_initial_states(std::vector<Vector>(4, scalar(0.0))),
                experiment_gains());
  cfg.disturbances_enabled = false;
  cfg.dt = 1e-3;
  cfg.t_end = 2.0;
  cfg.record_stride = 10;
  const Trajectory traj = run(cfg);
  for (double m : traj.manifold_norm) EXPECT_LT(m, 1e-12);
}

TEST(RunTest, Deterministic) {
  SimConfig cfg(scenario_b(), experiment_gains());
  cfg.dt = 1e-3;
  cfg.t_end = 0.3;
  cfg.record_stride = 7;
  const Trajectory a = run(cfg);
  const Trajectory b = run(cfg);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    for (std::size_t i = 0; i < 4; ++i) {
      EXPECT_EQ(a.records[k][i].x, b.records[k][i].x);
      EXPECT_EQ(a.records[k][i].s, b.records[k][i].s);
    }
  }
}

TEST(RunTest, InvalidConfigurationIsRejected) {
  SimConfig cfg(scenario_a(), experiment_gains());
  cfg.dt = 0.0;
  EXPECT_THROW(run(cfg), std::invalid_argument);
  cfg.dt = 1e-3;
  cfg.record_stride = 0;
  EXPECT_THROW(run(cfg), std::invalid_argument);
  cfg.record_stride = 1;
  cfg.gains.k0 = 4.0;  // below D0 = 5
  EXPECT_THROW(run(cfg), std::invalid_argument);
}

TEST(RunTest, InfeasibleStartIsRejected) {
  SimConfig cfg(scenario_a().with_initial_states(
                    {scalar(-2.0), scalar(-1.0), scalar(1.0), scalar(40.0)}),
                experiment_gains());
  EXPECT_THROW(run(cfg), InfeasibleStartError);
}

TEST(ConsensusTest, Examples) {
  EXPECT_EQ(consensus_error({scalar(-2.0), scalar(-1.0), scalar(1.0), scalar(3.0)}), 5.0);
  EXPECT_EQ(consensus_error({scalar(4.0)}), 0.0);
  const std::vector<Vector> planar = {(Vector(2) << 0.0, 0.0).finished(),
                                      (Vector(2) << 3.0, 4.0).finished()};
  EXPECT_DOUBLE_EQ(consensus_error(planar), 5.0);
}

TEST(ConsensusTest, FirstEntryTime) {
  Trajectory traj;
  traj.agent_count = 2;
  traj.dimension = 1;
  const double gaps[] = {1.0, 0.005, 0.5, 0.001};
  for (int k = 0; k < 4; ++k) {
    traj.times.push_back(0.5 * k);
    traj.records.push_back({AgentRecord{scalar(0.0), {}, {}, {}, {}, {}},
                            AgentRecord{scalar(gaps[k]), {}, {}, {}, {}, {}}});
  }
  ASSERT_TRUE(consensus_time(traj).has_value());
  EXPECT_EQ(*consensus_time(traj), 0.5);
  EXPECT_FALSE(consensus_time(traj, 1e-4).has_value());
}

TEST(OptimumTest, ScenarioAScalarOptimum) {
  const ProblemInstance a = scenario_a();
  // Unconstrained minimizer of 8x^2 - 4x + ...; the constraint x <= 1 is slack.
  EXPECT_NEAR(optimal_trajectory(a, 0.0)(0), 0.25, 1e-9);
  // At t = pi the unconstrained minimizer -0.25 violates x <= cos(pi) = -1.
  EXPECT_NEAR(optimal_trajectory(a, M_PI)(0), -1.0, 1e-9);
  EXPECT_NEAR(penalized_optimal_trajectory(a, 0.0)(0), 0.24837406971217238618, 1e-10);
}

TEST(OptimumTest, PenalizedOptimumIsFeasibleAndConverges) {
  const ProblemInstance a = scenario_a();
  for (double t : {0.5, 2.0, M_PI, 10.0, 20.0}) {
    const double x_true = optimal_trajectory(a, t)(0);
    const double x_pen = penalized_optimal_trajectory(a, t)(0);
    EXPECT_LT(x_pen - std::cos(t), a.agent(0).barrier.slack(t)) << "t=" << t;
    if (t >= 10.0) EXPECT_NEAR(x_pen, x_true, 0.05) << "t=" << t;
  }
}

TEST(OptimumTest, PlanarInstance) {
  auto agent = [](double r1, double r2) {
    return AgentProblem{
        std::make_shared<TrackingQuadratic>(
            std::vector<Signal>{Signal::constant(r1), Signal::constant(r2)}, Signal::constant(0.0)),
        {std::make_shared<AffineConstraint>((Vector(2) << 1.0, 1.0).finished(),
                                            Signal::constant(0.0))},
        BarrierSchedule(10.0, 0.05, 30.0, 1.0),
        zero_disturbance(2),
        Vector::Zero(2)};
  };
  // Active: average (1, 1) projected onto x1 + x2 <= 0 is the origin.
  const ProblemInstance active(Graph(2, {{0, 1}}), {agent(1.0, 2.0), agent(1.0, 0.0)}, 0.0);
  EXPECT_LT((optimal_trajectory(active, 0.0) - Vector::Zero(2)).norm(), 1e-6);
  // Inactive: average (-1, -0.5) is already feasible.
  const ProblemInstance slack(Graph(2, {{0, 1}}), {agent(-1.0, 0.0), agent(-1.0, -1.0)}, 0.0);
  EXPECT_LT((optimal_trajectory(slack, 0.0) - (Vector(2) << -1.0, -0.5).finished()).norm(), 1e-6);
}

TEST(OptimumTest, InfeasibleConstraintsThrow) {
  AgentProblem a = scenario_a().agent(0);
  AgentProblem b = a;
  b.constraints = {std::make_shared<AffineConstraint>(scalar(-1.0), Signal::constant(-5.0))};
  // x <= cos t and x >= 5 cannot both hold.
  const ProblemInstance inst(Graph(2, {{0, 1}}), {a, b}, 5.0);
  EXPECT_THROW(optimal_trajectory(inst, 0.0), Error);
}

TEST(ChatterBandTest, ExperimentGains) {
  EXPECT_DOUBLE_EQ(chatter_band(experiment_gains(), 5.0, 1e-4), 4.2e-3);
}

}  // namespace
}  // namespace dto

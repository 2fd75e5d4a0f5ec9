#include "dto/cli/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <iomanip>
#include <ostream>

#include "dto/cli/scenario_file.hpp"
#include "dto/cli/svg_plot.hpp"
#include "dto/controller.hpp"
#include "dto/errors.hpp"
#include "dto/sim.hpp"
#include "dto/trajectory_io.hpp"

namespace dto::cli {

namespace {

constexpr const char* kDefaultOutDir = "dto_out";
constexpr double kConsensusThreshold = 1e-2;

struct RawArgs {
  std::string scenario;
  std::optional<double> dt, t_end, sign_epsilon;
  std::optional<std::size_t> stride;
  std::string out;
  bool plot = false;
};

void configure(CLI::App& app, RawArgs& raw) {
  app.add_option("--scenario", raw.scenario, "a | b | file:PATH")->required();
  app.add_option("--dt", raw.dt, "integration step in seconds (> 0)")->check(CLI::PositiveNumber);
  app.add_option("--t-end", raw.t_end, "final time in seconds (>= 0)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--out", raw.out, "output directory (default $DTO_SIM_OUT or dto_out)");
  app.add_flag("--plot", raw.plot, "also write states.svg, constraints.svg, manifold.svg");
  app.add_option("--sign-epsilon", raw.sign_epsilon, "boundary-layer width for sign(), 0 = off")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--stride", raw.stride, "record every N-th step (>= 1)")
      ->check(CLI::PositiveNumber);
}

RunSpec to_spec(const RawArgs& raw) {
  RunSpec spec;
  if (raw.scenario == "a") {
    spec.source = RunSpec::Source::kScenarioA;
  } else if (raw.scenario == "b") {
    spec.source = RunSpec::Source::kScenarioB;
  } else if (raw.scenario.rfind("file:", 0) == 0 && raw.scenario.size() > 5) {
    spec.source = RunSpec::Source::kFile;
    spec.file = raw.scenario.substr(5);
  } else {
    throw UsageError("--scenario: expected a, b or file:PATH, got '" + raw.scenario + "'");
  }
  spec.dt = raw.dt;
  spec.t_end = raw.t_end;
  spec.stride = raw.stride;
  spec.sign_epsilon = raw.sign_epsilon;
  spec.plot = raw.plot;
  if (!raw.out.empty()) {
    spec.out_dir = raw.out;
  } else if (const char* env = std::getenv("DTO_SIM_OUT"); env != nullptr && *env != '\0') {
    spec.out_dir = env;
  } else {
    spec.out_dir = kDefaultOutDir;
  }
  return spec;
}

}  // namespace

std::string usage() {
  CLI::App app{"Distributed robust time-varying optimization simulator", "dto_sim"};
  RawArgs raw;
  configure(app, raw);
  return app.help();
}

RunSpec parse_args(int argc, const char* const* argv) {
  if (argc <= 1) throw UsageError("no arguments given");
  CLI::App app{"Distributed robust time-varying optimization simulator", "dto_sim"};
  RawArgs raw;
  configure(app, raw);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
  return to_spec(raw);
}

RunSpec parse_args(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"dto_sim"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  return parse_args(static_cast<int>(argv.size()), argv.data());
}

namespace {

struct Prepared {
  SimConfig config;
  std::string label;
};

Prepared prepare(const RunSpec& spec) {
  std::optional<Prepared> p;
  switch (spec.source) {
    case RunSpec::Source::kScenarioA:
      p.emplace(Prepared{SimConfig(scenario_a(), experiment_gains()), "a"});
      break;
    case RunSpec::Source::kScenarioB:
      p.emplace(Prepared{SimConfig(scenario_b(), experiment_gains()), "b"});
      break;
    case RunSpec::Source::kFile: {
      LoadedScenario loaded = load_scenario_file(spec.file);
      p.emplace(Prepared{SimConfig(std::move(loaded.instance), loaded.gains), spec.file.string()});
      if (loaded.dt) p->config.dt = *loaded.dt;
      if (loaded.t_end) p->config.t_end = *loaded.t_end;
      if (loaded.stride) p->config.record_stride = *loaded.stride;
      if (loaded.sign_epsilon) p->config.sign_epsilon = *loaded.sign_epsilon;
      break;
    }
  }
  SimConfig& c = p->config;
  if (spec.dt) c.dt = *spec.dt;
  if (spec.t_end) c.t_end = *spec.t_end;
  if (spec.stride) c.record_stride = *spec.stride;
  if (spec.sign_epsilon) c.sign_epsilon = *spec.sign_epsilon;
  c.validate();
  return std::move(*p);
}

void warn_on_beta(const SimConfig& config, std::ostream& err) {
  const ProblemInstance& inst = config.instance;
  try {
    const PsiEstimate est =
        estimate_psi_bound(inst, SampleBox{-3.0, 3.0}, std::max(config.t_end, 1.0), 2000);
    const double bound = beta_lower_bound(est.psi_bar, inst.dimension(),
                                          inst.graph().edge_count(), est.lambda_min_inv_hess, 1e-3);
    if (config.gains.beta < bound) {
      err << "warning: beta = " << config.gains.beta
          << " is below the sampled sufficient consensus gain " << bound
          << " (psi_bar ~ " << est.psi_bar << ", lambda_min(H^-1) ~ " << est.lambda_min_inv_hess
          << "); consensus is not guaranteed\n";
    }
  } catch (const Error& e) {
    err << "warning: could not estimate the consensus gain bound: " << e.what() << '\n';
  }
}

}  // namespace

int run_command(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  std::optional<Prepared> prepared;
  try {
    prepared.emplace(prepare(spec));
  } catch (const ScenarioFileError& e) {
    err << "error: [cli] scenario file: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: [cli] invalid configuration: " << e.what() << '\n';
    return kExitUsage;
  }
  const SimConfig& config = prepared->config;

  try {
    config.instance.check_initial_feasibility();
    warn_on_beta(config, err);
    const Trajectory traj = run(config);

    std::filesystem::create_directories(spec.out_dir);
    write_agent_csv(traj, spec.out_dir / "agents.csv");
    write_summary_csv(traj, spec.out_dir / "summary.csv");
    if (spec.plot) emit_plots(traj, config.instance, config.gains, spec.out_dir);

    double max_margin = -std::numeric_limits<double>::infinity();
    for (const auto& row : traj.records) {
      for (const AgentRecord& r : row) {
        for (double m : r.margins) max_margin = std::max(max_margin, m);
      }
    }
    const std::optional<Seconds> t2 = consensus_time(traj, kConsensusThreshold);
    out << std::setprecision(6) << "scenario=" << prepared->label << " T2="
        << (t2 ? std::to_string(*t2) : std::string("none"))
        << " final_consensus_error=" << traj.consensus_error.back()
        << " final_tracking_err_penalized=" << traj.tracking_error_penalized.back()
        << " max_constraint_margin=" << max_margin << " reaching_time_bound="
        << reaching_time_bound(config.gains, config.instance.agent_count(),
                               config.instance.dimension())
        << '\n';
    return kExitSuccess;
  } catch (const InfeasibleStartError& e) {
    err << "error: [problem] initial feasibility check g_ij(x_i(0), 0) < sigma_i(0) failed: "
        << e.what() << '\n';
  } catch (const SimulationError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const std::invalid_argument& e) {
    err << "error: [controller] " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: [cli] " << e.what() << '\n';
  }
  return kExitFailure;
}

}  // namespace dto::cli

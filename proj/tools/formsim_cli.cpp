// Command-line front end: scenario runs, tau sweeps, the observer demo, and
// the closed-form vs. integrated comparison.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "formsim/analysis.hpp"
#include "formsim/observer.hpp"
#include "formsim/scenario.hpp"
#include "formsim/simulation.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

json summary_to_json(const formsim::sim::RunSummary& s) {
  json j;
  j["converged"] = s.converged;
  if (s.converged)
    j["convergence_time_s"] = s.convergence_time;
  else
    j["convergence_time_s"] = nullptr;
  j["connectivity_ok"] = s.connectivity_ok;
  j["min_lambda2"] = s.min_lambda2;
  j["control_effort"] = s.control_effort;
  j["final_separation_m"] = s.final_separation;
  j["isolation_events"] = s.isolation_events;
  j["convergence_threshold_m"] = s.convergence_threshold;
  return j;
}

void print_summary(std::ostream& out, const formsim::sim::RunSummary& s) {
  out << "converged:          " << (s.converged ? "yes" : "no") << "\n";
  if (s.converged) out << "convergence time:   " << s.convergence_time << " s\n";
  out << "connectivity held:  " << (s.connectivity_ok ? "yes" : "no") << "\n";
  out << "min lambda2:        " << s.min_lambda2 << "\n";
  out << "isolation events:   " << s.isolation_events << "\n";
  out << "control effort:    ";
  for (double e : s.control_effort) out << " " << e;
  out << "\nfinal separations: ";
  for (double d : s.final_separation) out << " " << d;
  out << " m\n";
}

void write_json(const json& j, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "'");
  out << j.dump(2) << "\n";
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

std::vector<double> parse_tau_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t used = 0;
      const double v = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw formsim::sim::ConfigError("--taus: cannot parse '" + item + "'");
    }
  }
  if (out.empty()) throw formsim::sim::ConfigError("--taus: empty list");
  return out;
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            std::optional<double> tau_override, const std::string& observer_override) {
  formsim::sim::ScenarioConfig cfg = formsim::sim::load_config(config_path);
  if (tau_override) {
    if (!(*tau_override > -0.5))
      throw formsim::sim::ConfigError("--tau must be > -1/2");
    cfg.controller = formsim::control::ControllerParams(
        cfg.controller.k1, cfg.controller.k2, *tau_override);
  }
  if (observer_override == "on")
    cfg.observer_enabled = true;
  else if (observer_override == "off")
    cfg.observer_enabled = false;
  else if (!observer_override.empty())
    throw formsim::sim::ConfigError("--observer expects on|off");

  const formsim::sim::RunResult result = formsim::sim::run_simulation(cfg);

  fs::create_directories(out_dir);
  const fs::path csv_path = fs::path(out_dir) / "trajectory.csv";
  formsim::sim::emit_csv(result.log, csv_path.string());
  write_json(summary_to_json(result.summary), fs::path(out_dir) / "summary.json");

  std::cout << "wrote " << csv_path.string() << "\n";
  print_summary(std::cout, result.summary);
  return kExitOk;
}

int cmd_sweep(const std::string& config_path, const std::string& taus_text,
              const std::string& out_dir) {
  const formsim::sim::ScenarioConfig cfg = formsim::sim::load_config(config_path);
  const std::vector<double> taus = parse_tau_list(taus_text);

  const auto entries = formsim::sim::sweep_tau(cfg, taus);
  fs::create_directories(out_dir);

  json all = json::array();
  bool any_failed = false;
  for (const auto& entry : entries) {
    char tag[32];
    std::snprintf(tag, sizeof tag, "%g", entry.tau);
    json j;
    j["tau"] = entry.tau;
    if (entry.result) {
      const fs::path csv_path = fs::path(out_dir) / ("tau_" + std::string(tag) + ".csv");
      formsim::sim::emit_csv(entry.result->log, csv_path.string());
      j["summary"] = summary_to_json(entry.result->summary);
      j["csv"] = csv_path.string();
      std::cout << "tau = " << tag << ": "
                << (entry.result->summary.converged ? "converged" : "not converged")
                << ", min lambda2 = " << entry.result->summary.min_lambda2 << "\n";
    } else {
      any_failed = true;
      j["error"] = entry.error;
      std::cout << "tau = " << tag << ": FAILED: " << entry.error << "\n";
    }
    all.push_back(std::move(j));
  }
  write_json(all, fs::path(out_dir) / "sweep_summary.json");
  return any_failed ? kExitRuntime : kExitOk;
}

int cmd_demo_observer(const std::string& out_dir, double dt, double horizon) {
  using formsim::observer::DemoState;
  if (!(dt > 0.0) || !(horizon >= dt))
    throw formsim::sim::ConfigError("demo-observer: need dt > 0 and horizon >= dt");

  // Plant starts at (1, -1), both observers at (-1, 1).
  DemoState lin{1.0, -1.0, -1.0, 1.0};
  DemoState nl = lin;
  const long steps = static_cast<long>(std::floor(horizon / dt + 1e-9));

  fs::create_directories(out_dir);
  const fs::path csv_path = fs::path(out_dir) / "observer_demo.csv";
  std::ofstream out(csv_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + csv_path.string() + "'");
  out << "t,y1,y2,y1hat_lin,y2hat_lin,y1hat_nl,y2hat_nl,err_lin,err_nl\n";

  const auto err = [](const DemoState& d) {
    return std::hypot(d.y1 - d.y1_hat, d.y2 - d.y2_hat);
  };
  double err_lin_5s = 0.0;
  double err_nl_5s = 0.0;
  for (long k = 0; k <= steps; ++k) {
    const double t = k * dt;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n", t, lin.y1,
                  lin.y2, lin.y1_hat, lin.y2_hat, nl.y1_hat, nl.y2_hat, err(lin),
                  err(nl));
    out << buf;
    if (std::abs(t - 5.0) < 0.5 * dt) {
      err_lin_5s = err(lin);
      err_nl_5s = err(nl);
    }
    if (k == steps) break;
    lin = formsim::observer::demo_linear_step(lin, dt);
    nl = formsim::observer::demo_nonlinear_step(nl, dt);
  }
  out.flush();
  if (!out) throw std::runtime_error("write failed for '" + csv_path.string() + "'");

  std::cout << "wrote " << csv_path.string() << "\n";
  std::cout << "estimation error at t=5s: linear " << err_lin_5s << ", nonlinear "
            << err_nl_5s << "\n";
  std::cout << "estimation error at t=" << horizon << "s: linear " << err(lin)
            << ", nonlinear " << err(nl) << "\n";
  return kExitOk;
}

int cmd_oracle_special(double tau, double x1_0, double k1, double dt) {
  using namespace formsim::analysis;
  if (!(tau > -0.5 && tau < 0.0))
    throw formsim::sim::ConfigError(
        "oracle-special: tau must be in (-1/2, 0) for a finite touchdown");
  if (!(x1_0 > 0.0)) throw formsim::sim::ConfigError("oracle-special: --x0 must be > 0");
  if (!(dt > 0.0)) throw formsim::sim::ConfigError("oracle-special: --dt must be > 0");

  const double k2 = gain_relation_k2(tau, k1);
  const double exponent = (1.0 + 2.0 * tau) / (1.0 + tau);
  if (!is_odd_ratio(exponent))
    std::cout << "note: (1+2*tau)/(1+tau) = " << exponent
              << " is not a ratio of small odd integers; the gain relation "
                 "still evaluates (-1)^(-exponent) as -1\n";

  const SpecialSolutionParams params(x1_0, tau, k1, k2);
  const double x2_0 = special_initial_velocity(x1_0, tau);
  const double touchdown = touchdown_time(x1_0, tau);
  const formsim::control::ControllerParams gains(k1, k2, tau);

  // Compare up to 96% of touchdown, where the closed form stays smooth.
  const long steps = static_cast<long>(std::floor(0.96 * touchdown / dt));
  const RelativeTrajectory traj = simulate_relative_dynamics(
      Eigen::Vector2d(x1_0, 0.0), Eigen::Vector2d(x2_0, 0.0), gains, dt, steps);

  double max_dev_x1 = 0.0;
  double max_dev_x2 = 0.0;
  for (size_t k = 0; k < traj.t.size(); ++k) {
    const auto [x1, x2] = special_solution(params, traj.t[k]);
    max_dev_x1 = std::max(max_dev_x1, std::abs(traj.x1[k].x() - x1));
    max_dev_x2 = std::max(max_dev_x2, std::abs(traj.x2[k].x() - x2));
  }

  std::cout << "tau = " << tau << ", k1 = " << k1 << ", k2 = " << k2
            << ", x1(0) = " << x1_0 << ", x2(0) = " << x2_0 << "\n";
  std::cout << "touchdown time: " << touchdown << " s\n";
  std::cout << "compared " << traj.t.size() << " samples on [0, "
            << traj.t.back() << "] at dt = " << dt << "\n";
  std::cout << "max deviation: |x1| " << max_dev_x1 << ", |x2| " << max_dev_x2
            << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decentralized fractional-power formation control simulator"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Run one scenario from a config file");
  std::string run_config;
  std::string run_out = ".";
  std::optional<double> run_tau;
  std::string run_observer;
  run->add_option("--config", run_config, "Scenario config file")->required();
  run->add_option("--out", run_out, "Output directory");
  run->add_option("--tau", run_tau, "Override controller tau");
  run->add_option("--observer", run_observer, "Override observer flag (on|off)");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Run the scenario once per tau value");
  std::string sweep_config;
  std::string sweep_taus;
  std::string sweep_out;
  sweep->add_option("--config", sweep_config, "Scenario config file")->required();
  sweep->add_option("--taus", sweep_taus, "Comma-separated tau list")->required();
  sweep->add_option("--out", sweep_out, "Output directory")->required();

  // demo-observer
  auto* demo = app.add_subcommand(
      "demo-observer", "Linear vs. nonlinear observer on the second-order demo plant");
  std::string demo_out;
  double demo_dt = 1e-3;
  double demo_horizon = 20.0;
  demo->add_option("--out", demo_out, "Output directory")->required();
  demo->add_option("--dt", demo_dt, "Integration step");
  demo->add_option("--horizon", demo_horizon, "Simulated duration [s]");

  // oracle-special
  auto* oracle = app.add_subcommand(
      "oracle-special", "Closed-form special solution vs. RK4 integration");
  double oracle_tau = 0.0;
  double oracle_x0 = 0.0;
  double oracle_k1 = -0.3;
  double oracle_dt = 1e-3;
  oracle->add_option("--tau", oracle_tau, "Fractional parameter, in (-1/2, 0)")
      ->required();
  oracle->add_option("--x0", oracle_x0, "Initial relative distance x1(0) > 0")
      ->required();
  oracle->add_option("--k1", oracle_k1, "Gain k1 (k2 follows from the gain relation)");
  oracle->add_option("--dt", oracle_dt, "Integration step");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (run->parsed()) return cmd_run(run_config, run_out, run_tau, run_observer);
    if (sweep->parsed()) return cmd_sweep(sweep_config, sweep_taus, sweep_out);
    if (demo->parsed()) return cmd_demo_observer(demo_out, demo_dt, demo_horizon);
    if (oracle->parsed())
      return cmd_oracle_special(oracle_tau, oracle_x0, oracle_k1, oracle_dt);
  } catch (const formsim::sim::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitValidation;
}

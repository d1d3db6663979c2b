#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "formsim/observer.hpp"
#include "formsim/scenario.hpp"

namespace formsim::sim {

// Per-agent position error below this (sustained to the horizon) counts as
// converged. Half a meter on a hundred-meter formation radius; tight enough
// that a terminal overshoot ring is charged to the run that produced it,
// which keeps convergence-time comparisons across controller settings fair.
inline constexpr double kConvergenceThresholdM = 0.5;

// One logged instant: the state at time t and the inputs computed from it.
// The final row's inputs are computed but never applied.
struct StepRecord {
  double t;
  std::vector<vehicle::AgentState> uav_states;
  vehicle::AgentState target_state;
  std::vector<vehicle::ControlInput> uav_inputs;
  double lambda2;
  double ep_norm;               // || e_p || over all UAVs
  std::vector<double> agent_ep; // per-UAV position error norm
  std::vector<double> v_hat;    // empty when the observer is disabled
  std::vector<int> isolated;    // UAV indices with no neighbors this step
};

struct TrajectoryLog {
  std::vector<StepRecord> rows;  // floor(horizon/dt) + 1 rows, t strictly increasing
  int uav_count = 0;
  bool observer_enabled = false;
};

struct RunSummary {
  bool converged = false;            // errors criterion met and connectivity held
  double convergence_time = 0.0;     // NaN when not converged
  bool connectivity_ok = false;      // lambda2 > tol at every step
  double min_lambda2 = 0.0;
  std::vector<double> control_effort;    // per UAV: sum (|accel|+|turn_rate|)*dt
  std::vector<double> final_separation;  // per UAV: distance to target at horizon
  int isolation_events = 0;
  double convergence_threshold = kConvergenceThresholdM;
};

struct RunResult {
  TrajectoryLog log;
  RunSummary summary;
};

// Aborted run (total disconnection or a non-finite state); the message
// carries the step index and time.
class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Advances the scenario step by step: rebuild the communication graph from
// current positions, record lambda2, compute every UAV's consensus input
// from its neighbors' previous-step accelerations (the target's from its
// schedule, exactly), integrate all agents, optionally advance the velocity
// observers, and log. Deterministic: one config, one byte-identical log.
//
// Isolated UAVs coast with zero input for the step and are logged; the run
// aborts only when every UAV is isolated at once.
RunResult run_simulation(const ScenarioConfig& cfg);

struct SweepEntry {
  double tau;
  std::optional<RunResult> result;  // empty on failure
  std::string error;                // failure description, empty on success
};

// Independent runs differing only in tau, in input order. Per-run failures
// are captured in the entry and the remaining runs still execute.
std::vector<SweepEntry> sweep_tau(const ScenarioConfig& cfg,
                                  std::span<const double> taus);

// Writes the log as CSV: header, then one row per step with columns
//   t, per UAV (x, y, v, phi, accel, turnrate, ep[, vhat]), lambda2
// Values use shortest round-trip formatting capped at 9 significant digits;
// rows are newline-terminated. I/O failures raise with the path.
void emit_csv(const TrajectoryLog& log, const std::string& path);

}  // namespace formsim::sim

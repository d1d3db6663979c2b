#include "formsim/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "formsim/analysis.hpp"

namespace formsim::sim {

namespace {

struct TargetCommand {
  vehicle::ControlInput input;       // what the target integrates
  Eigen::Vector2d acceleration;      // planar acceleration shared with UAVs
};

TargetCommand resolve_target(const ScenarioConfig& cfg,
                             const vehicle::AgentState& target_state, double t) {
  const vehicle::ControlInput raw = cfg.target.input_schedule(t);
  if (cfg.target_input_mode == TargetInputMode::kSpeedHeading) {
    const Eigen::Vector2d acc =
        vehicle::input_matrix(target_state) * Eigen::Vector2d(raw.accel, raw.turn_rate);
    return TargetCommand{raw, acc};
  }
  // Cartesian: the schedule vector is the planar acceleration itself.
  const Eigen::Vector2d acc(raw.accel, raw.turn_rate);
  const Eigen::Vector2d u =
      vehicle::input_matrix_inverse(target_state, 1e-9) * acc;
  return TargetCommand{vehicle::ControlInput{u.x(), u.y()}, acc};
}

void validate(const ScenarioConfig& cfg) {
  if (cfg.uav_count() < 1)
    throw std::invalid_argument("run_simulation: need at least one UAV");
  if (!(cfg.dt > 0.0)) throw std::invalid_argument("run_simulation: dt must be > 0");
  if (!(cfg.horizon >= cfg.dt))
    throw std::invalid_argument("run_simulation: horizon must be >= dt");
  if (cfg.formation.uav_count() != cfg.uav_count())
    throw std::invalid_argument(
        "run_simulation: formation slot count must equal UAV count");
  if (!cfg.target.input_schedule)
    throw std::invalid_argument("run_simulation: target schedule is empty");
}

RunSummary summarize(const TrajectoryLog& log, const ScenarioConfig& cfg,
                     bool connectivity_ok, double min_lambda2, int isolation_events) {
  RunSummary s;
  s.connectivity_ok = connectivity_ok;
  s.min_lambda2 = min_lambda2;
  s.isolation_events = isolation_events;

  const int n = log.uav_count;
  const size_t rows = log.rows.size();

  s.control_effort.assign(n, 0.0);
  for (size_t k = 0; k + 1 < rows; ++k)  // last row's inputs are not applied
    for (int i = 0; i < n; ++i)
      s.control_effort[i] += (std::abs(log.rows[k].uav_inputs[i].accel) +
                              std::abs(log.rows[k].uav_inputs[i].turn_rate)) *
                             cfg.dt;

  const StepRecord& last = log.rows.back();
  s.final_separation.resize(n);
  for (int i = 0; i < n; ++i)
    s.final_separation[i] =
        (last.uav_states[i].position - last.target_state.position).norm();

  // Earliest row from which every per-agent error stays below the threshold
  // through the horizon.
  size_t first_sustained = rows;
  for (size_t k = rows; k-- > 0;) {
    bool all_below = true;
    for (int i = 0; i < n; ++i)
      all_below = all_below && log.rows[k].agent_ep[i] < kConvergenceThresholdM;
    if (!all_below) break;
    first_sustained = k;
  }

  if (first_sustained < rows && connectivity_ok) {
    s.converged = true;
    s.convergence_time = log.rows[first_sustained].t;
  } else {
    s.converged = false;
    s.convergence_time = std::numeric_limits<double>::quiet_NaN();
  }
  return s;
}

}  // namespace

RunResult run_simulation(const ScenarioConfig& cfg) {
  validate(cfg);

  const int n = cfg.uav_count();
  const long steps = static_cast<long>(std::floor(cfg.horizon / cfg.dt + 1e-9));

  std::vector<vehicle::AgentState> states = cfg.uav_initial_states;
  vehicle::AgentState target_state = cfg.target.initial_state;
  std::vector<Eigen::Vector2d> published_accel(n, Eigen::Vector2d::Zero());

  std::vector<observer::ObserverState> obs;
  if (cfg.observer_enabled) {
    obs.reserve(n);
    for (const auto& s : states)
      // z is measurable, so z_hat starts exact; the unknown speed estimate
      // starts at the known lower bound.
      obs.push_back(observer::ObserverState{
          observer::transform(s, vehicle::ControlInput{0.0, 0.0}).z,
          cfg.bounds.v_min});
  }

  TrajectoryLog log;
  log.uav_count = n;
  log.observer_enabled = cfg.observer_enabled;
  log.rows.reserve(steps + 1);

  bool connectivity_ok = true;
  double min_lambda2 = std::numeric_limits<double>::infinity();
  int isolation_events = 0;

  for (long k = 0; k <= steps; ++k) {
    const double t = k * cfg.dt;

    const auto step_body = [&] {
      std::vector<Eigen::Vector2d> positions;
      positions.reserve(n + 1);
      for (const auto& s : states) positions.push_back(s.position);
      positions.push_back(target_state.position);

      const graph::WeightedAdjacency adj = graph::build_adjacency(positions, cfg.comm);
      const graph::LaplacianMatrix lap = graph::laplacian(adj);
      const double lambda2 = graph::spectral_summary(lap).fiedler_value;
      min_lambda2 = std::min(min_lambda2, lambda2);
      if (lambda2 <= cfg.connectivity_tol) connectivity_ok = false;

      const analysis::ErrorVector errs =
          analysis::formation_error(states, target_state, cfg.formation);

      const TargetCommand target_cmd = resolve_target(cfg, target_state, t);

      StepRecord row;
      row.t = t;
      row.uav_states = states;
      row.target_state = target_state;
      row.lambda2 = lambda2;
      row.ep_norm = errs.e_p.norm();
      row.agent_ep.resize(n);
      for (int i = 0; i < n; ++i)
        row.agent_ep[i] = errs.e_p.segment<2>(2 * i).norm();
      row.uav_inputs.resize(n);

      for (int i = 0; i < n; ++i) {
        std::vector<control::NeighborData> nbrs;
        for (int j = 0; j < n + 1; ++j) {
          if (j == i) continue;
          const double w = adj.weights(i, j);
          if (!(w > 0.0)) continue;
          if (j < n) {
            nbrs.push_back(control::NeighborData{
                w, states[j].position - cfg.formation.offsets[j],
                vehicle::planar_velocity(states[j]), published_accel[j]});
          } else {
            nbrs.push_back(control::NeighborData{
                w, target_state.position, vehicle::planar_velocity(target_state),
                target_cmd.acceleration});
          }
        }
        if (nbrs.empty()) {
          row.isolated.push_back(i);
          row.uav_inputs[i] = vehicle::ControlInput{0.0, 0.0};
        } else {
          row.uav_inputs[i] = control::consensus_control(
              states[i], cfg.formation.offsets[i], nbrs, cfg.controller);
        }
      }
      isolation_events += static_cast<int>(row.isolated.size());

      if (static_cast<int>(row.isolated.size()) == n) {
        std::ostringstream msg;
        msg << "run_simulation: all UAVs isolated at step " << k << " (t = " << t
            << " s), network disconnected";
        throw SimulationError(msg.str());
      }

      if (cfg.observer_enabled)
        for (int i = 0; i < n; ++i) row.v_hat.push_back(obs[i].v_hat);

      log.rows.push_back(std::move(row));
      if (k == steps) return;  // final row is logged, not advanced

      const StepRecord& cur = log.rows.back();
      std::vector<vehicle::AgentState> next(n);
      for (int i = 0; i < n; ++i) {
        next[i] = vehicle::step(states[i], cur.uav_inputs[i], cfg.dt, cfg.bounds);
        published_accel[i] =
            vehicle::input_matrix(states[i]) *
            Eigen::Vector2d(cur.uav_inputs[i].accel, cur.uav_inputs[i].turn_rate);
      }
      // The target follows its schedule unclamped.
      const vehicle::AgentState next_target =
          vehicle::step(target_state, target_cmd.input, cfg.dt);

      if (cfg.observer_enabled) {
        for (int i = 0; i < n; ++i) {
          obs[i] = observer::observer_step(obs[i], states[i], cur.uav_inputs[i],
                                           cfg.dt);
          // The speed estimate mirrors the vehicle's post-step saturation;
          // without this the estimate winds up whenever the true speed clamps
          // while large commanded accelerations persist.
          obs[i].v_hat = std::clamp(obs[i].v_hat, cfg.bounds.v_min, cfg.bounds.v_max);
        }
      }

      states = std::move(next);
      target_state = next_target;
    };

    try {
      step_body();
    } catch (const SimulationError&) {
      throw;
    } catch (const std::exception& e) {
      std::ostringstream msg;
      msg << "run_simulation: aborted at step " << k << " (t = " << t
          << " s): " << e.what();
      throw SimulationError(msg.str());
    }
  }

  RunResult out;
  out.summary = summarize(log, cfg, connectivity_ok, min_lambda2, isolation_events);
  out.log = std::move(log);
  return out;
}

std::vector<SweepEntry> sweep_tau(const ScenarioConfig& cfg,
                                  std::span<const double> taus) {
  std::vector<SweepEntry> entries;
  entries.reserve(taus.size());
  for (double tau : taus) {
    SweepEntry entry;
    entry.tau = tau;
    try {
      ScenarioConfig variant = cfg;
      variant.controller =
          control::ControllerParams(cfg.controller.k1, cfg.controller.k2, tau);
      entry.result = run_simulation(variant);
    } catch (const std::exception& e) {
      entry.error = e.what();
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

namespace {

void append_number(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  out += buf;
}

}  // namespace

void emit_csv(const TrajectoryLog& log, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("emit_csv: cannot open '" + path + "'");

  std::string line = "t";
  for (int i = 0; i < log.uav_count; ++i) {
    const std::string p = "uav" + std::to_string(i + 1) + "_";
    for (const char* col : {"x", "y", "v", "phi", "accel", "turnrate", "ep"})
      line += "," + p + col;
    if (log.observer_enabled) line += "," + p + "vhat";
  }
  line += ",lambda2\n";
  out << line;

  for (const StepRecord& row : log.rows) {
    line.clear();
    append_number(line, row.t);
    for (int i = 0; i < log.uav_count; ++i) {
      const vehicle::AgentState& s = row.uav_states[i];
      const vehicle::ControlInput& u = row.uav_inputs[i];
      for (double v : {s.position.x(), s.position.y(), s.speed, s.heading, u.accel,
                       u.turn_rate, row.agent_ep[i]}) {
        line += ',';
        append_number(line, v);
      }
      if (log.observer_enabled) {
        line += ',';
        append_number(line, row.v_hat[i]);
      }
    }
    line += ',';
    append_number(line, row.lambda2);
    line += '\n';
    out << line;
  }
  out.flush();
  if (!out) throw std::runtime_error("emit_csv: write failed for '" + path + "'");
}

}  // namespace formsim::sim

#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "formsim/controller.hpp"
#include "formsim/graph.hpp"
#include "formsim/vehicle.hpp"

namespace formsim::sim {

// How the two-component target input vector is interpreted:
//  - kSpeedHeading: [dv/dt, dphi/dt], the default reading
//  - kCartesian: a planar acceleration, converted through the input matrix
enum class TargetInputMode { kSpeedHeading, kCartesian };

// Full experiment definition. Constructed validated; treat fields as
// immutable and replace whole sub-objects when deriving variants (e.g.
// assign a fresh ControllerParams to change tau).
struct ScenarioConfig {
  std::vector<vehicle::AgentState> uav_initial_states;
  vehicle::TargetProfile target;
  control::FormationSpec formation;
  graph::CommModel comm;
  control::ControllerParams controller;
  vehicle::VelocityBounds bounds;
  double dt;
  double horizon;
  bool observer_enabled;
  double connectivity_tol;
  TargetInputMode target_input_mode;

  int uav_count() const { return static_cast<int>(uav_initial_states.size()); }
};

// Parse or validation failure; the message carries the source name, line
// number where applicable, and the offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reads a key = value config file with [section] headers (grammar in the
// README). Absent optional fields default to dt = 0.05, horizon = 100,
// observer off, connectivity_tol = 1e-6, target_input_mode speed-heading,
// bounds 5/25, target at the origin heading east at 10 m/s, and evenly
// spaced formation slots. The target follows the built-in sinusoidal
// schedule; other schedules are available programmatically.
ScenarioConfig load_config(const std::string& path);

// Same grammar from an already-open stream; source_name is used in errors.
ScenarioConfig parse_config(std::istream& in, const std::string& source_name);

}  // namespace formsim::sim

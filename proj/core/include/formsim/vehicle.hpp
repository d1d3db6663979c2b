#pragma once

#include <Eigen/Dense>

#include <functional>

namespace formsim::vehicle {

// Planar unicycle state: position [m], forward speed [m/s], heading [rad].
struct AgentState {
  Eigen::Vector2d position;
  double speed;
  double heading;
};

// Commanded linear acceleration [m/s^2] and turn rate [rad/s].
struct ControlInput {
  double accel;
  double turn_rate;
};

struct VelocityBounds {
  double v_min;
  double v_max;

  VelocityBounds(double lo, double hi);
};

// Mobile target: initial state plus an open-loop input schedule defined
// for all t >= 0.
struct TargetProfile {
  AgentState initial_state;
  std::function<ControlInput(double)> input_schedule;
};

struct StateDerivative {
  Eigen::Vector2d position_dot;
  double speed_dot;
  double heading_dot;
};

// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

// v * [cos phi, sin phi].
Eigen::Vector2d planar_velocity(const AgentState& s);

// Input matrix M mapping [v_dot, phi_dot] to the planar acceleration;
// det(M) = v.
Eigen::Matrix2d input_matrix(const AgentState& s);

// Closed-form inverse of the input matrix. Speeds below v_min are rejected
// to stay clear of the v = 0 singularity.
Eigen::Matrix2d input_matrix_inverse(const AgentState& s, double v_min);

StateDerivative state_derivative(const AgentState& s, const ControlInput& u);

// One classical RK4 step of the unicycle kinematics with the input held
// constant over dt. Heading is wrapped afterwards; speed is not clamped.
AgentState step(const AgentState& s, const ControlInput& u, double dt);

// Same, then clamps the resulting speed into [v_min, v_max].
AgentState step(const AgentState& s, const ControlInput& u, double dt,
                const VelocityBounds& bounds);

// Open-loop target schedule: zero linear acceleration and turn rate
// 0.5*sin(2*pi*t/50), i.e. a constant-speed sinusoidal weave.
ControlInput target_input(double t);

}  // namespace formsim::vehicle

#include "formsim/vehicle.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace formsim::vehicle {

VelocityBounds::VelocityBounds(double lo, double hi) : v_min(lo), v_max(hi) {
  if (!(0.0 < v_min && v_min < v_max))
    throw std::domain_error("VelocityBounds: need 0 < v_min < v_max");
}

double wrap_angle(double a) {
  double r = std::remainder(a, 2.0 * std::numbers::pi);  // [-pi, pi]
  if (r <= -std::numbers::pi) r += 2.0 * std::numbers::pi;
  return r;
}

Eigen::Vector2d planar_velocity(const AgentState& s) {
  return s.speed * Eigen::Vector2d(std::cos(s.heading), std::sin(s.heading));
}

Eigen::Matrix2d input_matrix(const AgentState& s) {
  const double c = std::cos(s.heading);
  const double sn = std::sin(s.heading);
  Eigen::Matrix2d m;
  m << c, -s.speed * sn, sn, s.speed * c;
  return m;
}

Eigen::Matrix2d input_matrix_inverse(const AgentState& s, double v_min) {
  if (!(v_min > 0.0))
    throw std::domain_error("input_matrix_inverse: v_min must be > 0");
  if (!(s.speed >= v_min))
    throw std::domain_error("input_matrix_inverse: speed below v_min (singularity guard)");
  const double c = std::cos(s.heading);
  const double sn = std::sin(s.heading);
  Eigen::Matrix2d m;
  m << c, sn, -sn / s.speed, c / s.speed;
  return m;
}

StateDerivative state_derivative(const AgentState& s, const ControlInput& u) {
  return StateDerivative{planar_velocity(s), u.accel, u.turn_rate};
}

namespace {

AgentState advance(const AgentState& s, const StateDerivative& d, double h) {
  return AgentState{s.position + h * d.position_dot, s.speed + h * d.speed_dot,
                    s.heading + h * d.heading_dot};
}

}  // namespace

AgentState step(const AgentState& s, const ControlInput& u, double dt) {
  if (!(dt > 0.0)) throw std::domain_error("vehicle::step: dt must be > 0");
  const StateDerivative k1 = state_derivative(s, u);
  const StateDerivative k2 = state_derivative(advance(s, k1, 0.5 * dt), u);
  const StateDerivative k3 = state_derivative(advance(s, k2, 0.5 * dt), u);
  const StateDerivative k4 = state_derivative(advance(s, k3, dt), u);

  AgentState out;
  out.position = s.position +
                 dt * ((k1.position_dot + 2.0 * k2.position_dot +
                        2.0 * k3.position_dot + k4.position_dot) /
                       6.0);
  out.speed = s.speed + dt * ((k1.speed_dot + 2.0 * k2.speed_dot +
                               2.0 * k3.speed_dot + k4.speed_dot) /
                              6.0);
  out.heading = s.heading + dt * ((k1.heading_dot + 2.0 * k2.heading_dot +
                                   2.0 * k3.heading_dot + k4.heading_dot) /
                                  6.0);
  out.heading = wrap_angle(out.heading);

  if (!out.position.allFinite() || !std::isfinite(out.speed) ||
      !std::isfinite(out.heading))
    throw std::runtime_error("vehicle::step: non-finite state after integration");
  return out;
}

AgentState step(const AgentState& s, const ControlInput& u, double dt,
                const VelocityBounds& bounds) {
  AgentState out = step(s, u, dt);
  out.speed = std::clamp(out.speed, bounds.v_min, bounds.v_max);
  return out;
}

ControlInput target_input(double t) {
  return ControlInput{0.0, 0.5 * std::sin(2.0 * std::numbers::pi * t / 50.0)};
}

}  // namespace formsim::vehicle

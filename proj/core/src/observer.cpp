#include "formsim/observer.hpp"

#include <cmath>
#include <stdexcept>

#include "formsim/controller.hpp"

namespace formsim::observer {

using control::spow;

Measurement transform(const vehicle::AgentState& s, const vehicle::ControlInput& u) {
  const double c = std::cos(s.heading);
  const double sn = std::sin(s.heading);
  const double z = s.position.x() * c + s.position.y() * sn;
  const double w = (s.position.y() * c - s.position.x() * sn) * u.turn_rate;
  return Measurement{z, w};
}

namespace {

struct JointState {
  vehicle::AgentState agent;
  ObserverState obs;
};

struct JointDeriv {
  vehicle::StateDerivative agent;
  double z_hat_dot;
  double v_hat_dot;
};

JointDeriv joint_derivative(const JointState& s, const vehicle::ControlInput& u,
                            const ObserverGains& g) {
  const Measurement m = transform(s.agent, u);
  const double e = m.z - s.obs.z_hat;
  return JointDeriv{vehicle::state_derivative(s.agent, u),
                    s.obs.v_hat + m.w + spow(e, g.z_power),
                    u.accel + spow(e, g.v_power)};
}

JointState advance(const JointState& s, const JointDeriv& d, double h) {
  return JointState{
      vehicle::AgentState{s.agent.position + h * d.agent.position_dot,
                          s.agent.speed + h * d.agent.speed_dot,
                          s.agent.heading + h * d.agent.heading_dot},
      ObserverState{s.obs.z_hat + h * d.z_hat_dot, s.obs.v_hat + h * d.v_hat_dot}};
}

}  // namespace

ObserverState observer_step(const ObserverState& obs,
                            const vehicle::AgentState& measured,
                            const vehicle::ControlInput& input, double dt,
                            const ObserverGains& gains) {
  if (!(dt > 0.0)) throw std::domain_error("observer_step: dt must be > 0");

  const JointState s0{measured, obs};
  const JointDeriv k1 = joint_derivative(s0, input, gains);
  const JointDeriv k2 = joint_derivative(advance(s0, k1, 0.5 * dt), input, gains);
  const JointDeriv k3 = joint_derivative(advance(s0, k2, 0.5 * dt), input, gains);
  const JointDeriv k4 = joint_derivative(advance(s0, k3, dt), input, gains);

  ObserverState out;
  out.z_hat = obs.z_hat + dt * ((k1.z_hat_dot + 2.0 * k2.z_hat_dot +
                                 2.0 * k3.z_hat_dot + k4.z_hat_dot) /
                                6.0);
  out.v_hat = obs.v_hat + dt * ((k1.v_hat_dot + 2.0 * k2.v_hat_dot +
                                 2.0 * k3.v_hat_dot + k4.v_hat_dot) /
                                6.0);
  if (!std::isfinite(out.z_hat) || !std::isfinite(out.v_hat))
    throw std::runtime_error("observer_step: non-finite observer state");
  return out;
}

namespace {

using DemoDeriv = DemoState;  // same four slots, interpreted as rates

DemoDeriv demo_derivative(const DemoState& d, bool nonlinear) {
  const double e = d.y1 - d.y1_hat;
  DemoDeriv out;
  out.y1 = d.y2;
  out.y2 = -d.y1 - d.y2;
  if (nonlinear) {
    out.y1_hat = d.y2_hat + spow(e, 3.0 / 5.0);
    out.y2_hat = -d.y1_hat - d.y2_hat + spow(e, 1.0 / 5.0);
  } else {
    out.y1_hat = d.y2_hat + e;
    out.y2_hat = -d.y1_hat - d.y2_hat + e;
  }
  return out;
}

DemoState demo_advance(const DemoState& s, const DemoDeriv& d, double h) {
  return DemoState{s.y1 + h * d.y1, s.y2 + h * d.y2, s.y1_hat + h * d.y1_hat,
                   s.y2_hat + h * d.y2_hat};
}

DemoState demo_rk4(const DemoState& s, double dt, bool nonlinear) {
  if (!(dt > 0.0)) throw std::domain_error("demo step: dt must be > 0");
  const DemoDeriv k1 = demo_derivative(s, nonlinear);
  const DemoDeriv k2 = demo_derivative(demo_advance(s, k1, 0.5 * dt), nonlinear);
  const DemoDeriv k3 = demo_derivative(demo_advance(s, k2, 0.5 * dt), nonlinear);
  const DemoDeriv k4 = demo_derivative(demo_advance(s, k3, dt), nonlinear);
  return DemoState{
      s.y1 + dt * ((k1.y1 + 2.0 * k2.y1 + 2.0 * k3.y1 + k4.y1) / 6.0),
      s.y2 + dt * ((k1.y2 + 2.0 * k2.y2 + 2.0 * k3.y2 + k4.y2) / 6.0),
      s.y1_hat +
          dt * ((k1.y1_hat + 2.0 * k2.y1_hat + 2.0 * k3.y1_hat + k4.y1_hat) / 6.0),
      s.y2_hat +
          dt * ((k1.y2_hat + 2.0 * k2.y2_hat + 2.0 * k3.y2_hat + k4.y2_hat) / 6.0)};
}

}  // namespace

DemoState demo_linear_step(const DemoState& d, double dt) {
  return demo_rk4(d, dt, /*nonlinear=*/false);
}

DemoState demo_nonlinear_step(const DemoState& d, double dt) {
  return demo_rk4(d, dt, /*nonlinear=*/true);
}

}  // namespace formsim::observer

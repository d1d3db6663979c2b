#pragma once

#include "formsim/vehicle.hpp"

namespace formsim::observer {

// Velocity-observer state: estimate of the transformed output z and of the
// forward speed.
struct ObserverState {
  double z_hat;
  double v_hat;
};

// Measurable output z and rotation-induced drift w. Along the unicycle
// kinematics, d/dt z = v + w, which is what makes the speed observable
// from position and heading alone.
struct Measurement {
  double z;
  double w;
};

// Fractional correction powers on the output error (3/5 and 1/5 by
// default); kept adjustable for experimentation.
struct ObserverGains {
  double z_power = 0.6;
  double v_power = 0.2;
};

// Linear second-order demo plant with its state estimates.
struct DemoState {
  double y1;
  double y2;
  double y1_hat;
  double y2_hat;
};

// Body-frame output transform:
//   z = x cos(phi) + y sin(phi)
//   w = (y cos(phi) - x sin(phi)) * turn_rate
Measurement transform(const vehicle::AgentState& s, const vehicle::ControlInput& u);

// Advances the observer one RK4 step with output error e = z - z_hat:
//   d z_hat = v_hat + w + spow(e, z_power)
//   d v_hat = accel + spow(e, v_power)
// The measured vehicle state is propagated through matching RK4 stages so
// z and w stay time-consistent within the step; at e = 0 with a correct
// speed estimate the error dynamics stay at their equilibrium.
ObserverState observer_step(const ObserverState& obs,
                            const vehicle::AgentState& measured,
                            const vehicle::ControlInput& input, double dt,
                            const ObserverGains& gains = {});

// One RK4 step of the demo plant (dy1 = y2, dy2 = -y1 - y2) with a linear
// output-error observer attached.
DemoState demo_linear_step(const DemoState& d, double dt);

// Same plant with fractional-power corrections spow(e, 3/5), spow(e, 1/5).
DemoState demo_nonlinear_step(const DemoState& d, double dt);

}  // namespace formsim::observer

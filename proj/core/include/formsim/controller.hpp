#pragma once

#include <Eigen/Dense>

#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "formsim/vehicle.hpp"

namespace formsim::control {

// Gains and the fractional parameter tau with its derived powers
// alpha1 = 1 + 2*tau and alpha2 = (1 + 2*tau)/(1 + tau). tau = 0 recovers
// the plain proportional-derivative consensus law.
struct ControllerParams {
  double k1;
  double k2;
  double tau;
  double alpha1;
  double alpha2;

  ControllerParams(double k1, double k2, double tau);
};

// Target-centric formation slots P_i = delta * [cos psi_i, sin psi_i].
struct FormationSpec {
  double delta;
  std::vector<double> psi;
  std::vector<Eigen::Vector2d> offsets;

  FormationSpec(double delta, std::vector<double> psi);

  // Evenly spaced slots psi_i = 2*pi*i/n, i = 1..n.
  static FormationSpec regular_polygon(int uav_count, double delta);

  int uav_count() const { return static_cast<int>(psi.size()); }
};

// One neighbor's shared data as seen by the controlling agent. The target
// carries a zero formation offset, so its hat_position is its position.
struct NeighborData {
  double weight;                 // a_ij > 0
  Eigen::Vector2d hat_position;  // p_j - P_j
  Eigen::Vector2d velocity;      // dp_j/dt
  Eigen::Vector2d acceleration;  // d2p_j/dt2 as published by j
};

// Raised when an agent has no neighbors; the caller decides the fallback.
class IsolationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Signed power: sign(x)*|x|^alpha, elementwise for vectors. Odd in x, and
// the identity map at alpha = 1.
double spow(double x, double alpha);
Eigen::Vector2d spow(const Eigen::Vector2d& x, double alpha);

// (alpha1, alpha2) derived from tau; requires tau > -1/2.
std::pair<double, double> derived_powers(double tau);

// Two-agent law: u_i = M_i^{-1} [ pddot_j - k1*spow(phat_i - phat_j, alpha1)
//                                        - k2*spow(pdot_i - pdot_j, alpha2) ].
vehicle::ControlInput pairwise_control(const vehicle::AgentState& state_i,
                                       const Eigen::Vector2d& own_offset,
                                       const NeighborData& neighbor,
                                       const ControllerParams& params);

// Consensus form: the same bracket per neighbor, averaged with the link
// weights before applying M_i^{-1}.
vehicle::ControlInput consensus_control(const vehicle::AgentState& state_i,
                                        const Eigen::Vector2d& own_offset,
                                        std::span<const NeighborData> neighbors,
                                        const ControllerParams& params);

}  // namespace formsim::control

#include "formsim/controller.hpp"

#include <cmath>
#include <numbers>

namespace formsim::control {

namespace {

// Speed floor for inverting M_i inside the control laws. The vehicle step
// keeps speeds at or above the configured v_min, so this only guards the
// true v = 0 singularity.
constexpr double kMinInvertibleSpeed = 1e-12;

}  // namespace

ControllerParams::ControllerParams(double k1_, double k2_, double tau_)
    : k1(k1_), k2(k2_), tau(tau_) {
  const auto [a1, a2] = derived_powers(tau);
  alpha1 = a1;
  alpha2 = a2;
}

FormationSpec::FormationSpec(double delta_, std::vector<double> psi_)
    : delta(delta_), psi(std::move(psi_)) {
  if (!(delta > 0.0)) throw std::domain_error("FormationSpec: delta must be > 0");
  if (psi.empty()) throw std::domain_error("FormationSpec: psi must be nonempty");
  offsets.reserve(psi.size());
  for (double a : psi)
    offsets.emplace_back(delta * std::cos(a), delta * std::sin(a));
}

FormationSpec FormationSpec::regular_polygon(int uav_count, double delta) {
  if (uav_count < 1)
    throw std::domain_error("FormationSpec: uav_count must be >= 1");
  std::vector<double> psi(uav_count);
  for (int i = 0; i < uav_count; ++i)
    psi[i] = 2.0 * std::numbers::pi * (i + 1) / uav_count;
  return FormationSpec(delta, std::move(psi));
}

double spow(double x, double alpha) {
  return std::copysign(std::pow(std::abs(x), alpha), x);
}

Eigen::Vector2d spow(const Eigen::Vector2d& x, double alpha) {
  return Eigen::Vector2d(spow(x.x(), alpha), spow(x.y(), alpha));
}

std::pair<double, double> derived_powers(double tau) {
  if (!(tau > -0.5)) throw std::domain_error("derived_powers: tau must be > -1/2");
  const double a1 = 1.0 + 2.0 * tau;
  return {a1, a1 / (1.0 + tau)};
}

namespace {

Eigen::Vector2d bracket_term(const Eigen::Vector2d& hat_i,
                             const Eigen::Vector2d& vel_i,
                             const NeighborData& nb,
                             const ControllerParams& p) {
  return nb.acceleration - p.k1 * spow(hat_i - nb.hat_position, p.alpha1) -
         p.k2 * spow(vel_i - nb.velocity, p.alpha2);
}

vehicle::ControlInput apply_inverse(const vehicle::AgentState& state_i,
                                    const Eigen::Vector2d& m_times_u) {
  const Eigen::Vector2d u =
      vehicle::input_matrix_inverse(state_i, kMinInvertibleSpeed) * m_times_u;
  return vehicle::ControlInput{u.x(), u.y()};
}

}  // namespace

vehicle::ControlInput pairwise_control(const vehicle::AgentState& state_i,
                                       const Eigen::Vector2d& own_offset,
                                       const NeighborData& neighbor,
                                       const ControllerParams& params) {
  const Eigen::Vector2d hat_i = state_i.position - own_offset;
  const Eigen::Vector2d vel_i = vehicle::planar_velocity(state_i);
  return apply_inverse(state_i, bracket_term(hat_i, vel_i, neighbor, params));
}

vehicle::ControlInput consensus_control(const vehicle::AgentState& state_i,
                                        const Eigen::Vector2d& own_offset,
                                        std::span<const NeighborData> neighbors,
                                        const ControllerParams& params) {
  const Eigen::Vector2d hat_i = state_i.position - own_offset;
  const Eigen::Vector2d vel_i = vehicle::planar_velocity(state_i);

  double weight_sum = 0.0;
  Eigen::Vector2d accum = Eigen::Vector2d::Zero();
  for (const NeighborData& nb : neighbors) {
    weight_sum += nb.weight;
    accum += nb.weight * bracket_term(hat_i, vel_i, nb, params);
  }
  if (!(weight_sum > 0.0))
    throw IsolationError("consensus_control: agent has no neighbors");
  return apply_inverse(state_i, Eigen::Vector2d(accum / weight_sum));
}

}  // namespace formsim::control

#include "formsim/analysis.hpp"

#include <cmath>
#include <stdexcept>

namespace formsim::analysis {

using control::spow;

SpecialSolutionParams::SpecialSolutionParams(double x1_0_, double tau_, double k1_,
                                             double k2_)
    : x1_0(x1_0_), tau(tau_), k1(k1_), k2(k2_) {
  if (!(x1_0 > 0.0))
    throw std::domain_error("SpecialSolutionParams: x1_0 must be > 0");
  if (!(tau > -0.5 && tau < 0.0))
    throw std::domain_error("SpecialSolutionParams: tau must be in (-1/2, 0)");
  if (std::abs((1.0 + tau) - (-k1 + k2)) > 1e-9)
    throw std::domain_error(
        "SpecialSolutionParams: gains must satisfy 1 + tau = -k1 + k2");
}

std::pair<double, double> special_solution(const SpecialSolutionParams& p, double t) {
  if (!(t >= 0.0)) throw std::domain_error("special_solution: t must be >= 0");
  const double base = std::pow(p.x1_0, -p.tau) + p.tau * t;
  if (base < 0.0)
    throw std::domain_error("special_solution: t beyond touchdown time");
  const double x1 = std::pow(base, -1.0 / p.tau);
  const double x2 = -std::pow(base, -(1.0 + p.tau) / p.tau);
  return {x1, x2};
}

double special_initial_velocity(double x1_0, double tau) {
  if (!(x1_0 > 0.0))
    throw std::domain_error("special_initial_velocity: x1_0 must be > 0");
  return -std::pow(x1_0, 1.0 + tau);
}

double gain_relation_k2(double tau, double k1) {
  // (-1)^{-(1+2tau)/(1+tau)} evaluates to -1 for odd-ratio exponents, so
  // 1 + tau = -k1 + k2.
  return 1.0 + tau + k1;
}

double touchdown_time(double x1_0, double tau) {
  if (!(x1_0 > 0.0)) throw std::domain_error("touchdown_time: x1_0 must be > 0");
  if (!(tau < 0.0))
    throw std::domain_error("touchdown_time: finite touchdown requires tau < 0");
  return -1.0 / (tau * std::pow(x1_0, tau));
}

double residual_f(const Eigen::Vector2d& p_i, const Eigen::Vector2d& p_j,
                  const Eigen::Vector2d& p_t, double alpha) {
  const Eigen::Vector2d num =
      spow(p_i - p_j, alpha) - spow(p_i - p_t, alpha) + spow(p_j - p_t, alpha);
  const double den = (spow(p_i - p_t, alpha) + spow(p_j - p_t, alpha)).norm();
  if (den == 0.0)
    throw std::domain_error("residual_f: degenerate configuration (zero denominator)");
  return num.norm() / den;
}

double residual_fbar(double r, double alpha) {
  if (!(r > 0.0)) throw std::domain_error("residual_fbar: r must be > 0");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::domain_error("residual_fbar: alpha must be in (0, 1)");
  if (r == 1.0) return 0.0;
  const double ra = std::pow(r, alpha);
  if (r < 1.0) return (std::pow(1.0 - r, alpha) - (1.0 - ra)) / (1.0 + ra);
  return (std::pow(r - 1.0, alpha) - (ra - 1.0)) / (1.0 + ra);
}

double alpha_for_epsilon(double epsilon) {
  if (!(epsilon > 0.0))
    throw std::domain_error("alpha_for_epsilon: epsilon must be > 0");
  return 1.0 - std::log2(epsilon + 1.0);
}

bool is_odd_ratio(double m, int max_denominator) {
  if (!std::isfinite(m)) return false;
  for (int den = 1; den <= max_denominator; den += 2) {
    const double scaled = m * den;
    const long long num = std::llround(scaled);
    if (num % 2 == 0) continue;
    if (std::abs(m - static_cast<double>(num) / den) <= 1e-9 * std::max(1.0, std::abs(m)))
      return true;
  }
  return false;
}

bool odd_power_inequalities_hold(double a, double b, double m) {
  if (!(m > 1.0) || !is_odd_ratio(m))
    throw std::domain_error(
        "odd_power_inequalities_hold: m must be > 1 and an odd integer or ratio of odd integers");
  const double scale = std::pow(2.0, m - 1.0);
  const double lhs_sum = std::pow(std::abs(a + b), m);
  const double rhs_sum = scale * std::abs(spow(a, m) + spow(b, m));
  const double lhs_diff = std::pow(std::abs(a - b), m);
  const double rhs_diff = scale * std::abs(spow(a, m) - spow(b, m));
  constexpr double kSlack = 1e-12;
  return lhs_sum <= rhs_sum * (1.0 + kSlack) + kSlack &&
         lhs_diff <= rhs_diff * (1.0 + kSlack) + kSlack;
}

SplitLaplacian split_laplacian(const graph::LaplacianMatrix& L) {
  const int order = L.order();
  if (order < 2) throw std::domain_error("split_laplacian: order >= 2 required");
  const int n = order - 1;

  SplitLaplacian out;
  out.ln_plus_bn = L.entries.topLeftCorner(n, n);
  out.b_n = -L.entries.topRightCorner(n, 1);
  out.target_degree = L.entries(n, n);

  // (L_n + B_n) * 1 = b_n holds exactly when the input rows sum to zero.
  const Eigen::VectorXd row_check =
      out.ln_plus_bn * Eigen::VectorXd::Ones(n) - out.b_n;
  if (row_check.cwiseAbs().maxCoeff() > 1e-12 * order)
    throw std::runtime_error("split_laplacian: reconstruction mismatch, input is "
                             "not a Laplacian");
  return out;
}

InverseNormReport residual_norm_bound_check(const graph::LaplacianMatrix& L) {
  const SplitLaplacian split = split_laplacian(L);
  const auto [vals, vecs] = graph::symmetric_eigendecomposition(split.ln_plus_bn);
  const double min_eig = vals(0);
  if (!(min_eig > 1e-12))
    throw std::runtime_error(
        "residual_norm_bound_check: L_n + B_n is singular (network disconnected)");
  const double inverse_norm = 1.0 / min_eig;
  return InverseNormReport{inverse_norm, inverse_norm <= 1.0 + 1e-9};
}

ErrorVector formation_error(std::span<const vehicle::AgentState> uavs,
                            const vehicle::AgentState& target,
                            const control::FormationSpec& formation) {
  const int n = static_cast<int>(uavs.size());
  if (formation.uav_count() != n)
    throw std::invalid_argument("formation_error: offsets count must equal UAV count");

  ErrorVector out;
  out.e_p.resize(2 * n);
  out.e_v.resize(2 * n);
  const Eigen::Vector2d target_vel = vehicle::planar_velocity(target);
  for (int i = 0; i < n; ++i) {
    out.e_p.segment<2>(2 * i) =
        (uavs[i].position - formation.offsets[i]) - target.position;
    out.e_v.segment<2>(2 * i) = vehicle::planar_velocity(uavs[i]) - target_vel;
  }
  return out;
}

double lyapunov_V(const Eigen::Vector2d& x1, const Eigen::Vector2d& x2,
                  const control::ControllerParams& params) {
  if (!(params.alpha1 > 0.0))
    throw std::domain_error("lyapunov_V: alpha1 must be > 0");
  Eigen::Vector2d q;
  for (int k = 0; k < 2; ++k)
    q(k) = 0.5 * x2(k) * x2(k) +
           (params.k1 / (params.alpha1 + 1.0)) *
               std::pow(std::abs(x1(k)), params.alpha1 + 1.0);
  return 0.5 * q.squaredNorm();
}

namespace {

struct RelState {
  Eigen::Vector2d x1;
  Eigen::Vector2d x2;
};

RelState rel_derivative(const RelState& s, const control::ControllerParams& p) {
  return RelState{s.x2,
                  -p.k1 * spow(s.x1, p.alpha1) - p.k2 * spow(s.x2, p.alpha2)};
}

RelState rel_advance(const RelState& s, const RelState& d, double h) {
  return RelState{s.x1 + h * d.x1, s.x2 + h * d.x2};
}

}  // namespace

RelativeTrajectory simulate_relative_dynamics(const Eigen::Vector2d& x1_0,
                                              const Eigen::Vector2d& x2_0,
                                              const control::ControllerParams& params,
                                              double dt, int steps) {
  if (!(dt > 0.0))
    throw std::domain_error("simulate_relative_dynamics: dt must be > 0");
  if (steps < 0)
    throw std::domain_error("simulate_relative_dynamics: steps must be >= 0");

  RelativeTrajectory traj;
  traj.t.reserve(steps + 1);
  traj.x1.reserve(steps + 1);
  traj.x2.reserve(steps + 1);

  RelState s{x1_0, x2_0};
  for (int k = 0; k <= steps; ++k) {
    traj.t.push_back(k * dt);
    traj.x1.push_back(s.x1);
    traj.x2.push_back(s.x2);
    if (k == steps) break;
    const RelState k1 = rel_derivative(s, params);
    const RelState k2 = rel_derivative(rel_advance(s, k1, 0.5 * dt), params);
    const RelState k3 = rel_derivative(rel_advance(s, k2, 0.5 * dt), params);
    const RelState k4 = rel_derivative(rel_advance(s, k3, dt), params);
    s.x1 += dt * ((k1.x1 + 2.0 * k2.x1 + 2.0 * k3.x1 + k4.x1) / 6.0);
    s.x2 += dt * ((k1.x2 + 2.0 * k2.x2 + 2.0 * k3.x2 + k4.x2) / 6.0);
    if (!s.x1.allFinite() || !s.x2.allFinite())
      throw std::runtime_error("simulate_relative_dynamics: non-finite state");
  }
  return traj;
}

}  // namespace formsim::analysis

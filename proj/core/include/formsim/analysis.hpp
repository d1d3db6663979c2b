#pragma once

#include <Eigen/Dense>

#include <span>
#include <utility>
#include <vector>

#include "formsim/controller.hpp"
#include "formsim/graph.hpp"
#include "formsim/vehicle.hpp"

namespace formsim::analysis {

// Parameters of the closed-form solution of the signed-power double
// integrator. Valid for tau in (-1/2, 0) with x1_0 > 0 and gains tied by
// 1 + tau = -k1 + k2 (the (-1)^exponent in the gain relation evaluates to
// -1 for odd-ratio exponents).
struct SpecialSolutionParams {
  double x1_0;
  double tau;
  double k1;
  double k2;

  SpecialSolutionParams(double x1_0, double tau, double k1, double k2);
};

// Stacked relative position and velocity errors for all UAVs (2n each).
struct ErrorVector {
  Eigen::VectorXd e_p;
  Eigen::VectorXd e_v;
};

// Partition of an (n+1)-agent Laplacian: the leading UAV block L_n + B_n,
// the target coupling vector b_n, and the target degree. Satisfies
// (L_n + B_n) * 1 = b_n.
struct SplitLaplacian {
  Eigen::MatrixXd ln_plus_bn;
  Eigen::VectorXd b_n;
  double target_degree;
};

// Spectral norm of (L_n + B_n)^{-1} plus whether it meets the unit bound
// that holds for the complete unit-weight graph.
struct InverseNormReport {
  double inverse_norm;
  bool within_unit_bound;  // inverse_norm <= 1 + 1e-9
};

// RK4 trajectory of the relative dynamics
//   dx1 = x2,  dx2 = -k1*spow(x1, alpha1) - k2*spow(x2, alpha2).
struct RelativeTrajectory {
  std::vector<double> t;
  std::vector<Eigen::Vector2d> x1;
  std::vector<Eigen::Vector2d> x2;
};

// Closed form x1(t) = (x1_0^{-tau} + tau*t)^{-1/tau},
//             x2(t) = -(x1_0^{-tau} + tau*t)^{-(1+tau)/tau}.
// Defined on [0, touchdown]; refuses to extrapolate beyond touchdown.
std::pair<double, double> special_solution(const SpecialSolutionParams& p, double t);

// x2(0) = -x1_0^{1+tau}, the initial velocity the closed form requires.
double special_initial_velocity(double x1_0, double tau);

// Gain satisfying 1 + tau = -k1 + k2, i.e. k2 = 1 + tau + k1.
double gain_relation_k2(double tau, double k1);

// Instant -1/(tau * x1_0^tau) at which both closed-form states reach zero;
// finite only for tau < 0.
double touchdown_time(double x1_0, double tau);

// Normalized gap between the signed power of a difference and the
// difference of signed powers:
//   || spow(pi-pj) - spow(pi-pt) + spow(pj-pt) || /
//   || spow(pi-pt) + spow(pj-pt) ||   (powers alpha, elementwise).
// Zero at alpha = 1; errors on an exactly vanishing denominator.
double residual_f(const Eigen::Vector2d& p_i, const Eigen::Vector2d& p_j,
                  const Eigen::Vector2d& p_t, double alpha);

// One-dimensional residual in the distance ratio r > 0, alpha in (0, 1):
//   ((1-r)^a - (1 - r^a)) / (1 + r^a)   for r < 1
//   0                                   for r = 1
//   ((r-1)^a - (r^a - 1)) / (1 + r^a)   for r > 1
// Bounded by 2^{1-alpha} - 1.
double residual_fbar(double r, double alpha);

// alpha = 1 - log2(epsilon + 1): the power for which the residual bound
// equals epsilon.
double alpha_for_epsilon(double epsilon);

// True when m is, within 1e-9, a ratio of odd integers with denominator up
// to max_denominator.
bool is_odd_ratio(double m, int max_denominator = 99);

// Checks |a+b|^m <= 2^{m-1} |a^m + b^m| and |a-b|^m <= 2^{m-1} |a^m - b^m|
// with x^m = spow(x, m); m must be > 1 and an odd integer or odd ratio.
// Evaluated with a 1e-12 relative slack for pow roundoff.
bool odd_power_inequalities_hold(double a, double b, double m);

// Splits a Laplacian whose last index is the target; errors when the
// block identity (L_n + B_n) * 1 = b_n fails beyond 1e-12 per row.
SplitLaplacian split_laplacian(const graph::LaplacianMatrix& L);

// Errors when L_n + B_n is numerically singular (disconnected network).
InverseNormReport residual_norm_bound_check(const graph::LaplacianMatrix& L);

// e_p stacks (p_i - P_i) - p_t, e_v stacks pdot_i - pdot_t.
ErrorVector formation_error(std::span<const vehicle::AgentState> uavs,
                            const vehicle::AgentState& target,
                            const control::FormationSpec& formation);

// V = 1/2 Q^T Q with Q_k = 1/2 x2_k^2 + (k1/(alpha1+1)) |x1_k|^{alpha1+1};
// nonincreasing along the relative dynamics when k1, k2 > 0.
double lyapunov_V(const Eigen::Vector2d& x1, const Eigen::Vector2d& x2,
                  const control::ControllerParams& params);

RelativeTrajectory simulate_relative_dynamics(const Eigen::Vector2d& x1_0,
                                              const Eigen::Vector2d& x2_0,
                                              const control::ControllerParams& params,
                                              double dt, int steps);

}  // namespace formsim::analysis

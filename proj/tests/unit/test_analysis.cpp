#include "formsim/analysis.hpp"

#include <cmath>
#include <doctest.h>
#include <vector>

#include "test_support.hpp"

using namespace formsim::analysis;
using formsim::control::ControllerParams;
using formsim::control::FormationSpec;
using formsim::control::spow;
using formsim::graph::LaplacianMatrix;
using formsim::graph::WeightedAdjacency;
using formsim::vehicle::AgentState;
using Eigen::Vector2d;

TEST_CASE("special solution closed forms") {
  const SpecialSolutionParams p(1.0, -0.4, -0.3, 0.3);

  const auto [x1_0, x2_0] = special_solution(p, 0.0);
  CHECK(x1_0 == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(x2_0 == doctest::Approx(-1.0).epsilon(1e-15));

  // Direct evaluation: base 0.6 at t = 1, so (0.6^2.5, -0.6^1.5).
  const auto [x1_1, x2_1] = special_solution(p, 1.0);
  CHECK(x1_1 == doctest::Approx(std::pow(0.6, 2.5)).epsilon(1e-12));
  CHECK(x2_1 == doctest::Approx(-std::pow(0.6, 1.5)).epsilon(1e-12));
  CHECK(std::abs(x1_1 - 0.27886) < 1e-5);
  CHECK(std::abs(x2_1 - (-0.46476)) < 1e-5);

  const auto [x1_td, x2_td] = special_solution(p, 2.5);
  CHECK(x1_td == 0.0);
  CHECK(x2_td == 0.0);

  CHECK_THROWS_AS(special_solution(p, 2.6), std::domain_error);
  CHECK_THROWS_AS(special_solution(p, -0.1), std::domain_error);
}

TEST_CASE("SpecialSolutionParams validates its invariants") {
  CHECK_THROWS_AS(SpecialSolutionParams(0.0, -0.4, -0.3, 0.3), std::domain_error);
  CHECK_THROWS_AS(SpecialSolutionParams(1.0, 0.1, -0.3, 0.3), std::domain_error);
  CHECK_THROWS_AS(SpecialSolutionParams(1.0, -0.4, 0.0, 0.3), std::domain_error);
}

TEST_CASE("special initial velocity") {
  CHECK(special_initial_velocity(1.0, -0.4) == -1.0);
  CHECK(special_initial_velocity(4.0, 0.0) == -4.0);
  CHECK(special_initial_velocity(2.0, -0.4) ==
        doctest::Approx(-std::pow(2.0, 0.6)).epsilon(1e-15));
  CHECK(std::abs(special_initial_velocity(2.0, -0.4) - (-1.51572)) < 1e-5);
  CHECK_THROWS_AS(special_initial_velocity(-1.0, -0.4), std::domain_error);
}

TEST_CASE("gain relation") {
  CHECK(gain_relation_k2(-0.4, -0.3) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(gain_relation_k2(0.0, 0.0) == 1.0);
  CHECK(gain_relation_k2(-0.2, 0.5) == doctest::Approx(1.3).epsilon(1e-15));
}

TEST_CASE("touchdown time") {
  CHECK(touchdown_time(1.0, -0.4) == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(touchdown_time(1.0, -0.2) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(touchdown_time(16.0, -0.4) ==
        doctest::Approx(-1.0 / (-0.4 * std::pow(16.0, -0.4))).epsilon(1e-12));
  CHECK(std::abs(touchdown_time(16.0, -0.4) - 7.5786) < 1e-3);
  CHECK_THROWS_AS(touchdown_time(1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(touchdown_time(1.0, 0.3), std::domain_error);
}

TEST_CASE("residual_f vanishes for alpha = 1 and coincident agents") {
  test_support::Rng rng(501);
  for (int it = 0; it < 50; ++it) {
    const Vector2d pi(rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0));
    const Vector2d pj(rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0));
    const Vector2d pt(rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0));
    if ((spow(pi - pt, 1.0) + spow(pj - pt, 1.0)).norm() == 0.0) continue;
    CHECK(residual_f(pi, pj, pt, 1.0) < 1e-12);
    CHECK(residual_f(pi, pi, pt, 0.6) < 1e-15);
  }
}

TEST_CASE("residual_f hand-evaluated one-dimensional case") {
  // p_i = 2, p_j = 1.5, p_t = 1, alpha = 0.6:
  //   |2*0.5^0.6 - 1| / (1 + 0.5^0.6) = 0.192503...
  const double a = std::pow(0.5, 0.6);
  const double expected = std::abs(a - 1.0 + a) / (1.0 + a);
  const double f =
      residual_f(Vector2d(2.0, 0.0), Vector2d(1.5, 0.0), Vector2d(1.0, 0.0), 0.6);
  CHECK(f == doctest::Approx(expected).epsilon(1e-12));
  CHECK(std::abs(f - 0.1925032) < 1e-4);
}

TEST_CASE("residual_f rejects a vanishing denominator") {
  // Opposite sides at equal distance: spow terms cancel exactly.
  CHECK_THROWS_AS(residual_f(Vector2d(1.0, 0.0), Vector2d(-1.0, 0.0),
                             Vector2d(0.0, 0.0), 0.6),
                  std::domain_error);
}

TEST_CASE("residual_fbar closed forms and domain") {
  CHECK(residual_fbar(1.0, 0.3) == 0.0);
  CHECK(residual_fbar(1.0, 0.8) == 0.0);

  const double expected =
      (std::pow(0.5, 0.5) - (1.0 - std::pow(0.5, 0.5))) / (1.0 + std::pow(0.5, 0.5));
  CHECK(residual_fbar(0.5, 0.5) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(std::abs(residual_fbar(0.5, 0.5) - 0.24264) < 1e-4);

  CHECK(std::abs(residual_fbar(1e-12, 0.5)) < 1e-5);  // -> 0 as r -> 0+

  CHECK_THROWS_AS(residual_fbar(0.0, 0.5), std::domain_error);
  CHECK_THROWS_AS(residual_fbar(-1.0, 0.5), std::domain_error);
  CHECK_THROWS_AS(residual_fbar(0.5, 1.0), std::domain_error);
  CHECK_THROWS_AS(residual_fbar(0.5, 0.0), std::domain_error);
}

TEST_CASE("residual_fbar stays under 2^(1-alpha) - 1") {
  test_support::Rng rng(502);
  for (int it = 0; it < 10000; ++it) {
    const double r = rng.uniform(1e-6, 10.0);
    const double alpha = rng.uniform(0.05, 0.95);
    CHECK(residual_fbar(r, alpha) <= std::pow(2.0, 1.0 - alpha) - 1.0 + 1e-12);
  }
}

TEST_CASE("alpha_for_epsilon closed forms") {
  CHECK(alpha_for_epsilon(1.0) == 0.0);
  CHECK(alpha_for_epsilon(std::pow(2.0, 0.5) - 1.0) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(alpha_for_epsilon(0.1) ==
        doctest::Approx(1.0 - std::log2(1.1)).epsilon(1e-15));
  CHECK(std::abs(alpha_for_epsilon(0.1) - 0.86250) < 1e-5);
  CHECK_THROWS_AS(alpha_for_epsilon(0.0), std::domain_error);
}

TEST_CASE("chosen alpha keeps the 1-D residual under epsilon (same-side triples)") {
  test_support::Rng rng(503);
  for (double eps : {0.05, 0.1, 0.3}) {
    const double alpha = alpha_for_epsilon(eps);
    REQUIRE(alpha > 0.0);
    for (int it = 0; it < 10000; ++it) {
      const double pt = rng.uniform(-5.0, 5.0);
      const double side = rng.sign();
      const double di = rng.uniform(0.1, 5.0);
      const double ratio = rng.uniform(1e-3, 10.0);
      const Vector2d p_i(pt + side * di, 0.0);
      const Vector2d p_j(pt + side * ratio * di, 0.0);
      CHECK(residual_f(p_i, p_j, Vector2d(pt, 0.0), alpha) <= eps + 1e-12);
    }
  }
}

TEST_CASE("2-D residual behavior is measured, not asserted") {
  test_support::Rng rng(504);
  const double eps = 0.1;
  const double alpha = alpha_for_epsilon(eps);
  double max_f = 0.0;
  int over = 0;
  for (int it = 0; it < 10000; ++it) {
    const Vector2d pt(rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0));
    const Vector2d p_i = pt + Vector2d(rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0));
    const Vector2d p_j = pt + Vector2d(rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0));
    const double den =
        (spow(p_i - pt, alpha) + spow(p_j - pt, alpha)).norm();
    if (den < 1e-6) continue;
    const double f = residual_f(p_i, p_j, pt, alpha);
    CHECK(std::isfinite(f));
    max_f = std::max(max_f, f);
    if (f > eps) ++over;
  }
  MESSAGE("2-D residual with alpha for eps = 0.1: max f = ", max_f, ", samples over eps: ", over);
}

TEST_CASE("power inequalities: closed cases and domain") {
  CHECK(odd_power_inequalities_hold(1.0, 1.0, 3.0));   // equality case: 8 <= 8
  CHECK(odd_power_inequalities_hold(1.0, 0.0, 3.0));   // 1 <= 4
  CHECK(odd_power_inequalities_hold(-2.0, 2.0, 5.0 / 3.0));
  CHECK_THROWS_AS(odd_power_inequalities_hold(1.0, 1.0, 2.0), std::domain_error);
  CHECK_THROWS_AS(odd_power_inequalities_hold(1.0, 1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(odd_power_inequalities_hold(1.0, 1.0, 1.2345678), std::domain_error);
}

TEST_CASE("power inequalities hold on random sweeps") {
  test_support::Rng rng(505);
  for (double m : {3.0, 5.0 / 3.0, 7.0 / 3.0}) {
    for (int it = 0; it < 10000; ++it) {
      const double a = rng.uniform(-10.0, 10.0);
      const double b = rng.uniform(-10.0, 10.0);
      CHECK(odd_power_inequalities_hold(a, b, m));
    }
  }
}

TEST_CASE("power inequalities hold on exhaustive rational grids") {
  for (double m : {3.0, 5.0 / 3.0, 9.0 / 5.0}) {
    for (int ia = -5; ia <= 5; ++ia) {
      for (int ib = -5; ib <= 5; ++ib) {
        CHECK(odd_power_inequalities_hold(ia / 2.0, ib / 2.0, m));
      }
    }
  }
}

TEST_CASE("is_odd_ratio recognizes odd ratios") {
  CHECK(is_odd_ratio(3.0));
  CHECK(is_odd_ratio(5.0 / 3.0));
  CHECK(is_odd_ratio(9.0 / 5.0));
  CHECK(is_odd_ratio(1.0));
  CHECK_FALSE(is_odd_ratio(2.0));
  CHECK_FALSE(is_odd_ratio(1.5));
  CHECK_FALSE(is_odd_ratio(std::sqrt(2.0)));
}

namespace {

LaplacianMatrix laplacian_from_weights(const Eigen::MatrixXd& w) {
  return formsim::graph::laplacian(WeightedAdjacency{w});
}

Eigen::MatrixXd complete_weights(int m) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Ones(m, m);
  w.diagonal().setZero();
  return w;
}

}  // namespace

TEST_CASE("split_laplacian on hand-built graphs") {
  // Two UAVs plus target, all unit weights (triangle).
  const SplitLaplacian tri = split_laplacian(laplacian_from_weights(complete_weights(3)));
  CHECK(tri.ln_plus_bn(0, 0) == 2.0);
  CHECK(tri.ln_plus_bn(0, 1) == -1.0);
  CHECK(tri.ln_plus_bn(1, 0) == -1.0);
  CHECK(tri.ln_plus_bn(1, 1) == 2.0);
  CHECK(tri.b_n(0) == 1.0);
  CHECK(tri.b_n(1) == 1.0);
  CHECK(tri.target_degree == 2.0);

  // Target isolated: the leading block is the UAV Laplacian itself.
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(3, 3);
  w(0, 1) = w(1, 0) = 0.7;
  const SplitLaplacian iso = split_laplacian(laplacian_from_weights(w));
  CHECK(iso.b_n.cwiseAbs().maxCoeff() == 0.0);
  CHECK(iso.ln_plus_bn(0, 0) == 0.7);
  CHECK(iso.ln_plus_bn(0, 1) == -0.7);

  // Complete graph on 4: (L_n + B_n) * 1 = (1, 1, 1).
  const SplitLaplacian k4 = split_laplacian(laplacian_from_weights(complete_weights(4)));
  const Eigen::VectorXd ones_image = k4.ln_plus_bn * Eigen::VectorXd::Ones(3);
  for (int i = 0; i < 3; ++i) CHECK(ones_image(i) == doctest::Approx(1.0).epsilon(1e-14));

  // Not a Laplacian: rows do not sum to zero.
  Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(3, 3);
  CHECK_THROWS_AS(split_laplacian(LaplacianMatrix{bad}), std::runtime_error);
}

TEST_CASE("inverse norm bound on complete unit graphs") {
  for (int n : {3, 5}) {
    const auto report =
        residual_norm_bound_check(laplacian_from_weights(complete_weights(n + 1)));
    CHECK(std::abs(report.inverse_norm - 1.0) <= 1e-9);
    CHECK(report.within_unit_bound);
  }
}

TEST_CASE("inverse norm is reported above 1 for weak chains") {
  // Path graph 1-2-3 with weight 0.1 edges; node 3 is the target.
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(3, 3);
  w(0, 1) = w(1, 0) = 0.1;
  w(1, 2) = w(2, 1) = 0.1;
  const auto report = residual_norm_bound_check(laplacian_from_weights(w));
  CHECK(report.inverse_norm > 1.0);
  CHECK_FALSE(report.within_unit_bound);
}

TEST_CASE("inverse norm check errors on a disconnected UAV block") {
  // Two UAVs connected to each other but not to the target: L_n + B_n is
  // singular.
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(3, 3);
  w(0, 1) = w(1, 0) = 1.0;
  CHECK_THROWS_AS(residual_norm_bound_check(laplacian_from_weights(w)),
                  std::runtime_error);
}

TEST_CASE("formation error closed forms") {
  const FormationSpec formation = FormationSpec::regular_polygon(2, 100.0);
  const AgentState target{{50.0, -20.0}, 10.0, 0.5};

  std::vector<AgentState> uavs;
  for (int i = 0; i < 2; ++i)
    uavs.push_back(AgentState{target.position + formation.offsets[i], 10.0, 0.5});

  const ErrorVector zero_err = formation_error(uavs, target, formation);
  CHECK(zero_err.e_p.norm() < 1e-12);
  CHECK(zero_err.e_v.norm() < 1e-12);

  uavs[0].position += Vector2d(1.0, 0.0);
  const ErrorVector one_err = formation_error(uavs, target, formation);
  CHECK(one_err.e_p.norm() == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(formation_error(std::vector<AgentState>{uavs[0]}, target, formation),
                  std::invalid_argument);
}

TEST_CASE("formation error regression on set A") {
  // delta = 100, psi_i = 2*pi*i/3, target at the origin; the expected value
  // is the plain stacked-norm arithmetic over the table entries.
  const std::vector<Vector2d> pos = {{18.2249, 71.4778},
                                     {-11.6509, 97.6854},
                                     {-1.4301, 133.4849},
                                     {3.8123, 103.1}};
  std::vector<double> psi;
  for (int i = 1; i <= 4; ++i) psi.push_back(2.0 * std::numbers::pi * i / 3.0);
  const FormationSpec formation(100.0, psi);
  const AgentState target{{0.0, 0.0}, 10.0, 0.0};

  std::vector<AgentState> uavs;
  for (const Vector2d& p : pos) uavs.push_back(AgentState{p, 8.0, 0.0});

  double sum_sq = 0.0;
  for (int i = 0; i < 4; ++i) {
    const Vector2d e = pos[i] - 100.0 * Vector2d(std::cos(psi[i]), std::sin(psi[i]));
    sum_sq += e.squaredNorm();
  }
  const double expected = std::sqrt(sum_sq);

  const ErrorVector err = formation_error(uavs, target, formation);
  CHECK(err.e_p.norm() == doctest::Approx(expected).epsilon(1e-12));
  CHECK(err.e_p.norm() == doctest::Approx(267.5636498303517).epsilon(1e-9));
}

TEST_CASE("lyapunov_V closed forms and positivity") {
  const ControllerParams linear(1.0, 1.0, 0.0);
  CHECK(lyapunov_V(Vector2d::Zero(), Vector2d::Zero(), linear) == 0.0);
  CHECK(lyapunov_V(Vector2d(1.0, 0.0), Vector2d::Zero(), linear) ==
        doctest::Approx(0.125).epsilon(1e-15));

  test_support::Rng rng(506);
  for (int it = 0; it < 1000; ++it) {
    const ControllerParams params(rng.uniform(0.1, 3.0), rng.uniform(0.1, 3.0),
                                  rng.uniform(-0.45, 0.3));
    const Vector2d x1(rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0));
    const Vector2d x2(rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0));
    if (x1.norm() + x2.norm() == 0.0) continue;
    CHECK(lyapunov_V(x1, x2, params) > 0.0);
  }
}

TEST_CASE("integrated relative dynamics matches the closed form") {
  const ControllerParams gains(-0.3, 0.3, -0.4);
  const SpecialSolutionParams params(1.0, -0.4, -0.3, 0.3);

  const double dt = 1e-3;
  const int steps = 2400;  // t in [0, 2.4]
  const RelativeTrajectory traj = simulate_relative_dynamics(
      Vector2d(1.0, 0.0), Vector2d(-1.0, 0.0), gains, dt, steps);

  double max_err = 0.0;
  for (size_t k = 0; k < traj.t.size(); ++k) {
    const auto [x1, x2] = special_solution(params, traj.t[k]);
    max_err = std::max(max_err, std::abs(traj.x1[k].x() - x1));
    max_err = std::max(max_err, std::abs(traj.x2[k].x() - x2));
    CHECK(std::abs(traj.x1[k].y()) < 1e-12);  // the y channel stays at rest
    CHECK(std::abs(traj.x2[k].y()) < 1e-12);
  }
  CHECK(max_err < 1e-3);
}

TEST_CASE("closed-form states satisfy the stated correlation") {
  const SpecialSolutionParams params(1.0, -0.4, -0.3, 0.3);
  for (double t : {0.0, 0.5, 1.0, 1.5, 2.0, 2.4}) {
    const auto [x1, x2] = special_solution(params, t);
    CHECK(std::abs(std::pow(std::abs(x1), 1.0 + params.tau) - std::abs(x2)) < 1e-9);
  }
}

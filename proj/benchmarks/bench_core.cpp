#include <benchmark/benchmark.h>

#include <numbers>
#include <vector>

#include "formsim/controller.hpp"
#include "formsim/graph.hpp"
#include "formsim/scenario.hpp"
#include "formsim/simulation.hpp"

namespace {

using Eigen::Vector2d;

void BM_spectral_summary(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Eigen::MatrixXd w = Eigen::MatrixXd::Ones(n, n);
  w.diagonal().setZero();
  const formsim::graph::LaplacianMatrix lap =
      formsim::graph::laplacian(formsim::graph::WeightedAdjacency{w});
  for (auto _ : state) {
    benchmark::DoNotOptimize(formsim::graph::spectral_summary(lap).fiedler_value);
  }
}
BENCHMARK(BM_spectral_summary)->Arg(5)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

void BM_consensus_control(benchmark::State& state) {
  const formsim::control::ControllerParams params(1.0, 1.6, -0.1);
  const formsim::vehicle::AgentState s{{10.0, 20.0}, 9.0, 0.4};
  std::vector<formsim::control::NeighborData> nbrs;
  for (int j = 0; j < 4; ++j)
    nbrs.push_back(formsim::control::NeighborData{
        0.5 + 0.1 * j, Vector2d(5.0 * j, -3.0 * j), Vector2d(8.0, 1.0 * j),
        Vector2d(0.1 * j, -0.2)});
  const Vector2d own_offset(0.0, 100.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        formsim::control::consensus_control(s, own_offset, nbrs, params));
  }
}
BENCHMARK(BM_consensus_control);

void BM_spow(benchmark::State& state) {
  double x = 1.2345;
  for (auto _ : state) {
    benchmark::DoNotOptimize(formsim::control::spow(x, 0.8));
    x = -x;
  }
}
BENCHMARK(BM_spow);

void BM_run_simulation_short(benchmark::State& state) {
  using namespace formsim;
  const sim::ScenarioConfig cfg{
      {vehicle::AgentState{{18.2249, 71.4778}, 8.0, 0.0},
       vehicle::AgentState{{-11.6509, 97.6854}, 8.5, 0.7854},
       vehicle::AgentState{{-1.4301, 133.4849}, 9.0, 1.5708},
       vehicle::AgentState{{3.8123, 103.1}, 9.5, 2.3562}},
      vehicle::TargetProfile{vehicle::AgentState{{0.0, 0.0}, 10.0, 0.0},
                             vehicle::target_input},
      control::FormationSpec::regular_polygon(4, 100.0),
      graph::CommModel(300.0, 10.0),
      control::ControllerParams(1.0, 1.6, -0.1),
      vehicle::VelocityBounds(5.0, 25.0),
      0.05,
      1.0,
      false,
      1e-6,
      sim::TargetInputMode::kSpeedHeading};
  for (auto _ : state) {
    benchmark::DoNotOptimize(sim::run_simulation(cfg).summary.min_lambda2);
  }
}
BENCHMARK(BM_run_simulation_short);

}  // namespace

BENCHMARK_MAIN();

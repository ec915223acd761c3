#include <benchmark/benchmark.h>

#include "threebody/threebody.hpp"

using namespace threebody;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

void BM_FlowRhsRho(benchmark::State& st) {
  const HamiltonianSpec spec{Representation::kRho, MassTriple(1.0, 1.5, 0.8),
                             Potential{NewtonGravity{1.0}}, 0.0};
  const PhaseState s{Representation::kRho, vec({1.0, 1.45, 2.0}), vec({0.1, -0.2, 0.05})};
  for (auto _ : st) benchmark::DoNotOptimize(flow_rhs(spec, s));
}
BENCHMARK(BM_FlowRhsRho);

void BM_FlowRhsGeo(benchmark::State& st) {
  const HamiltonianSpec spec{Representation::kGeo, {}, Potential{NewtonGravity{1.0}}, 0.0};
  const PhaseState s{Representation::kGeo, vec({2.225, 0.34984375, 2.9}), vec({0.1, -0.2, 0.05})};
  for (auto _ : st) benchmark::DoNotOptimize(flow_rhs(spec, s));
}
BENCHMARK(BM_FlowRhsGeo);

void BM_CartesianRhs(benchmark::State& st) {
  const MassTriple m(1.0, 1.5, 0.8);
  const CartesianState s =
      zero_L_initial({1.0, 1.45, 2.0}, {0.1, -0.2, 0.05}, m, static_cast<int>(st.range(0)));
  const Potential V{NewtonGravity{1.0}};
  for (auto _ : st) benchmark::DoNotOptimize(cartesian_rhs(s, V, m));
}
BENCHMARK(BM_CartesianRhs)->Arg(2)->Arg(3);

void BM_AdaptiveRunRho(benchmark::State& st) {
  const MassTriple m(1.0, 1.5, 0.8);
  const HamiltonianSpec spec{Representation::kRho, m,
                             Potential{HarmonicChain{0.03, 1.0, 0.7, 1.3}}, 0.0};
  const Eigen::VectorXd q = vec({1.0, 1.3, 1.2});
  const PhaseState s{Representation::kRho, q,
                     momenta_from_velocities(Representation::kRho, q, vec({0.15, 0.2, 0.17}), m)};
  IntegratorSpec is;
  is.abs_tol = is.rel_tol = 1e-10;
  TrajectoryOptions opt;
  opt.record_steps = false;
  opt.output_times = {10.0};
  for (auto _ : st) benchmark::DoNotOptimize(integrate(spec, s, 0.0, 10.0, is, opt));
}
BENCHMARK(BM_AdaptiveRunRho)->Unit(benchmark::kMillisecond);

void BM_QuarticRoots(benchmark::State& st) {
  const GeoPoint g = geo_from_rho({1.0, 1.45, 2.0});
  for (auto _ : st) benchmark::DoNotOptimize(newton_quartic_roots(g, 1.0));
}
BENCHMARK(BM_QuarticRoots);

}  // namespace

BENCHMARK_MAIN();

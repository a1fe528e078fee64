#include <benchmark/benchmark.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "rotbif/classify.hpp"
#include "rotbif/degree.hpp"
#include "rotbif/dynamics.hpp"
#include "rotbif/linalg.hpp"
#include "rotbif/rt4bp.hpp"
#include "rotbif/spectrum.hpp"

namespace {

using namespace rotbif;
constexpr double pi = std::numbers::pi;

void bm_char_poly_12(benchmark::State& state) {
  HessianData h = HessianData::spatial(SymMatrix::diagonal(Eigen::Vector3d(-2.3, 1.4, 3.1)));
  SymMatrix st = build_ST(h, 4.7).s;
  for (auto _ : state) benchmark::DoNotOptimize(char_poly(st));
}
BENCHMARK(bm_char_poly_12);

void bm_morse_grid(benchmark::State& state) {
  for (auto _ : state) {
    int total = 0;
    for (int i = 0; i < 20; ++i)
      for (int j = 0; j < 20; ++j) {
        double b1 = -8.0 + 12.0 * (i + 0.5) / 20.0;
        double b2 = -8.0 + 12.0 * (j + 0.5) / 20.0;
        total += morse_ST_planar(b1, b2, 3.7);
      }
    benchmark::DoNotOptimize(total);
  }
}
BENCHMARK(bm_morse_grid);

void bm_gamma_table(benchmark::State& state) {
  for (auto _ : state) {
    EquilibriumReport rep = emanation_report(1.0, 1.0, 2.0, 1);
    benchmark::DoNotOptimize(rep);
  }
}
BENCHMARK(bm_gamma_table);

void bm_winding_triangle(benchmark::State& state) {
  rt4bp::MassTriple m = rt4bp::MassTriple::equal();
  PlanarField field{[&m](const Eigen::Vector2d& q) { return rt4bp::grad_hess(q, m).first; },
                    1e-12};
  BoundaryCurve rim = shrunk_boundary(rt4bp::outline(rt4bp::Region::T), 0.05);
  for (auto _ : state) benchmark::DoNotOptimize(winding_degree(field, rim));
}
BENCHMARK(bm_winding_triangle);

void bm_find_librations(benchmark::State& state) {
  rt4bp::MassTriple m = rt4bp::MassTriple::equal();
  for (auto _ : state) benchmark::DoNotOptimize(rt4bp::find_librations(m));
}
BENCHMARK(bm_find_librations);

void bm_flow_vertical(benchmark::State& state) {
  HamiltonianSystem sys = rt4bp_spatial(rt4bp::MassTriple::equal());
  Eigen::VectorXd u0 = sys.equilibrium_state(Eigen::Vector3d::Zero());
  u0[5] += 0.1;
  double T = 2.0 * pi / std::sqrt(3.0 * std::sqrt(3.0));
  for (auto _ : state) benchmark::DoNotOptimize(flow(sys, u0, T));
}
BENCHMARK(bm_flow_vertical);

void bm_shoot_vertical(benchmark::State& state) {
  HamiltonianSystem sys = rt4bp_spatial(rt4bp::MassTriple::equal());
  Eigen::VectorXd seed = sys.equilibrium_state(Eigen::Vector3d::Zero());
  seed[5] += 1e-3;
  double T = 2.0 * pi / std::sqrt(3.0 * std::sqrt(3.0));
  for (auto _ : state) benchmark::DoNotOptimize(shoot_periodic(sys, seed, T));
}
BENCHMARK(bm_shoot_vertical);

}  // namespace

BENCHMARK_MAIN();

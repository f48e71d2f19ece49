#include "lcs/chords.hpp"
#include "lcs/invariants.hpp"

#include <benchmark/benchmark.h>

#include <numbers>

using namespace lcs;

namespace {

ContactIsotopy bump(double A, double r, double step) {
  ContactIsotopy c;
  c.H = contact_bump(1, A, make_vec({0.0, 0.0}), r);
  c.support = Box{{-1.2 * r, -1.2 * r, 0.0}, {1.2 * r, 1.2 * r, 1.0}};
  c.periodic_z = true;
  c.integrator.step = step;
  return c;
}

void BM_lichnerowicz(benchmark::State& st) {
  KForm eta = analytic_form(4, 1, [](const auto& x, auto* out) {
    out[0] = x[1];
    out[1] = x[0];
    out[2] = 0.0 * x[0];
    out[3] = 0.0 * x[0];
  });
  KForm s = analytic_form(4, 1, [](const auto& x, auto* out) {
    using std::sin;
    for (int i = 0; i < 4; ++i) out[i] = sin(x[0] + x[i] * (i + 1.0));
  });
  KForm d = lichnerowicz_derivative(s, eta);
  Vec p = make_vec({0.1, 0.2, -0.3, 0.4});
  for (auto _ : st) benchmark::DoNotOptimize(d.at(p));
}
BENCHMARK(BM_lichnerowicz);

void BM_lifted_flow(benchmark::State& st) {
  HamiltonianIsotopy iso = lift_contact_isotopy(bump(0.6, 0.8, 1.0 / st.range(0)));
  Vec p = make_vec({0.0, 0.1, -0.2, 0.3});
  for (auto _ : st) benchmark::DoNotOptimize(flow(iso, p).x);
  st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_lifted_flow)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMicrosecond);

void BM_torus_persistence(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  GFQI F = function_gf(Chart(2, {true, true}),
                       [](const DVec& q) {
                         return std::cos(2 * std::numbers::pi * q[0]) + 0.7 * std::cos(2 * std::numbers::pi * q[1]);
                       },
                       Box{}, 1.7);
  SpectralConfig cfg;
  cfg.base_res = {n};
  for (auto _ : st) benchmark::DoNotOptimize(minmax_value(F, ClassSelector::fundamental, cfg).value);
  st.SetComplexityN(n * n);
}
BENCHMARK(BM_torus_persistence)->Arg(16)->Arg(32)->Arg(64)->Complexity()->Unit(benchmark::kMillisecond);

void BM_lee_chords_torus(benchmark::State& st) {
  Chart t2(2, {true, true}, {"q1", "q2"});
  CVec beta(2);
  beta << 1.0, 0.0;
  ChordSearchConfig cfg;
  cfg.grid = {8, 8};
  for (auto _ : st) benchmark::DoNotOptimize(lee_chords_twisted(cos_torus(1.0, 0.7), beta, t2, cfg).chords.size());
}
BENCHMARK(BM_lee_chords_torus)->Unit(benchmark::kMillisecond);

void BM_contact_cpm(benchmark::State& st) {
  ContactMap m = contact_time_map(bump(0.2, 0.8, 2e-2));
  SpectralConfig cfg;
  cfg.base_res = {static_cast<int>(st.range(0)), static_cast<int>(st.range(0)), 2};
  for (auto _ : st)
    benchmark::DoNotOptimize(c_pm_contact(m, Box{{-1.0, -1.0, 0.0}, {1.0, 1.0, 1.0}}, true, 0.5, cfg).plus.value);
}
BENCHMARK(BM_contact_cpm)->Arg(9)->Arg(13)->Unit(benchmark::kMillisecond)->Iterations(2);

void BM_radial_capacity(benchmark::State& st) {
  BallDomain U{0.0, 0.0, std::sqrt(1.5 / std::numbers::pi)};
  auto fam = radial_family(U, 1);
  SpectralConfig cfg;
  cfg.base_res = {32};
  for (auto _ : st) benchmark::DoNotOptimize(capacity_lower_bound(U, fam, cfg).lower_bound);
}
BENCHMARK(BM_radial_capacity)->Unit(benchmark::kMillisecond)->Iterations(2);

void BM_nonsqueezing(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(nonsqueezing_report(0.9, 0.7).obstructed);
}
BENCHMARK(BM_nonsqueezing);

}  // namespace

BENCHMARK_MAIN();

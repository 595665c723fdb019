#include <benchmark/benchmark.h>

#include <random>

#include "leafspec/curvekit.hpp"
#include "leafspec/leafgeom.hpp"
#include "leafspec/opnum.hpp"
#include "leafspec/symcalc.hpp"

using namespace leafspec;
using Complex = std::complex<double>;

static void BM_DiscreteS(benchmark::State& state) {
  const auto c = curve::build_curve(curve::CurveSpec::circle(), static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(opnum::discrete_S(c));
}
BENCHMARK(BM_DiscreteS)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

static void BM_MinSingularValue(benchmark::State& state) {
  curve::CurveSpec spec = curve::CurveSpec::circle();
  spec.marks = {{"s", 0.5}};
  const auto c = curve::build_curve(spec, static_cast<std::size_t>(state.range(0)));
  opnum::Coefficients coeffs;
  coeffs["a"] = symbol::PCCoefficient::scalar_jump("t", 1.0, "s", Complex(0, 1));
  const auto op = opnum::assemble_operator(symbol::OperatorExpr::aP_plus_Q("a"), c, coeffs);
  for (auto _ : state) benchmark::DoNotOptimize(opnum::min_singular_value(op));
}
BENCHMARK(BM_MinSingularValue)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_Spirality(benchmark::State& state) {
  const auto c = curve::build_curve(curve::CurveSpec::log_spiral(0.5), static_cast<std::size_t>(state.range(0)));
  const auto R = curve::default_R_grid(c);
  const auto xs = curve::default_x_small();
  const auto xl = curve::default_x_large();
  for (auto _ : state) benchmark::DoNotOptimize(curve::spirality_indices(c, "t", xs, xl, R));
}
BENCHMARK(BM_Spirality)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

static void BM_LeafContains(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<Complex> zs(4096);
  for (auto& z : zs) z = {u(rng), u(rng)};
  const leaf::Leaf L{0.0, 1.0, 2.5, -1.0, 0.7};
  for (auto _ : state) {
    int hits = 0;
    for (Complex z : zs) hits += leaf::leaf_contains(L, z);
    benchmark::DoNotOptimize(hits);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(zs.size()));
}
BENCHMARK(BM_LeafContains);

static void BM_BundleTest(benchmark::State& state) {
  symbol::SymbolContext ctx;
  symbol::Matrix d1 = symbol::Matrix::Identity(2, 2), d2 = symbol::Matrix::Identity(2, 2);
  d2(1, 1) = Complex(0, 1);
  ctx.coefficients["A"] = symbol::PCCoefficient(2, {{"t", d1}, {"s", d2}});
  ctx.positions = {{"t", 0.0}, {"s", 1.0}};
  ctx.local["t"] = {2.0, -0.5, 0.5};
  ctx.local["s"] = {2.0, -0.5, 0.5};
  const auto expr = symbol::OperatorExpr::aP_plus_Q("A");
  for (auto _ : state) benchmark::DoNotOptimize(symbol::bundle_fredholm_test(expr, ctx, 512));
}
BENCHMARK(BM_BundleTest)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

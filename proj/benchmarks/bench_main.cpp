#include "qspectra/classifier.hpp"
#include "qspectra/fourier.hpp"
#include "qspectra/hull.hpp"
#include "qspectra/oracle.hpp"
#include "qspectra_cli/spec_io.hpp"

#include <benchmark/benchmark.h>

using namespace qspectra;

namespace {

const char* kNames[] = {"thue-morse", "queffelec-zeta", "table", "rudin-shapiro", "tm-rs-product", "height-h3"};

Substitution load(const char* name)
{
    return cli::load_spec(std::string(QSPECTRA_SPEC_DIR) + "/" + name + ".yaml").substitution;
}

// Coefficients on the window of power P, fresh engine each iteration.
void BM_FourierWindow(benchmark::State& state)
{
    Substitution s = load(kNames[state.range(0)]);
    PreparedSubstitution p = prepare(s);
    InvariantWeights w = invariant_weights(p.telescoped, p.decomposition);
    auto ks = window(p.telescoped.q(), static_cast<unsigned>(state.range(1)));
    for (auto _ : state) {
        CorrelationEngine e(p.telescoped, w.u);
        benchmark::DoNotOptimize(e.coefficients(ks));
    }
    state.SetLabel(kNames[state.range(0)]);
    state.counters["points"] = static_cast<double>(ks.size());
}
BENCHMARK(BM_FourierWindow)->ArgsProduct({{0, 1, 2, 3, 4, 5}, {2, 3}})->Unit(benchmark::kMillisecond);

void BM_Descent(benchmark::State& state)
{
    Substitution s = load("thue-morse");
    CorrelationEngine e(s, {Rational(1, 2), Rational(1, 2)});
    Integer k;
    mpz_ui_pow_ui(k.get_mpz_t(), 2, static_cast<unsigned long>(state.range(0)));
    k += 5;
    for (auto _ : state) benchmark::DoNotOptimize(e.descent(LatticePoint(std::vector<Integer>{k})));
}
BENCHMARK(BM_Descent)->Arg(20)->Arg(80)->Arg(200);

void BM_Expand(benchmark::State& state)
{
    Substitution s = load("table");
    for (auto _ : state) benchmark::DoNotOptimize(expand(s, 0, static_cast<unsigned>(state.range(0))));
    state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << (2 * state.range(0))));
}
BENCHMARK(BM_Expand)->DenseRange(6, 10, 2);

void BM_Hull(benchmark::State& state)
{
    Substitution s = load(kNames[state.range(0)]);
    PreparedSubstitution p = prepare(s);
    InvariantWeights w = invariant_weights(p.telescoped, p.decomposition);
    for (auto _ : state) benchmark::DoNotOptimize(analyse_components(p, w));
    state.SetLabel(kNames[state.range(0)]);
}
BENCHMARK(BM_Hull)->DenseRange(0, 5)->Unit(benchmark::kMillisecond);

void BM_Frequency(benchmark::State& state)
{
    Substitution s = load("thue-morse");
    for (auto _ : state)
        benchmark::DoNotOptimize(pair_frequency(s, 0, static_cast<unsigned>(state.range(0)), LatticePoint{1}));
}
BENCHMARK(BM_Frequency)->Arg(12)->Arg(16);

}  // namespace

BENCHMARK_MAIN();

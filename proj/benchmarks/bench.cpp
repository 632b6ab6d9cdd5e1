#include <benchmark/benchmark.h>

#include <vector>

#include "carfir/evaluation.hpp"
#include "carfir/fir_forecast.hpp"
#include "carfir/identification.hpp"
#include "carfir/mixed.hpp"
#include "carfir/rng.hpp"
#include "carfir/sugeno.hpp"

using namespace carfir;

namespace {

struct Pipeline {
    Dataset train;
    std::vector<Partition> partitions;
    PatternRuleBase prb;
    SugenoRuleBase srb;
    MixedModel mm;

    explicit Pipeline(std::size_t samples) {
        SynthSpec spec;
        spec.length = samples;
        spec.seed = 3;
        spec.noise_amplitude = 0.05;
        train = normalize(synth_generate(spec));
        for (std::size_t v = 0; v < train.n_vars(); ++v)
            partitions.push_back(efp_landmarks(train.series(v).samples, 9));
        prb = apply_mask(parse_mask("-1 -2 / 0 +1"), train, partitions);
        srb = tune_weights(init_rule_grid(prb), prb, 0.1, 5);
        const ErrorModel em = build_error_model(ErrorKind::G2, prb, srb);
        mm = make_mixed_model(prb, srb, select_retained_rules(em, prb, 30.0));
    }
};

const Pipeline& pipeline(std::size_t samples) {
    static const Pipeline small(1000);
    static const Pipeline large(10000);
    return samples <= 1000 ? small : large;
}

} // namespace

static void BM_Fuzzify(benchmark::State& state) {
    const auto& p = pipeline(1000);
    Rng rng(1);
    for (auto _ : state)
        benchmark::DoNotOptimize(fuzzify(rng.uniform01(), p.partitions[0]));
}
BENCHMARK(BM_Fuzzify);

static void BM_FuzzifyRoundtrip(benchmark::State& state) {
    const auto& p = pipeline(1000);
    Rng rng(1);
    for (auto _ : state)
        benchmark::DoNotOptimize(defuzzify(fuzzify(rng.uniform01(), p.partitions[0]),
                                           p.partitions[0]));
}
BENCHMARK(BM_FuzzifyRoundtrip);

static void BM_SugenoInfer(benchmark::State& state) {
    const auto& p = pipeline(1000);
    Rng rng(2);
    for (auto _ : state) {
        const double x[] = {rng.uniform01(), rng.uniform01()};
        benchmark::DoNotOptimize(sugeno_infer(x, p.srb));
    }
}
BENCHMARK(BM_SugenoInfer);

static void BM_FirPredictOne(benchmark::State& state) {
    const auto& p = pipeline(static_cast<std::size_t>(state.range(0)));
    Rng rng(3);
    for (auto _ : state) {
        const double x[] = {rng.uniform01(), rng.uniform01()};
        benchmark::DoNotOptimize(fir_predict_one(x, p.prb, 5));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(p.prb.rules.size()));
}
BENCHMARK(BM_FirPredictOne)->Arg(1000)->Arg(10000);

static void BM_MixedInfer(benchmark::State& state) {
    const auto& p = pipeline(static_cast<std::size_t>(state.range(0)));
    Rng rng(4);
    for (auto _ : state) {
        const double x[] = {rng.uniform01(), rng.uniform01()};
        benchmark::DoNotOptimize(mixed_infer(x, p.mm));
    }
}
BENCHMARK(BM_MixedInfer)->Arg(1000)->Arg(10000);

static void BM_TuneEpoch(benchmark::State& state) {
    const auto& p = pipeline(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        SugenoRuleBase srb = init_rule_grid(p.prb);
        benchmark::DoNotOptimize(tune_weights(std::move(srb), p.prb, 0.1, 1));
    }
}
BENCHMARK(BM_TuneEpoch)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_BuildErrorModel(benchmark::State& state) {
    const auto& p = pipeline(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(build_error_model(ErrorKind::G2, p.prb, p.srb));
}
BENCHMARK(BM_BuildErrorModel)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_MaskSearch(benchmark::State& state) {
    const auto& p = pipeline(1000);
    MaskTemplate tmpl;
    tmpl.depth = 3;
    tmpl.n_vars = 2;
    tmpl.cells = {-1, -1, -1, -1, -1, 1};
    for (auto _ : state)
        benchmark::DoNotOptimize(best_mask(p.train, p.partitions, tmpl, 2));
    state.SetLabel("10 masks");
}
BENCHMARK(BM_MaskSearch)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

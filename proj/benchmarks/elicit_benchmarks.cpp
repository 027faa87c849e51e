#include <benchmark/benchmark.h>

#include "elicit/elicitation.hpp"
#include "elicit/pipeline.hpp"

using namespace elicit;

namespace {

const PreparedInputs& inputs() {
    static const PreparedInputs in =
        prepare_inputs(load_pipeline_config(std::filesystem::path(ELICIT_BENCH_DATA_DIR) / "pipeline.json"));
    return in;
}

const GaussianMixture reference{{{0.364801, 0.359548, 0.128782}, {0.635199, 0.572878, 0.156241}}};

const ScoreTable& scores() {
    static const ScoreTable t = [] {
        const auto& in = inputs();
        return elicit_probabilities(in.questionnaire, in.cases, in.sums, reference,
                                    KdeModel(in.sums.normalized, silverman_bandwidth(in.sums.normalized)));
    }();
    return t;
}

void BM_EnumerateCases(benchmark::State& state) {
    const Questionnaire q = load_questionnaire_file(std::filesystem::path(ELICIT_BENCH_DATA_DIR) /
                                                    (state.range(0) ? "questionnaire_unmerged.json" : "questionnaire.json"));
    for (auto _ : state) benchmark::DoNotOptimize(enumerate_cases(q));
}
BENCHMARK(BM_EnumerateCases)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

void BM_EmFit(benchmark::State& state) {
    const auto& data = inputs().sums.normalized;
    const auto m = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(em_fit(data, m));
}
BENCHMARK(BM_EmFit)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_KdeScoring(benchmark::State& state) {
    const auto& data = inputs().sums.normalized;
    const KdeModel kde(data, silverman_bandwidth(data));
    for (auto _ : state) {
        double acc = 0.0;
        for (double x : data) acc += kde.cdf(x);
        benchmark::DoNotOptimize(acc);
    }
}
BENCHMARK(BM_KdeScoring)->Unit(benchmark::kMillisecond);

void BM_NextClosure(benchmark::State& state) {
    const ProbabilityBand band{state.range(0) / 10.0, (state.range(0) + 1) / 10.0, false};
    const FormalContext ctx = build_band_context(scores(), band, Approach::gmm_cdf);
    const auto mode = state.range(1) ? EnumerationMode::parallel : EnumerationMode::sequential;
    for (auto _ : state) benchmark::DoNotOptimize(enumerate_concepts(ctx, mode));
}
BENCHMARK(BM_NextClosure)->Args({0, 0})->Args({4, 0})->Args({4, 1})->Unit(benchmark::kMillisecond);

void BM_BuildLattice(benchmark::State& state) {
    const FormalContext ctx = build_band_context(scores(), {0.4, 0.5, false}, Approach::gmm_cdf);
    const auto concepts = enumerate_concepts(ctx);
    for (auto _ : state) benchmark::DoNotOptimize(build_lattice(ctx, concepts));
}
BENCHMARK(BM_BuildLattice)->Unit(benchmark::kMillisecond);

void BM_TreeFit(benchmark::State& state) {
    const auto& in = inputs();
    std::vector<Category> labels;
    for (const auto& r : scores().rows) labels.push_back(r.category);
    for (auto _ : state) benchmark::DoNotOptimize(fit_decision_tree(in.questionnaire, in.cases, labels));
}
BENCHMARK(BM_TreeFit)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include "ogeo/corpus.hpp"
#include "ogeo/geometry.hpp"
#include "ogeo/kernel.hpp"
#include "ogeo/models.hpp"
#include "ogeo/search.hpp"

using namespace ogeo;

static void BM_CheckCorpus(benchmark::State& state) {
    std::vector<Proof> proofs;
    for (const auto& e : corpus_entries()) proofs.push_back(load(e.id, OGEO_BENCH_CORPUS_DIR).proof);
    for (auto _ : state)
        for (const auto& p : proofs) benchmark::DoNotOptimize(check_proof(p).valid);
}
BENCHMARK(BM_CheckCorpus)->Unit(benchmark::kMicrosecond);

static void BM_CheckEntry(benchmark::State& state) {
    const auto& e = corpus_entries()[static_cast<std::size_t>(state.range(0))];
    Proof p = load(e.id, OGEO_BENCH_CORPUS_DIR).proof;
    state.SetLabel(e.id);
    for (auto _ : state) benchmark::DoNotOptimize(check_proof(p).valid);
}
BENCHMARK(BM_CheckEntry)->DenseRange(0, 5)->Unit(benchmark::kMicrosecond);

static void BM_ParseCorpus(benchmark::State& state) {
    for (auto _ : state)
        for (const auto& e : corpus_entries()) benchmark::DoNotOptimize(load(e.id, OGEO_BENCH_CORPUS_DIR));
}
BENCHMARK(BM_ParseCorpus)->Unit(benchmark::kMicrosecond);

static void BM_ProveW1(benchmark::State& state) {
    auto prem = axioms("I6");
    Formula goal = axiom("W1");
    for (auto _ : state) benchmark::DoNotOptimize(prove(prem, goal).status);
}
BENCHMARK(BM_ProveW1)->Unit(benchmark::kMillisecond);

static void BM_ProveStagedW3(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(
            prove_staged(axioms("I5,ODO"), axiom("OO"), axioms("I5,I6,OO"), axiom("W3")).status);
}
BENCHMARK(BM_ProveStagedW3)->Unit(benchmark::kMillisecond);

static void BM_ProveI6(benchmark::State& state) {
    SearchConfig c;
    c.max_term_depth = 3;
    for (auto _ : state) benchmark::DoNotOptimize(prove(axioms("I7,I8,ODO"), axiom("I6"), c).status);
}
BENCHMARK(BM_ProveI6)->Unit(benchmark::kMillisecond);

// Full enumeration up to size 3: no countermodel exists, so nothing stops early.
static void BM_ModelsSize3(benchmark::State& state) {
    auto prem = axioms("I5,I6,ODO");
    Formula goal = axiom("W3");
    int jobs = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(find_countermodel(prem, goal, 3, jobs));
}
BENCHMARK(BM_ModelsSize3)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

static void BM_ModelsSize4Counter(benchmark::State& state) {
    auto prem = axioms("I5,I6");
    Formula goal = axiom("W3");
    for (auto _ : state) benchmark::DoNotOptimize(find_countermodel(prem, goal, 4));
}
BENCHMARK(BM_ModelsSize4Counter)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();

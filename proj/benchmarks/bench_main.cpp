#include <parrep/conditioning.hpp>
#include <parrep/cycles.hpp>
#include <parrep/games.hpp>
#include <parrep/homsearch.hpp>
#include <parrep/lines.hpp>
#include <parrep/spgraph.hpp>

#include <benchmark/benchmark.h>

using namespace parrep;

namespace
{
    auto full_set(int r, int n) -> StringSet
    {
        StringSet s(r, n);
        for (std::size_t i = 0; i < s.universe(); ++i)
            s.insert(i);
        return s;
    }
}

static void BM_LemmaCheck(benchmark::State & state)
{
    auto check = static_cast<cycles::Check>(state.range(0));
    auto v = static_cast<int>(state.range(1));
    for (auto _ : state)
        benchmark::DoNotOptimize(cycles::run_lemma_check(check, v));
    state.SetLabel(cycles::check_name(check));
}
BENCHMARK(BM_LemmaCheck)->ArgsProduct({{0, 1, 2}, {10, 12}})->Unit(benchmark::kMillisecond);

static void BM_CollapseSetGraph(benchmark::State & state)
{
    auto g = named::set_graph(static_cast<int>(state.range(0)));
    auto d = apply_doubling(g, DoublingStep{g.all_vertices()});
    for (auto _ : state)
        benchmark::DoNotOptimize(find_collapse(d.graph, g.all_vertices()));
}
BENCHMARK(BM_CollapseSetGraph)->DenseRange(2, 4)->Unit(benchmark::kMicrosecond);

static void BM_HomCensus(benchmark::State & state)
{
    auto q = named::qr(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(count_homomorphisms(q, q));
}
BENCHMARK(BM_HomCensus)->DenseRange(3, 6);

static void BM_StringGameValue(benchmark::State & state)
{
    auto g = build_game_gs(3, equidistributed_set(3, 3));
    auto g2 = build_game_gs(3, full_set(3, 2));
    auto n = state.range(0);
    for (auto _ : state)
        benchmark::DoNotOptimize(game_value(n == 3 ? g : g2));
}
BENCHMARK(BM_StringGameValue)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_RepeatedGameValue(benchmark::State & state)
{
    Game g(named::complete({2, 2}), {2, 2}, [](const Edge & e, std::span<const std::size_t> a) {
        return (a[0] ^ a[1]) == (e[0] & e[1]);
    });
    auto g2 = repeat_game(g, 2);
    auto workers = static_cast<unsigned>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(game_value(g2, default_budget, workers));
}
BENCHMARK(BM_RepeatedGameValue)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

static void BM_SpSynthesis(benchmark::State & state)
{
    std::mt19937_64 rng(7);
    std::vector<SPTree> corpus;
    for (int i = 0; i < 50; ++i)
        corpus.push_back(random_sp_tree(rng, static_cast<int>(state.range(0))));
    for (auto _ : state)
        for (auto & t : corpus)
            benchmark::DoNotOptimize(certify_sp(t));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * corpus.size()));
}
BENCHMARK(BM_SpSynthesis)->Arg(6)->Arg(10)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_DensityCoefficient(benchmark::State & state)
{
    auto r = static_cast<int>(state.range(0)), n = static_cast<int>(state.range(1));
    for (auto _ : state)
        benchmark::DoNotOptimize(dhj_coeff(r, n));
}
BENCHMARK(BM_DensityCoefficient)->Args({2, 4})->Args({3, 2})->Unit(benchmark::kMillisecond);

static void BM_HittingExhaustive(benchmark::State & state)
{
    auto dist = build_hitting_distribution(certify_named("Complete:2,2"), named::complete({2, 2}));
    for (auto _ : state)
        benchmark::DoNotOptimize(verify_hitting_exhaustive(dist, 1));
}
BENCHMARK(BM_HittingExhaustive)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();

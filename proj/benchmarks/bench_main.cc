#include <posmt/amalgamation.hh>
#include <posmt/catalog.hh>
#include <posmt/morphism.hh>
#include <posmt/theory.hh>

#include <benchmark/benchmark.h>

using namespace posmt;

static void hom_search(benchmark::State & state)
{
    auto n = int(state.range(0));
    auto z = catalog::cyclic_group(n);
    auto z2 = catalog::cyclic_group(2 * n);
    for (auto _ : state)
        benchmark::DoNotOptimize(enumerate_homs(z, z2).size());
}
BENCHMARK(hom_search)->Arg(2)->Arg(4)->Arg(6);

static void poset_models(benchmark::State & state)
{
    Budget b;
    b.n = int(state.range(0));
    auto t = catalog::partial_orders();
    for (auto _ : state)
        benchmark::DoNotOptimize(models(t, b).size());
    state.counters["models"] = double(models(t, b).size());
}
BENCHMARK(poset_models)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

static void group_models(benchmark::State & state)
{
    Budget b;
    b.n = int(state.range(0));
    auto t = catalog::groups();
    for (auto _ : state)
        benchmark::DoNotOptimize(models(t, b).size());
}
BENCHMARK(group_models)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

static void amalgamate_chains(benchmark::State & state)
{
    AmalgamationProblem p{catalog::point(), catalog::chain2(), catalog::chain2(), {0}, {1},
            uniform_kinds(MorphismKind::Embedding), StructureClass::of(catalog::partial_orders()), state.range(0) != 0};
    p.budget.N = 5;
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_amalgamation(p).value);
}
BENCHMARK(amalgamate_chains)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void immersion_basis(benchmark::State & state)
{
    Budget b;
    b.n = 2;
    b.N = 4;
    auto cls = StructureClass::of(catalog::partial_orders());
    for (auto _ : state)
        benchmark::DoNotOptimize(
                check_basis(catalog::point(), parse_kind_tuple("iihh"), cls, true, b).verdict);
}
BENCHMARK(immersion_basis)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include "gfb/elimination.hpp"
#include "gfb/graph_gen.hpp"
#include "gfb/hard_instance.hpp"

namespace {

void BM_Alg1HardInstance(benchmark::State& state) {
    auto T = static_cast<long long>(state.range(0));
    gfb::Rng gr(3);
    gfb::FeedbackGraph g = gfb::erdos_renyi(8, 0.3, gr);
    gfb::PolicyConfig pc;
    pc.delta = 0.1;
    std::uint64_t rep = 0;
    for (auto _ : state) {
        gfb::Rng rng(gfb::mix64(41, rep++));
        gfb::HardInstance hard = gfb::build_hard_instance(g, 4, T, rng);
        pc.T = T;
        benchmark::DoNotOptimize(
            gfb::alg1_run(hard.instance, hard.schedule, pc, rep).final_regret());
    }
    state.SetItemsProcessed(state.iterations() * T);
}
BENCHMARK(BM_Alg1HardInstance)->Arg(1000)->Arg(10000);

void BM_Alg2RandomSchedule(benchmark::State& state) {
    auto T = static_cast<long long>(state.range(0));
    gfb::FeedbackGraph g = gfb::make_undirected_cycle(5);
    gfb::MeanTable table;
    table.M = 2;
    table.K = 5;
    table.mu = {0.9, 0.5, 0.4, 0.3, 0.2, 0.2, 0.3, 0.4, 0.5, 0.9};
    gfb::BanditInstance instance(g, table);
    gfb::PolicyConfig pc;
    pc.delta = 0.1;
    pc.T = T;
    std::uint64_t rep = 0;
    for (auto _ : state) {
        gfb::Rng rng(gfb::mix64(97, rep++));
        gfb::ContextSchedule schedule = gfb::ContextSchedule::uniform_random(T, 2, rng);
        benchmark::DoNotOptimize(gfb::alg2_run(instance, schedule, pc, rep).final_regret());
    }
    state.SetItemsProcessed(state.iterations() * T);
}
BENCHMARK(BM_Alg2RandomSchedule)->Arg(1000)->Arg(10000);

} // namespace

BENCHMARK_MAIN();

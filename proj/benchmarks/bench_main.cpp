#include <benchmark/benchmark.h>

#include <random>

#include "vanet/contact.hpp"
#include "vanet/metrics.hpp"
#include "vanet/settlement.hpp"
#include "vanet/simulation.hpp"

using namespace vanet;

namespace {

std::vector<Vehicle> scatter(std::size_t n, double side)
{
    std::mt19937_64 rng(n);
    std::uniform_real_distribution<double> u(0.0, side);
    std::vector<Vehicle> vs(n);
    for (std::size_t i = 0; i < n; ++i) {
        vs[i].id = VehicleId{static_cast<std::uint32_t>(i)};
        vs[i].position = {u(rng), u(rng)};
    }
    return vs;
}

// Constant density: about ten neighbours per vehicle at 100 m range.
double side_for(std::size_t n) { return std::sqrt(static_cast<double>(n) * 3.14159 * 1e4 / 10.0); }

void BM_ContactsGrid(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto vs = scatter(n, side_for(n));
    for (auto _ : state) benchmark::DoNotOptimize(detect_contacts(vs, 100.0));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ContactsGrid)->RangeMultiplier(4)->Range(16, 4096)->Complexity();

void BM_ContactsNaive(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto vs = scatter(n, side_for(n));
    for (auto _ : state) benchmark::DoNotOptimize(detect_contacts_naive(vs, 100.0));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ContactsNaive)->RangeMultiplier(4)->Range(16, 4096)->Complexity();

void BM_PaperScenarioRun(benchmark::State& state)
{
    auto s = load_scenario(std::filesystem::path(VANET_SCENARIO_DIR) / "paper.scenario");
    std::uint64_t seed = 1;
    for (auto _ : state) {
        s.seed = seed++;
        benchmark::DoNotOptimize(summarize(run(s)));
    }
}
BENCHMARK(BM_PaperScenarioRun)->Unit(benchmark::kMillisecond);

void BM_SettleProportional(benchmark::State& state)
{
    const auto n = static_cast<std::uint32_t>(state.range(0));
    Packet p;
    p.reward_budget = 100;
    ForwardingTree tree(p.id, VehicleId{0});
    std::vector<ContributionRecord> recs;
    for (std::uint32_t v = 1; v <= n; ++v) {
        tree.add_link({VehicleId{v - 1}, VehicleId{v}, 1.0, {}, {}, 0});
        ContributionRecord r;
        r.vehicle_id = VehicleId{v};
        r.contribution = 1.0 + v;
        recs.push_back(r);
    }
    for (auto _ : state) benchmark::DoNotOptimize(settle_proportional(p, tree, recs));
}
BENCHMARK(BM_SettleProportional)->Range(8, 1024);

}  // namespace

BENCHMARK_MAIN();

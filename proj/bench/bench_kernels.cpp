// Serial reference against the OpenMP paths on the hot loops.
#include "confluence/order_field.hpp"
#include "confluence/pde_reference.hpp"
#include "confluence/temperature_field.hpp"
#include "confluence/weak_residuals.hpp"

#include <benchmark/benchmark.h>

#include <string>

using namespace confluence;

namespace {

const KernelTable& table()
{
    static const KernelTable t = KernelTable::build();
    return t;
}

const Scenario& scenario()
{
    static const Scenario s = load_scenario(std::string(CONFLUENCE_SCENARIO_DIR) + "/symmetric.scn");
    return s;
}

Execution mode(const benchmark::State& state) { return state.range(0) ? Execution::parallel : Execution::serial; }

void label(benchmark::State& state) { state.SetLabel(state.range(0) ? "parallel" : "serial"); }

void BM_KernelTable(benchmark::State& state)
{
    TableOptions opt;
    opt.nodes = 200;
    opt.execution = mode(state);
    for (auto _ : state) benchmark::DoNotOptimize(KernelTable::build(opt));
    label(state);
}
BENCHMARK(BM_KernelTable)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_OrderField(benchmark::State& state)
{
    const FrontModel m(scenario(), table(), 0.0125);
    const FrontState f = m.at(0.45);
    std::vector<double> x(1 << 16);
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = -1.25 + 2.5 * j / (x.size() - 1);
    for (auto _ : state) benchmark::DoNotOptimize(sample_order_field(x, f, mode(state)));
    label(state);
}
BENCHMARK(BM_OrderField)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

void BM_HeatPotentials(benchmark::State& state)
{
    const FrontModel m(scenario(), table(), 0.025);
    const Duhamel d(m);
    std::vector<double> x(512);
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = -1.25 + 2.5 * j / (x.size() - 1);
    for (auto _ : state) benchmark::DoNotOptimize(d.at(x, 0.52, mode(state)));
    label(state);
}
BENCHMARK(BM_HeatPotentials)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Snapshot(benchmark::State& state)
{
    const FrontModel m(scenario(), table(), 0.025);
    const TemperatureModel tm(m);
    const ThetaField theta(tm, solve_q_smooth(tm, default_grid(m)));
    for (auto _ : state) benchmark::DoNotOptimize(Snapshot(theta, 0.3, mode(state)));
    label(state);
}
BENCHMARK(BM_Snapshot)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_FdMarch(benchmark::State& state)
{
    Scenario s = scenario();
    s.t_end = 0.02;
    const FrontModel m(s, table(), 0.0125);
    const TemperatureModel tm(m);
    const FdGrid g = default_fd_grid(s, 0.0125);
    for (auto _ : state) benchmark::DoNotOptimize(solve_system(tm, g, {.frames = 2, .execution = mode(state)}));
    label(state);
}
BENCHMARK(BM_FdMarch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

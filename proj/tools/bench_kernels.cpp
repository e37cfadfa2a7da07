// Serial reference vs OpenMP kernels. Arg 0 = serial, 1 = parallel.
#include <benchmark/benchmark.h>

#include "ec/curve_tracer.hpp"
#include "ec/elliptic_qseries.hpp"
#include "ec/premodular.hpp"

namespace {

ec::Exec exec_of(const benchmark::State& st) { return st.range(0) ? ec::Exec::parallel : ec::Exec::serial; }

void BM_contour_count(benchmark::State& st) {
    ec::ContourParams cp;
    cp.exec = exec_of(st);
    for (auto _ : st) benchmark::DoNotOptimize(ec::count_zeros_Zrs2({1.0 / 6, 1.0 / 6}, {}, cp));
}

void BM_grid_eval(benchmark::State& st) {
    auto f = [](const ec::TauPoint& t) { return ec::eval_E2_prime(t); };
    for (auto _ : st) benchmark::DoNotOptimize(ec::grid_eval(f, 0.0, 1.0, 64, 0.5, 2.0, 64, exec_of(st)));
}

void BM_critical_points(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(ec::critical_points_E2(6, {}, exec_of(st)));
}

void BM_partner_solves(benchmark::State& st) {
    ec::TraceOptions to;
    to.verify_count = false;
    auto tr = ec::trace_curve(ec::Branch::zero, 0.1, 0.9, 17, {}, to);
    for (auto _ : st) benchmark::DoNotOptimize(ec::verify_symmetries(tr.samples, {}, exec_of(st)));
}

}  // namespace

BENCHMARK(BM_contour_count)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_grid_eval)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_critical_points)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_partner_solves)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

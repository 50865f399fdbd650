#include "pdm/driver.hpp"
#include "pdm/oracle.hpp"
#include "pdm/schedule.hpp"
#include "pdm/weight_state.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

using namespace pdm;

// Sparse synthetic set separable through a hyperplane with bias.
WorkingDataset synthetic(std::size_t m, std::size_t dim, std::size_t nnz, double delta) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> normal;
    std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(dim - 1));
    std::vector<double> w(dim);
    for (auto &v : w) v = normal(rng);
    std::vector<SparsePattern> patterns;
    patterns.reserve(m);
    while (patterns.size() < m) {
        std::vector<double> x(dim, 0.0);
        for (std::size_t i = 0; i < nnz; ++i) x[pick(rng)] = 1.0;
        double score = 0.1;
        for (std::size_t i = 0; i < dim; ++i) score += w[i] * x[i];
        if (std::abs(score) < 0.5) continue;
        SparsePattern p;
        p.label = score > 0 ? 1 : -1;
        for (std::uint32_t i = 0; i < dim; ++i) {
            if (x[i] != 0.0) p.features.push_back({i, x[i]});
        }
        patterns.push_back(std::move(p));
    }
    return build_working(patterns, delta, 1.0);
}

const WorkingDataset &medium() {
    static const WorkingDataset ds = synthetic(5000, 120, 14, 1.0);
    return ds;
}

void BM_Dot(benchmark::State &st) {
    const auto &ds = medium();
    WeightState s(ds);
    for (std::size_t k = 0; k < 100; ++k) single_update(s, ds, k);
    std::size_t k = 0;
    for (auto _ : st) {
        benchmark::DoNotOptimize(dot(s, ds, k));
        k = (k + 1) % ds.size();
    }
}
BENCHMARK(BM_Dot);

void BM_SingleUpdate(benchmark::State &st) {
    const auto &ds = medium();
    WeightState s(ds);
    std::size_t k = 0;
    for (auto _ : st) {
        single_update(s, ds, k);
        k = (k + 1) % ds.size();
    }
}
BENCHMARK(BM_SingleUpdate);

void BM_MultipleUpdateCount(benchmark::State &st) {
    const auto &ds = medium();
    WeightState s(ds);
    for (std::size_t k = 0; k < 1000; ++k) single_update(s, ds, k);
    std::size_t k = 0;
    for (auto _ : st) {
        benchmark::DoNotOptimize(multiple_update_count_dynamic(s, ds, k, 0.01));
        k = (k + 1) % ds.size();
    }
}
BENCHMARK(BM_MultipleUpdateCount);

void BM_Train(benchmark::State &st) {
    const auto &ds = medium();
    RunConfig cfg;
    cfg.algorithm = st.range(0) == 0 ? Algorithm::pdm : Algorithm::pdm_succ;
    cfg.epsilon = 0.01;
    std::uint64_t updates = 0;
    for (auto _ : st) {
        const auto r = train(ds, cfg);
        updates = r.report.t_c;
        benchmark::DoNotOptimize(r.report.gamma_prime_d);
    }
    st.counters["updates"] = static_cast<double>(updates);
}
BENCHMARK(BM_Train)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Oracle(benchmark::State &st) {
    const auto ds = synthetic(static_cast<std::size_t>(st.range(0)), 60, 10, 1.0);
    for (auto _ : st) benchmark::DoNotOptimize(gilbert_gamma_d(ds, 1e-8).gamma_d);
}
BENCHMARK(BM_Oracle)->Arg(500)->Arg(4000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

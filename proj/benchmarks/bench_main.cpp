#include "mmsim/agents/baselines.hpp"
#include "mmsim/env/environment.hpp"
#include "mmsim/market/matching.hpp"
#include "mmsim/teacher/qtable.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace mmsim;

namespace {

// A random batch of `n` pending orders against a five-level book.
void batch_auction(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 eng(42);
    std::vector<Order> pending;
    for (std::size_t i = 0; i < n; ++i) {
        Order o;
        o.id = 1000 + i;
        o.side = eng() % 2 ? Side::ask : Side::bid;
        o.price = 500 + static_cast<Ticks>(eng() % 5) - 2;
        o.quantity = 1 + static_cast<Quantity>(eng() % 300);
        o.effective_time = static_cast<Millis>(eng() % 500);
        o.seq = 1000 + i;
        pending.push_back(o);
    }
    for (auto _ : state) {
        state.PauseTiming();
        OrderBook book;
        for (Ticks k = 0; k < 5; ++k) {
            Order a;
            a.id = static_cast<OrderId>(2 * k + 1);
            a.side = Side::ask;
            a.price = 503 + k;
            a.quantity = 500;
            book.rest(a);
            Order b = a;
            b.id = static_cast<OrderId>(2 * k + 2);
            b.side = Side::bid;
            b.price = 497 - k;
            book.rest(b);
        }
        state.ResumeTiming();
        auto r = run_batch_auction(book, pending, 500);
        benchmark::DoNotOptimize(r.fills.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(batch_auction)->Arg(20)->Arg(200)->Arg(2000);

void env_step_foic(benchmark::State& state) {
    EpisodeConfig cfg;
    cfg.horizon = 2000;
    SyntheticConfig syn;
    Environment env(cfg, syn);
    FoicAgent agent;
    env.reset(1);
    for (auto _ : state) {
        if (env.done()) {
            state.PauseTiming();
            env.reset(1);
            state.ResumeTiming();
        }
        benchmark::DoNotOptimize(env.step(agent.act(env.observation())).reward.total);
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(env_step_foic);

void qtable_build(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 eng(7);
    std::vector<double> prices;
    double p = 100.0;
    for (std::size_t i = 0; i < n; ++i) {
        p += static_cast<double>(static_cast<int>(eng() % 5) - 2) * 0.02;
        prices.push_back(p);
    }
    TeacherConfig cfg;
    cfg.grid = default_grid(800);
    cfg.fee = 0.0001;
    for (auto _ : state) {
        QTable q = build_qtable(prices, cfg);
        benchmark::DoNotOptimize(q.values.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(qtable_build)->Arg(1000)->Arg(28800);

}  // namespace

BENCHMARK_MAIN();

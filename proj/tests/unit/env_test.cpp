#include "mmsim/agents/baselines.hpp"
#include "mmsim/env/action.hpp"
#include "mmsim/env/environment.hpp"
#include "mmsim/env/reward.hpp"
#include "mmsim/metrics/report.hpp"
#include "oracles/reference_matcher.hpp"
#include "support/common.hpp"
#include "support/generators.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <memory>

using namespace mmsim;

namespace {

ActionVector act(int da, int db, int va = 0, int vb = 0, int wa = 4, int wb = 4) {
    return ActionVector{{da, db, va, vb, wa, wb}};
}

EpisodeConfig small_config(std::size_t horizon) {
    EpisodeConfig cfg;
    cfg.horizon = horizon;
    return cfg;
}

DataSource replay(std::vector<MarketDataRecord> recs) {
    return std::make_shared<const std::vector<MarketDataRecord>>(std::move(recs));
}

SyntheticConfig busy_market() {
    SyntheticConfig s;
    s.volatility_ticks = 0.8;
    s.market_rate = 1.5;
    return s;
}

}  // namespace

TEST(DecodeAction, IdentityOffsets) {
    ActionGrids g;
    QuoteSet q = decode_action(act(3, 3), 499, 501, g, 0.02);
    ASSERT_TRUE(q.ask && q.bid);
    EXPECT_EQ(q.ask->price, 501);
    EXPECT_EQ(q.bid->price, 499);
    EXPECT_EQ(q.ask->volume, 100);
    EXPECT_EQ(q.ask->wait, 2500);
}

TEST(DecodeAction, SelfCrossGuardLowersBid) {
    ActionGrids g;
    QuoteSet q = decode_action(act(2, 4), 499, 501, g, 0.02);
    EXPECT_EQ(q.ask->price, 500);
    EXPECT_EQ(q.bid->price, 499);
    EXPECT_LT(q.bid->price, q.ask->price);
}

TEST(DecodeAction, GridValues) {
    ActionGrids g;
    QuoteSet q = decode_action(act(6, 0, 2, 1, 0, 3), 499, 501, g, 0.02);
    EXPECT_EQ(q.ask->price, 504);
    EXPECT_EQ(q.bid->price, 496);
    EXPECT_EQ(q.ask->volume, 300);
    EXPECT_EQ(q.bid->volume, 200);
    EXPECT_EQ(q.ask->wait, 500);
    EXPECT_EQ(q.bid->wait, 2000);
    // Every wait is a whole number of 500 ms batches.
    for (Millis w : g.waits) EXPECT_EQ(w % 500, 0);
}

TEST(DecodeAction, MissingSideUnquoted) {
    ActionGrids g;
    QuoteSet q = decode_action(act(3, 3), std::nullopt, 501, g, 0.02);
    EXPECT_TRUE(q.ask);
    EXPECT_FALSE(q.bid);
}

TEST(DecodeAction, OutOfRangeIndexRejected) {
    ActionGrids g;
    EXPECT_ERRC(act(9, 3).validate(g), Errc::action_index_out_of_range);
    EXPECT_ERRC(act(3, 3, 3).validate(g), Errc::action_index_out_of_range);
    EXPECT_ERRC(act(3, 3, 0, 0, 0, -1).validate(g), Errc::action_index_out_of_range);
    EXPECT_EQ(action_dims(g), (std::array<std::size_t, 6>{7, 7, 3, 3, 5, 5}));
}

TEST(Reward, PnlExamples) {
    EXPECT_EQ(compute_pnl({}, 0.02, 10.0, 10.0, 0), 0.0);
    std::vector<AgentFill> one{{Side::ask, 500, 100}};
    EXPECT_NEAR(compute_pnl(one, 0.02, 10.0, 10.0, -100), 1000.0, 1e-9);
    std::vector<AgentFill> two{{Side::ask, 501, 100}, {Side::bid, 499, 100}};
    EXPECT_NEAR(compute_pnl(two, 0.02, 10.0, 10.05, 0), 4.0, 1e-9);
    EXPECT_EQ(pnl_half_ticks(two, 1000, 1005, 0), 2 * (501 - 499) * 100);
}

TEST(Reward, InventoryPenaltyExamples) {
    EXPECT_EQ(inventory_penalty(800, 800, 0.01), 0.0);
    EXPECT_NEAR(inventory_penalty(-900, 800, 0.01), 9.0, 1e-12);
    EXPECT_EQ(inventory_penalty(0, 800, 0.01), 0.0);
}

TEST(Reward, CompensationExamples) {
    EXPECT_EQ(compensation({}, 0.0002, 0.02), 0.0);
    // 2000 of notional: 100 units at 20.00.
    std::vector<AgentFill> f{{Side::bid, 1000, 100}};
    EXPECT_NEAR(compensation(f, 0.0002, 0.02), 0.4, 1e-12);
    EXPECT_EQ(compensation(f, 0.0, 0.02), 0.0);
}

TEST(Reward, ExecutionRiskExamples) {
    std::vector<RiskItem> one{{100, 1000, 1000}};
    EXPECT_EQ(execution_risk(one, 0.0), 0.0);
    EXPECT_NEAR(execution_risk(one, 0.5), 100.0, 1e-12);
    std::vector<RiskItem> two{{100, 0, 1000}, {200, 1000, 1000}};
    EXPECT_NEAR(execution_risk(two, 0.1), 50.0, 1e-12);
    std::vector<RiskItem> never{{100, 5000, 0}};
    EXPECT_EQ(execution_risk(never, 1.0), 0.0);
}

TEST(Reward, Composition) {
    auto r = RewardBreakdown::compose(10, 2, 1, 3);
    EXPECT_EQ(r.total, 6);
}

TEST(Environment, ResetIsDeterministic) {
    Environment a(small_config(100), SyntheticConfig{});
    Environment b(small_config(100), SyntheticConfig{});
    EXPECT_EQ(a.reset(5).state, b.reset(5).state);
    StateVector first = a.observation().state;
    a.step(act(3, 3));
    EXPECT_EQ(a.reset(5).state, first);
}

TEST(Environment, ResetRejectsShortData) {
    Environment env(small_config(100), replay(testing_support::flat_records(100, 499, 501)));
    EXPECT_ERRC(env.reset(1), Errc::insufficient_data);
    Environment ok(small_config(99), replay(testing_support::flat_records(100, 499, 501)));
    EXPECT_NO_THROW(ok.reset(1));
}

TEST(Environment, InitialNetValueEqualsCash) {
    EpisodeConfig cfg = small_config(10);
    cfg.initial_cash = 12345.0;
    Environment env(cfg, SyntheticConfig{});
    const Observation& o = env.reset(1);
    EXPECT_EQ(o.inventory, 0);
    EXPECT_NEAR(o.net_value, 12345.0, 1e-9);
    EXPECT_NEAR(o.cash, 12345.0, 1e-9);
}

TEST(Environment, StateLayout) {
    Environment env(small_config(50), SyntheticConfig{});
    env.reset(3);
    EXPECT_EQ(env.observation().state.size(), 90u);
    EXPECT_EQ(kQueueSize, 70u);
    for (int i = 0; i < 20; ++i) env.step(act(3, 3));
    const auto& s = env.observation().state;
    const auto& ind = env.observation().indicators;
    for (std::size_t i = 0; i < IndicatorVector::count; ++i) EXPECT_EQ(s[i], ind.values[i]);
    EXPECT_EQ(s[16], static_cast<double>(env.portfolio().inventory));
    EXPECT_NEAR(s[18], env.observation().net_value, 1e-9);
    // Ask slots carry side +1, bid slots -1; unused slots are zero.
    for (std::size_t slot = 0; slot < kQueueSlots; ++slot) {
        const double side = s[20 + slot * kQueueFields + 6];
        const double qty = s[20 + slot * kQueueFields + 3];
        if (qty == 0) {
            EXPECT_EQ(side, 0.0);
        } else {
            EXPECT_EQ(side, slot < 5 ? 1.0 : -1.0);
        }
    }
}

TEST(Environment, ZeroQuotesGiveZeroReward) {
    Environment env(small_config(200), SyntheticConfig{});
    env.reset(1);
    while (!env.done()) {
        const StepRecord& r = env.step(QuoteSet{});
        EXPECT_EQ(r.reward.total, 0.0);
        EXPECT_EQ(r.reward.pnl, 0.0);
        EXPECT_EQ(r.reward.er, 0.0);
        EXPECT_EQ(r.q_after, 0);
    }
}

TEST(Environment, SteppingAfterDoneFails) {
    Environment env(small_config(3), SyntheticConfig{});
    EXPECT_ERRC(env.step(QuoteSet{}), Errc::stepped_after_done);
    env.reset(1);
    for (int i = 0; i < 3; ++i) env.step(QuoteSet{});
    EXPECT_TRUE(env.done());
    EXPECT_ERRC(env.step(QuoteSet{}), Errc::stepped_after_done);
    EXPECT_ERRC(env.step(act(3, 3)), Errc::stepped_after_done);
}

TEST(Environment, BadActionIndexRejected) {
    Environment env(small_config(3), SyntheticConfig{});
    env.reset(1);
    EXPECT_ERRC(env.step(act(7, 3)), Errc::action_index_out_of_range);
}

TEST(Environment, SideAtCapIsSkipped) {
    EpisodeConfig cfg = small_config(20);
    Environment env(cfg, replay(testing_support::flat_records(30, 499, 501)));
    env.reset(1);
    QuoteSet asks_only;
    asks_only.ask = Quote{505, 100, 0};
    for (int i = 0; i < 5; ++i) EXPECT_FALSE(env.step(asks_only).ask_skipped);
    EXPECT_EQ(env.exchange().live_agent_orders(Side::ask), 5u);
    QuoteSet both = asks_only;
    both.bid = Quote{495, 100, 0};
    const StepRecord& r = env.step(both);
    EXPECT_TRUE(r.ask_skipped);
    EXPECT_FALSE(r.bid_skipped);
    EXPECT_TRUE(r.bid_quote);
    EXPECT_FALSE(r.ask_quote);
    EXPECT_EQ(env.exchange().live_agent_orders(Side::ask), 5u);
}

TEST(Environment, QuoteCrossingReplayedAskFills) {
    Environment env(small_config(5), replay(testing_support::flat_records(10, 499, 501)));
    env.reset(1);
    std::vector<Order> resting;
    env.exchange().book().for_each_level(Side::ask, [&](const PriceLevel& lvl) {
        for (const Order& o : lvl.queue) resting.push_back(o);
    });
    QuoteSet q;
    q.bid = Quote{501, 100, 2500};
    const StepRecord& r = env.step(q);

    Order mine;
    mine.id = 1'000'000;
    mine.side = Side::bid;
    mine.price = 501;
    mine.quantity = 100;
    mine.owner = Owner::agent;
    auto expect = oracle::reference_match(resting, {mine}, r.time);
    ASSERT_EQ(r.fills.size(), expect.fills.size());
    Quantity vol = 0;
    for (std::size_t i = 0; i < r.fills.size(); ++i) {
        EXPECT_EQ(r.fills[i].price, expect.fills[i].price);
        EXPECT_EQ(r.fills[i].volume, expect.fills[i].volume);
        EXPECT_EQ(r.fills[i].side, Side::bid);
        vol += r.fills[i].volume;
    }
    EXPECT_EQ(vol, 100);
    EXPECT_EQ(r.q_after, r.q_before + vol);
    EXPECT_EQ(r.fill_records, expect.fills.size());
}

TEST(Environment, RestingAgentFillsWhenDepthCrossesIt) {
    // Book steps up by two ticks after the first interval: a resting ask at
    // 501 is taken by the new bid depth at the agent's price.
    auto recs = testing_support::flat_records(10, 499, 501);
    auto up = testing_support::flat_records(10, 502, 504);
    for (std::size_t k = 2; k < recs.size(); ++k) {
        recs[k].snapshot = up[k].snapshot;
        recs[k].snapshot.ts = static_cast<Millis>(k) * 500;
    }
    Environment env(small_config(5), replay(recs));
    env.reset(1);
    QuoteSet q;
    q.ask = Quote{501, 100, 0};
    const StepRecord& first = env.step(q);
    EXPECT_TRUE(first.fills.empty());
    const StepRecord& second = env.step(QuoteSet{});
    ASSERT_EQ(second.fills.size(), 1u);
    EXPECT_EQ(second.fills[0].price, 501);
    EXPECT_EQ(second.fills[0].side, Side::ask);
    EXPECT_EQ(second.q_after, -100);
}

TEST(Environment, TraceIsDeterministic) {
    auto run = [] {
        Environment env(small_config(500), busy_market());
        RandomAgent agent(3);
        env.reset(9);
        while (!env.done()) env.step(agent.act(env.observation()));
        return trace_hash(env.trace(), 0.02);
    };
    EXPECT_EQ(run(), run());
}

// Reference recomputation of each reward component from a trace row.
struct RecomputedReward {
    std::int64_t pnl2 = 0;
    double pnl = 0, ip = 0, comp = 0, er = 0;
};

RecomputedReward recompute(const StepRecord& r, const EpisodeConfig& cfg) {
    RecomputedReward out;
    std::int64_t flow = 0;
    std::int64_t gross = 0;
    for (const AgentFill& f : r.fills) {
        flow += (f.side == Side::ask ? 1 : -1) * f.price * f.volume;
        gross += f.price * f.volume;
    }
    out.pnl2 = 2 * flow + (r.mid2_after - r.mid2_before) * r.q_after;
    out.pnl = static_cast<double>(out.pnl2) * cfg.tick * 0.5;
    const Quantity aq = r.q_after < 0 ? -r.q_after : r.q_after;
    out.ip = aq > cfg.inventory_limit ? cfg.eta * static_cast<double>(aq) : 0.0;
    out.comp = cfg.beta * static_cast<double>(gross) * cfg.tick;
    for (const RiskItem& it : r.risk) {
        if (it.wait > 0) {
            out.er += r.sigma * static_cast<double>(it.volume) *
                      (1.0 + static_cast<double>(it.elapsed) / static_cast<double>(it.wait));
        }
    }
    return out;
}

class EpisodeProperties : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(EpisodeProperties, AccountingRewardAndLatencyInvariants) {
    EpisodeConfig cfg = small_config(1500);
    cfg.inventory_limit = 300;
    Environment env(cfg, busy_market());
    RandomAgent agent(GetParam());
    env.reset(GetParam());
    std::int64_t cash_prev = env.portfolio().cash_ticks;
    double nv_prev = env.observation().net_value;
    Quantity exec_prev = 0;
    std::size_t legs = 0;
    std::size_t expiring = 0;
    while (!env.done()) {
        const StepRecord& r = env.step(agent.act(env.observation()));
        legs += r.fills.size();
        for (const RiskItem& it : r.risk) expiring += it.wait > 0;

        // Accounting identity in exact half ticks and in currency.
        const std::int64_t dnv2 = 2 * (r.cash_ticks - cash_prev) + r.q_after * r.mid2_after - r.q_before * r.mid2_before;
        const auto rc = recompute(r, cfg);
        ASSERT_EQ(rc.pnl2, dnv2 - (r.q_after - r.q_before) * r.mid2_before) << "step " << r.t;
        const double mid_before = static_cast<double>(r.mid2_before) * cfg.tick / 2.0;
        ASSERT_NEAR(r.reward.pnl, (r.net_value - nv_prev) - static_cast<double>(r.q_after - r.q_before) * mid_before, 1e-9);

        // Reward decomposition reproduces exactly.
        ASSERT_EQ(r.reward.pnl, rc.pnl);
        ASSERT_EQ(r.reward.ip, rc.ip);
        ASSERT_EQ(r.reward.comp, rc.comp);
        ASSERT_EQ(r.reward.er, rc.er);
        ASSERT_EQ(r.reward.total, r.reward.pnl - r.reward.ip + r.reward.comp - r.reward.er);

        // No agent fill before submit + minimum latency.
        for (const AgentFill& f : r.fills) {
            const Order* o = env.exchange().submitted(f.order);
            ASSERT_NE(o, nullptr);
            ASSERT_GE(f.time, o->submit_time + cfg.latency.low_ms);
            ASSERT_GE(f.time, o->effective_time);
        }
        // Expired wait-time orders are gone by the batch at or after expiry.
        for (Side side : {Side::ask, Side::bid}) {
            for (const Order& o : env.exchange().resting_agent_orders(side)) {
                ASSERT_FALSE(o.expires() && o.expiry_time() <= r.time) << "order " << o.id;
            }
            ASSERT_LE(env.exchange().live_agent_orders(side), cfg.max_orders_per_side);
        }
        ASSERT_FALSE(env.exchange().book().crossed());
        ASSERT_GE(r.executed_volume, exec_prev);
        ASSERT_TRUE(env.observation().indicators.consistent());
        ASSERT_EQ(env.observation().state.size(), 90u);

        cash_prev = r.cash_ticks;
        nv_prev = r.net_value;
        exec_prev = r.executed_volume;
    }
    EXPECT_GT(legs, 50u);
    EXPECT_GT(expiring, 0u);
}

INSTANTIATE_TEST_SUITE_P(Seeds, EpisodeProperties, ::testing::Values(1u, 2u, 3u, 4u, 5u));

TEST(Environment, StartIndexOffsetsReplay) {
    auto recs = testing_support::flat_records(50, 499, 501);
    for (std::size_t k = 20; k < 50; ++k) {
        for (auto& p : recs[k].snapshot.bid_px) p += 10;
        for (auto& p : recs[k].snapshot.ask_px) p += 10;
    }
    EpisodeConfig cfg = small_config(10);
    cfg.start_index = 20;
    Environment env(cfg, replay(recs));
    const Observation& o = env.reset(1);
    EXPECT_EQ(o.best_bid, 509);
    EXPECT_EQ(o.time, 20 * 500);
}

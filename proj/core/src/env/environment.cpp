#include "mmsim/env/environment.hpp"

#include "mmsim/common/error.hpp"
#include "mmsim/common/rng.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace mmsim {

namespace {

constexpr std::uint64_t kLatencyStream = 2;

double currency(Ticks t, double tick) { return static_cast<double>(t) * tick; }

double mid_of(const MarketSnapshot& s, double tick) {
    return static_cast<double>(s.mid_half_ticks()) * tick * 0.5;
}

std::vector<Ticks> trade_prices(const MarketDataRecord& rec) {
    std::vector<Ticks> out;
    out.reserve(rec.trades.size());
    for (const TradePrint& t : rec.trades) out.push_back(t.price);
    return out;
}

double mean_competitiveness(const Exchange& ex, Side side) {
    auto orders = ex.resting_agent_orders(side);
    if (orders.empty()) return 0.0;
    double sum = 0.0;
    for (const Order& o : orders) {
        if (auto ctx = queue_context(ex.book(), o.id)) sum += competitiveness(*ctx, o.price, o.quantity).value;
    }
    return sum / static_cast<double>(orders.size());
}

}  // namespace

StateVector build_state(const IndicatorVector& indicators, const PortfolioState& portfolio,
                        double mid, double tick, const Exchange& exchange, Millis episode_start) {
    StateVector s{};
    std::size_t i = 0;
    for (double v : indicators.values) s[i++] = v;
    s[i++] = static_cast<double>(portfolio.inventory);
    const double cash = static_cast<double>(portfolio.cash_ticks) * tick;
    s[i++] = cash;
    s[i++] = cash + static_cast<double>(portfolio.inventory) * mid;
    s[i++] = static_cast<double>(portfolio.executed_volume);

    const std::size_t per_side = kQueueSlots / 2;
    for (Side side : {Side::ask, Side::bid}) {
        const std::size_t base = IndicatorVector::count + kPortfolioFields +
                                 (side == Side::ask ? 0 : per_side * kQueueFields);
        auto orders = exchange.resting_agent_orders(side);
        for (std::size_t slot = 0; slot < std::min(per_side, orders.size()); ++slot) {
            const Order& o = orders[slot];
            double* f = &s[base + slot * kQueueFields];
            if (auto ctx = queue_context(exchange.book(), o.id)) {
                f[0] = rqp(*ctx);
                f[1] = competitiveness(*ctx, o.price, o.quantity).value;
            }
            f[2] = currency(o.price, tick);
            f[3] = static_cast<double>(o.quantity);
            f[4] = static_cast<double>(o.effective_time - episode_start);
            f[5] = static_cast<double>(o.wait_time);
            f[6] = side == Side::ask ? 1.0 : -1.0;
        }
    }
    return s;
}

Environment::Environment(EpisodeConfig config, DataSource source)
    : config_(std::move(config)), source_(std::move(source)), vol_(config_.vol_window) {
    config_.validate();
    if (auto* recs = std::get_if<0>(&source_)) {
        if (!*recs) throw Error(Errc::insufficient_data, "no market data records supplied");
        records_ = *recs;
    }
}

std::span<const MarketDataRecord> Environment::records() const noexcept {
    if (!records_) return {};
    return {records_->data(), records_->size()};
}

const MarketDataRecord& Environment::record(std::size_t k) const { return (*records_)[k]; }

DepthSnapshot Environment::depth_of(const MarketSnapshot& s) const {
    DepthSnapshot d;
    for (std::size_t i = 0; i < kSnapshotLevels; ++i) {
        if (s.bid_vol[i] > 0) d.bids.push_back({s.bid_px[i], s.bid_vol[i]});
        if (s.ask_vol[i] > 0) d.asks.push_back({s.ask_px[i], s.ask_vol[i]});
    }
    return d;
}

const Observation& Environment::reset(std::uint64_t seed) {
    const std::size_t needed = config_.start_index + config_.horizon + 1;
    if (auto* synth = std::get_if<SyntheticConfig>(&source_)) {
        SyntheticConfig cfg = *synth;
        cfg.seed = seed;
        cfg.tick = config_.tick;
        cfg.interval = config_.batch_interval;
        cfg.steps = needed;
        records_ = std::make_shared<const std::vector<MarketDataRecord>>(generate_synthetic(cfg));
    }
    if (records_->size() < needed) {
        throw Error(Errc::insufficient_data,
                    fmt::format("episode needs {} records from index {}, source has {}",
                                config_.horizon + 1, config_.start_index, records_->size()));
    }

    exchange_ = std::make_unique<Exchange>(config_.latency, mix_seed(seed, kLatencyStream));
    portfolio_ = {};
    portfolio_.cash_ticks = static_cast<std::int64_t>(std::llround(config_.initial_cash / config_.tick));
    vol_ = VolatilityWindow(config_.vol_window);
    mids_.clear();
    mids_.reserve(config_.horizon + 1);
    trace_.clear();
    trace_.reserve(config_.horizon);
    t_ = 0;
    started_ = true;

    const MarketDataRecord& first = record(config_.start_index);
    exchange_->sync_depth(depth_of(first.snapshot), first.snapshot.ts, config_.replay_lot);
    prev_close_ = first.snapshot.last_px;
    auto prices = trade_prices(first);
    refresh_observation(first, prices);
    return obs_;
}

void Environment::refresh_observation(const MarketDataRecord& rec, std::span<const Ticks> prices) {
    const double tick = config_.tick;
    const MarketSnapshot& s = rec.snapshot;
    const double mid = mid_of(s, tick);
    vol_.push(mid);
    mids_.push_back(mid);

    IndicatorVector ind;
    Ohlc bar = ohlc(prices, prev_close_);
    prev_close_ = bar.close;
    ind[IndicatorVector::open] = currency(bar.open, tick);
    ind[IndicatorVector::high] = currency(bar.high, tick);
    ind[IndicatorVector::low] = currency(bar.low, tick);
    ind[IndicatorVector::close] = currency(bar.close, tick);
    for (std::size_t i = 0; i < 3; ++i) {
        ind.values[IndicatorVector::imbalance_1 + i] = static_cast<double>(imbalance(s, i + 1));
        ind.values[IndicatorVector::order_flow_1 + i] =
            rec.has_events ? static_cast<double>(order_flow(rec.events[i])) : 0.0;
    }
    ind[IndicatorVector::best_bid] = currency(s.best_bid(), tick);
    ind[IndicatorVector::best_ask] = currency(s.best_ask(), tick);
    ind[IndicatorVector::spread] = currency(s.best_ask() - s.best_bid(), tick);
    ind[IndicatorVector::mid] = mid;
    ind[IndicatorVector::competitiveness_ask] = mean_competitiveness(*exchange_, Side::ask);
    ind[IndicatorVector::competitiveness_bid] = mean_competitiveness(*exchange_, Side::bid);

    const Millis episode_start = record(config_.start_index).snapshot.ts;
    obs_.step = t_;
    obs_.horizon = config_.horizon;
    obs_.time = s.ts;
    obs_.snapshot = &s;
    obs_.best_bid = s.bid_vol[0] > 0 ? std::optional<Ticks>(s.best_bid()) : std::nullopt;
    obs_.best_ask = s.ask_vol[0] > 0 ? std::optional<Ticks>(s.best_ask()) : std::nullopt;
    obs_.tick = tick;
    obs_.mid = mid;
    obs_.sigma = vol_.sigma();
    obs_.inventory = portfolio_.inventory;
    obs_.cash = static_cast<double>(portfolio_.cash_ticks) * tick;
    obs_.net_value = static_cast<double>(2 * portfolio_.cash_ticks + portfolio_.inventory * s.mid_half_ticks()) *
                     tick * 0.5;
    obs_.inventory_limit = config_.inventory_limit;
    obs_.live_asks = exchange_->live_agent_orders(Side::ask);
    obs_.live_bids = exchange_->live_agent_orders(Side::bid);
    obs_.mids = mids_;
    obs_.grids = &config_.grids;
    obs_.indicators = ind;
    obs_.state = build_state(ind, portfolio_, mid, tick, *exchange_, episode_start);
}

std::vector<RiskItem> Environment::risk_items(Millis now) const {
    std::vector<RiskItem> items;
    for (Side side : {Side::ask, Side::bid}) {
        for (const Order& o : exchange_->resting_agent_orders(side)) {
            items.push_back({o.quantity, std::max<Millis>(0, now - o.effective_time), o.wait_time});
        }
    }
    for (const Order& o : exchange_->pending()) {
        if (o.owner != Owner::agent || o.kind != OrderKind::limit) continue;
        items.push_back({o.quantity, std::max<Millis>(0, now - o.effective_time), o.wait_time});
    }
    return items;
}

const StepRecord& Environment::step(const ActionVector& action) {
    if (!started_ || done()) throw Error(Errc::stepped_after_done, "episode is finished; call reset");
    return step(decode_action(action, obs_.best_bid, obs_.best_ask, config_.grids, config_.tick));
}

const StepRecord& Environment::step(const QuoteSet& quotes) {
    if (!started_ || done()) throw Error(Errc::stepped_after_done, "episode is finished; call reset");
    const double tick = config_.tick;
    const std::size_t k = config_.start_index + t_;
    const MarketDataRecord& cur = record(k);
    const MarketDataRecord& next = record(k + 1);
    const Millis now = cur.snapshot.ts;
    const Millis batch_time = next.snapshot.ts;

    StepRecord r;
    r.t = t_;
    r.time = batch_time;
    r.mid2_before = cur.snapshot.mid_half_ticks();
    r.q_before = portfolio_.inventory;
    r.trend = quotes.trend;

    if (quotes.liquidation && quotes.liquidation->quantity > 0) {
        exchange_->submit({quotes.liquidation->side, OrderKind::market, 0, quotes.liquidation->quantity, 0},
                          now);
        r.liquidation = quotes.liquidation;
    }
    auto place = [&](Side side, const std::optional<Quote>& q, std::optional<Quote>& placed, bool& skipped) {
        if (!q) return;
        if (exchange_->live_agent_orders(side) >= config_.max_orders_per_side) {
            skipped = true;
            return;
        }
        exchange_->submit({side, OrderKind::limit, q->price, q->volume, q->wait}, now);
        placed = q;
    };
    place(Side::ask, quotes.ask, r.ask_quote, r.ask_skipped);
    place(Side::bid, quotes.bid, r.bid_quote, r.bid_skipped);

    exchange_->cancel_expired(batch_time);

    // The interval's trades arrive as aggressors, classified against the
    // mid that preceded them.
    for (const TradePrint& tp : next.trades) {
        if (tp.volume <= 0 || tp.price <= 0) continue;
        Side side = 2 * tp.price >= r.mid2_before ? Side::bid : Side::ask;
        exchange_->submit_exogenous({side, OrderKind::limit, tp.price, tp.volume, 0}, batch_time);
    }
    BatchResult batch = exchange_->run_batch(batch_time);
    std::vector<Fill> synced = exchange_->sync_depth(depth_of(next.snapshot), batch_time, config_.replay_lot);

    auto settle = [&](const Fill& f) {
        if (!f.agent_involved) return;
        ++r.fill_records;
        if (f.maker_owner == Owner::agent) r.fills.push_back({f.maker_side, f.price, f.volume, f.maker_id, f.time});
        if (f.taker_owner == Owner::agent) r.fills.push_back({f.taker_side(), f.price, f.volume, f.taker_id, f.time});
    };
    for (const Fill& f : batch.fills) settle(f);
    for (const Fill& f : synced) settle(f);
    for (const AgentFill& leg : r.fills) {
        if (leg.side == Side::ask) {
            portfolio_.inventory -= leg.volume;
            portfolio_.cash_ticks += leg.price * leg.volume;
        } else {
            portfolio_.inventory += leg.volume;
            portfolio_.cash_ticks -= leg.price * leg.volume;
        }
        portfolio_.executed_volume += leg.volume;
    }

    ++t_;
    auto prices = trade_prices(next);
    refresh_observation(next, prices);

    r.mid2_after = next.snapshot.mid_half_ticks();
    r.q_after = portfolio_.inventory;
    r.cash_ticks = portfolio_.cash_ticks;
    r.mid = obs_.mid;
    r.cash = obs_.cash;
    r.net_value = obs_.net_value;
    r.executed_volume = portfolio_.executed_volume;
    r.sigma = obs_.sigma;
    r.risk = risk_items(batch_time);

    const double pnl =
        static_cast<double>(pnl_half_ticks(r.fills, r.mid2_before, r.mid2_after, r.q_after)) * tick * 0.5;
    r.reward = RewardBreakdown::compose(pnl, inventory_penalty(r.q_after, config_.inventory_limit, config_.eta),
                                        compensation(r.fills, config_.beta, tick),
                                        execution_risk(r.risk, r.sigma));
    trace_.push_back(std::move(r));
    return trace_.back();
}

}  // namespace mmsim

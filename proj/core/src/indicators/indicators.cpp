#include "mmsim/indicators/indicators.hpp"

#include "mmsim/common/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace mmsim {

bool MarketSnapshot::well_formed() const noexcept {
    for (std::size_t i = 1; i < kSnapshotLevels; ++i) {
        if (bid_px[i] >= bid_px[i - 1] || ask_px[i] <= ask_px[i - 1]) return false;
    }
    for (std::size_t i = 0; i < kSnapshotLevels; ++i) {
        if (bid_vol[i] < 0 || ask_vol[i] < 0) return false;
    }
    return bid_px[0] < ask_px[0] && bid_px[kSnapshotLevels - 1] > 0;
}

Ohlc ohlc(std::span<const Ticks> trade_prices, Ticks prev_close) {
    if (trade_prices.empty()) return {prev_close, prev_close, prev_close, prev_close};
    auto [lo, hi] = std::minmax_element(trade_prices.begin(), trade_prices.end());
    return {trade_prices.front(), *hi, *lo, trade_prices.back()};
}

Quantity imbalance(const MarketSnapshot& snapshot, std::size_t level) {
    if (level < 1 || level > kSnapshotLevels) {
        throw Error(Errc::level_out_of_range, "imbalance level must be in [1, 5], got " +
                                                  std::to_string(level));
    }
    return snapshot.bid_vol[level - 1] - snapshot.ask_vol[level - 1];
}

std::int64_t order_flow(const LevelEvents& events) {
    return events.new_orders - events.cancellations + events.modifications;
}

std::optional<QueueContext> queue_context(const OrderBook& book, OrderId id) {
    const Order* order = book.find(id);
    if (!order) return std::nullopt;
    const PriceLevel* lvl = book.level(order->side, order->price);
    QueueContext ctx;
    bool seen = false;
    for (const Order& o : lvl->queue) {
        if (o.id == id) {
            seen = true;
        } else if (!seen) {
            ++ctx.l_front;
            ctx.v_front += o.quantity;
        } else {
            ++ctx.l_behind;
        }
    }
    ctx.v_total = lvl->total_volume;
    ctx.v_avg = static_cast<double>(lvl->total_volume) / static_cast<double>(lvl->queue.size());
    ctx.p_best = *book.best(order->side);
    return ctx;
}

double rqp(const QueueContext& ctx) {
    std::int64_t n = ctx.l_front + ctx.l_behind;
    if (n == 0) return 0.0;
    return static_cast<double>(ctx.l_front) / static_cast<double>(n);
}

Competitiveness competitiveness(const QueueContext& ctx, Ticks price, Quantity volume) {
    if (ctx.v_total <= 0 || ctx.v_avg <= 0.0 || ctx.p_best <= 0) return {0.0, true};
    double price_ratio = static_cast<double>(price) / static_cast<double>(ctx.p_best);
    double queue_factor =
        1.0 - static_cast<double>(ctx.v_front) / static_cast<double>(ctx.v_total);
    double volume_ratio = static_cast<double>(volume) / ctx.v_avg;
    return {price_ratio * queue_factor * volume_ratio, false};
}

void VolatilityWindow::push(double mid) {
    mids_.push_back(mid);
    while (mids_.size() > max_diffs_ + 1) mids_.pop_front();
}

double VolatilityWindow::sigma() const {
    if (mids_.size() < 3) return 0.0;
    const std::size_t n = mids_.size() - 1;
    double mean = 0.0;
    for (std::size_t i = 1; i < mids_.size(); ++i) mean += mids_[i] - mids_[i - 1];
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 1; i < mids_.size(); ++i) {
        double d = (mids_[i] - mids_[i - 1]) - mean;
        ss += d * d;
    }
    return std::sqrt(ss / static_cast<double>(n - 1));
}

MidVol mid_and_vol(std::span<const MarketSnapshot> snapshots, double tick,
                   std::size_t max_differences) {
    if (snapshots.empty()) return {};
    VolatilityWindow window(max_differences);
    std::size_t start = snapshots.size() > max_differences + 1
                            ? snapshots.size() - (max_differences + 1)
                            : 0;
    for (std::size_t i = start; i < snapshots.size(); ++i) {
        window.push(static_cast<double>(snapshots[i].mid_half_ticks()) * tick / 2.0);
    }
    return {static_cast<double>(snapshots.back().mid_half_ticks()) * tick / 2.0, window.sigma()};
}

bool IndicatorVector::consistent(double tolerance) const noexcept {
    const auto& v = values;
    if (!(v[spread] > 0.0)) return false;
    if (std::abs(v[spread] - (v[best_ask] - v[best_bid])) > tolerance) return false;
    if (std::abs(v[mid] - (v[best_ask] + v[best_bid]) / 2.0) > tolerance) return false;
    return v[low] <= v[open] && v[open] <= v[high] && v[low] <= v[close] && v[close] <= v[high];
}

}  // namespace mmsim

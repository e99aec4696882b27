#pragma once

#include "mmsim/common/types.hpp"
#include "mmsim/indicators/snapshot.hpp"
#include "mmsim/market/order_book.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>

namespace mmsim {

struct Ohlc {
    Ticks open = 0;
    Ticks high = 0;
    Ticks low = 0;
    Ticks close = 0;
};

/// OHLC over the interval's trade prices; all four equal prev_close when the
/// interval had no trades.
Ohlc ohlc(std::span<const Ticks> trade_prices, Ticks prev_close);

/// I_i = bid volume - ask volume at 1-based level i. Throws LevelOutOfRange.
Quantity imbalance(const MarketSnapshot& snapshot, std::size_t level);

struct LevelEvents {
    std::int64_t new_orders = 0;
    std::int64_t cancellations = 0;
    std::int64_t modifications = 0;
};

/// OF_i = N_i - C_i + M_i.
std::int64_t order_flow(const LevelEvents& events);

/// Where a submitted order sits in its price level.
struct QueueContext {
    std::int64_t l_front = 0;
    std::int64_t l_behind = 0;
    Quantity v_front = 0;
    Quantity v_total = 0;
    double v_avg = 0.0;
    Ticks p_best = 0;  // most competitive price on the order's side
};

/// Queue context of a resting order, or nullopt when it is not in the book.
std::optional<QueueContext> queue_context(const OrderBook& book, OrderId id);

/// l_front / (l_front + l_behind); 0 for the sole order at a level.
double rqp(const QueueContext& ctx);

struct Competitiveness {
    double value = 0.0;
    bool degenerate = false;  // V_total, V_avg or P_best not positive
};

/// (P / P_best) * (1 - V_front / V_total) * (V / V_avg).
Competitiveness competitiveness(const QueueContext& ctx, Ticks price, Quantity volume);

/// Rolling window of mid prices; sigma is the sample standard deviation of
/// the one-step differences it holds (at most `max_differences`).
class VolatilityWindow {
public:
    explicit VolatilityWindow(std::size_t max_differences = 20) : max_diffs_(max_differences) {}

    void push(double mid);
    void clear() { mids_.clear(); }
    double sigma() const;
    std::size_t size() const noexcept { return mids_.size(); }

private:
    std::size_t max_diffs_;
    std::deque<double> mids_;
};

struct MidVol {
    double mid = 0.0;
    double sigma = 0.0;
};

/// Mid of the last snapshot and volatility over the trailing window, both in
/// currency units.
MidVol mid_and_vol(std::span<const MarketSnapshot> snapshots, double tick,
                   std::size_t max_differences = 20);

/// The 16 market indicators, in state-vector order.
struct IndicatorVector {
    enum Slot : std::size_t {
        open, high, low, close,
        imbalance_1, imbalance_2, imbalance_3,
        order_flow_1, order_flow_2, order_flow_3,
        best_bid, best_ask, spread, mid,
        competitiveness_ask, competitiveness_bid,
        count
    };
    std::array<double, count> values{};

    double& operator[](Slot s) noexcept { return values[s]; }
    double operator[](Slot s) const noexcept { return values[s]; }

    /// spread > 0, mid = (bid + ask) / 2 and low <= open, close <= high.
    bool consistent(double tolerance = 1e-9) const noexcept;
};

}  // namespace mmsim

#pragma once

#include "mmsim/common/rng.hpp"
#include "mmsim/market/latency.hpp"
#include "mmsim/market/matching.hpp"
#include "mmsim/market/order_book.hpp"

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

namespace mmsim {

struct DepthLevel {
    Ticks price = 0;
    Quantity volume = 0;
};

/// Displayed exogenous depth, best level first on each side.
struct DepthSnapshot {
    std::vector<DepthLevel> bids;
    std::vector<DepthLevel> asks;
};

/// The exchange: latency-delayed order entry, scheduled expiry and batch
/// clearing over one OrderBook. Single-threaded; one instance per episode.
class Exchange {
public:
    Exchange(LatencyModel latency, std::uint64_t seed, std::size_t depth = 5);

    /// Agent order entry. effective_time = now + sampled latency; the order
    /// waits in the pending queue until a batch at or after that time.
    /// Throws NonPositiveQuantity.
    Order submit(const OrderIntent& intent, Millis now);
    /// Exogenous (replayed) flow; no latency is applied.
    Order submit_exogenous(const OrderIntent& intent, Millis effective_time);

    /// Removes agent orders with a wait time whose expiry t_e + t_w <= now,
    /// from the book and from the pending queue.
    std::vector<Order> cancel_expired(Millis now);

    /// Runs the auction over every pending order with effective_time <= batch_time.
    BatchResult run_batch(Millis batch_time);

    /// Replaces exogenous resting depth with `snapshot`, keeping each agent
    /// order behind the exogenous volume that was ahead of it (capped by the
    /// new displayed volume). New depth that crosses resting agent orders
    /// trades against them at the agent's price. Exogenous depth is
    /// materialized as FIFO lots of at most `lot` units.
    std::vector<Fill> sync_depth(const DepthSnapshot& snapshot, Millis time, Quantity lot);

    std::vector<Quantity> cancel_proportional(std::span<const OrderId> ids, double fraction);

    const OrderBook& book() const noexcept { return book_; }
    const std::vector<Order>& pending() const noexcept { return pending_; }
    const LatencyModel& latency() const noexcept { return latency_; }

    /// Agent order exactly as accepted (original quantity), or nullptr.
    const Order* submitted(OrderId id) const;
    /// Agent orders still live (resting or pending) on `side`.
    std::size_t live_agent_orders(Side side) const;
    /// Resting agent orders on `side`, sorted by (effective_time, seq).
    std::vector<Order> resting_agent_orders(Side side) const;

private:
    Order accept(const OrderIntent& intent, Millis now, Millis effective_time, Owner owner);
    void prune_live();

    LatencyModel latency_;
    Rng rng_;
    OrderBook book_;
    std::vector<Order> pending_;
    std::unordered_map<OrderId, Order> registry_;
    std::vector<OrderId> live_agent_;
    OrderId next_id_ = 1;
    std::uint64_t next_seq_ = 1;
};

}  // namespace mmsim

#pragma once

#include "mmsim/common/types.hpp"
#include "mmsim/market/order.hpp"

#include <cstddef>
#include <deque>
#include <map>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

namespace mmsim {

struct PriceLevel {
    Ticks price = 0;
    std::deque<Order> queue;  // FIFO, front has priority
    Quantity total_volume = 0;
};

struct LevelSummary {
    Ticks price = 0;
    Quantity volume = 0;
    std::size_t orders = 0;
};

/// Two price ladders of FIFO levels. Empty levels are never retained.
class OrderBook {
public:
    explicit OrderBook(std::size_t depth = 5) : depth_(depth) {}

    std::size_t depth() const noexcept { return depth_; }

    std::optional<Ticks> best(Side side) const;
    std::optional<Ticks> best_bid() const { return best(Side::bid); }
    std::optional<Ticks> best_ask() const { return best(Side::ask); }
    bool crossed() const;

    const PriceLevel* best_level(Side side) const;
    const PriceLevel* level(Side side, Ticks price) const;
    /// Up to `count` levels best-first; count 0 means the configured depth.
    std::vector<LevelSummary> top_levels(Side side, std::size_t count = 0) const;

    /// Visits levels best-first.
    template <class F>
    void for_each_level(Side side, F&& visit) const {
        for (const auto& [key, lvl] : ladder(side)) visit(lvl);
    }

    bool empty(Side side) const { return ladder(side).empty(); }
    std::size_t level_count(Side side) const { return ladder(side).size(); }
    Quantity volume(Side side) const;
    Quantity total_volume() const { return volume(Side::ask) + volume(Side::bid); }
    std::size_t order_count() const noexcept { return index_.size(); }

    const Order* find(OrderId id) const;
    bool contains(OrderId id) const { return index_.count(id) != 0; }

    /// Appends to the back of the FIFO at the order's price.
    void rest(const Order& order);
    std::optional<Order> remove(OrderId id);
    /// Lowers a resting order's quantity by up to `amount`; an order reduced
    /// to zero leaves the book. Returns the amount actually removed.
    Quantity reduce(OrderId id, Quantity amount);

    /// Crosses `aggressor` against the opposite ladder while prices overlap
    /// (any price for market orders). Trades print at the resting price.
    /// `aggressor.quantity` is left at the unfilled remainder.
    void execute(Order& aggressor, Millis time, std::vector<Fill>& fills);

    /// Removes every order on `side` and returns them best level first, FIFO
    /// order within a level.
    std::vector<Order> clear_side(Side side);

    template <class Pred>
    std::vector<Order> remove_if(Pred pred) {
        std::vector<OrderId> ids;
        for (Side side : {Side::ask, Side::bid}) {
            for (const auto& [key, lvl] : ladder(side)) {
                for (const Order& o : lvl.queue) {
                    if (pred(o)) ids.push_back(o.id);
                }
            }
        }
        std::vector<Order> removed;
        removed.reserve(ids.size());
        for (OrderId id : ids) removed.push_back(*remove(id));
        return removed;
    }

private:
    // Keyed so that begin() is the best level on both sides.
    using Ladder = std::map<Ticks, PriceLevel>;

    static Ticks key(Side side, Ticks price) noexcept { return side == Side::bid ? -price : price; }
    Ladder& ladder(Side side) { return side == Side::bid ? bids_ : asks_; }
    const Ladder& ladder(Side side) const { return side == Side::bid ? bids_ : asks_; }

    std::size_t depth_;
    Ladder asks_;
    Ladder bids_;
    std::unordered_map<OrderId, std::pair<Side, Ticks>> index_;
};

}  // namespace mmsim

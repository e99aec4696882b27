#pragma once

#include "mmsim/common/types.hpp"

#include <cstdint>

namespace mmsim {

enum class OrderKind : std::uint8_t { limit, market };
enum class Owner : std::uint8_t { agent, exogenous };

/// What a participant asks for; the exchange turns it into an Order.
struct OrderIntent {
    Side side = Side::bid;
    OrderKind kind = OrderKind::limit;
    Ticks price = 0;  // ignored for market orders
    Quantity quantity = 0;
    Millis wait_time = 0;  // 0 = never expires
};

struct Order {
    OrderId id = 0;
    Side side = Side::bid;
    OrderKind kind = OrderKind::limit;
    Ticks price = 0;
    Quantity quantity = 0;  // remaining
    Millis submit_time = 0;
    Millis effective_time = 0;
    Millis wait_time = 0;
    Owner owner = Owner::exogenous;
    std::uint64_t seq = 0;

    bool expires() const noexcept { return wait_time > 0; }
    Millis expiry_time() const noexcept { return effective_time + wait_time; }
};

/// Time priority key used inside a batch and within a price level.
inline bool earlier(const Order& a, const Order& b) noexcept {
    if (a.effective_time != b.effective_time) return a.effective_time < b.effective_time;
    return a.seq < b.seq;
}

struct Fill {
    Millis time = 0;
    Ticks price = 0;  // always the resting order's price
    Quantity volume = 0;
    OrderId maker_id = 0;
    OrderId taker_id = 0;
    Side maker_side = Side::ask;
    Owner maker_owner = Owner::exogenous;
    Owner taker_owner = Owner::exogenous;
    bool agent_involved = false;

    Side taker_side() const noexcept { return opposite(maker_side); }
};

}  // namespace mmsim

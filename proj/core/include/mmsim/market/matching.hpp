#pragma once

#include "mmsim/market/order.hpp"
#include "mmsim/market/order_book.hpp"

#include <optional>
#include <span>
#include <vector>

namespace mmsim {

struct BatchResult {
    std::vector<Fill> fills;      // execution order
    std::vector<Order> discarded;  // unfilled market-order remainders
    Quantity inserted_volume = 0;
    Quantity filled_volume = 0;
    Quantity discarded_volume = 0;
};

/// Clears one batch. Pending orders are inserted in (effective_time, seq)
/// order; each insertion crosses the book until it is uncrossed again, and
/// limit residuals rest in FIFO. Market remainders are dropped at batch end.
BatchResult run_batch_auction(OrderBook& book, std::vector<Order> pending, Millis batch_time);

/// floor(fraction * q) for each quantity. Throws FractionOutOfRange unless
/// 0 <= fraction <= 1.
std::vector<Quantity> proportional_cancel_amounts(std::span<const Quantity> quantities,
                                                  double fraction);

/// Applies proportional cancellation to resting orders in place. Survivors
/// keep their queue position; orders reduced to zero leave the book.
std::vector<Quantity> cancel_proportional(OrderBook& book, std::span<const OrderId> ids,
                                          double fraction);

struct BestPrices {
    std::optional<Ticks> bid;
    std::optional<Ticks> ask;
};

BestPrices best_prices(const OrderBook& book);

}  // namespace mmsim

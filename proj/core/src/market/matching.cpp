#include "mmsim/market/matching.hpp"

#include "mmsim/common/error.hpp"

#include <algorithm>
#include <cmath>

namespace mmsim {

BatchResult run_batch_auction(OrderBook& book, std::vector<Order> pending, Millis batch_time) {
    BatchResult result;
    std::stable_sort(pending.begin(), pending.end(), earlier);
    for (Order& incoming : pending) {
        result.inserted_volume += incoming.quantity;
        std::size_t first = result.fills.size();
        book.execute(incoming, batch_time, result.fills);
        for (std::size_t i = first; i < result.fills.size(); ++i) {
            result.filled_volume += result.fills[i].volume;
        }
        if (incoming.quantity == 0) continue;
        if (incoming.kind == OrderKind::market) {
            result.discarded_volume += incoming.quantity;
            result.discarded.push_back(incoming);
        } else {
            book.rest(incoming);
        }
    }
    return result;
}

std::vector<Quantity> proportional_cancel_amounts(std::span<const Quantity> quantities,
                                                  double fraction) {
    if (!(fraction >= 0.0 && fraction <= 1.0)) {
        throw Error(Errc::fraction_out_of_range, "cancel fraction must lie in [0, 1]");
    }
    std::vector<Quantity> out;
    out.reserve(quantities.size());
    for (Quantity q : quantities) {
        // The epsilon keeps e.g. 0.29 * 100 from flooring to 28.
        auto amount = static_cast<Quantity>(std::floor(fraction * static_cast<double>(q) + 1e-9));
        out.push_back(std::clamp<Quantity>(amount, 0, q));
    }
    return out;
}

std::vector<Quantity> cancel_proportional(OrderBook& book, std::span<const OrderId> ids,
                                          double fraction) {
    std::vector<Quantity> quantities;
    quantities.reserve(ids.size());
    for (OrderId id : ids) {
        const Order* o = book.find(id);
        quantities.push_back(o ? o->quantity : 0);
    }
    auto amounts = proportional_cancel_amounts(quantities, fraction);
    for (std::size_t i = 0; i < ids.size(); ++i) book.reduce(ids[i], amounts[i]);
    return amounts;
}

BestPrices best_prices(const OrderBook& book) {
    return {book.best_bid(), book.best_ask()};
}

}  // namespace mmsim

#include "mmsim/market/order_book.hpp"

#include <algorithm>
#include <cassert>

namespace mmsim {

std::optional<Ticks> OrderBook::best(Side side) const {
    const Ladder& l = ladder(side);
    if (l.empty()) return std::nullopt;
    return l.begin()->second.price;
}

bool OrderBook::crossed() const {
    auto bid = best_bid();
    auto ask = best_ask();
    return bid && ask && *bid >= *ask;
}

const PriceLevel* OrderBook::best_level(Side side) const {
    const Ladder& l = ladder(side);
    return l.empty() ? nullptr : &l.begin()->second;
}

const PriceLevel* OrderBook::level(Side side, Ticks price) const {
    const Ladder& l = ladder(side);
    auto it = l.find(key(side, price));
    return it == l.end() ? nullptr : &it->second;
}

std::vector<LevelSummary> OrderBook::top_levels(Side side, std::size_t count) const {
    if (count == 0) count = depth_;
    std::vector<LevelSummary> out;
    for (const auto& [k, lvl] : ladder(side)) {
        if (out.size() == count) break;
        out.push_back({lvl.price, lvl.total_volume, lvl.queue.size()});
    }
    return out;
}

Quantity OrderBook::volume(Side side) const {
    Quantity total = 0;
    for (const auto& [k, lvl] : ladder(side)) total += lvl.total_volume;
    return total;
}

const Order* OrderBook::find(OrderId id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return nullptr;
    const PriceLevel* lvl = level(it->second.first, it->second.second);
    for (const Order& o : lvl->queue) {
        if (o.id == id) return &o;
    }
    return nullptr;
}

void OrderBook::rest(const Order& order) {
    assert(order.quantity > 0);
    PriceLevel& lvl = ladder(order.side)[key(order.side, order.price)];
    lvl.price = order.price;
    lvl.queue.push_back(order);
    lvl.total_volume += order.quantity;
    index_[order.id] = {order.side, order.price};
}

std::optional<Order> OrderBook::remove(OrderId id) {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    auto [side, price] = it->second;
    index_.erase(it);
    Ladder& l = ladder(side);
    auto lit = l.find(key(side, price));
    PriceLevel& lvl = lit->second;
    auto oit = std::find_if(lvl.queue.begin(), lvl.queue.end(),
                            [id](const Order& o) { return o.id == id; });
    Order removed = *oit;
    lvl.total_volume -= removed.quantity;
    lvl.queue.erase(oit);
    if (lvl.queue.empty()) l.erase(lit);
    return removed;
}

Quantity OrderBook::reduce(OrderId id, Quantity amount) {
    auto it = index_.find(id);
    if (it == index_.end() || amount <= 0) return 0;
    auto [side, price] = it->second;
    PriceLevel& lvl = ladder(side).find(key(side, price))->second;
    auto oit = std::find_if(lvl.queue.begin(), lvl.queue.end(),
                            [id](const Order& o) { return o.id == id; });
    Quantity taken = std::min(amount, oit->quantity);
    if (taken == oit->quantity) {
        remove(id);
    } else {
        oit->quantity -= taken;
        lvl.total_volume -= taken;
    }
    return taken;
}

void OrderBook::execute(Order& aggressor, Millis time, std::vector<Fill>& fills) {
    Ladder& resting = ladder(opposite(aggressor.side));
    while (aggressor.quantity > 0 && !resting.empty()) {
        auto lit = resting.begin();
        PriceLevel& lvl = lit->second;
        if (aggressor.kind == OrderKind::limit) {
            bool overlaps = aggressor.side == Side::bid ? aggressor.price >= lvl.price
                                                        : aggressor.price <= lvl.price;
            if (!overlaps) break;
        }
        Order& maker = lvl.queue.front();
        Quantity traded = std::min(maker.quantity, aggressor.quantity);
        Fill fill;
        fill.time = time;
        fill.price = maker.price;
        fill.volume = traded;
        fill.maker_id = maker.id;
        fill.taker_id = aggressor.id;
        fill.maker_side = maker.side;
        fill.maker_owner = maker.owner;
        fill.taker_owner = aggressor.owner;
        fill.agent_involved = maker.owner == Owner::agent || aggressor.owner == Owner::agent;
        fills.push_back(fill);

        maker.quantity -= traded;
        aggressor.quantity -= traded;
        lvl.total_volume -= traded;
        if (maker.quantity == 0) {
            index_.erase(maker.id);
            lvl.queue.pop_front();
            if (lvl.queue.empty()) resting.erase(lit);
        }
    }
}

std::vector<Order> OrderBook::clear_side(Side side) {
    std::vector<Order> out;
    Ladder& l = ladder(side);
    for (auto& [k, lvl] : l) {
        for (Order& o : lvl.queue) {
            index_.erase(o.id);
            out.push_back(std::move(o));
        }
    }
    l.clear();
    return out;
}

}  // namespace mmsim

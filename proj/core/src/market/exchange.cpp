#include "mmsim/market/exchange.hpp"

#include "mmsim/common/error.hpp"

#include <algorithm>
#include <map>

namespace mmsim {

Exchange::Exchange(LatencyModel latency, std::uint64_t seed, std::size_t depth)
    : latency_(latency), rng_(seed), book_(depth) {
    latency_.validate();
}

namespace {

void check_intent(const OrderIntent& intent) {
    if (intent.quantity <= 0) {
        throw Error(Errc::non_positive_quantity, "order quantity must be positive");
    }
    if (intent.kind == OrderKind::limit && intent.price <= 0) {
        throw Error(Errc::non_positive_price, "limit order price must be positive");
    }
}

}  // namespace

Order Exchange::accept(const OrderIntent& intent, Millis now, Millis effective_time, Owner owner) {
    check_intent(intent);
    Order o;
    o.id = next_id_++;
    o.side = intent.side;
    o.kind = intent.kind;
    o.price = intent.kind == OrderKind::limit ? intent.price : 0;
    o.quantity = intent.quantity;
    o.submit_time = now;
    o.effective_time = effective_time;
    o.wait_time = std::max<Millis>(intent.wait_time, 0);
    o.owner = owner;
    o.seq = next_seq_++;
    return o;
}

Order Exchange::submit(const OrderIntent& intent, Millis now) {
    // Validate before drawing so a rejected order does not consume randomness.
    check_intent(intent);
    Millis delay = sample_latency(latency_, rng_);
    Order o = accept(intent, now, now + delay, Owner::agent);
    pending_.push_back(o);
    registry_.emplace(o.id, o);
    live_agent_.push_back(o.id);
    return o;
}

Order Exchange::submit_exogenous(const OrderIntent& intent, Millis effective_time) {
    Order o = accept(intent, effective_time, effective_time, Owner::exogenous);
    pending_.push_back(o);
    return o;
}

std::vector<Order> Exchange::cancel_expired(Millis now) {
    auto is_expired = [now](const Order& o) {
        return o.owner == Owner::agent && o.expires() && now >= o.expiry_time();
    };
    std::vector<Order> removed = book_.remove_if(is_expired);
    auto split = std::stable_partition(pending_.begin(), pending_.end(),
                                       [&](const Order& o) { return !is_expired(o); });
    removed.insert(removed.end(), split, pending_.end());
    pending_.erase(split, pending_.end());
    prune_live();
    return removed;
}

BatchResult Exchange::run_batch(Millis batch_time) {
    auto split = std::stable_partition(pending_.begin(), pending_.end(), [batch_time](const Order& o) {
        return o.effective_time <= batch_time;
    });
    std::vector<Order> due(pending_.begin(), split);
    pending_.erase(pending_.begin(), split);
    BatchResult result = run_batch_auction(book_, std::move(due), batch_time);
    prune_live();
    return result;
}

std::vector<Fill> Exchange::sync_depth(const DepthSnapshot& snapshot, Millis time, Quantity lot) {
    if (lot <= 0) lot = 1;
    struct Kept {
        Order order;
        Quantity ahead = 0;  // exogenous volume in front of it before the sync
    };
    // Per side: price -> agent orders in queue order.
    std::map<Ticks, std::vector<Kept>> kept[2];
    auto side_index = [](Side s) { return s == Side::ask ? 0 : 1; };

    for (Side side : {Side::ask, Side::bid}) {
        Ticks current = 0;
        Quantity ahead = 0;
        bool first = true;
        for (Order& o : book_.clear_side(side)) {
            if (first || o.price != current) {
                current = o.price;
                ahead = 0;
                first = false;
            }
            if (o.owner == Owner::exogenous) {
                ahead += o.quantity;
            } else {
                kept[side_index(side)][o.price].push_back({o, ahead});
            }
        }
    }

    auto agent_best = [&](Side side) -> std::optional<Ticks> {
        const auto& m = kept[side_index(side)];
        if (m.empty()) return std::nullopt;
        return side == Side::ask ? m.begin()->first : m.rbegin()->first;
    };
    const auto best_agent_ask = agent_best(Side::ask);
    const auto best_agent_bid = agent_best(Side::bid);

    auto rest_lots = [&](Side side, Ticks price, Quantity volume) {
        while (volume > 0) {
            Quantity q = std::min(volume, lot);
            Order o;
            o.id = next_id_++;
            o.side = side;
            o.kind = OrderKind::limit;
            o.price = price;
            o.quantity = q;
            o.submit_time = time;
            o.effective_time = time;
            o.owner = Owner::exogenous;
            o.seq = next_seq_++;
            book_.rest(o);
            volume -= q;
        }
    };

    struct Deferred {
        Side side;
        Ticks price;
        Quantity volume;
    };
    std::vector<Deferred> crossing;

    for (Side side : {Side::ask, Side::bid}) {
        auto& agents = kept[side_index(side)];
        const auto& levels = side == Side::ask ? snapshot.asks : snapshot.bids;
        for (const DepthLevel& lvl : levels) {
            if (lvl.volume <= 0) continue;
            bool crosses = side == Side::bid ? (best_agent_ask && lvl.price >= *best_agent_ask)
                                             : (best_agent_bid && lvl.price <= *best_agent_bid);
            auto it = agents.find(lvl.price);
            if (crosses) {
                if (it != agents.end()) {
                    for (const Kept& k : it->second) book_.rest(k.order);
                    agents.erase(it);
                }
                crossing.push_back({side, lvl.price, lvl.volume});
                continue;
            }
            if (it == agents.end()) {
                rest_lots(side, lvl.price, lvl.volume);
                continue;
            }
            Quantity placed = 0;
            for (const Kept& k : it->second) {
                Quantity target = std::min(k.ahead, lvl.volume);
                if (target > placed) {
                    rest_lots(side, lvl.price, target - placed);
                    placed = target;
                }
                book_.rest(k.order);
            }
            rest_lots(side, lvl.price, lvl.volume - placed);
            agents.erase(it);
        }
        // Agent levels the snapshot does not display.
        for (const auto& [price, orders] : agents) {
            for (const Kept& k : orders) book_.rest(k.order);
        }
    }

    std::vector<Fill> fills;
    for (const Deferred& d : crossing) {
        Order o;
        o.id = next_id_++;
        o.side = d.side;
        o.kind = OrderKind::limit;
        o.price = d.price;
        o.quantity = d.volume;
        o.submit_time = time;
        o.effective_time = time;
        o.owner = Owner::exogenous;
        o.seq = next_seq_++;
        book_.execute(o, time, fills);
        if (o.quantity > 0) rest_lots(d.side, d.price, o.quantity);
    }
    prune_live();
    return fills;
}

std::vector<Quantity> Exchange::cancel_proportional(std::span<const OrderId> ids, double fraction) {
    auto out = mmsim::cancel_proportional(book_, ids, fraction);
    prune_live();
    return out;
}

const Order* Exchange::submitted(OrderId id) const {
    auto it = registry_.find(id);
    return it == registry_.end() ? nullptr : &it->second;
}

std::size_t Exchange::live_agent_orders(Side side) const {
    std::size_t n = 0;
    for (OrderId id : live_agent_) {
        if (registry_.at(id).side == side) ++n;
    }
    return n;
}

std::vector<Order> Exchange::resting_agent_orders(Side side) const {
    std::vector<Order> out;
    for (OrderId id : live_agent_) {
        const Order* o = book_.find(id);
        if (o && o->side == side) out.push_back(*o);
    }
    std::sort(out.begin(), out.end(), earlier);
    return out;
}

void Exchange::prune_live() {
    std::erase_if(live_agent_, [this](OrderId id) {
        if (book_.contains(id)) return false;
        return std::none_of(pending_.begin(), pending_.end(),
                            [id](const Order& o) { return o.id == id; });
    });
}

}  // namespace mmsim

#pragma once

// Brute-force batch matcher: a flat list of resting orders scanned linearly
// for the best counterparty on every trade. Priority is price, then arrival
// into the book.

#include "mmsim/market/order.hpp"

#include <cstdint>
#include <vector>

namespace oracle {

struct RestingEntry {
    mmsim::Order order;
    std::uint64_t arrival = 0;
};

struct MatchOutcome {
    std::vector<mmsim::Fill> fills;
    std::vector<RestingEntry> book;
    mmsim::Quantity discarded = 0;
};

inline bool crosses(const mmsim::Order& taker, const mmsim::Order& maker) {
    if (taker.kind == mmsim::OrderKind::market) return true;
    return taker.side == mmsim::Side::bid ? taker.price >= maker.price : taker.price <= maker.price;
}

// True when a has priority over b as a resting order on the same side.
inline bool better(const RestingEntry& a, const RestingEntry& b) {
    if (a.order.price != b.order.price) {
        return a.order.side == mmsim::Side::ask ? a.order.price < b.order.price : a.order.price > b.order.price;
    }
    return a.arrival < b.arrival;
}

inline MatchOutcome reference_match(const std::vector<mmsim::Order>& resting, std::vector<mmsim::Order> pending,
                                    mmsim::Millis batch_time) {
    using namespace mmsim;
    MatchOutcome out;
    std::uint64_t arrival = 0;
    for (const Order& o : resting) out.book.push_back({o, arrival++});

    // Insertion sort by (effective_time, seq); stable by construction.
    for (std::size_t i = 1; i < pending.size(); ++i) {
        for (std::size_t j = i; j > 0; --j) {
            const Order& a = pending[j - 1];
            const Order& b = pending[j];
            bool swap = b.effective_time < a.effective_time ||
                        (b.effective_time == a.effective_time && b.seq < a.seq);
            if (!swap) break;
            std::swap(pending[j - 1], pending[j]);
        }
    }

    for (Order taker : pending) {
        while (taker.quantity > 0) {
            std::ptrdiff_t best = -1;
            for (std::size_t k = 0; k < out.book.size(); ++k) {
                const RestingEntry& e = out.book[k];
                if (e.order.side == taker.side || !crosses(taker, e.order)) continue;
                if (best < 0 || better(e, out.book[static_cast<std::size_t>(best)])) best = static_cast<std::ptrdiff_t>(k);
            }
            if (best < 0) break;
            RestingEntry& maker = out.book[static_cast<std::size_t>(best)];
            Quantity v = std::min(taker.quantity, maker.order.quantity);
            Fill f;
            f.time = batch_time;
            f.price = maker.order.price;
            f.volume = v;
            f.maker_id = maker.order.id;
            f.taker_id = taker.id;
            f.maker_side = maker.order.side;
            f.maker_owner = maker.order.owner;
            f.taker_owner = taker.owner;
            f.agent_involved = maker.order.owner == Owner::agent || taker.owner == Owner::agent;
            out.fills.push_back(f);
            taker.quantity -= v;
            maker.order.quantity -= v;
            if (maker.order.quantity == 0) out.book.erase(out.book.begin() + best);
        }
        if (taker.quantity == 0) continue;
        if (taker.kind == OrderKind::market) {
            out.discarded += taker.quantity;
        } else {
            out.book.push_back({taker, arrival++});
        }
    }

    // Priority order per side: asks first, then bids.
    std::vector<RestingEntry> sorted;
    for (Side side : {Side::ask, Side::bid}) {
        std::vector<RestingEntry> part;
        for (const RestingEntry& e : out.book) {
            if (e.order.side == side) part.push_back(e);
        }
        for (std::size_t i = 1; i < part.size(); ++i) {
            for (std::size_t j = i; j > 0 && better(part[j], part[j - 1]); --j) std::swap(part[j], part[j - 1]);
        }
        sorted.insert(sorted.end(), part.begin(), part.end());
    }
    out.book = std::move(sorted);
    return out;
}

inline bool same_fill(const mmsim::Fill& a, const mmsim::Fill& b) {
    return a.time == b.time && a.price == b.price && a.volume == b.volume && a.maker_id == b.maker_id &&
           a.taker_id == b.taker_id && a.maker_side == b.maker_side && a.maker_owner == b.maker_owner &&
           a.taker_owner == b.taker_owner && a.agent_involved == b.agent_involved;
}

}  // namespace oracle

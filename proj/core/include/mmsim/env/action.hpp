#pragma once

#include "mmsim/agents/trend_class.hpp"
#include "mmsim/common/types.hpp"
#include "mmsim/env/config.hpp"

#include <array>
#include <cstddef>
#include <optional>

namespace mmsim {

/// Indices into the grids: (offset ask, offset bid, volume ask, volume bid,
/// wait ask, wait bid).
struct ActionVector {
    enum Field : std::size_t { offset_ask, offset_bid, volume_ask, volume_bid, wait_ask, wait_bid };
    std::array<int, 6> index{};

    int& operator[](Field f) noexcept { return index[f]; }
    int operator[](Field f) const noexcept { return index[f]; }

    /// Throws ActionIndexOutOfRange when any index falls outside its grid.
    void validate(const ActionGrids& grids) const;

    friend bool operator==(const ActionVector&, const ActionVector&) = default;
};

/// Number of distinct values each index can take.
std::array<std::size_t, 6> action_dims(const ActionGrids& grids);

struct Quote {
    Ticks price = 0;
    Quantity volume = 0;
    Millis wait = 0;

    friend bool operator==(const Quote&, const Quote&) = default;
};

/// Market order used to pull inventory back inside a band. `side` is the
/// order's side: bid buys, ask sells.
struct Liquidation {
    Side side = Side::ask;
    Quantity quantity = 0;

    friend bool operator==(const Liquidation&, const Liquidation&) = default;
};

/// Everything an agent asks for in one step.
struct QuoteSet {
    std::optional<Quote> ask;
    std::optional<Quote> bid;
    std::optional<Liquidation> liquidation;
    std::optional<TrendClass> trend;  // prediction that produced the liquidation, if any
};

/// Quotes at best + offset on each side. A missing best price leaves that
/// side unquoted. When the decoded bid would reach the ask it is lowered to
/// one tick below it. Quotes at non-positive prices are dropped.
QuoteSet decode_action(const ActionVector& action, std::optional<Ticks> best_bid,
                       std::optional<Ticks> best_ask, const ActionGrids& grids, double tick);

/// Grid offset converted to whole ticks.
Ticks offset_ticks(double offset, double tick);

}  // namespace mmsim

#pragma once

#include "mmsim/common/types.hpp"

#include <array>
#include <cstddef>

namespace mmsim {

inline constexpr std::size_t kSnapshotLevels = 5;

/// Five-level book picture plus the interval's last trade, prices in ticks.
struct MarketSnapshot {
    Millis ts = 0;
    std::array<Ticks, kSnapshotLevels> bid_px{};
    std::array<Quantity, kSnapshotLevels> bid_vol{};
    std::array<Ticks, kSnapshotLevels> ask_px{};
    std::array<Quantity, kSnapshotLevels> ask_vol{};
    Ticks last_px = 0;
    Quantity last_vol = 0;

    Ticks best_bid() const noexcept { return bid_px[0]; }
    Ticks best_ask() const noexcept { return ask_px[0]; }
    /// Mid price in half ticks (bid + ask), exact.
    Ticks mid_half_ticks() const noexcept { return bid_px[0] + ask_px[0]; }

    /// Ladders strictly monotone, bid_px[0] < ask_px[0], volumes >= 0.
    bool well_formed() const noexcept;

    friend bool operator==(const MarketSnapshot&, const MarketSnapshot&) = default;
};

}  // namespace mmsim

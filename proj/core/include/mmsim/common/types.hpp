#pragma once

#include <cstdint>
#include <string_view>

namespace mmsim {

/// Prices are carried as integer multiples of the instrument tick.
using Ticks = std::int64_t;
using Quantity = std::int64_t;
using Millis = std::int64_t;
using OrderId = std::uint64_t;

enum class Side : std::uint8_t { ask, bid };

constexpr Side opposite(Side side) noexcept {
    return side == Side::ask ? Side::bid : Side::ask;
}

constexpr std::string_view to_string(Side side) noexcept {
    return side == Side::ask ? "ask" : "bid";
}

}  // namespace mmsim

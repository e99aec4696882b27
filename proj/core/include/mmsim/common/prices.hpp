#pragma once

#include "mmsim/common/types.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace mmsim {

/// Fewest decimals that represent every multiple of `tick` exactly.
unsigned price_decimals(double tick) noexcept;

/// Tick count as a currency string with price_decimals(tick) decimals.
std::string format_price(Ticks price, double tick);

/// Currency text to ticks; nullopt unless it parses fully and sits on the
/// tick grid (within 1e-6 of a tick).
std::optional<Ticks> parse_price(std::string_view text, double tick) noexcept;

}  // namespace mmsim

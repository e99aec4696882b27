#include "mmsim/common/prices.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>

namespace mmsim {

unsigned price_decimals(double tick) noexcept {
    for (unsigned d = 0; d < 10; ++d) {
        double scaled = tick * std::pow(10.0, d);
        if (std::abs(scaled - std::round(scaled)) < 1e-9 * std::max(1.0, scaled)) return d;
    }
    return 10;
}

std::string format_price(Ticks price, double tick) {
    return fmt::format("{:.{}f}", static_cast<double>(price) * tick, price_decimals(tick));
}

std::optional<Ticks> parse_price(std::string_view s, double tick) noexcept {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    double ticks = v / tick;
    double rounded = std::round(ticks);
    if (std::abs(ticks - rounded) > 1e-6) return std::nullopt;
    return static_cast<Ticks>(rounded);
}

}  // namespace mmsim

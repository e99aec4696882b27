#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

namespace mmsim {

enum class TrendClass : std::uint8_t { bull, bear, steady_ascent, steady_descent };

constexpr std::string_view to_string(TrendClass c) noexcept {
    switch (c) {
        case TrendClass::bull: return "bull";
        case TrendClass::bear: return "bear";
        case TrendClass::steady_ascent: return "steady_ascent";
        case TrendClass::steady_descent: return "steady_descent";
    }
    return "steady_descent";
}

constexpr std::optional<TrendClass> parse_trend_class(std::string_view s) noexcept {
    if (s == "bull") return TrendClass::bull;
    if (s == "bear") return TrendClass::bear;
    if (s == "steady_ascent") return TrendClass::steady_ascent;
    if (s == "steady_descent") return TrendClass::steady_descent;
    return std::nullopt;
}

}  // namespace mmsim

#pragma once

#include "mmsim/common/types.hpp"
#include "mmsim/data/market_data.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace mmsim {

/// Drift added to the mid walk on steps [start, end).
struct DriftSegment {
    std::size_t start = 0;
    std::size_t end = 0;
    double drift_ticks = 0.0;  // per step
};

struct SyntheticConfig {
    std::uint64_t seed = 1;
    std::size_t steps = 28801;
    Millis start_ts = 0;
    Millis interval = 500;
    double initial_mid = 100.0;  // currency
    double tick = 0.02;
    double volatility_ticks = 0.6;  // stddev of the per-step mid move
    std::vector<DriftSegment> drift;

    // Poisson intensities per interval; the event rates are per level.
    double limit_rate = 4.0;
    double market_rate = 0.8;
    double cancel_rate = 3.0;
    double modify_rate = 1.0;

    Quantity depth_min = 100;  // displayed volume per level
    Quantity depth_max = 1000;
    Quantity trade_min = 50;  // size of one market order
    Quantity trade_max = 300;

    /// Throws InvalidConfig on negative rates, zero steps or empty ranges.
    void validate() const;
};

/// Seeded random-walk market: five levels at tick spacing around the mid,
/// random displayed volumes, Poisson market orders aggregated into at most
/// one trade print per interval and Poisson per-level event counts.
std::vector<MarketDataRecord> generate_synthetic(const SyntheticConfig& cfg);

}  // namespace mmsim

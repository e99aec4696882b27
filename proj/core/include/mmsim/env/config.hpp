#pragma once

#include "mmsim/common/types.hpp"
#include "mmsim/market/latency.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace mmsim {

/// The discrete grids behind the six action indices.
struct ActionGrids {
    std::vector<double> price_offsets{-0.06, -0.04, -0.02, 0.0, 0.02, 0.04, 0.06};  // currency
    std::vector<Quantity> volumes{100, 200, 300};
    std::vector<Millis> waits{500, 1000, 1500, 2000, 2500};
};

struct EpisodeConfig {
    std::size_t horizon = 28800;  // steps
    std::size_t start_index = 0;  // first record of the episode (replay)
    Millis batch_interval = 500;
    Quantity inventory_limit = 800;
    double eta = 0.01;     // inventory penalty per unit beyond the limit
    double beta = 0.0002;  // compensation rate on gross fill notional
    double tick = 0.02;
    LatencyModel latency = LatencyModel::uniform(30, 80);
    std::uint64_t seed = 1;
    ActionGrids grids;
    std::size_t max_orders_per_side = 5;
    Quantity replay_lot = 100;
    double initial_cash = 0.0;
    std::size_t vol_window = 20;  // one-step mid differences in sigma

    /// Throws InvalidConfig (or InvalidLatencyModel) when a field is out of range,
    /// including waits that are not whole multiples of the batch interval.
    void validate() const;
};

}  // namespace mmsim

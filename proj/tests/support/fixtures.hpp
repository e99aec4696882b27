#pragma once

// Plain helpers shared by the unit tests and the acceptance runner.

#include "mmsim/data/market_data.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace testing_support {

/// A book that never moves: five levels each side around (bid, ask), no trades.
inline std::vector<mmsim::MarketDataRecord> flat_records(std::size_t n, mmsim::Ticks bid, mmsim::Ticks ask,
                                                         mmsim::Quantity volume = 500,
                                                         mmsim::Millis interval = 500) {
    std::vector<mmsim::MarketDataRecord> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        auto& s = out[k].snapshot;
        s.ts = static_cast<mmsim::Millis>(k) * interval;
        for (std::size_t i = 0; i < mmsim::kSnapshotLevels; ++i) {
            s.bid_px[i] = bid - static_cast<mmsim::Ticks>(i);
            s.ask_px[i] = ask + static_cast<mmsim::Ticks>(i);
            s.bid_vol[i] = volume;
            s.ask_vol[i] = volume;
        }
    }
    return out;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("mmsim_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace testing_support

#include "mmsim/env/config.hpp"

#include "mmsim/common/error.hpp"

#include <fmt/format.h>

namespace mmsim {

void EpisodeConfig::validate() const {
    auto fail = [](const std::string& what) { throw Error(Errc::invalid_config, what); };
    if (horizon < 1) fail("horizon must be at least one step");
    if (batch_interval <= 0) fail("batch interval must be positive");
    if (inventory_limit < 0) fail("inventory limit must be >= 0");
    if (eta < 0.0 || beta < 0.0) fail("eta and beta must be >= 0");
    if (!(tick > 0.0)) fail("tick size must be positive");
    if (max_orders_per_side < 1) fail("per-side order cap must be >= 1");
    if (replay_lot < 1) fail("replay lot must be >= 1");
    if (vol_window < 1) fail("volatility window must be >= 1");
    latency.validate();
    if (grids.price_offsets.empty() || grids.volumes.empty() || grids.waits.empty()) {
        fail("action grids must be non-empty");
    }
    for (Quantity v : grids.volumes) {
        if (v <= 0) fail(fmt::format("volume grid entry {} is not positive", v));
    }
    for (Millis w : grids.waits) {
        if (w < 0 || w % batch_interval != 0) {
            fail(fmt::format("wait {} ms is not a whole multiple of the {} ms batch interval", w,
                             batch_interval));
        }
    }
}

}  // namespace mmsim

#include "mmsim/env/action.hpp"

#include "mmsim/common/error.hpp"

#include <fmt/format.h>

#include <cmath>

namespace mmsim {

std::array<std::size_t, 6> action_dims(const ActionGrids& grids) {
    return {grids.price_offsets.size(), grids.price_offsets.size(), grids.volumes.size(),
            grids.volumes.size(),       grids.waits.size(),         grids.waits.size()};
}

void ActionVector::validate(const ActionGrids& grids) const {
    auto dims = action_dims(grids);
    for (std::size_t i = 0; i < index.size(); ++i) {
        if (index[i] < 0 || static_cast<std::size_t>(index[i]) >= dims[i]) {
            throw Error(Errc::action_index_out_of_range,
                        fmt::format("action index {} = {} outside grid of size {}", i, index[i], dims[i]));
        }
    }
}

Ticks offset_ticks(double offset, double tick) {
    return static_cast<Ticks>(std::llround(offset / tick));
}

QuoteSet decode_action(const ActionVector& a, std::optional<Ticks> best_bid,
                       std::optional<Ticks> best_ask, const ActionGrids& grids, double tick) {
    a.validate(grids);
    QuoteSet out;
    if (best_ask) {
        out.ask = Quote{*best_ask + offset_ticks(grids.price_offsets[a[ActionVector::offset_ask]], tick),
                        grids.volumes[a[ActionVector::volume_ask]], grids.waits[a[ActionVector::wait_ask]]};
    }
    if (best_bid) {
        out.bid = Quote{*best_bid + offset_ticks(grids.price_offsets[a[ActionVector::offset_bid]], tick),
                        grids.volumes[a[ActionVector::volume_bid]], grids.waits[a[ActionVector::wait_bid]]};
    }
    if (out.ask && out.bid && out.bid->price >= out.ask->price) out.bid->price = out.ask->price - 1;
    if (out.ask && out.ask->price <= 0) out.ask.reset();
    if (out.bid && out.bid->price <= 0) out.bid.reset();
    return out;
}

}  // namespace mmsim

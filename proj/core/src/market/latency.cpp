#include "mmsim/market/latency.hpp"

#include "mmsim/common/error.hpp"

namespace mmsim {

void LatencyModel::validate() const {
    if (low_ms < 0 || low_ms > high_ms) {
        throw Error(Errc::invalid_latency_model, "latency bounds must satisfy 0 <= low <= high");
    }
    if (kind == LatencyKind::constant && low_ms != high_ms) {
        throw Error(Errc::invalid_latency_model, "constant latency requires low == high");
    }
}

Millis sample_latency(const LatencyModel& model, Rng& rng) {
    if (model.kind == LatencyKind::constant) return model.low_ms;
    return rng.uniform_int(model.low_ms, model.high_ms);
}

}  // namespace mmsim

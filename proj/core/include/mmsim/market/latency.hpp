#pragma once

#include "mmsim/common/rng.hpp"
#include "mmsim/common/types.hpp"

#include <cstdint>

namespace mmsim {

enum class LatencyKind : std::uint8_t { uniform, constant };

/// Order-entry latency between placement and eligibility for matching.
struct LatencyModel {
    LatencyKind kind = LatencyKind::uniform;
    Millis low_ms = 30;
    Millis high_ms = 80;

    static LatencyModel constant(Millis ms) { return {LatencyKind::constant, ms, ms}; }
    static LatencyModel uniform(Millis lo, Millis hi) { return {LatencyKind::uniform, lo, hi}; }

    /// Throws Error(invalid_latency_model) unless 0 <= low <= high and a
    /// constant model has low == high.
    void validate() const;
};

Millis sample_latency(const LatencyModel& model, Rng& rng);

}  // namespace mmsim

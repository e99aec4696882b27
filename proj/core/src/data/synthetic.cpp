#include "mmsim/data/synthetic.hpp"

#include "mmsim/common/error.hpp"
#include "mmsim/common/rng.hpp"

#include <algorithm>
#include <cmath>

namespace mmsim {

void SyntheticConfig::validate() const {
    if (steps < 1) throw Error(Errc::invalid_config, "synthetic steps must be >= 1");
    if (interval <= 0) throw Error(Errc::invalid_config, "synthetic interval must be positive");
    if (!(tick > 0.0) || !(initial_mid > 0.0)) {
        throw Error(Errc::invalid_config, "synthetic tick and initial mid must be positive");
    }
    if (volatility_ticks < 0.0 || limit_rate < 0.0 || market_rate < 0.0 || cancel_rate < 0.0 ||
        modify_rate < 0.0) {
        throw Error(Errc::invalid_config, "synthetic rates and volatility must be >= 0");
    }
    if (depth_min < 1 || depth_max < depth_min || trade_min < 1 || trade_max < trade_min) {
        throw Error(Errc::invalid_config, "synthetic volume bounds are empty");
    }
    for (const DriftSegment& d : drift) {
        if (d.end < d.start) throw Error(Errc::invalid_config, "drift segment ends before it starts");
    }
}

namespace {

double drift_at(const SyntheticConfig& cfg, std::size_t step) {
    double total = 0.0;
    for (const DriftSegment& d : cfg.drift) {
        if (step >= d.start && step < d.end) total += d.drift_ticks;
    }
    return total;
}

// Price reached by a market order of `volume` walking the given ladder.
Ticks sweep_price(const std::array<Ticks, kSnapshotLevels>& px,
                  const std::array<Quantity, kSnapshotLevels>& vol, Quantity volume) {
    Quantity remaining = volume;
    for (std::size_t i = 0; i < kSnapshotLevels; ++i) {
        remaining -= vol[i];
        if (remaining <= 0) return px[i];
    }
    return px[kSnapshotLevels - 1];
}

}  // namespace

std::vector<MarketDataRecord> generate_synthetic(const SyntheticConfig& cfg) {
    cfg.validate();
    Rng rng(mix_seed(cfg.seed, 0x5157));
    constexpr double kFloor = 2.0 * kSnapshotLevels + 2.0;

    std::vector<MarketDataRecord> out;
    out.reserve(cfg.steps);
    double center = cfg.initial_mid / cfg.tick;
    Ticks last_px = static_cast<Ticks>(std::llround(center));

    for (std::size_t k = 0; k < cfg.steps; ++k) {
        double prev_center = center;
        if (k > 0) {
            center += drift_at(cfg, k - 1);
            if (cfg.volatility_ticks > 0.0) center += rng.normal(0.0, cfg.volatility_ticks);
            center = std::max(center, kFloor);
        }

        MarketDataRecord rec;
        MarketSnapshot& s = rec.snapshot;
        s.ts = cfg.start_ts + static_cast<Millis>(k) * cfg.interval;
        const Ticks bid1 = static_cast<Ticks>(std::ceil(center)) - 1;
        const Ticks ask1 = static_cast<Ticks>(std::floor(center)) + 1;
        for (std::size_t i = 0; i < kSnapshotLevels; ++i) {
            s.bid_px[i] = bid1 - static_cast<Ticks>(i);
            s.ask_px[i] = ask1 + static_cast<Ticks>(i);
            s.bid_vol[i] = rng.uniform_int(cfg.depth_min, cfg.depth_max);
            s.ask_vol[i] = rng.uniform_int(cfg.depth_min, cfg.depth_max);
        }

        if (k > 0) {
            std::int64_t orders = rng.poisson(cfg.market_rate);
            Quantity volume = 0;
            for (std::int64_t i = 0; i < orders; ++i) volume += rng.uniform_int(cfg.trade_min, cfg.trade_max);
            if (volume > 0) {
                // Aggressors lean with the mid move; a flat mid is a coin flip.
                bool buy = center > prev_center || (center == prev_center && rng.uniform() < 0.5);
                const MarketSnapshot& prev = out.back().snapshot;
                last_px = buy ? sweep_price(prev.ask_px, prev.ask_vol, volume)
                              : sweep_price(prev.bid_px, prev.bid_vol, volume);
                rec.trades.push_back({last_px, volume});
            }
        }
        s.last_px = last_px;
        s.last_vol = rec.trades.empty() ? 0 : rec.trades.front().volume;

        rec.has_events = true;
        for (auto& e : rec.events) {
            e.new_orders = rng.poisson(cfg.limit_rate);
            e.cancellations = rng.poisson(cfg.cancel_rate);
            e.modifications = rng.poisson(cfg.modify_rate);
        }
        out.push_back(std::move(rec));
    }
    return out;
}

}  // namespace mmsim

#pragma once

#include "mmsim/agents/agent.hpp"
#include "mmsim/agents/trend_class.hpp"

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace mmsim {

inline constexpr double kStrongTrend = 0.01;
inline constexpr std::size_t kTrendHorizon = 30;

/// bull above +1%, bear below -1%, otherwise steady_ascent for a positive
/// move and steady_descent for zero or negative.
TrendClass classify_trend(double relative_change) noexcept;

/// Class of the move from prices[t] to prices[t + horizon]. Throws
/// InsufficientHorizon.
TrendClass label_trend(std::span<const double> prices, std::size_t t, std::size_t horizon = kTrendHorizon);

struct InventoryBand {
    Quantity lower = 0;
    Quantity upper = 0;

    bool contains(Quantity q) const noexcept { return q >= lower && q <= upper; }
    friend bool operator==(const InventoryBand&, const InventoryBand&) = default;
};

/// Strong trends allow the full limit on the trend side, weak trends half.
InventoryBand trend_band(TrendClass c, Quantity limit) noexcept;

/// Market order that moves q to the nearest band bound, if q is outside.
std::optional<Liquidation> overlay_enforce(Quantity q, const InventoryBand& band) noexcept;

/// Class of the trailing return over the last `horizon` steps. Needs
/// horizon + 1 prices; throws InsufficientHistory.
TrendClass momentum_predictor(std::span<const double> history, std::size_t horizon = kTrendHorizon);

class TrendPredictor {
public:
    virtual ~TrendPredictor() = default;
    /// nullopt when no prediction is available yet.
    virtual std::optional<TrendClass> predict(const Observation& obs) = 0;
};

class MomentumPredictor : public TrendPredictor {
public:
    explicit MomentumPredictor(std::size_t horizon = kTrendHorizon) : horizon_(horizon) {}
    std::optional<TrendClass> predict(const Observation& obs) override;

private:
    std::size_t horizon_;
};

/// Predictions produced offline: CSV with header "step,trend", one class
/// name per step. The latest row at or before the current step applies.
class ScheduledPredictor : public TrendPredictor {
public:
    explicit ScheduledPredictor(std::vector<std::pair<std::size_t, TrendClass>> schedule);
    static ScheduledPredictor load(const std::filesystem::path& path);
    std::optional<TrendClass> predict(const Observation& obs) override;

private:
    std::vector<std::pair<std::size_t, TrendClass>> schedule_;
};

/// Wraps any agent: each step the predicted class picks a band, inventory
/// outside it is liquidated with a market order and the quote side that
/// would push further out is dropped.
class TrendOverlayAgent : public Agent {
public:
    TrendOverlayAgent(std::unique_ptr<Agent> base, std::unique_ptr<TrendPredictor> predictor);
    QuoteSet act(const Observation& obs) override;
    std::string name() const override { return base_->name() + "+trend"; }
    void reset(std::uint64_t seed) override { base_->reset(seed); }

private:
    std::unique_ptr<Agent> base_;
    std::unique_ptr<TrendPredictor> predictor_;
};

}  // namespace mmsim

#pragma once

#include "mmsim/common/types.hpp"
#include "mmsim/data/market_data.hpp"
#include "mmsim/data/synthetic.hpp"
#include "mmsim/env/action.hpp"
#include "mmsim/env/config.hpp"
#include "mmsim/env/reward.hpp"
#include "mmsim/indicators/indicators.hpp"
#include "mmsim/market/exchange.hpp"

#include <array>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace mmsim {

inline constexpr std::size_t kPortfolioFields = 4;
inline constexpr std::size_t kQueueSlots = 10;  // five per side
inline constexpr std::size_t kQueueFields = 7;
inline constexpr std::size_t kQueueSize = kQueueSlots * kQueueFields;
inline constexpr std::size_t kStateSize = IndicatorVector::count + kPortfolioFields + kQueueSize;

using StateVector = std::array<double, kStateSize>;

/// Replayed records or a synthetic market regenerated from the reset seed.
using DataSource = std::variant<std::shared_ptr<const std::vector<MarketDataRecord>>, SyntheticConfig>;

struct PortfolioState {
    Quantity inventory = 0;
    std::int64_t cash_ticks = 0;  // ticks x units, includes the initial cash
    Quantity executed_volume = 0;
};

/// What agents see before each step.
struct Observation {
    std::size_t step = 0;
    std::size_t horizon = 0;
    Millis time = 0;
    const MarketSnapshot* snapshot = nullptr;
    std::optional<Ticks> best_bid;
    std::optional<Ticks> best_ask;
    double tick = 0.0;
    double mid = 0.0;    // currency
    double sigma = 0.0;  // currency per step
    Quantity inventory = 0;
    double cash = 0.0;
    double net_value = 0.0;
    Quantity inventory_limit = 0;
    std::size_t live_asks = 0;
    std::size_t live_bids = 0;
    std::span<const double> mids;  // every mid from the episode start through now
    const ActionGrids* grids = nullptr;
    IndicatorVector indicators;
    StateVector state{};

    std::size_t remaining_steps() const noexcept { return horizon - step; }
};

/// One step of the episode trace.
struct StepRecord {
    std::size_t t = 0;
    Millis time = 0;  // batch time at the end of the step
    Ticks mid2_before = 0;
    Ticks mid2_after = 0;
    Quantity q_before = 0;
    Quantity q_after = 0;
    std::int64_t cash_ticks = 0;  // after the step
    double mid = 0.0;       // currency, after the step
    double cash = 0.0;
    double net_value = 0.0;
    double sigma = 0.0;     // used for the execution-risk charge
    Quantity executed_volume = 0;
    RewardBreakdown reward;
    std::vector<AgentFill> fills;
    std::size_t fill_records = 0;  // exchange fills with an agent on either side
    std::optional<Quote> ask_quote;
    std::optional<Quote> bid_quote;
    bool ask_skipped = false;
    bool bid_skipped = false;
    std::optional<TrendClass> trend;
    std::optional<Liquidation> liquidation;
    std::vector<RiskItem> risk;
};

/// The episode engine. Each step: submit the liquidation order and quotes
/// (latency-delayed, capped per side), expire wait-time orders at the next
/// batch time, replay that interval's trades as exogenous aggressors, run
/// the batch auction, rebuild exogenous depth from the next snapshot, settle
/// agent fills and compute the reward.
class Environment {
public:
    Environment(EpisodeConfig config, DataSource source);

    /// Throws InsufficientData when the source is shorter than start + horizon + 1.
    const Observation& reset(std::uint64_t seed);
    const Observation& reset() { return reset(config_.seed); }

    /// Throws SteppedAfterDone, ActionIndexOutOfRange.
    const StepRecord& step(const ActionVector& action);
    /// Throws SteppedAfterDone.
    const StepRecord& step(const QuoteSet& quotes);

    const Observation& observation() const noexcept { return obs_; }
    const std::vector<StepRecord>& trace() const noexcept { return trace_; }
    const EpisodeConfig& config() const noexcept { return config_; }
    const Exchange& exchange() const { return *exchange_; }
    const PortfolioState& portfolio() const noexcept { return portfolio_; }
    bool done() const noexcept { return started_ && t_ >= config_.horizon; }
    std::size_t t() const noexcept { return t_; }
    std::span<const MarketDataRecord> records() const noexcept;

private:
    const MarketDataRecord& record(std::size_t k) const;
    DepthSnapshot depth_of(const MarketSnapshot& s) const;
    void refresh_observation(const MarketDataRecord& rec, std::span<const Ticks> trade_prices);
    std::vector<RiskItem> risk_items(Millis now) const;

    EpisodeConfig config_;
    DataSource source_;
    std::shared_ptr<const std::vector<MarketDataRecord>> records_;
    std::unique_ptr<Exchange> exchange_;
    PortfolioState portfolio_;
    VolatilityWindow vol_;
    std::vector<double> mids_;
    std::vector<StepRecord> trace_;
    Observation obs_;
    Ticks prev_close_ = 0;
    std::size_t t_ = 0;
    bool started_ = false;
};

/// Serialized state: 16 indicators, then (inventory, cash, net value,
/// executed volume), then ten queue slots of (RQP, competitiveness, price,
/// remaining volume, effective time since episode start, wait, side sign).
/// Asks fill slots 0-4 and bids 5-9 in time priority; unused slots are zero.
StateVector build_state(const IndicatorVector& indicators, const PortfolioState& portfolio,
                        double mid, double tick, const Exchange& exchange, Millis episode_start);

}  // namespace mmsim

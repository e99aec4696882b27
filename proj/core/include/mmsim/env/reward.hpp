#pragma once

#include "mmsim/common/types.hpp"

#include <span>

namespace mmsim {

/// The agent's side of one fill: `side` is the agent order's side, so an
/// ask leg sells and a bid leg buys.
struct AgentFill {
    Side side = Side::ask;
    Ticks price = 0;
    Quantity volume = 0;
    OrderId order = 0;
    Millis time = 0;

    friend bool operator==(const AgentFill&, const AgentFill&) = default;
};

/// A live agent order as seen by the execution-risk charge.
struct RiskItem {
    Quantity volume = 0;
    Millis elapsed = 0;  // since the order became effective
    Millis wait = 0;     // 0 = never expires, excluded from the charge

    friend bool operator==(const RiskItem&, const RiskItem&) = default;
};

struct RewardBreakdown {
    double pnl = 0.0;
    double ip = 0.0;    // magnitude, subtracted
    double comp = 0.0;
    double er = 0.0;    // magnitude, subtracted
    double total = 0.0;

    static RewardBreakdown compose(double pnl, double ip, double comp, double er) {
        return {pnl, ip, comp, er, pnl - ip + comp - er};
    }
};

/// Cash flow of the fills in ticks x units: sells minus buys.
std::int64_t fill_cash_ticks(std::span<const AgentFill> fills) noexcept;

/// Step PnL in half ticks x units: 2 * (sells - buys) + (mid2_next - mid2) * q_next,
/// where mids are given in half ticks. Exact.
std::int64_t pnl_half_ticks(std::span<const AgentFill> fills, Ticks mid2, Ticks mid2_next,
                            Quantity q_next) noexcept;

/// Step PnL in currency from mids in currency.
double compute_pnl(std::span<const AgentFill> fills, double tick, double mid, double mid_next,
                   Quantity q_next) noexcept;

/// eta * |q| when |q| > limit, else 0.
double inventory_penalty(Quantity q, Quantity limit, double eta) noexcept;

/// beta * gross notional of the fills, in currency.
double compensation(std::span<const AgentFill> fills, double beta, double tick) noexcept;

/// Sum over items with a wait time of sigma * V * (1 + elapsed / wait).
double execution_risk(std::span<const RiskItem> items, double sigma) noexcept;

}  // namespace mmsim

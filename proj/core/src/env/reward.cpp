#include "mmsim/env/reward.hpp"

#include <cstdlib>

namespace mmsim {

std::int64_t fill_cash_ticks(std::span<const AgentFill> fills) noexcept {
    std::int64_t cash = 0;
    for (const AgentFill& f : fills) cash += (f.side == Side::ask ? 1 : -1) * f.price * f.volume;
    return cash;
}

std::int64_t pnl_half_ticks(std::span<const AgentFill> fills, Ticks mid2, Ticks mid2_next,
                            Quantity q_next) noexcept {
    return 2 * fill_cash_ticks(fills) + (mid2_next - mid2) * q_next;
}

double compute_pnl(std::span<const AgentFill> fills, double tick, double mid, double mid_next,
                   Quantity q_next) noexcept {
    double flow = 0.0;
    for (const AgentFill& f : fills) {
        double notional = static_cast<double>(f.price) * tick * static_cast<double>(f.volume);
        flow += f.side == Side::ask ? notional : -notional;
    }
    return flow + (mid_next - mid) * static_cast<double>(q_next);
}

double inventory_penalty(Quantity q, Quantity limit, double eta) noexcept {
    Quantity a = std::llabs(q);
    return a > limit ? eta * static_cast<double>(a) : 0.0;
}

double compensation(std::span<const AgentFill> fills, double beta, double tick) noexcept {
    std::int64_t gross = 0;
    for (const AgentFill& f : fills) gross += f.price * f.volume;
    return beta * static_cast<double>(gross) * tick;
}

double execution_risk(std::span<const RiskItem> items, double sigma) noexcept {
    double total = 0.0;
    for (const RiskItem& r : items) {
        if (r.wait <= 0) continue;
        total += sigma * static_cast<double>(r.volume) *
                 (1.0 + static_cast<double>(r.elapsed) / static_cast<double>(r.wait));
    }
    return total;
}

}  // namespace mmsim

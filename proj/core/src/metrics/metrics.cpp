#include "mmsim/metrics/metrics.hpp"

#include "mmsim/common/error.hpp"

#include <cmath>
#include <cstdlib>

namespace mmsim {

double epnl(std::span<const double> pnl) noexcept {
    double s = 0.0;
    for (double x : pnl) s += x;
    return s;
}

double epnl(std::span<const StepRecord> trace) noexcept {
    double s = 0.0;
    for (const StepRecord& r : trace) s += r.reward.pnl;
    return s;
}

double mean_absolute_position(std::span<const Quantity> positions) noexcept {
    Quantity sum = 0;
    std::size_t n = 0;
    for (Quantity q : positions) {
        if (q == 0) continue;
        sum += std::llabs(q);
        ++n;
    }
    return n == 0 ? 0.0 : static_cast<double>(sum) / static_cast<double>(n);
}

double mean_absolute_position(std::span<const StepRecord> trace) noexcept {
    std::vector<Quantity> q;
    q.reserve(trace.size());
    for (const StepRecord& r : trace) q.push_back(r.q_after);
    return mean_absolute_position(q);
}

double pnlmap(double epnl_value, double map_value) {
    if (map_value == 0.0) throw Error(Errc::undefined_ratio, "PnLMAP is undefined when MAP is 0");
    return epnl_value / map_value;
}

AdverseSelection adverse_selection(std::span<const StepRecord> trace, std::size_t horizon) {
    AdverseSelection out;
    if (horizon == 0) horizon = 1;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        if (trace[i].fills.empty()) continue;
        const Ticks ref2 = trace[std::min(i + horizon - 1, trace.size() - 1)].mid2_after;
        for (const AgentFill& f : trace[i].fills) {
            ++out.fills;
            bool bad = f.side == Side::bid ? ref2 < 2 * f.price : ref2 > 2 * f.price;
            if (bad) ++out.adverse;
        }
    }
    out.undefined = out.fills == 0;
    out.ratio = out.undefined ? 0.0 : static_cast<double>(out.adverse) / static_cast<double>(out.fills);
    return out;
}

std::size_t num_fills(std::span<const StepRecord> trace) noexcept {
    std::size_t n = 0;
    for (const StepRecord& r : trace) n += r.fill_records;
    return n;
}

MetricsReport compute_metrics(std::span<const StepRecord> trace, std::size_t adverse_horizon) {
    MetricsReport m;
    m.epnl = epnl(trace);
    m.map = mean_absolute_position(trace);
    if (m.map > 0.0) m.pnlmap = pnlmap(m.epnl, m.map);
    auto as = adverse_selection(trace, adverse_horizon);
    m.adverse_selection_ratio = as.ratio;
    m.adverse_selection_defined = !as.undefined;
    m.num_fills = num_fills(trace);
    for (const StepRecord& r : trace) m.total_reward += r.reward.total;
    m.steps = trace.size();
    if (!trace.empty()) {
        m.final_inventory = trace.back().q_after;
        m.final_net_value = trace.back().net_value;
    }
    return m;
}

SampleStat sample_stat(std::span<const double> values) noexcept {
    SampleStat s;
    s.count = values.size();
    if (values.empty()) return s;
    for (double v : values) s.mean += v;
    s.mean /= static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return s;
}

}  // namespace mmsim

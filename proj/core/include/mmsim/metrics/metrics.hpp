#pragma once

#include "mmsim/common/types.hpp"
#include "mmsim/env/environment.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace mmsim {

/// Sum of per-step PnL (penalties and compensation excluded).
double epnl(std::span<const double> pnl) noexcept;
double epnl(std::span<const StepRecord> trace) noexcept;

/// Mean |position| over the steps where the position is non-zero; 0 when
/// it never is.
double mean_absolute_position(std::span<const Quantity> positions) noexcept;
double mean_absolute_position(std::span<const StepRecord> trace) noexcept;

/// epnl / map. Throws UndefinedRatio when map is 0.
double pnlmap(double epnl, double map);

struct AdverseSelection {
    double ratio = 0.0;
    std::size_t adverse = 0;
    std::size_t fills = 0;
    bool undefined = true;  // no fills
};

/// A bid fill is adverse when the reference mid ends below its price, an ask
/// fill when it ends above. The reference is the mid `horizon` steps after
/// the fill's step began (clamped to the end of the trace).
AdverseSelection adverse_selection(std::span<const StepRecord> trace, std::size_t horizon = 1);

/// Exchange fills that involved the agent.
std::size_t num_fills(std::span<const StepRecord> trace) noexcept;

struct MetricsReport {
    double epnl = 0.0;
    double map = 0.0;
    std::optional<double> pnlmap;  // empty when map is 0
    double adverse_selection_ratio = 0.0;
    bool adverse_selection_defined = false;
    std::size_t num_fills = 0;
    double total_reward = 0.0;
    std::size_t steps = 0;
    Quantity final_inventory = 0;
    double final_net_value = 0.0;
};

MetricsReport compute_metrics(std::span<const StepRecord> trace, std::size_t adverse_horizon = 1);

struct SampleStat {
    double mean = 0.0;
    double std = 0.0;  // sample standard deviation; 0 for a single value
    std::size_t count = 0;
};

SampleStat sample_stat(std::span<const double> values) noexcept;

}  // namespace mmsim

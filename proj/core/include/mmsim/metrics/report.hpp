#pragma once

#include "mmsim/data/config_io.hpp"
#include "mmsim/env/environment.hpp"
#include "mmsim/metrics/metrics.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace mmsim {

/// Trace CSV columns, in file order.
const std::vector<std::string>& trace_columns();

/// One row per step. Prices are currency with tick-derived decimals;
/// reals use the shortest text that reads back to the same double.
/// Encodings: fills "ask@10.02x100;bid@9.98x200", quotes "10.02x100/2500",
/// liquidation "bid:100", risk items "volume:elapsed:wait;...".
std::string format_trace_csv(std::span<const StepRecord> trace, double tick);

/// Inverse of format_trace_csv (fill order ids and times are not stored).
/// Throws ParseError.
std::vector<StepRecord> parse_trace_csv(const std::string& text, double tick);

/// FNV-1a of the trace CSV text.
std::uint64_t trace_hash(std::span<const StepRecord> trace, double tick);

Json metrics_json(const MetricsReport& m);
MetricsReport metrics_from_json(const Json& j);

struct RunLabel {
    std::string agent;
    std::uint64_t seed = 0;
    Json config;  // effective configuration, echoed verbatim
};

/// Writes metrics.json, trace.csv, series_pnl.csv, series_inventory.csv and
/// series_quotes.csv into `dir` (created if missing). Throws IoError.
void emit_report(const std::filesystem::path& dir, const RunLabel& label, const MetricsReport& metrics,
                 std::span<const StepRecord> trace, double tick);

/// Mean and sample standard deviation of each metric across runs.
Json aggregate_json(std::span<const MetricsReport> runs);

std::string series_pnl_csv(std::span<const StepRecord> trace);
std::string series_inventory_csv(std::span<const StepRecord> trace);
std::string series_quotes_csv(std::span<const StepRecord> trace, double tick);

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace mmsim

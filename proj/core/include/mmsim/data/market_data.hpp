#pragma once

#include "mmsim/common/types.hpp"
#include "mmsim/indicators/indicators.hpp"
#include "mmsim/indicators/snapshot.hpp"

#include <array>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace mmsim {

struct TradePrint {
    Ticks price = 0;
    Quantity volume = 0;

    friend bool operator==(const TradePrint&, const TradePrint&) = default;
};

/// One 500 ms interval: the book at its end, the trades inside it and, when
/// the source provides them, per-level event counts.
struct MarketDataRecord {
    MarketSnapshot snapshot;
    std::vector<TradePrint> trades;
    std::array<LevelEvents, kSnapshotLevels> events{};
    bool has_events = false;

    friend bool operator==(const MarketDataRecord& a, const MarketDataRecord& b);
};

/// Reads the snapshot CSV (header required). Prices are converted from
/// currency to ticks. Throws ParseError (with line number), CrossedSnapshot,
/// NonMonotoneTimestamp or IoError.
std::vector<MarketDataRecord> load_csv(const std::filesystem::path& path, double tick);
std::vector<MarketDataRecord> parse_csv(const std::string& text, double tick);

/// Writes records in the same layout load_csv reads. Event columns are
/// emitted when any record carries them. Trades are aggregated into
/// (last_px, last_vol).
void write_csv(std::span<const MarketDataRecord> records, const std::filesystem::path& path,
               double tick);
std::string format_csv(std::span<const MarketDataRecord> records, double tick);

/// Column names in file order; `with_events` adds n_1..5, c_1..5, m_1..5.
std::vector<std::string> csv_columns(bool with_events);

struct NamedSplit {
    std::string name;
    std::vector<MarketDataRecord> records;
};

/// Cuts `records` at the given indices into names.size() = boundaries.size() + 1
/// contiguous, order-preserving subsets. Throws EmptySplit when any subset
/// would be empty.
std::vector<NamedSplit> split_records(std::span<const MarketDataRecord> records,
                                      std::span<const std::size_t> boundaries,
                                      std::span<const std::string> names);

/// Index boundaries for timestamp cut points (first record with ts >= cut).
std::vector<std::size_t> boundaries_at(std::span<const MarketDataRecord> records,
                                       std::span<const Millis> cut_times);

}  // namespace mmsim

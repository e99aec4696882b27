#include "mmsim/common/error.hpp"

namespace mmsim {

std::string_view errc_name(Errc code) noexcept {
    switch (code) {
        case Errc::non_positive_quantity: return "NonPositiveQuantity";
        case Errc::fraction_out_of_range: return "FractionOutOfRange";
        case Errc::invalid_latency_model: return "InvalidLatencyModel";
        case Errc::level_out_of_range: return "LevelOutOfRange";
        case Errc::degenerate_level: return "DegenerateLevel";
        case Errc::empty_book_side: return "EmptyBookSide";
        case Errc::stepped_after_done: return "SteppedAfterDone";
        case Errc::insufficient_data: return "InsufficientData";
        case Errc::invalid_config: return "InvalidConfig";
        case Errc::empty_price_series: return "EmptyPriceSeries";
        case Errc::non_positive_price: return "NonPositivePrice";
        case Errc::index_out_of_range: return "IndexOutOfRange";
        case Errc::format_version_mismatch: return "FormatVersionMismatch";
        case Errc::checksum_mismatch: return "ChecksumMismatch";
        case Errc::insufficient_horizon: return "InsufficientHorizon";
        case Errc::insufficient_history: return "InsufficientHistory";
        case Errc::parse_error: return "ParseError";
        case Errc::crossed_snapshot: return "CrossedSnapshot";
        case Errc::non_monotone_timestamp: return "NonMonotoneTimestamp";
        case Errc::empty_split: return "EmptySplit";
        case Errc::undefined_ratio: return "UndefinedRatio";
        case Errc::io_error: return "IoError";
        case Errc::malformed_request: return "MalformedRequest";
        case Errc::action_index_out_of_range: return "ActionIndexOutOfRange";
        case Errc::grid_mismatch: return "GridMismatch";
    }
    return "Unknown";
}

}  // namespace mmsim

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mmsim {

enum class Errc {
    non_positive_quantity,
    fraction_out_of_range,
    invalid_latency_model,
    level_out_of_range,
    degenerate_level,
    empty_book_side,
    stepped_after_done,
    insufficient_data,
    invalid_config,
    empty_price_series,
    non_positive_price,
    index_out_of_range,
    format_version_mismatch,
    checksum_mismatch,
    insufficient_horizon,
    insufficient_history,
    parse_error,
    crossed_snapshot,
    non_monotone_timestamp,
    empty_split,
    undefined_ratio,
    io_error,
    malformed_request,
    action_index_out_of_range,
    grid_mismatch,
};

/// Wire/CLI name of an error code, e.g. "NonPositiveQuantity".
std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace mmsim

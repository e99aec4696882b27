#pragma once

#include "mmsim/common/types.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mmsim {

enum class DistributionMode : std::uint8_t { smoothed, softmax };

struct TeacherConfig {
    std::vector<Quantity> grid;  // target inventories, sorted, containing 0
    double fee = 0.0;            // commission rate on traded notional
    double lambda = 0.0;         // holding cost rate on |position| x price
    double epsilon = 0.0;        // smoothing mass spread over non-optimal actions
    double temperature = 1.0;    // softmax mode; infinity gives uniform
    DistributionMode mode = DistributionMode::smoothed;
    double tick = 0.02;          // recorded in the file, not used by the recursion

    /// Throws InvalidConfig unless |grid| >= 2, sorted, contains 0, fee >= 0,
    /// lambda >= 0, 0 <= epsilon <= 1 and temperature > 0.
    void validate() const;
};

/// Ten equally spaced targets over [-limit, limit], rounded to whole units,
/// with the entry nearest zero replaced by 0.
std::vector<Quantity> default_grid(Quantity limit, std::size_t count = 10);

/// Optimal action values over (step, current position, next position).
/// Steps are 0-based; the last step's slice is zero.
struct QTable {
    std::size_t steps = 0;
    std::vector<Quantity> grid;
    std::vector<double> prices;
    double fee = 0.0;
    double lambda = 0.0;
    double tick = 0.0;
    std::vector<double> values;  // row-major (t, p, a)

    std::size_t size() const noexcept { return grid.size(); }
    double at(std::size_t t, std::size_t p, std::size_t a) const {
        return values[(t * grid.size() + p) * grid.size() + a];
    }
    double& at(std::size_t t, std::size_t p, std::size_t a) {
        return values[(t * grid.size() + p) * grid.size() + a];
    }
    std::span<const double> row(std::size_t t, std::size_t p) const {
        return {values.data() + (t * grid.size() + p) * grid.size(), grid.size()};
    }

    friend bool operator==(const QTable&, const QTable&) = default;
};

/// Per-step reward of moving from position p to a between steps t and t+1.
double step_reward(std::span<const double> prices, std::size_t t, double p, double a, double fee,
                   double lambda) noexcept;

/// Backward induction over the price series. Throws EmptyPriceSeries (fewer
/// than two prices) or NonPositivePrice.
QTable build_qtable(std::span<const double> prices, const TeacherConfig& cfg);

/// Grid index of the best next position; exact ties go to the smallest |a|,
/// then the lower index. Throws IndexOutOfRange.
std::size_t optimal_action_index(const QTable& q, std::size_t t, std::size_t p);
Quantity optimal_action(const QTable& q, std::size_t t, std::size_t p);

/// Probability vector over the grid. Smoothed mode puts 1 - epsilon on the
/// optimal action; softmax mode uses Q / temperature.
std::vector<double> teacher_distribution(const QTable& q, std::size_t t, std::size_t p,
                                         const TeacherConfig& cfg);

/// Grid index closest to `inventory` (lower index on ties).
std::size_t nearest_grid_index(std::span<const Quantity> grid, Quantity inventory);

/// Binary layout, little-endian: "MMQT", u32 version, u64 steps, u64 grid
/// size, i64 grid[], f64 fee, f64 lambda, f64 tick, f64 prices[steps],
/// f64 values[steps * size * size], u64 FNV-1a checksum of everything before it.
std::string serialize(const QTable& q);
/// Throws FormatVersionMismatch or ChecksumMismatch (covers truncation).
QTable deserialize(std::string_view bytes);

void save_qtable(const QTable& q, const std::filesystem::path& path);

struct LoadedQTable {
    QTable table;
    bool grid_mismatch = false;  // grid does not span [-limit, limit]
};
LoadedQTable load_qtable(const std::filesystem::path& path,
                         std::optional<Quantity> inventory_limit = std::nullopt);

inline constexpr std::uint32_t kQTableVersion = 1;

}  // namespace mmsim

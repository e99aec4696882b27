#include "mmsim/teacher/qtable.hpp"
#include "oracles/path_enumerator.hpp"
#include "support/common.hpp"
#include "support/generators.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

using namespace mmsim;

namespace {

TeacherConfig config(std::vector<Quantity> grid, double fee = 0.0) {
    TeacherConfig c;
    c.grid = std::move(grid);
    c.fee = fee;
    return c;
}

double row_max(const QTable& q, std::size_t t, std::size_t p) {
    auto r = q.row(t, p);
    return *std::max_element(r.begin(), r.end());
}

std::size_t index_of(const std::vector<Quantity>& g, Quantity v) {
    return static_cast<std::size_t>(std::find(g.begin(), g.end(), v) - g.begin());
}

}  // namespace

TEST(QTable, ThreePriceExample) {
    std::vector<double> prices{10, 11, 12};
    QTable q = build_qtable(prices, config({0, 1}));
    EXPECT_EQ(row_max(q, 0, 0), 2.0);
    EXPECT_EQ(oracle::best_path_value(prices, {0, 1}, 0, 0.0), 2.0);
    EXPECT_EQ(optimal_action(q, 0, 0), 1);
}

TEST(QTable, TerminalSliceIsZero) {
    std::vector<double> prices{10, 12, 9, 14};
    QTable q = build_qtable(prices, config({-1, 0, 1}, 0.01));
    ASSERT_EQ(q.steps, 4u);
    for (std::size_t p = 0; p < 3; ++p) {
        for (std::size_t a = 0; a < 3; ++a) EXPECT_EQ(q.at(3, p, a), 0.0);
    }
}

TEST(QTable, ConstantPricesNoFeeIsZero) {
    std::vector<double> prices(12, 50.0);
    QTable q = build_qtable(prices, config({-2, -1, 0, 1, 2}));
    for (double v : q.values) EXPECT_EQ(v, 0.0);
}

TEST(QTable, DominatingFeeKeepsFlat) {
    std::vector<double> prices{10, 11, 12, 13, 11, 15};
    std::vector<Quantity> grid{-2, -1, 0, 1, 2};
    QTable q = build_qtable(prices, config(grid, 10.0));
    const std::size_t zero = index_of(grid, 0);
    EXPECT_EQ(row_max(q, 0, zero), 0.0);
    EXPECT_EQ(optimal_action(q, 0, zero), 0);
    EXPECT_EQ(oracle::best_path_value(prices, grid, zero, 10.0), 0.0);
    for (std::size_t t = 0; t + 1 < q.steps; ++t) EXPECT_EQ(optimal_action(q, t, zero), 0);
}

TEST(QTable, RisingPricesGoMaxLong) {
    std::vector<double> prices{10, 11, 13, 14, 18};
    std::vector<Quantity> grid{-3, -1, 0, 2, 5};
    QTable q = build_qtable(prices, config(grid));
    EXPECT_EQ(optimal_action(q, 0, index_of(grid, 0)), 5);
}

TEST(QTable, LastStepValueIsStepReward) {
    std::vector<double> prices{10, 12, 9, 14};
    std::vector<Quantity> grid{-1, 0, 2};
    const double fee = 0.03;
    QTable q = build_qtable(prices, config(grid, fee));
    const std::size_t t = prices.size() - 2;
    for (std::size_t p = 0; p < grid.size(); ++p) {
        std::size_t best = 0;
        for (std::size_t a = 0; a < grid.size(); ++a) {
            double r = oracle::path_step_reward(prices, t, static_cast<double>(grid[p]), static_cast<double>(grid[a]), fee, 0.0);
            EXPECT_DOUBLE_EQ(q.at(t, p, a), r);
            if (r > q.at(t, p, best)) best = a;
        }
        EXPECT_EQ(optimal_action_index(q, t, p), best);
    }
}

TEST(QTable, TiesGoToFlattestThenLowerIndex) {
    std::vector<double> prices(5, 10.0);
    QTable q = build_qtable(prices, config({-2, -1, 0, 1, 2}));
    for (std::size_t p = 0; p < 5; ++p) EXPECT_EQ(optimal_action(q, 1, p), 0);
    // Without 0 among the ties: -1 and +1 tie on |a|, the lower index wins.
    QTable manual = q;
    for (std::size_t a = 0; a < 5; ++a) manual.at(0, 0, a) = -1.0;
    manual.at(0, 0, 1) = 3.0;
    manual.at(0, 0, 3) = 3.0;
    EXPECT_EQ(optimal_action_index(manual, 0, 0), 1u);
}

TEST(QTable, IndexChecks) {
    std::vector<double> prices{10, 11};
    QTable q = build_qtable(prices, config({0, 1}));
    EXPECT_ERRC(optimal_action(q, 2, 0), Errc::index_out_of_range);
    EXPECT_ERRC(optimal_action(q, 0, 2), Errc::index_out_of_range);
}

TEST(QTable, InputChecks) {
    std::vector<double> one{10};
    EXPECT_ERRC(build_qtable(one, config({0, 1})), Errc::empty_price_series);
    std::vector<double> neg{10, 0, 11};
    EXPECT_ERRC(build_qtable(neg, config({0, 1})), Errc::non_positive_price);
    std::vector<double> ok{10, 11};
    EXPECT_ERRC(build_qtable(ok, config({1, 2})), Errc::invalid_config);
    EXPECT_ERRC(build_qtable(ok, config({1, 0})), Errc::invalid_config);
    EXPECT_ERRC(build_qtable(ok, config({0})), Errc::invalid_config);
    EXPECT_ERRC(build_qtable(ok, config({0, 1}, -0.1)), Errc::invalid_config);
}

TEST(QTable, DefaultGrid) {
    auto g = default_grid(800);
    EXPECT_EQ(g, (std::vector<Quantity>{-800, -622, -444, -267, 0, 89, 267, 444, 622, 800}));
    EXPECT_EQ(g.size(), 10u);
}

TEST(QTable, OracleEquivalenceIntegerPrices) {
    gen::Source s(2024);
    for (int trial = 0; trial < 300; ++trial) {
        const auto n = static_cast<std::size_t>(s.between(2, 7));
        const auto g = static_cast<std::size_t>(s.between(2, 4));
        auto prices = gen::random_prices(s, n);
        auto grid = gen::random_grid(s, g);
        QTable q = build_qtable(prices, config(grid));
        for (std::size_t p = 0; p < grid.size(); ++p) {
            ASSERT_EQ(row_max(q, 0, p), oracle::best_path_value(prices, grid, p, 0.0)) << "trial " << trial;
        }
    }
}

TEST(QTable, OracleEquivalenceWithCosts) {
    gen::Source s(77);
    for (int trial = 0; trial < 300; ++trial) {
        const auto n = static_cast<std::size_t>(s.between(2, 7));
        const auto g = static_cast<std::size_t>(s.between(2, 4));
        auto prices = gen::random_prices(s, n);
        for (double& p : prices) p *= 0.37;
        auto grid = gen::random_grid(s, g);
        TeacherConfig c = config(grid, 0.001 * static_cast<double>(s.between(0, 30)));
        c.lambda = 0.001 * static_cast<double>(s.between(0, 5));
        QTable q = build_qtable(prices, c);
        for (std::size_t p = 0; p < grid.size(); ++p) {
            const double want = oracle::best_path_value(prices, grid, p, c.fee, c.lambda);
            ASSERT_NEAR(row_max(q, 0, p), want, 1e-9 * std::max(1.0, std::fabs(want))) << "trial " << trial;
        }
    }
}

TEST(QTable, RisingSeriesWithoutCostsTakesMaxPosition) {
    gen::Source s(5);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> prices{static_cast<double>(s.between(10, 50))};
        const auto n = s.between(2, 30);
        for (std::int64_t i = 1; i < n; ++i) prices.push_back(prices.back() + static_cast<double>(s.between(1, 5)));
        auto grid = gen::random_grid(s, static_cast<std::size_t>(s.between(2, 6)));
        QTable q = build_qtable(prices, config(grid));
        EXPECT_EQ(optimal_action(q, 0, index_of(grid, 0)), grid.back());
    }
}

TEST(TeacherDistribution, Examples) {
    std::vector<double> prices{10, 11, 12};
    TeacherConfig c = config(default_grid(800));
    QTable q = build_qtable(prices, c);
    auto one_hot = teacher_distribution(q, 0, 4, c);
    const std::size_t best = optimal_action_index(q, 0, 4);
    for (std::size_t a = 0; a < one_hot.size(); ++a) EXPECT_EQ(one_hot[a], a == best ? 1.0 : 0.0);

    c.epsilon = 0.1;
    auto smooth = teacher_distribution(q, 0, 4, c);
    EXPECT_NEAR(smooth[best], 0.9, 1e-15);
    for (std::size_t a = 0; a < smooth.size(); ++a) {
        if (a != best) EXPECT_NEAR(smooth[a], 0.1 / 9.0, 1e-15);
    }

    c.mode = DistributionMode::softmax;
    c.temperature = std::numeric_limits<double>::infinity();
    for (double p : teacher_distribution(q, 0, 4, c)) EXPECT_NEAR(p, 0.1, 1e-15);
}

TEST(TeacherDistribution, SumsToOneAndAgreesWithPolicy) {
    gen::Source s(31);
    for (int trial = 0; trial < 200; ++trial) {
        auto prices = gen::random_prices(s, static_cast<std::size_t>(s.between(2, 20)));
        auto grid = gen::random_grid(s, static_cast<std::size_t>(s.between(2, 8)));
        TeacherConfig c = config(grid, 0.001 * static_cast<double>(s.between(0, 10)));
        c.epsilon = 0.01 * static_cast<double>(s.between(0, 60));
        c.mode = s.chance(0.5) ? DistributionMode::softmax : DistributionMode::smoothed;
        c.temperature = 0.5 + static_cast<double>(s.between(0, 20));
        QTable q = build_qtable(prices, c);
        const auto t = static_cast<std::size_t>(s.between(0, static_cast<std::int64_t>(q.steps) - 2));
        const auto p = static_cast<std::size_t>(s.between(0, static_cast<std::int64_t>(grid.size()) - 1));
        auto d = teacher_distribution(q, t, p, c);
        double sum = std::accumulate(d.begin(), d.end(), 0.0);
        ASSERT_NEAR(sum, 1.0, 1e-12);
        std::size_t arg = 0;
        for (std::size_t a = 1; a < d.size(); ++a) {
            if (d[a] > d[arg]) arg = a;
        }
        if (c.mode == DistributionMode::smoothed && c.epsilon < 1.0 - c.epsilon) {
            EXPECT_EQ(arg, optimal_action_index(q, t, p));
        }
        if (c.mode == DistributionMode::softmax) {
            EXPECT_EQ(q.at(t, p, arg), row_max(q, t, p));
        }
    }
}

TEST(TeacherDistribution, NearestGridIndex) {
    std::vector<Quantity> g{-800, -400, 0, 400, 800};
    EXPECT_EQ(nearest_grid_index(g, 0), 2u);
    EXPECT_EQ(nearest_grid_index(g, 190), 2u);
    EXPECT_EQ(nearest_grid_index(g, 200), 2u);
    EXPECT_EQ(nearest_grid_index(g, 210), 3u);
    EXPECT_EQ(nearest_grid_index(g, -5000), 0u);
}

TEST(QTableFile, RoundTrip) {
    gen::Source s(8);
    auto prices = gen::random_prices(s, 40);
    TeacherConfig c = config(default_grid(800), 0.0002);
    c.lambda = 0.00001;
    QTable q = build_qtable(prices, c);
    EXPECT_TRUE(deserialize(serialize(q)) == q);
    auto dir = testing_support::scratch_dir("qtable");
    save_qtable(q, dir / "q.bin");
    auto loaded = load_qtable(dir / "q.bin", 800);
    EXPECT_TRUE(loaded.table == q);
    EXPECT_FALSE(loaded.grid_mismatch);
    EXPECT_TRUE(load_qtable(dir / "q.bin", 500).grid_mismatch);
}

TEST(QTableFile, TruncatedIsChecksumMismatch) {
    std::vector<double> prices{10, 11, 12};
    std::string bytes = serialize(build_qtable(prices, config({0, 1})));
    EXPECT_ERRC(deserialize(bytes.substr(0, bytes.size() - 3)), Errc::checksum_mismatch);
    EXPECT_ERRC(deserialize(bytes.substr(0, 30)), Errc::checksum_mismatch);
    std::string flipped = bytes;
    flipped[40] ^= 0x1;
    EXPECT_ERRC(deserialize(flipped), Errc::checksum_mismatch);
}

TEST(QTableFile, WrongMagicOrVersion) {
    std::vector<double> prices{10, 11, 12};
    std::string bytes = serialize(build_qtable(prices, config({0, 1})));
    std::string magic = bytes;
    magic[0] = 'X';
    EXPECT_ERRC(deserialize(magic), Errc::format_version_mismatch);
    std::string version = bytes;
    version[4] = 9;
    EXPECT_ERRC(deserialize(version), Errc::format_version_mismatch);
}

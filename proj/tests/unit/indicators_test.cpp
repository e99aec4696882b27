#include "mmsim/indicators/indicators.hpp"
#include "support/common.hpp"
#include "support/generators.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace mmsim;

namespace {

// Textbook two-pass sample standard deviation of successive differences.
double reference_sigma(const std::vector<double>& mids) {
    if (mids.size() < 3) return 0.0;
    std::vector<double> d;
    for (std::size_t i = 1; i < mids.size(); ++i) d.push_back(mids[i] - mids[i - 1]);
    double mean = 0;
    for (double x : d) mean += x;
    mean /= static_cast<double>(d.size());
    double ss = 0;
    for (double x : d) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(d.size() - 1));
}

MarketSnapshot snap(Ticks bid, Ticks ask) {
    MarketSnapshot s;
    for (std::size_t i = 0; i < kSnapshotLevels; ++i) {
        s.bid_px[i] = bid - static_cast<Ticks>(i);
        s.ask_px[i] = ask + static_cast<Ticks>(i);
        s.bid_vol[i] = 100;
        s.ask_vol[i] = 100;
    }
    return s;
}

Order at(OrderId id, Side side, Ticks price, Quantity qty) {
    Order o;
    o.id = id;
    o.side = side;
    o.price = price;
    o.quantity = qty;
    o.seq = id;
    return o;
}

}  // namespace

TEST(Ohlc, TradesInOrder) {
    std::vector<Ticks> px{500, 510, 495, 505};
    Ohlc o = ohlc(px, 400);
    EXPECT_EQ(o.open, 500);
    EXPECT_EQ(o.high, 510);
    EXPECT_EQ(o.low, 495);
    EXPECT_EQ(o.close, 505);
}

TEST(Ohlc, NoTradesUsesPreviousClose) {
    Ohlc o = ohlc({}, 500);
    EXPECT_EQ(o.open, 500);
    EXPECT_EQ(o.high, 500);
    EXPECT_EQ(o.low, 500);
    EXPECT_EQ(o.close, 500);
}

TEST(Ohlc, SingleTrade) {
    std::vector<Ticks> px{525};
    Ohlc o = ohlc(px, 500);
    EXPECT_EQ(o.open, 525);
    EXPECT_EQ(o.high, 525);
    EXPECT_EQ(o.low, 525);
    EXPECT_EQ(o.close, 525);
}

TEST(Imbalance, Examples) {
    MarketSnapshot s = snap(499, 501);
    s.bid_vol[0] = 300;
    s.ask_vol[0] = 100;
    EXPECT_EQ(imbalance(s, 1), 200);
    EXPECT_EQ(imbalance(s, 2), 0);
    s.bid_vol[2] = 0;
    s.ask_vol[2] = 150;
    EXPECT_EQ(imbalance(s, 3), -150);
    EXPECT_ERRC(imbalance(s, 0), Errc::level_out_of_range);
    EXPECT_ERRC(imbalance(s, 6), Errc::level_out_of_range);
}

TEST(OrderFlow, Examples) {
    EXPECT_EQ(order_flow({5, 2, 1}), 4);
    EXPECT_EQ(order_flow({3, 3, 0}), 0);
    EXPECT_EQ(order_flow({0, 3, 0}), -3);
}

TEST(Rqp, Examples) {
    QueueContext c;
    c.l_front = 0;
    c.l_behind = 4;
    EXPECT_EQ(rqp(c), 0.0);
    c.l_front = 2;
    c.l_behind = 2;
    EXPECT_EQ(rqp(c), 0.5);
    c.l_front = 3;
    c.l_behind = 1;
    EXPECT_EQ(rqp(c), 0.75);
    c.l_front = 0;
    c.l_behind = 0;
    EXPECT_EQ(rqp(c), 0.0);
}

TEST(Rqp, NondecreasingInFrontCount) {
    gen::Source s(17);
    for (int i = 0; i < 2000; ++i) {
        QueueContext c;
        c.l_behind = s.between(0, 50);
        c.l_front = s.between(0, 50);
        double a = rqp(c);
        ++c.l_front;
        EXPECT_LE(a, rqp(c));
        EXPECT_GE(a, 0.0);
        EXPECT_LE(a, 1.0);
    }
}

TEST(Competitiveness, Anchors) {
    QueueContext c;
    c.p_best = 500;
    c.v_front = 0;
    c.v_total = 400;
    c.v_avg = 100;
    EXPECT_EQ(competitiveness(c, 500, 100).value, 1.0);

    c.v_front = 400;
    EXPECT_EQ(competitiveness(c, 500, 100).value, 0.0);

    c.p_best = 100;
    c.v_front = 200;
    c.v_total = 400;
    c.v_avg = 50;
    EXPECT_DOUBLE_EQ(competitiveness(c, 99, 100).value, 0.99);
}

TEST(Competitiveness, DegenerateLevelFlagged) {
    QueueContext c;
    c.p_best = 500;
    auto r = competitiveness(c, 500, 100);
    EXPECT_TRUE(r.degenerate);
    EXPECT_EQ(r.value, 0.0);
}

TEST(QueueContext, CountsOrdersAroundTheTarget) {
    OrderBook book;
    book.rest(at(1, Side::bid, 500, 100));
    book.rest(at(2, Side::bid, 500, 50));
    book.rest(at(3, Side::bid, 500, 30));
    book.rest(at(4, Side::bid, 500, 20));
    book.rest(at(5, Side::bid, 501, 10));
    auto ctx = queue_context(book, 3);
    ASSERT_TRUE(ctx);
    EXPECT_EQ(ctx->l_front, 2);
    EXPECT_EQ(ctx->l_behind, 1);
    EXPECT_EQ(ctx->v_front, 150);
    EXPECT_EQ(ctx->v_total, 200);
    EXPECT_EQ(ctx->v_avg, 50.0);
    EXPECT_EQ(ctx->p_best, 501);
    EXPECT_EQ(ctx->l_front + ctx->l_behind + 1, 4);
    EXPECT_FALSE(queue_context(book, 99));
}

TEST(QueueContext, AskSideBestIsLowest) {
    OrderBook book;
    book.rest(at(1, Side::ask, 502, 100));
    book.rest(at(2, Side::ask, 503, 100));
    EXPECT_EQ(queue_context(book, 2)->p_best, 502);
}

TEST(MidAndVol, MidOfBestPrices) {
    std::vector<MarketSnapshot> s{snap(499, 501)};
    auto mv = mid_and_vol(s, 0.02);
    EXPECT_NEAR(mv.mid, 10.00, 1e-12);
    EXPECT_EQ(mv.sigma, 0.0);
}

TEST(MidAndVol, ConstantMidsGiveZeroSigma) {
    std::vector<MarketSnapshot> s(30, snap(499, 501));
    EXPECT_EQ(mid_and_vol(s, 0.02).sigma, 0.0);
}

TEST(MidAndVol, ArithmeticMidsGiveZeroSigma) {
    std::vector<MarketSnapshot> s;
    for (Ticks k = 0; k < 25; ++k) s.push_back(snap(499 + 5 * k, 501 + 5 * k));
    EXPECT_NEAR(mid_and_vol(s, 0.02).sigma, 0.0, 1e-12);
}

TEST(MidAndVol, MatchesReferenceOverTrailingWindow) {
    gen::Source g(5);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<MarketSnapshot> s;
        std::vector<double> mids;
        Ticks c = 500;
        const auto n = g.between(1, 40);
        for (std::int64_t k = 0; k < n; ++k) {
            c += g.between(-2, 2);
            s.push_back(snap(c - 1, c + 1));
            mids.push_back(static_cast<double>(2 * c) * 0.02 / 2.0);
        }
        if (mids.size() > 21) mids.erase(mids.begin(), mids.end() - 21);
        EXPECT_NEAR(mid_and_vol(s, 0.02).sigma, reference_sigma(mids), 1e-12);
    }
}

TEST(VolatilityWindow, KeepsTwentyDifferences) {
    VolatilityWindow w(20);
    std::vector<double> all;
    gen::Source g(8);
    for (int i = 0; i < 100; ++i) {
        double m = 10.0 + 0.02 * static_cast<double>(g.between(-20, 20));
        w.push(m);
        all.push_back(m);
        std::vector<double> tail(all.size() > 21 ? all.end() - 21 : all.begin(), all.end());
        ASSERT_NEAR(w.sigma(), reference_sigma(tail), 1e-12);
        ASSERT_GE(w.sigma(), 0.0);
    }
}

TEST(IndicatorVector, ConsistencyCheck) {
    IndicatorVector v;
    v[IndicatorVector::best_bid] = 9.98;
    v[IndicatorVector::best_ask] = 10.02;
    v[IndicatorVector::spread] = 10.02 - 9.98;
    v[IndicatorVector::mid] = 10.0;
    v[IndicatorVector::open] = 10.0;
    v[IndicatorVector::high] = 10.1;
    v[IndicatorVector::low] = 9.9;
    v[IndicatorVector::close] = 10.0;
    EXPECT_TRUE(v.consistent());
    v[IndicatorVector::low] = 10.05;
    EXPECT_FALSE(v.consistent());
    EXPECT_EQ(static_cast<std::size_t>(IndicatorVector::count), 16u);
}

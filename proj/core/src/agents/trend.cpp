#include "mmsim/agents/trend.hpp"

#include "mmsim/common/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>

namespace mmsim {

TrendClass classify_trend(double dp) noexcept {
    if (dp > kStrongTrend) return TrendClass::bull;
    if (dp < -kStrongTrend) return TrendClass::bear;
    if (dp > 0.0) return TrendClass::steady_ascent;
    return TrendClass::steady_descent;
}

TrendClass label_trend(std::span<const double> prices, std::size_t t, std::size_t horizon) {
    if (t >= prices.size() || prices.size() - t <= horizon) {
        throw Error(Errc::insufficient_horizon,
                    fmt::format("label at {} needs {} future prices, series has {}", t, horizon, prices.size()));
    }
    return classify_trend((prices[t + horizon] - prices[t]) / prices[t]);
}

InventoryBand trend_band(TrendClass c, Quantity limit) noexcept {
    switch (c) {
        case TrendClass::bull: return {0, limit};
        case TrendClass::bear: return {-limit, 0};
        case TrendClass::steady_ascent: return {0, limit / 2};
        case TrendClass::steady_descent: return {-(limit / 2), 0};
    }
    return {-limit, limit};
}

std::optional<Liquidation> overlay_enforce(Quantity q, const InventoryBand& band) noexcept {
    if (q > band.upper) return Liquidation{Side::ask, q - band.upper};
    if (q < band.lower) return Liquidation{Side::bid, band.lower - q};
    return std::nullopt;
}

TrendClass momentum_predictor(std::span<const double> history, std::size_t horizon) {
    if (history.size() < horizon + 1) {
        throw Error(Errc::insufficient_history,
                    fmt::format("momentum needs {} prices, have {}", horizon + 1, history.size()));
    }
    const double past = history[history.size() - 1 - horizon];
    return classify_trend((history.back() - past) / past);
}

std::optional<TrendClass> MomentumPredictor::predict(const Observation& obs) {
    if (obs.mids.size() < horizon_ + 1) return std::nullopt;
    return momentum_predictor(obs.mids, horizon_);
}

ScheduledPredictor::ScheduledPredictor(std::vector<std::pair<std::size_t, TrendClass>> schedule)
    : schedule_(std::move(schedule)) {
    std::stable_sort(schedule_.begin(), schedule_.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
}

ScheduledPredictor ScheduledPredictor::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::io_error, fmt::format("cannot open {}", path.string()));
    std::vector<std::pair<std::size_t, TrendClass>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 1 || line.empty()) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos) throw Error(Errc::parse_error, fmt::format("line {}: expected step,trend", line_no));
        auto cls = parse_trend_class(line.substr(comma + 1));
        char* end = nullptr;
        unsigned long long step = std::strtoull(line.c_str(), &end, 10);
        if (!cls || end != line.c_str() + comma) {
            throw Error(Errc::parse_error, fmt::format("line {}: bad trend row '{}'", line_no, line));
        }
        rows.emplace_back(static_cast<std::size_t>(step), *cls);
    }
    return ScheduledPredictor(std::move(rows));
}

std::optional<TrendClass> ScheduledPredictor::predict(const Observation& obs) {
    auto it = std::upper_bound(schedule_.begin(), schedule_.end(), obs.step,
                               [](std::size_t s, const auto& row) { return s < row.first; });
    if (it == schedule_.begin()) return std::nullopt;
    return std::prev(it)->second;
}

TrendOverlayAgent::TrendOverlayAgent(std::unique_ptr<Agent> base, std::unique_ptr<TrendPredictor> predictor)
    : base_(std::move(base)), predictor_(std::move(predictor)) {
    if (!base_ || !predictor_) throw Error(Errc::invalid_config, "trend overlay needs an agent and a predictor");
}

QuoteSet TrendOverlayAgent::act(const Observation& obs) {
    QuoteSet q = base_->act(obs);
    auto cls = predictor_->predict(obs);
    if (!cls) return q;
    const InventoryBand band = trend_band(*cls, obs.inventory_limit);
    q.trend = cls;
    q.liquidation = overlay_enforce(obs.inventory, band);
    if (obs.inventory >= band.upper) q.bid.reset();
    if (obs.inventory <= band.lower) q.ask.reset();
    return q;
}

}  // namespace mmsim

#include "mmsim/agents/baselines.hpp"

#include "mmsim/common/error.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <sstream>

namespace mmsim {

void suppress_beyond_limit(QuoteSet& quotes, Quantity inventory, Quantity limit) {
    if (inventory >= limit) quotes.bid.reset();
    if (inventory <= -limit) quotes.ask.reset();
}

namespace {

void drop_non_positive(QuoteSet& q) {
    if (q.ask && q.ask->price <= 0) q.ask.reset();
    if (q.bid && q.bid->price <= 0) q.bid.reset();
}

}  // namespace

QuoteSet FoicAgent::act(const Observation& obs) {
    QuoteSet q;
    if (obs.best_ask) q.ask = Quote{*obs.best_ask, params_.volume, params_.wait};
    if (obs.best_bid) q.bid = Quote{*obs.best_bid, params_.volume, params_.wait};
    suppress_beyond_limit(q, obs.inventory, obs.inventory_limit);
    return q;
}

Ticks LiicAgent::shift_ticks(Quantity inventory, double tick) const {
    return static_cast<Ticks>(std::llround(skew_ * static_cast<double>(inventory) / tick));
}

QuoteSet LiicAgent::act(const Observation& obs) {
    const Ticks shift = shift_ticks(obs.inventory, obs.tick);
    QuoteSet q;
    if (obs.best_ask) q.ask = Quote{*obs.best_ask - shift, params_.volume, params_.wait};
    if (obs.best_bid) q.bid = Quote{*obs.best_bid - shift, params_.volume, params_.wait};
    suppress_beyond_limit(q, obs.inventory, obs.inventory_limit);
    drop_non_positive(q);
    return q;
}

AvellanedaStoikovAgent::Targets AvellanedaStoikovAgent::targets(double mid, double sigma, Quantity inventory,
                                                                double remaining_steps) const {
    const double g = params_.risk_aversion;
    const double risk = g * sigma * sigma * remaining_steps;
    return {mid - static_cast<double>(inventory) * risk, risk / 2.0 + std::log1p(g / params_.intensity) / g};
}

QuoteSet AvellanedaStoikovAgent::act(const Observation& obs) {
    QuoteSet q;
    if (!obs.best_bid || !obs.best_ask) return q;
    auto [r, h] = targets(obs.mid, obs.sigma, obs.inventory, static_cast<double>(obs.remaining_steps()));
    Ticks ask = static_cast<Ticks>(std::llround((r + h) / obs.tick));
    Ticks bid = static_cast<Ticks>(std::llround((r - h) / obs.tick));
    if (bid >= ask) bid = ask - 1;
    q.ask = Quote{ask, params_.quote.volume, params_.quote.wait};
    q.bid = Quote{bid, params_.quote.volume, params_.quote.wait};
    suppress_beyond_limit(q, obs.inventory, obs.inventory_limit);
    drop_non_positive(q);
    return q;
}

ScriptedAgent::ScriptedAgent(std::vector<ActionVector> script) : script_(std::move(script)) {
    if (script_.empty()) throw Error(Errc::invalid_config, "action script is empty");
}

QuoteSet ScriptedAgent::act(const Observation& obs) {
    const ActionVector& a = script_[next_ % script_.size()];
    ++next_;
    return decode_action(a, obs.best_bid, obs.best_ask, *obs.grids, obs.tick);
}

ActionVector RandomAgent::sample(const ActionGrids& grids) {
    ActionVector a;
    auto dims = action_dims(grids);
    for (std::size_t i = 0; i < dims.size(); ++i) {
        a.index[i] = static_cast<int>(rng_.uniform_int(0, static_cast<std::int64_t>(dims[i]) - 1));
    }
    return a;
}

QuoteSet RandomAgent::act(const Observation& obs) {
    return decode_action(sample(*obs.grids), obs.best_bid, obs.best_ask, *obs.grids, obs.tick);
}

std::vector<ActionVector> load_action_script(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::io_error, fmt::format("cannot open {}", path));
    std::vector<ActionVector> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 || line.empty() || line == "\r") continue;
        std::istringstream row(line);
        ActionVector a;
        std::string cell;
        std::size_t i = 0;
        while (std::getline(row, cell, ',')) {
            if (i >= a.index.size()) break;
            try {
                a.index[i++] = std::stoi(cell);
            } catch (const std::exception&) {
                throw Error(Errc::parse_error, fmt::format("line {}: bad action index '{}'", line_no, cell));
            }
        }
        if (i != a.index.size()) {
            throw Error(Errc::parse_error, fmt::format("line {}: expected 6 action indices", line_no));
        }
        out.push_back(a);
    }
    return out;
}

}  // namespace mmsim

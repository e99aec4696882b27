#include "mmsim/data/config_io.hpp"

#include "mmsim/common/error.hpp"

#include <fmt/format.h>

#include <fstream>

namespace mmsim {

void require_keys(const Json& j, std::initializer_list<std::string_view> allowed, std::string_view context) {
    if (!j.is_object()) throw Error(Errc::invalid_config, fmt::format("{} must be a JSON object", context));
    for (const auto& item : j.items()) {
        bool ok = false;
        for (std::string_view a : allowed) ok = ok || item.key() == a;
        if (!ok) throw Error(Errc::invalid_config, fmt::format("unknown key '{}' in {}", item.key(), context));
    }
}

namespace {

template <class T>
void read(const Json& j, const char* key, T& out) {
    auto it = j.find(key);
    if (it == j.end()) return;
    try {
        out = it->template get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::invalid_config, fmt::format("bad value for '{}': {}", key, e.what()));
    }
}

}  // namespace

void to_json(Json& j, const LatencyModel& m) {
    j = Json{{"kind", m.kind == LatencyKind::uniform ? "uniform" : "constant"},
             {"low_ms", m.low_ms},
             {"high_ms", m.high_ms}};
}

void from_json(const Json& j, LatencyModel& m) {
    require_keys(j, {"kind", "low_ms", "high_ms"}, "latency");
    std::string kind = m.kind == LatencyKind::uniform ? "uniform" : "constant";
    read(j, "kind", kind);
    if (kind == "uniform") {
        m.kind = LatencyKind::uniform;
    } else if (kind == "constant") {
        m.kind = LatencyKind::constant;
    } else {
        throw Error(Errc::invalid_latency_model, fmt::format("unknown latency kind '{}'", kind));
    }
    read(j, "low_ms", m.low_ms);
    read(j, "high_ms", m.high_ms);
    if (m.kind == LatencyKind::constant && !j.contains("high_ms")) m.high_ms = m.low_ms;
}

void to_json(Json& j, const ActionGrids& g) {
    j = Json{{"price_offsets", g.price_offsets}, {"volumes", g.volumes}, {"waits_ms", g.waits}};
}

void from_json(const Json& j, ActionGrids& g) {
    require_keys(j, {"price_offsets", "volumes", "waits_ms"}, "grids");
    read(j, "price_offsets", g.price_offsets);
    read(j, "volumes", g.volumes);
    read(j, "waits_ms", g.waits);
}

void to_json(Json& j, const EpisodeConfig& c) {
    j = Json{{"horizon", c.horizon},
             {"start_index", c.start_index},
             {"batch_interval_ms", c.batch_interval},
             {"inventory_limit", c.inventory_limit},
             {"eta", c.eta},
             {"beta", c.beta},
             {"tick", c.tick},
             {"latency", c.latency},
             {"seed", c.seed},
             {"grids", c.grids},
             {"max_orders_per_side", c.max_orders_per_side},
             {"replay_lot", c.replay_lot},
             {"initial_cash", c.initial_cash},
             {"vol_window", c.vol_window}};
}

void from_json(const Json& j, EpisodeConfig& c) {
    require_keys(j,
                 {"horizon", "start_index", "batch_interval_ms", "inventory_limit", "eta", "beta", "tick",
                  "latency", "seed", "grids", "max_orders_per_side", "replay_lot", "initial_cash", "vol_window"},
                 "episode config");
    read(j, "horizon", c.horizon);
    read(j, "start_index", c.start_index);
    read(j, "batch_interval_ms", c.batch_interval);
    read(j, "inventory_limit", c.inventory_limit);
    read(j, "eta", c.eta);
    read(j, "beta", c.beta);
    read(j, "tick", c.tick);
    if (auto it = j.find("latency"); it != j.end()) from_json(*it, c.latency);
    read(j, "seed", c.seed);
    if (auto it = j.find("grids"); it != j.end()) from_json(*it, c.grids);
    read(j, "max_orders_per_side", c.max_orders_per_side);
    read(j, "replay_lot", c.replay_lot);
    read(j, "initial_cash", c.initial_cash);
    read(j, "vol_window", c.vol_window);
}

void to_json(Json& j, const DriftSegment& d) {
    j = Json{{"start", d.start}, {"end", d.end}, {"drift_ticks", d.drift_ticks}};
}

void from_json(const Json& j, DriftSegment& d) {
    require_keys(j, {"start", "end", "drift_ticks"}, "drift segment");
    read(j, "start", d.start);
    read(j, "end", d.end);
    read(j, "drift_ticks", d.drift_ticks);
}

void to_json(Json& j, const SyntheticConfig& c) {
    Json drift = Json::array();
    for (const DriftSegment& d : c.drift) drift.push_back(d);
    j = Json{{"seed", c.seed},
             {"steps", c.steps},
             {"start_ts", c.start_ts},
             {"interval_ms", c.interval},
             {"initial_mid", c.initial_mid},
             {"tick", c.tick},
             {"volatility_ticks", c.volatility_ticks},
             {"drift", drift},
             {"limit_rate", c.limit_rate},
             {"market_rate", c.market_rate},
             {"cancel_rate", c.cancel_rate},
             {"modify_rate", c.modify_rate},
             {"depth_min", c.depth_min},
             {"depth_max", c.depth_max},
             {"trade_min", c.trade_min},
             {"trade_max", c.trade_max}};
}

void from_json(const Json& j, SyntheticConfig& c) {
    require_keys(j,
                 {"seed", "steps", "start_ts", "interval_ms", "initial_mid", "tick", "volatility_ticks", "drift",
                  "limit_rate", "market_rate", "cancel_rate", "modify_rate", "depth_min", "depth_max", "trade_min",
                  "trade_max"},
                 "synthetic config");
    read(j, "seed", c.seed);
    read(j, "steps", c.steps);
    read(j, "start_ts", c.start_ts);
    read(j, "interval_ms", c.interval);
    read(j, "initial_mid", c.initial_mid);
    read(j, "tick", c.tick);
    read(j, "volatility_ticks", c.volatility_ticks);
    if (auto it = j.find("drift"); it != j.end()) {
        if (!it->is_array()) throw Error(Errc::invalid_config, "drift must be an array");
        c.drift.clear();
        for (const Json& seg : *it) {
            DriftSegment d;
            from_json(seg, d);
            c.drift.push_back(d);
        }
    }
    read(j, "limit_rate", c.limit_rate);
    read(j, "market_rate", c.market_rate);
    read(j, "cancel_rate", c.cancel_rate);
    read(j, "modify_rate", c.modify_rate);
    read(j, "depth_min", c.depth_min);
    read(j, "depth_max", c.depth_max);
    read(j, "trade_min", c.trade_min);
    read(j, "trade_max", c.trade_max);
}

void to_json(Json& j, const TeacherConfig& c) {
    j = Json{{"grid", c.grid},
             {"fee", c.fee},
             {"lambda", c.lambda},
             {"epsilon", c.epsilon},
             {"temperature", c.temperature},
             {"mode", c.mode == DistributionMode::smoothed ? "smoothed" : "softmax"},
             {"tick", c.tick}};
}

void from_json(const Json& j, TeacherConfig& c) {
    require_keys(j, {"grid", "fee", "lambda", "epsilon", "temperature", "mode", "tick"}, "teacher config");
    read(j, "grid", c.grid);
    read(j, "fee", c.fee);
    read(j, "lambda", c.lambda);
    read(j, "epsilon", c.epsilon);
    read(j, "temperature", c.temperature);
    read(j, "tick", c.tick);
    if (auto it = j.find("mode"); it != j.end()) {
        std::string mode = it->is_string() ? it->get<std::string>() : "";
        if (mode == "smoothed") {
            c.mode = DistributionMode::smoothed;
        } else if (mode == "softmax") {
            c.mode = DistributionMode::softmax;
        } else {
            throw Error(Errc::invalid_config, fmt::format("unknown distribution mode '{}'", mode));
        }
    }
}

Json load_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::io_error, fmt::format("cannot open {}", path.string()));
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(Errc::parse_error, fmt::format("{}: {}", path.string(), e.what()));
    }
}

void write_json_file(const Json& j, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::io_error, fmt::format("cannot write {}", path.string()));
    out << j.dump(2) << '\n';
    if (!out) throw Error(Errc::io_error, fmt::format("write failed for {}", path.string()));
}

}  // namespace mmsim

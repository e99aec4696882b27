#include "mmsim/metrics/report.hpp"

#include "mmsim/common/error.hpp"
#include "mmsim/common/hash.hpp"
#include "mmsim/common/prices.hpp"

#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <sstream>

namespace mmsim {

const std::vector<std::string>& trace_columns() {
    static const std::vector<std::string> cols{
        "t",        "time_ms",   "mid_before",  "mid",        "mid2_before", "mid2_after", "q_before",
        "q",        "cash_ticks", "cash",       "nv",         "executed_volume", "pnl",     "ip",
        "comp",     "er",        "reward",      "sigma",      "fill_count",  "fills",      "ask_quote",
        "bid_quote", "ask_skipped", "bid_skipped", "trend",   "liquidation", "risk"};
    return cols;
}

namespace {

std::string side_name(Side s) { return s == Side::ask ? "ask" : "bid"; }

std::string quote_cell(const std::optional<Quote>& q, double tick) {
    if (!q) return {};
    return fmt::format("{}x{}/{}", format_price(q->price, tick), q->volume, q->wait);
}

[[noreturn]] void bad_row(std::size_t line, const std::string& what) {
    throw Error(Errc::parse_error, fmt::format("trace line {}: {}", line, what));
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    if (s.empty()) return out;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(sep, start);
        out.push_back(s.substr(start, pos == s.npos ? s.npos : pos - start));
        if (pos == s.npos) break;
        start = pos + 1;
    }
    return out;
}

template <class T>
T num(std::string_view s, std::size_t line) {
    T v{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) bad_row(line, fmt::format("bad number '{}'", s));
    return v;
}

Ticks price(std::string_view s, double tick, std::size_t line) {
    auto p = parse_price(s, tick);
    if (!p) bad_row(line, fmt::format("bad price '{}'", s));
    return *p;
}

Side side_of(std::string_view s, std::size_t line) {
    if (s == "ask") return Side::ask;
    if (s == "bid") return Side::bid;
    bad_row(line, fmt::format("bad side '{}'", s));
}

std::optional<Quote> parse_quote(std::string_view s, double tick, std::size_t line) {
    if (s.empty()) return std::nullopt;
    auto x = s.find('x');
    auto slash = s.find('/');
    if (x == s.npos || slash == s.npos || slash < x) bad_row(line, fmt::format("bad quote '{}'", s));
    return Quote{price(s.substr(0, x), tick, line), num<Quantity>(s.substr(x + 1, slash - x - 1), line),
                 num<Millis>(s.substr(slash + 1), line)};
}

}  // namespace

std::string format_trace_csv(std::span<const StepRecord> trace, double tick) {
    std::string out;
    const auto& cols = trace_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) {
        if (i) out += ',';
        out += cols[i];
    }
    out += '\n';
    for (const StepRecord& r : trace) {
        std::string fills;
        for (const AgentFill& f : r.fills) {
            if (!fills.empty()) fills += ';';
            fills += fmt::format("{}@{}x{}", side_name(f.side), format_price(f.price, tick), f.volume);
        }
        std::string risk;
        for (const RiskItem& it : r.risk) {
            if (!risk.empty()) risk += ';';
            risk += fmt::format("{}:{}:{}", it.volume, it.elapsed, it.wait);
        }
        std::string liq =
            r.liquidation ? fmt::format("{}:{}", side_name(r.liquidation->side), r.liquidation->quantity) : "";
        out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                           r.t, r.time, static_cast<double>(r.mid2_before) * tick * 0.5, r.mid, r.mid2_before,
                           r.mid2_after, r.q_before, r.q_after, r.cash_ticks, r.cash, r.net_value,
                           r.executed_volume, r.reward.pnl, r.reward.ip, r.reward.comp, r.reward.er,
                           r.reward.total, r.sigma, r.fill_records, fills, quote_cell(r.ask_quote, tick),
                           quote_cell(r.bid_quote, tick), r.ask_skipped ? 1 : 0, r.bid_skipped ? 1 : 0,
                           r.trend ? std::string(to_string(*r.trend)) : std::string(), liq, risk);
    }
    return out;
}

std::vector<StepRecord> parse_trace_csv(const std::string& text, double tick) {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    std::vector<StepRecord> out;
    const std::size_t ncols = trace_columns().size();
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto f = split(line, ',');
        if (line_no == 1) {
            bool ok = f.size() == ncols;
            for (std::size_t i = 0; ok && i < ncols; ++i) ok = f[i] == trace_columns()[i];
            if (!ok) bad_row(line_no, "unexpected header");
            continue;
        }
        if (f.size() != ncols) bad_row(line_no, fmt::format("expected {} fields, got {}", ncols, f.size()));
        StepRecord r;
        r.t = num<std::size_t>(f[0], line_no);
        r.time = num<Millis>(f[1], line_no);
        r.mid = num<double>(f[3], line_no);
        r.mid2_before = num<Ticks>(f[4], line_no);
        r.mid2_after = num<Ticks>(f[5], line_no);
        r.q_before = num<Quantity>(f[6], line_no);
        r.q_after = num<Quantity>(f[7], line_no);
        r.cash_ticks = num<std::int64_t>(f[8], line_no);
        r.cash = num<double>(f[9], line_no);
        r.net_value = num<double>(f[10], line_no);
        r.executed_volume = num<Quantity>(f[11], line_no);
        r.reward.pnl = num<double>(f[12], line_no);
        r.reward.ip = num<double>(f[13], line_no);
        r.reward.comp = num<double>(f[14], line_no);
        r.reward.er = num<double>(f[15], line_no);
        r.reward.total = num<double>(f[16], line_no);
        r.sigma = num<double>(f[17], line_no);
        r.fill_records = num<std::size_t>(f[18], line_no);
        for (std::string_view leg : split(f[19], ';')) {
            auto at = leg.find('@');
            auto x = leg.find('x');
            if (at == leg.npos || x == leg.npos || x < at) bad_row(line_no, fmt::format("bad fill '{}'", leg));
            r.fills.push_back({side_of(leg.substr(0, at), line_no), price(leg.substr(at + 1, x - at - 1), tick, line_no),
                               num<Quantity>(leg.substr(x + 1), line_no), 0, 0});
        }
        r.ask_quote = parse_quote(f[20], tick, line_no);
        r.bid_quote = parse_quote(f[21], tick, line_no);
        r.ask_skipped = f[22] == "1";
        r.bid_skipped = f[23] == "1";
        if (!f[24].empty()) {
            r.trend = parse_trend_class(f[24]);
            if (!r.trend) bad_row(line_no, fmt::format("bad trend '{}'", f[24]));
        }
        if (!f[25].empty()) {
            auto colon = f[25].find(':');
            if (colon == f[25].npos) bad_row(line_no, "bad liquidation");
            r.liquidation = Liquidation{side_of(f[25].substr(0, colon), line_no),
                                        num<Quantity>(f[25].substr(colon + 1), line_no)};
        }
        for (std::string_view item : split(f[26], ';')) {
            auto parts = split(item, ':');
            if (parts.size() != 3) bad_row(line_no, fmt::format("bad risk item '{}'", item));
            r.risk.push_back({num<Quantity>(parts[0], line_no), num<Millis>(parts[1], line_no),
                              num<Millis>(parts[2], line_no)});
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::uint64_t trace_hash(std::span<const StepRecord> trace, double tick) {
    return fnv1a(format_trace_csv(trace, tick));
}

Json metrics_json(const MetricsReport& m) {
    Json j;
    j["epnl"] = m.epnl;
    j["map"] = m.map;
    j["pnlmap"] = m.pnlmap ? Json(*m.pnlmap) : Json(nullptr);
    j["adverse_selection_ratio"] = m.adverse_selection_ratio;
    j["adverse_selection_defined"] = m.adverse_selection_defined;
    j["num_fills"] = m.num_fills;
    j["total_reward"] = m.total_reward;
    j["steps"] = m.steps;
    j["final_inventory"] = m.final_inventory;
    j["final_net_value"] = m.final_net_value;
    return j;
}

MetricsReport metrics_from_json(const Json& j) {
    MetricsReport m;
    try {
        m.epnl = j.at("epnl").get<double>();
        m.map = j.at("map").get<double>();
        if (!j.at("pnlmap").is_null()) m.pnlmap = j.at("pnlmap").get<double>();
        m.adverse_selection_ratio = j.at("adverse_selection_ratio").get<double>();
        m.adverse_selection_defined = j.at("adverse_selection_defined").get<bool>();
        m.num_fills = j.at("num_fills").get<std::size_t>();
        m.total_reward = j.at("total_reward").get<double>();
        m.steps = j.at("steps").get<std::size_t>();
        m.final_inventory = j.at("final_inventory").get<Quantity>();
        m.final_net_value = j.at("final_net_value").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::parse_error, fmt::format("metrics json: {}", e.what()));
    }
    return m;
}

std::string series_pnl_csv(std::span<const StepRecord> trace) {
    std::string out = "t,time_ms,pnl,cum_pnl,reward,cum_reward\n";
    double cum = 0.0, cum_reward = 0.0;
    for (const StepRecord& r : trace) {
        cum += r.reward.pnl;
        cum_reward += r.reward.total;
        out += fmt::format("{},{},{},{},{},{}\n", r.t, r.time, r.reward.pnl, cum, r.reward.total, cum_reward);
    }
    return out;
}

std::string series_inventory_csv(std::span<const StepRecord> trace) {
    std::string out = "t,time_ms,inventory,net_value\n";
    for (const StepRecord& r : trace) out += fmt::format("{},{},{},{}\n", r.t, r.time, r.q_after, r.net_value);
    return out;
}

std::string series_quotes_csv(std::span<const StepRecord> trace, double tick) {
    std::string out = "t,time_ms,mid_before,ask_quote,bid_quote\n";
    for (const StepRecord& r : trace) {
        out += fmt::format("{},{},{},{},{}\n", r.t, r.time, static_cast<double>(r.mid2_before) * tick * 0.5,
                           r.ask_quote ? format_price(r.ask_quote->price, tick) : "",
                           r.bid_quote ? format_price(r.bid_quote->price, tick) : "");
    }
    return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::io_error, fmt::format("cannot write {}", path.string()));
    out << text;
    if (!out) throw Error(Errc::io_error, fmt::format("write failed for {}", path.string()));
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::io_error, fmt::format("cannot open {}", path.string()));
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void emit_report(const std::filesystem::path& dir, const RunLabel& label, const MetricsReport& metrics,
                 std::span<const StepRecord> trace, double tick) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(Errc::io_error, fmt::format("cannot create {}: {}", dir.string(), ec.message()));
    Json j;
    j["agent"] = label.agent;
    j["seed"] = label.seed;
    j["metrics"] = metrics_json(metrics);
    j["trace_hash"] = fmt::format("{:016x}", trace_hash(trace, tick));
    j["config"] = label.config;
    write_json_file(j, dir / "metrics.json");
    write_text_file(dir / "trace.csv", format_trace_csv(trace, tick));
    write_text_file(dir / "series_pnl.csv", series_pnl_csv(trace));
    write_text_file(dir / "series_inventory.csv", series_inventory_csv(trace));
    write_text_file(dir / "series_quotes.csv", series_quotes_csv(trace, tick));
}

Json aggregate_json(std::span<const MetricsReport> runs) {
    auto stat = [&](auto field) {
        std::vector<double> v;
        for (const MetricsReport& m : runs) {
            if (auto x = field(m)) v.push_back(*x);
        }
        SampleStat s = sample_stat(v);
        return Json{{"mean", s.mean}, {"std", s.std}, {"count", s.count}};
    };
    Json j;
    j["runs"] = runs.size();
    j["epnl"] = stat([](const MetricsReport& m) { return std::optional<double>(m.epnl); });
    j["map"] = stat([](const MetricsReport& m) { return std::optional<double>(m.map); });
    j["pnlmap"] = stat([](const MetricsReport& m) { return m.pnlmap; });
    j["adverse_selection_ratio"] = stat([](const MetricsReport& m) {
        return m.adverse_selection_defined ? std::optional<double>(m.adverse_selection_ratio) : std::nullopt;
    });
    j["num_fills"] = stat([](const MetricsReport& m) { return std::optional<double>(double(m.num_fills)); });
    j["total_reward"] = stat([](const MetricsReport& m) { return std::optional<double>(m.total_reward); });
    j["final_net_value"] = stat([](const MetricsReport& m) { return std::optional<double>(m.final_net_value); });
    return j;
}

}  // namespace mmsim

#include "mmsim/data/market_data.hpp"

#include "mmsim/common/error.hpp"
#include "mmsim/common/prices.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace mmsim {

bool operator==(const MarketDataRecord& a, const MarketDataRecord& b) {
    if (!(a.snapshot == b.snapshot) || a.trades != b.trades || a.has_events != b.has_events) {
        return false;
    }
    for (std::size_t i = 0; i < kSnapshotLevels; ++i) {
        const auto& x = a.events[i];
        const auto& y = b.events[i];
        if (x.new_orders != y.new_orders || x.cancellations != y.cancellations ||
            x.modifications != y.modifications) {
            return false;
        }
    }
    return true;
}

std::vector<std::string> csv_columns(bool with_events) {
    std::vector<std::string> cols{"ts_ms"};
    for (const char* group : {"bid_px", "bid_vol", "ask_px", "ask_vol"}) {
        for (std::size_t i = 1; i <= kSnapshotLevels; ++i) cols.push_back(fmt::format("{}_{}", group, i));
    }
    cols.emplace_back("last_px");
    cols.emplace_back("last_vol");
    if (with_events) {
        for (const char* group : {"n", "c", "m"}) {
            for (std::size_t i = 1; i <= kSnapshotLevels; ++i) cols.push_back(fmt::format("{}_{}", group, i));
        }
    }
    return cols;
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        std::string_view field = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
        while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
        while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) {
            field.remove_suffix(1);
        }
        out.push_back(field);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& what) {
    throw Error(Errc::parse_error, fmt::format("line {}: {}", line_no, what));
}

std::int64_t parse_int(std::string_view s, std::size_t line_no) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        // Tolerate integral values written as decimals, e.g. "100.0".
        double d = 0.0;
        auto [p2, e2] = std::from_chars(s.data(), s.data() + s.size(), d);
        if (e2 != std::errc() || p2 != s.data() + s.size() || d != std::floor(d)) {
            parse_fail(line_no, fmt::format("expected integer, got '{}'", s));
        }
        return static_cast<std::int64_t>(d);
    }
    return v;
}

Ticks price_field(std::string_view s, double tick, std::size_t line_no) {
    auto p = parse_price(s, tick);
    if (!p) parse_fail(line_no, fmt::format("'{}' is not a price on the {} tick grid", s, tick));
    return *p;
}

}  // namespace

std::vector<MarketDataRecord> parse_csv(const std::string& text, double tick) {
    if (!(tick > 0.0)) throw Error(Errc::invalid_config, "tick size must be positive");
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    bool with_events = false;
    bool header_seen = false;
    std::vector<MarketDataRecord> records;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto fields = split_fields(line);
        if (!header_seen) {
            auto base = csv_columns(false);
            auto full = csv_columns(true);
            auto matches = [&](const std::vector<std::string>& cols) {
                if (fields.size() != cols.size()) return false;
                for (std::size_t i = 0; i < cols.size(); ++i) {
                    if (fields[i] != cols[i]) return false;
                }
                return true;
            };
            if (matches(full)) {
                with_events = true;
            } else if (!matches(base)) {
                parse_fail(line_no, "missing or unrecognized header row");
            }
            header_seen = true;
            continue;
        }
        const std::size_t expected = with_events ? 38 : 23;
        if (fields.size() != expected) {
            parse_fail(line_no, fmt::format("expected {} fields, got {}", expected, fields.size()));
        }
        MarketDataRecord rec;
        MarketSnapshot& s = rec.snapshot;
        s.ts = parse_int(fields[0], line_no);
        for (std::size_t i = 0; i < kSnapshotLevels; ++i) {
            s.bid_px[i] = price_field(fields[1 + i], tick, line_no);
            s.bid_vol[i] = parse_int(fields[6 + i], line_no);
            s.ask_px[i] = price_field(fields[11 + i], tick, line_no);
            s.ask_vol[i] = parse_int(fields[16 + i], line_no);
        }
        s.last_px = price_field(fields[21], tick, line_no);
        s.last_vol = parse_int(fields[22], line_no);
        if (s.bid_px[0] >= s.ask_px[0]) {
            throw Error(Errc::crossed_snapshot, fmt::format("crossed snapshot at ts {}", s.ts));
        }
        if (!s.well_formed() || s.last_vol < 0) {
            parse_fail(line_no, "price ladder not strictly monotone or negative volume");
        }
        if (!records.empty() && s.ts <= records.back().snapshot.ts) {
            throw Error(Errc::non_monotone_timestamp,
                        fmt::format("timestamp {} does not increase", s.ts));
        }
        if (s.last_vol > 0) rec.trades.push_back({s.last_px, s.last_vol});
        if (with_events) {
            rec.has_events = true;
            for (std::size_t i = 0; i < kSnapshotLevels; ++i) {
                rec.events[i].new_orders = parse_int(fields[23 + i], line_no);
                rec.events[i].cancellations = parse_int(fields[28 + i], line_no);
                rec.events[i].modifications = parse_int(fields[33 + i], line_no);
            }
        }
        records.push_back(std::move(rec));
    }
    if (!header_seen) throw Error(Errc::parse_error, "line 1: missing header row");
    return records;
}

std::vector<MarketDataRecord> load_csv(const std::filesystem::path& path, double tick) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::io_error, fmt::format("cannot open {}", path.string()));
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str(), tick);
}

std::string format_csv(std::span<const MarketDataRecord> records, double tick) {
    bool with_events = std::any_of(records.begin(), records.end(),
                                   [](const MarketDataRecord& r) { return r.has_events; });
    auto px = [&](Ticks t) { return format_price(t, tick); };

    std::string out;
    auto cols = csv_columns(with_events);
    for (std::size_t i = 0; i < cols.size(); ++i) {
        if (i) out += ',';
        out += cols[i];
    }
    out += '\n';
    for (const MarketDataRecord& r : records) {
        const MarketSnapshot& s = r.snapshot;
        Ticks last_px = s.last_px;
        Quantity last_vol = 0;
        if (!r.trades.empty()) {
            last_px = r.trades.back().price;
            for (const TradePrint& t : r.trades) last_vol += t.volume;
        }
        out += fmt::format("{}", s.ts);
        for (Ticks p : s.bid_px) out += ',' + px(p);
        for (Quantity v : s.bid_vol) out += fmt::format(",{}", v);
        for (Ticks p : s.ask_px) out += ',' + px(p);
        for (Quantity v : s.ask_vol) out += fmt::format(",{}", v);
        out += ',' + px(last_px);
        out += fmt::format(",{}", last_vol);
        if (with_events) {
            for (const auto& e : r.events) out += fmt::format(",{}", e.new_orders);
            for (const auto& e : r.events) out += fmt::format(",{}", e.cancellations);
            for (const auto& e : r.events) out += fmt::format(",{}", e.modifications);
        }
        out += '\n';
    }
    return out;
}

void write_csv(std::span<const MarketDataRecord> records, const std::filesystem::path& path,
               double tick) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::io_error, fmt::format("cannot write {}", path.string()));
    out << format_csv(records, tick);
    if (!out) throw Error(Errc::io_error, fmt::format("write failed for {}", path.string()));
}

std::vector<NamedSplit> split_records(std::span<const MarketDataRecord> records,
                                      std::span<const std::size_t> boundaries,
                                      std::span<const std::string> names) {
    if (names.size() != boundaries.size() + 1) {
        throw Error(Errc::invalid_config, "split needs exactly one more name than boundaries");
    }
    std::vector<NamedSplit> out;
    std::size_t begin = 0;
    for (std::size_t i = 0; i <= boundaries.size(); ++i) {
        std::size_t end = i < boundaries.size() ? boundaries[i] : records.size();
        if (end <= begin || end > records.size()) {
            throw Error(Errc::empty_split, fmt::format("split '{}' would be empty", names[i]));
        }
        out.push_back({names[i], {records.begin() + static_cast<std::ptrdiff_t>(begin),
                                  records.begin() + static_cast<std::ptrdiff_t>(end)}});
        begin = end;
    }
    return out;
}

std::vector<std::size_t> boundaries_at(std::span<const MarketDataRecord> records,
                                       std::span<const Millis> cut_times) {
    std::vector<std::size_t> out;
    for (Millis cut : cut_times) {
        auto it = std::lower_bound(records.begin(), records.end(), cut,
                                   [](const MarketDataRecord& r, Millis t) { return r.snapshot.ts < t; });
        out.push_back(static_cast<std::size_t>(it - records.begin()));
    }
    return out;
}

}  // namespace mmsim

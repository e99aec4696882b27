#include "mmsim/teacher/qtable.hpp"

#include "mmsim/common/error.hpp"
#include "mmsim/common/hash.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

namespace mmsim {

static_assert(std::endian::native == std::endian::little, "q-table files are little-endian");

void TeacherConfig::validate() const {
    auto fail = [](const std::string& what) { throw Error(Errc::invalid_config, what); };
    if (grid.size() < 2) fail("position grid needs at least two entries");
    if (!std::is_sorted(grid.begin(), grid.end()) ||
        std::adjacent_find(grid.begin(), grid.end()) != grid.end()) {
        fail("position grid must be strictly increasing");
    }
    if (!std::binary_search(grid.begin(), grid.end(), Quantity{0})) fail("position grid must contain 0");
    if (fee < 0.0 || lambda < 0.0) fail("fee and lambda must be >= 0");
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) fail("epsilon must lie in [0, 1]");
    if (!(temperature > 0.0)) fail("temperature must be positive");
}

std::vector<Quantity> default_grid(Quantity limit, std::size_t count) {
    if (limit <= 0 || count < 2) throw Error(Errc::invalid_config, "grid needs limit > 0 and count >= 2");
    std::vector<Quantity> g;
    for (std::size_t i = 0; i < count; ++i) {
        double x = -static_cast<double>(limit) +
                   2.0 * static_cast<double>(limit) * static_cast<double>(i) / static_cast<double>(count - 1);
        g.push_back(static_cast<Quantity>(std::llround(x)));
    }
    if (!std::binary_search(g.begin(), g.end(), Quantity{0})) {
        auto nearest = std::min_element(g.begin(), g.end(), [](Quantity a, Quantity b) {
            return std::llabs(a) < std::llabs(b);
        });
        *nearest = 0;
    }
    return g;
}

double step_reward(std::span<const double> prices, std::size_t t, double p, double a, double fee,
                   double lambda) noexcept {
    const double now = prices[t];
    return a * (prices[t + 1] - now) - fee * std::abs(a - p) * now - lambda * std::abs(a) * now;
}

QTable build_qtable(std::span<const double> prices, const TeacherConfig& cfg) {
    cfg.validate();
    if (prices.size() < 2) throw Error(Errc::empty_price_series, "q-table needs at least two prices");
    for (std::size_t i = 0; i < prices.size(); ++i) {
        if (!(prices[i] > 0.0) || !std::isfinite(prices[i])) {
            throw Error(Errc::non_positive_price, fmt::format("price {} at index {} is not positive", prices[i], i));
        }
    }
    QTable q;
    q.steps = prices.size();
    q.grid = cfg.grid;
    q.prices.assign(prices.begin(), prices.end());
    q.fee = cfg.fee;
    q.lambda = cfg.lambda;
    q.tick = cfg.tick;
    const std::size_t g = cfg.grid.size();
    q.values.assign(q.steps * g * g, 0.0);

    std::vector<double> best_next(g, 0.0);  // max over a' of Q[t+1, a, a']
    for (std::size_t t = q.steps - 1; t-- > 0;) {
        for (std::size_t p = 0; p < g; ++p) {
            for (std::size_t a = 0; a < g; ++a) {
                q.at(t, p, a) = step_reward(prices, t, static_cast<double>(cfg.grid[p]),
                                            static_cast<double>(cfg.grid[a]), cfg.fee, cfg.lambda) +
                                best_next[a];
            }
        }
        for (std::size_t a = 0; a < g; ++a) {
            auto r = q.row(t, a);
            best_next[a] = *std::max_element(r.begin(), r.end());
        }
    }
    return q;
}

std::size_t optimal_action_index(const QTable& q, std::size_t t, std::size_t p) {
    if (t >= q.steps || p >= q.size()) {
        throw Error(Errc::index_out_of_range,
                    fmt::format("q-table index (t={}, p={}) outside ({}, {})", t, p, q.steps, q.size()));
    }
    auto r = q.row(t, p);
    std::size_t best = 0;
    for (std::size_t a = 1; a < r.size(); ++a) {
        if (r[a] > r[best] || (r[a] == r[best] && std::llabs(q.grid[a]) < std::llabs(q.grid[best]))) best = a;
    }
    return best;
}

Quantity optimal_action(const QTable& q, std::size_t t, std::size_t p) {
    return q.grid[optimal_action_index(q, t, p)];
}

std::vector<double> teacher_distribution(const QTable& q, std::size_t t, std::size_t p,
                                         const TeacherConfig& cfg) {
    const std::size_t best = optimal_action_index(q, t, p);
    const std::size_t g = q.size();
    std::vector<double> dist(g, 0.0);
    if (cfg.mode == DistributionMode::smoothed) {
        const double rest = cfg.epsilon / static_cast<double>(g - 1);
        std::fill(dist.begin(), dist.end(), rest);
        dist[best] = 1.0 - cfg.epsilon;
        return dist;
    }
    if (std::isinf(cfg.temperature)) {
        std::fill(dist.begin(), dist.end(), 1.0 / static_cast<double>(g));
        return dist;
    }
    auto r = q.row(t, p);
    const double top = *std::max_element(r.begin(), r.end());
    double sum = 0.0;
    for (std::size_t a = 0; a < g; ++a) {
        dist[a] = std::exp((r[a] - top) / cfg.temperature);
        sum += dist[a];
    }
    for (double& x : dist) x /= sum;
    return dist;
}

std::size_t nearest_grid_index(std::span<const Quantity> grid, Quantity inventory) {
    if (grid.empty()) throw Error(Errc::index_out_of_range, "empty grid");
    std::size_t best = 0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (std::llabs(grid[i] - inventory) < std::llabs(grid[best] - inventory)) best = i;
    }
    return best;
}

namespace {

template <class T>
void put(std::string& out, T v) {
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out.append(buf, sizeof(T));
}

class Reader {
public:
    explicit Reader(std::string_view bytes) : bytes_(bytes) {}
    template <class T>
    T get() {
        if (pos_ + sizeof(T) > bytes_.size()) throw Error(Errc::checksum_mismatch, "q-table file is truncated");
        T v;
        std::memcpy(&v, bytes_.data() + pos_, sizeof(T));
        pos_ += sizeof(T);
        return v;
    }
    std::size_t pos() const noexcept { return pos_; }

private:
    std::string_view bytes_;
    std::size_t pos_ = 0;
};

constexpr char kMagic[4] = {'M', 'M', 'Q', 'T'};

}  // namespace

std::string serialize(const QTable& q) {
    std::string out;
    out.reserve(64 + 8 * (q.grid.size() + q.prices.size() + q.values.size()));
    out.append(kMagic, 4);
    put<std::uint32_t>(out, kQTableVersion);
    put<std::uint64_t>(out, q.steps);
    put<std::uint64_t>(out, q.grid.size());
    for (Quantity g : q.grid) put<std::int64_t>(out, g);
    put<double>(out, q.fee);
    put<double>(out, q.lambda);
    put<double>(out, q.tick);
    for (double p : q.prices) put<double>(out, p);
    for (double v : q.values) put<double>(out, v);
    put<std::uint64_t>(out, fnv1a(out));
    return out;
}

QTable deserialize(std::string_view bytes) {
    if (bytes.size() < 8 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
        throw Error(Errc::format_version_mismatch, "not a q-table file");
    }
    Reader in(bytes.substr(4));
    const auto version = in.get<std::uint32_t>();
    if (version != kQTableVersion) {
        throw Error(Errc::format_version_mismatch,
                    fmt::format("q-table format version {} (expected {})", version, kQTableVersion));
    }
    QTable q;
    q.steps = in.get<std::uint64_t>();
    const auto g = in.get<std::uint64_t>();
    // Reject sizes that cannot fit before reading any arrays.
    const std::uint64_t payload = 4 + 4 + 8 + 8 + 8 * g + 24 + 8 * q.steps + 8 * q.steps * g * g + 8;
    if (g > bytes.size() || q.steps > bytes.size() || payload != bytes.size()) {
        throw Error(Errc::checksum_mismatch, "q-table file size does not match its header");
    }
    const std::uint64_t stored = [&] {
        std::uint64_t v;
        std::memcpy(&v, bytes.data() + bytes.size() - 8, 8);
        return v;
    }();
    if (stored != fnv1a(bytes.substr(0, bytes.size() - 8))) {
        throw Error(Errc::checksum_mismatch, "q-table checksum mismatch");
    }
    q.grid.resize(g);
    for (auto& x : q.grid) x = in.get<std::int64_t>();
    q.fee = in.get<double>();
    q.lambda = in.get<double>();
    q.tick = in.get<double>();
    q.prices.resize(q.steps);
    for (auto& p : q.prices) p = in.get<double>();
    q.values.resize(q.steps * g * g);
    for (auto& v : q.values) v = in.get<double>();
    return q;
}

void save_qtable(const QTable& q, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::io_error, fmt::format("cannot write {}", path.string()));
    const std::string bytes = serialize(q);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(Errc::io_error, fmt::format("write failed for {}", path.string()));
}

LoadedQTable load_qtable(const std::filesystem::path& path, std::optional<Quantity> inventory_limit) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::io_error, fmt::format("cannot open {}", path.string()));
    std::ostringstream buf;
    buf << in.rdbuf();
    LoadedQTable out{deserialize(buf.str()), false};
    if (inventory_limit) {
        const auto& g = out.table.grid;
        out.grid_mismatch = g.empty() || g.front() != -*inventory_limit || g.back() != *inventory_limit;
    }
    return out;
}

}  // namespace mmsim

#include "mmsim/bridge/session.hpp"
#include "mmsim/common/error.hpp"
#include "mmsim/data/config_io.hpp"
#include "mmsim/data/market_data.hpp"
#include "mmsim/data/synthetic.hpp"
#include "mmsim/metrics/report.hpp"
#include "mmsim/sim/run.hpp"
#include "mmsim/teacher/qtable.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace mmsim;

namespace {

// Flags shared by every subcommand that builds a market.
struct MarketFlags {
    std::string config_path;
    std::string data_path;
    std::size_t horizon = 0;
    std::size_t start_index = 0;
    Quantity inventory_limit = 0;
    double eta = 0.0, beta = 0.0, tick = 0.0;
    Millis latency_low = 0, latency_high = 0;
    double volatility = 0.0, initial_mid = 0.0, market_rate = 0.0;
    std::vector<std::string> drift;

    CLI::Option* o_horizon = nullptr;
    CLI::Option* o_start = nullptr;
    CLI::Option* o_limit = nullptr;
    CLI::Option* o_eta = nullptr;
    CLI::Option* o_beta = nullptr;
    CLI::Option* o_tick = nullptr;
    CLI::Option* o_lat_lo = nullptr;
    CLI::Option* o_lat_hi = nullptr;
    CLI::Option* o_vol = nullptr;
    CLI::Option* o_mid = nullptr;
    CLI::Option* o_mrate = nullptr;

    void attach(CLI::App* app) {
        app->add_option("--config", config_path, "JSON config file (flags override it)")->check(CLI::ExistingFile);
        app->add_option("--data", data_path, "Replay CSV; the synthetic market is used when omitted");
        o_horizon = app->add_option("--horizon", horizon, "Episode length in steps (default 28800)");
        o_start = app->add_option("--start-index", start_index, "First replay record of the episode");
        o_limit = app->add_option("--inventory-limit", inventory_limit, "Inventory limit d (default 800)");
        o_eta = app->add_option("--eta", eta, "Inventory penalty rate (default 0.01)");
        o_beta = app->add_option("--beta", beta, "Compensation rate (default 0.0002)");
        o_tick = app->add_option("--tick", tick, "Tick size in currency (default 0.02)");
        o_lat_lo = app->add_option("--latency-low", latency_low, "Lowest order latency, ms (default 30)");
        o_lat_hi = app->add_option("--latency-high", latency_high, "Highest order latency, ms (default 80)");
        o_vol = app->add_option("--volatility", volatility, "Synthetic mid-walk stddev, ticks per step");
        o_mid = app->add_option("--initial-mid", initial_mid, "Synthetic initial mid, currency");
        o_mrate = app->add_option("--market-rate", market_rate, "Synthetic market orders per interval");
        app->add_option("--drift", drift, "Synthetic drift segment start:end:ticks_per_step (repeatable)");
    }

    void apply(EpisodeConfig& e, SyntheticConfig& s) const {
        if (o_horizon->count()) e.horizon = horizon;
        if (o_start->count()) e.start_index = start_index;
        if (o_limit->count()) e.inventory_limit = inventory_limit;
        if (o_eta->count()) e.eta = eta;
        if (o_beta->count()) e.beta = beta;
        if (o_tick->count()) e.tick = tick;
        if (o_lat_lo->count()) e.latency.low_ms = latency_low;
        if (o_lat_hi->count()) e.latency.high_ms = latency_high;
        if (o_vol->count()) s.volatility_ticks = volatility;
        if (o_mid->count()) s.initial_mid = initial_mid;
        if (o_mrate->count()) s.market_rate = market_rate;
        if (!drift.empty()) s.drift.clear();
        for (const std::string& d : drift) s.drift.push_back(parse_drift(d));
        s.tick = e.tick;
        s.interval = e.batch_interval;
    }

    static DriftSegment parse_drift(const std::string& text) {
        DriftSegment d;
        char c1 = 0, c2 = 0;
        std::istringstream in(text);
        if (!(in >> d.start >> c1 >> d.end >> c2 >> d.drift_ticks) || c1 != ':' || c2 != ':' || !in.eof()) {
            throw CLI::ValidationError("--drift", "expected start:end:ticks_per_step, got '" + text + "'");
        }
        return d;
    }
};

// Reads the sections of a config file that a subcommand understands.
void load_config(const std::string& path, EpisodeConfig* episode, SyntheticConfig* synthetic, AgentConfig* agent,
                 RunSpec* spec, TeacherConfig* teacher) {
    if (path.empty()) return;
    Json j = load_json_file(path);
    require_keys(j, {"episode", "synthetic", "agent", "seeds", "data", "output", "adverse_horizon", "teacher"},
                 "config file");
    if (episode && j.contains("episode")) from_json(j["episode"], *episode);
    if (synthetic && j.contains("synthetic")) from_json(j["synthetic"], *synthetic);
    if (agent && j.contains("agent")) from_json(j["agent"], *agent);
    if (teacher && j.contains("teacher")) from_json(j["teacher"], *teacher);
    if (spec) {
        try {
            if (j.contains("seeds")) spec->seeds = j["seeds"].get<std::vector<std::uint64_t>>();
            if (j.contains("data")) spec->data_path = j["data"].get<std::string>();
            if (j.contains("output")) spec->output_dir = j["output"].get<std::string>();
            if (j.contains("adverse_horizon")) spec->adverse_horizon = j["adverse_horizon"].get<std::size_t>();
        } catch (const nlohmann::json::exception& e) {
            throw Error(Errc::invalid_config, e.what());
        }
    }
}

// Single price column from a CSV: `column` when given, else "price", else "bid_px_1".
std::vector<double> load_price_column(const std::string& path, std::string column) {
    std::istringstream in(read_text_file(path));
    std::string line;
    if (!std::getline(in, line)) throw Error(Errc::parse_error, "line 1: missing header row");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> header;
    {
        std::istringstream h(line);
        std::string cell;
        while (std::getline(h, cell, ',')) header.push_back(cell);
    }
    auto find = [&](const std::string& name) -> std::ptrdiff_t {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) return static_cast<std::ptrdiff_t>(i);
        }
        return -1;
    };
    std::ptrdiff_t idx = -1;
    if (!column.empty()) {
        idx = find(column);
    } else {
        idx = find("price");
        if (idx < 0) idx = find("bid_px_1");
        column = "price";
    }
    if (idx < 0) throw Error(Errc::parse_error, fmt::format("line 1: no '{}' column", column));
    std::vector<double> prices;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        for (std::ptrdiff_t i = 0; i <= idx; ++i) {
            if (!std::getline(row, cell, ',')) throw Error(Errc::parse_error, fmt::format("line {}: too few fields", line_no));
        }
        try {
            std::size_t used = 0;
            prices.push_back(std::stod(cell, &used));
            if (used != cell.size()) throw std::invalid_argument(cell);
        } catch (const std::exception&) {
            throw Error(Errc::parse_error, fmt::format("line {}: bad price '{}'", line_no, cell));
        }
    }
    return prices;
}

std::vector<Quantity> parse_grid(const std::string& text) {
    std::vector<Quantity> g;
    std::istringstream in(text);
    std::string cell;
    while (std::getline(in, cell, ',')) {
        try {
            std::size_t used = 0;
            g.push_back(std::stoll(cell, &used));
            if (used != cell.size()) throw std::invalid_argument(cell);
        } catch (const std::exception&) {
            throw CLI::ValidationError("--grid", "bad grid entry '" + cell + "'");
        }
    }
    return g;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Latency-aware limit order book market-making simulator"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    // simulate
    auto* sim = app.add_subcommand("simulate", "Run episodes for each seed and write reports");
    MarketFlags sim_market;
    sim_market.attach(sim);
    std::string agent_kind;
    std::vector<std::uint64_t> seeds;
    std::string out_dir;
    Quantity quote_volume = 0;
    Millis quote_wait = 0;
    double liic_skew = 0, as_gamma = 0, as_kappa = 0;
    std::string script_path, policy_host, trend_schedule;
    std::uint16_t policy_port = 0;
    bool trend_overlay = false;
    std::size_t trend_horizon = 0, adverse_horizon = 0;
    auto* o_agent = sim->add_option("--agent", agent_kind, "foic, liic, as, scripted, random or bridge")
                        ->check(CLI::IsMember({"foic", "liic", "as", "scripted", "random", "bridge"}));
    auto* o_seeds = sim->add_option("--seeds", seeds, "Seeds, one episode each (default 1)")->delimiter(',');
    auto* o_out = sim->add_option("--out", out_dir, "Output directory (default out)");
    auto* o_qv = sim->add_option("--volume", quote_volume, "Quote volume for rule agents (default 100)");
    auto* o_qw = sim->add_option("--wait-ms", quote_wait, "Quote wait time for rule agents (default 2500)");
    auto* o_skew = sim->add_option("--liic-skew", liic_skew, "LIIC skew, currency per unit (default 0.0005)");
    auto* o_gamma = sim->add_option("--as-gamma", as_gamma, "AS risk aversion (default 5e-5)");
    auto* o_kappa = sim->add_option("--as-kappa", as_kappa, "AS order arrival decay (default 40)");
    auto* o_script = sim->add_option("--script", script_path, "Action script CSV for the scripted agent");
    auto* o_phost = sim->add_option("--policy-host", policy_host, "Policy server host for the bridge agent");
    auto* o_pport = sim->add_option("--policy-port", policy_port, "Policy server port for the bridge agent");
    sim->add_flag("--trend-overlay", trend_overlay, "Wrap the agent with trend band enforcement");
    auto* o_th = sim->add_option("--trend-horizon", trend_horizon, "Momentum predictor look-back (default 30)");
    auto* o_ts = sim->add_option("--trend-schedule", trend_schedule, "CSV of step,trend predictions");
    auto* o_ah = sim->add_option("--adverse-horizon", adverse_horizon, "Steps ahead for adverse selection (default 1)");

    // build-qtable
    auto* bq = app.add_subcommand("build-qtable", "Build the optimal action-value table from a price series");
    std::string bq_prices, bq_out, bq_summary, bq_column, bq_grid, bq_config;
    double bq_fee = 0.0, bq_lambda = 0.0, bq_tick = 0.02;
    Quantity bq_limit = 800;
    bq->add_option("--config", bq_config, "JSON config file with a teacher section")->check(CLI::ExistingFile);
    bq->add_option("--prices", bq_prices, "CSV with a price column (or a market data CSV)")->required();
    bq->add_option("--column", bq_column, "Price column name (default price, else bid_px_1)");
    bq->add_option("--out", bq_out, "Q-table file to write")->required();
    bq->add_option("--summary", bq_summary, "JSON summary path (default <out>.json)");
    auto* o_grid = bq->add_option("--grid", bq_grid, "Comma-separated position grid (default spans the limit)");
    auto* o_bq_limit = bq->add_option("--inventory-limit", bq_limit, "Limit d for the default grid (default 800)");
    auto* o_fee = bq->add_option("--fee", bq_fee, "Commission rate (default 0)");
    auto* o_lambda = bq->add_option("--lambda", bq_lambda, "Holding cost rate (default 0)");
    auto* o_bq_tick = bq->add_option("--tick", bq_tick, "Tick size recorded in the file (default 0.02)");

    // gen-data
    auto* gd = app.add_subcommand("gen-data", "Write a synthetic market data CSV");
    std::string gd_config, gd_out;
    std::uint64_t gd_seed = 1;
    std::size_t gd_steps = 0;
    double gd_vol = 0, gd_mid = 0, gd_tick = 0, gd_mrate = 0;
    Millis gd_interval = 0;
    std::vector<std::string> gd_drift;
    gd->add_option("--config", gd_config, "JSON config file with a synthetic section")->check(CLI::ExistingFile);
    auto* o_gd_seed = gd->add_option("--seed", gd_seed, "Generator seed (default 1)");
    auto* o_gd_steps = gd->add_option("--steps", gd_steps, "Number of records (default 28801)");
    auto* o_gd_vol = gd->add_option("--volatility", gd_vol, "Mid-walk stddev, ticks per step (default 0.6)");
    auto* o_gd_mid = gd->add_option("--initial-mid", gd_mid, "Initial mid, currency (default 100)");
    auto* o_gd_tick = gd->add_option("--tick", gd_tick, "Tick size (default 0.02)");
    auto* o_gd_int = gd->add_option("--interval-ms", gd_interval, "Snapshot interval (default 500)");
    auto* o_gd_mrate = gd->add_option("--market-rate", gd_mrate, "Market orders per interval (default 0.8)");
    gd->add_option("--drift", gd_drift, "Drift segment start:end:ticks_per_step (repeatable)");
    gd->add_option("--out", gd_out, "CSV path to write")->required();

    // serve-env
    auto* se = app.add_subcommand("serve-env", "Serve the environment over the JSON-lines protocol");
    MarketFlags se_market;
    se_market.attach(se);
    bool se_stdio = false;
    std::uint16_t se_port = 0;
    std::size_t se_max = 0;
    std::string se_qtable;
    double se_eps = 0.0;
    se->add_flag("--stdio", se_stdio, "Serve one session on stdin/stdout");
    auto* o_port = se->add_option("--port", se_port, "Serve on this TCP port (loopback)");
    se->add_option("--max-connections", se_max, "Exit after this many TCP sessions (0 = unlimited)");
    se->add_option("--qtable", se_qtable, "Q-table file for teacher queries")->check(CLI::ExistingFile);
    auto* o_eps = se->add_option("--epsilon", se_eps, "Teacher smoothing mass (default from config, else 0)");

    // report
    auto* rp = app.add_subcommand("report", "Recompute metrics and plot series from a run directory");
    std::string rp_dir;
    std::size_t rp_horizon = 1;
    rp->add_option("--dir", rp_dir, "Directory holding trace.csv and metrics.json")->required()->check(CLI::ExistingDirectory);
    rp->add_option("--adverse-horizon", rp_horizon, "Steps ahead for adverse selection (default 1)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*sim) {
            RunSpec spec;
            load_config(sim_market.config_path, &spec.episode, &spec.synthetic, &spec.agent, &spec, nullptr);
            sim_market.apply(spec.episode, spec.synthetic);
            if (!sim_market.data_path.empty()) spec.data_path = sim_market.data_path;
            if (o_agent->count()) spec.agent.kind = agent_kind;
            if (o_seeds->count()) spec.seeds = seeds;
            if (o_out->count()) spec.output_dir = out_dir;
            if (o_qv->count()) spec.agent.quote.volume = quote_volume;
            if (o_qw->count()) spec.agent.quote.wait = quote_wait;
            if (o_skew->count()) spec.agent.liic_skew = liic_skew;
            if (o_gamma->count()) spec.agent.as_risk_aversion = as_gamma;
            if (o_kappa->count()) spec.agent.as_intensity = as_kappa;
            if (o_script->count()) spec.agent.script_path = script_path;
            if (o_phost->count()) spec.agent.policy_host = policy_host;
            if (o_pport->count()) spec.agent.policy_port = policy_port;
            if (trend_overlay) spec.agent.trend_overlay = true;
            if (o_th->count()) spec.agent.trend_horizon = trend_horizon;
            if (o_ts->count()) spec.agent.trend_schedule = trend_schedule;
            if (o_ah->count()) spec.adverse_horizon = adverse_horizon;
            if (spec.data_path && !fs::exists(*spec.data_path)) {
                throw Error(Errc::io_error, fmt::format("data file {} does not exist", spec.data_path->string()));
            }
            auto results = simulate(spec);
            for (std::size_t i = 0; i < results.size(); ++i) {
                const auto& m = results[i].metrics;
                fmt::print("seed {}: epnl={} map={} num_fills={}\n", spec.seeds[i], m.epnl, m.map, m.num_fills);
            }
            fmt::print("wrote {}\n", (spec.output_dir / "aggregate.json").string());
        } else if (*bq) {
            TeacherConfig cfg;
            load_config(bq_config, nullptr, nullptr, nullptr, nullptr, &cfg);
            if (o_grid->count()) {
                cfg.grid = parse_grid(bq_grid);
            } else if (cfg.grid.empty() || o_bq_limit->count()) {
                cfg.grid = default_grid(bq_limit);
            }
            if (o_fee->count()) cfg.fee = bq_fee;
            if (o_lambda->count()) cfg.lambda = bq_lambda;
            if (o_bq_tick->count()) cfg.tick = bq_tick;
            auto prices = load_price_column(bq_prices, bq_column);
            QTable q = build_qtable(prices, cfg);
            save_qtable(q, bq_out);
            Json summary;
            summary["steps"] = q.steps;
            summary["grid"] = q.grid;
            summary["fee"] = q.fee;
            summary["lambda"] = q.lambda;
            summary["tick"] = q.tick;
            Json starts = Json::array();
            Json actions = Json::array();
            for (std::size_t p = 0; p < q.size(); ++p) {
                auto row = q.row(0, p);
                starts.push_back(*std::max_element(row.begin(), row.end()));
                actions.push_back(optimal_action(q, 0, p));
            }
            summary["max_start_values"] = starts;
            summary["optimal_start_actions"] = actions;
            write_json_file(summary, bq_summary.empty() ? bq_out + ".json" : bq_summary);
            fmt::print("{}\n", summary.dump());
        } else if (*gd) {
            SyntheticConfig cfg;
            load_config(gd_config, nullptr, &cfg, nullptr, nullptr, nullptr);
            if (o_gd_seed->count()) cfg.seed = gd_seed;
            if (o_gd_steps->count()) cfg.steps = gd_steps;
            if (o_gd_vol->count()) cfg.volatility_ticks = gd_vol;
            if (o_gd_mid->count()) cfg.initial_mid = gd_mid;
            if (o_gd_tick->count()) cfg.tick = gd_tick;
            if (o_gd_int->count()) cfg.interval = gd_interval;
            if (o_gd_mrate->count()) cfg.market_rate = gd_mrate;
            if (!gd_drift.empty()) cfg.drift.clear();
            for (const std::string& d : gd_drift) cfg.drift.push_back(MarketFlags::parse_drift(d));
            auto records = generate_synthetic(cfg);
            write_csv(records, gd_out, cfg.tick);
            fmt::print("wrote {} records to {}\n", records.size(), gd_out);
        } else if (*se) {
            if (se_stdio == (o_port->count() > 0)) {
                throw CLI::ValidationError("serve-env", "choose exactly one of --stdio or --port");
            }
            BridgeOptions opts;
            load_config(se_market.config_path, &opts.episode, nullptr, nullptr, nullptr, &opts.teacher);
            SyntheticConfig synth;
            load_config(se_market.config_path, nullptr, &synth, nullptr, nullptr, nullptr);
            se_market.apply(opts.episode, synth);
            opts.episode.validate();
            if (!se_market.data_path.empty()) {
                opts.source = std::make_shared<const std::vector<MarketDataRecord>>(
                    load_csv(se_market.data_path, opts.episode.tick));
            } else {
                opts.source = synth;
            }
            if (!se_qtable.empty()) {
                auto loaded = load_qtable(se_qtable, opts.episode.inventory_limit);
                if (loaded.grid_mismatch) {
                    fmt::print(stderr, "warning: q-table grid does not span the inventory limit {}\n",
                               opts.episode.inventory_limit);
                }
                opts.qtable = std::make_shared<const QTable>(std::move(loaded.table));
            }
            if (o_eps->count()) opts.teacher.epsilon = se_eps;
            if (se_stdio) {
                BridgeSession session(opts);
                serve_stream(session, std::cin, std::cout);
            } else {
                serve_tcp(opts, se_port, se_max, [](std::uint16_t p) {
                    fmt::print(stderr, "listening on 127.0.0.1:{}\n", p);
                });
            }
        } else if (*rp) {
            fs::path dir = rp_dir;
            Json stored = load_json_file(dir / "metrics.json");
            double tick = 0.02;
            if (stored.contains("config") && stored["config"].contains("episode")) {
                tick = stored["config"]["episode"].value("tick", tick);
            }
            auto trace = parse_trace_csv(read_text_file(dir / "trace.csv"), tick);
            MetricsReport m = compute_metrics(trace, rp_horizon);
            write_text_file(dir / "series_pnl.csv", series_pnl_csv(trace));
            write_text_file(dir / "series_inventory.csv", series_inventory_csv(trace));
            write_text_file(dir / "series_quotes.csv", series_quotes_csv(trace, tick));
            Json out;
            out["metrics"] = metrics_json(m);
            out["trace_hash"] = fmt::format("{:016x}", trace_hash(trace, tick));
            fmt::print("{}\n", out.dump(2));
        }
    } catch (const CLI::Error& e) {
        fmt::print(stderr, "usage error: {}\n", e.what());
        return 2;
    } catch (const Error& e) {
        fmt::print(stderr, "error: {}: {}\n", errc_name(e.code()), e.what());
        return 1;
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 1;
    }
    return 0;
}

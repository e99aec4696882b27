#include "mmsim/sim/run.hpp"

#include "mmsim/agents/trend.hpp"
#include "mmsim/bridge/session.hpp"
#include "mmsim/common/error.hpp"
#include "mmsim/data/market_data.hpp"
#include "mmsim/metrics/report.hpp"

#include <fmt/format.h>

namespace mmsim {

void to_json(Json& j, const AgentConfig& c) {
    j = Json{{"kind", c.kind},
             {"volume", c.quote.volume},
             {"wait_ms", c.quote.wait},
             {"liic_skew", c.liic_skew},
             {"as_risk_aversion", c.as_risk_aversion},
             {"as_intensity", c.as_intensity},
             {"script", c.script_path},
             {"policy_host", c.policy_host},
             {"policy_port", c.policy_port},
             {"trend_overlay", c.trend_overlay},
             {"trend_horizon", c.trend_horizon},
             {"trend_schedule", c.trend_schedule}};
}

void from_json(const Json& j, AgentConfig& c) {
    require_keys(j,
                 {"kind", "volume", "wait_ms", "liic_skew", "as_risk_aversion", "as_intensity", "script",
                  "policy_host", "policy_port", "trend_overlay", "trend_horizon", "trend_schedule"},
                 "agent config");
    auto read = [&](const char* key, auto& out) {
        if (auto it = j.find(key); it != j.end()) {
            try {
                out = it->get<std::decay_t<decltype(out)>>();
            } catch (const nlohmann::json::exception& e) {
                throw Error(Errc::invalid_config, fmt::format("bad value for '{}': {}", key, e.what()));
            }
        }
    };
    read("kind", c.kind);
    read("volume", c.quote.volume);
    read("wait_ms", c.quote.wait);
    read("liic_skew", c.liic_skew);
    read("as_risk_aversion", c.as_risk_aversion);
    read("as_intensity", c.as_intensity);
    read("script", c.script_path);
    read("policy_host", c.policy_host);
    read("policy_port", c.policy_port);
    read("trend_overlay", c.trend_overlay);
    read("trend_horizon", c.trend_horizon);
    read("trend_schedule", c.trend_schedule);
}

std::unique_ptr<Agent> make_agent(const AgentConfig& cfg, std::uint64_t seed) {
    if (cfg.quote.volume <= 0) throw Error(Errc::invalid_config, "agent quote volume must be positive");
    if (cfg.quote.wait < 0) throw Error(Errc::invalid_config, "agent wait must be >= 0");
    std::unique_ptr<Agent> agent;
    if (cfg.kind == "foic") {
        agent = std::make_unique<FoicAgent>(cfg.quote);
    } else if (cfg.kind == "liic") {
        agent = std::make_unique<LiicAgent>(cfg.liic_skew, cfg.quote);
    } else if (cfg.kind == "as") {
        if (!(cfg.as_risk_aversion > 0.0) || !(cfg.as_intensity > 0.0)) {
            throw Error(Errc::invalid_config, "AS risk aversion and intensity must be positive");
        }
        agent = std::make_unique<AvellanedaStoikovAgent>(
            AvellanedaStoikovParams{cfg.as_risk_aversion, cfg.as_intensity, cfg.quote});
    } else if (cfg.kind == "scripted") {
        if (cfg.script_path.empty()) {
            agent = std::make_unique<RandomAgent>(seed);
        } else {
            agent = std::make_unique<ScriptedAgent>(load_action_script(cfg.script_path));
        }
    } else if (cfg.kind == "random") {
        agent = std::make_unique<RandomAgent>(seed);
    } else if (cfg.kind == "bridge") {
        if (cfg.policy_port == 0) throw Error(Errc::invalid_config, "bridge agent needs a policy port");
        agent = std::make_unique<RemotePolicyAgent>(cfg.policy_host, cfg.policy_port);
    } else {
        throw Error(Errc::invalid_config, fmt::format("unknown agent '{}'", cfg.kind));
    }
    if (!cfg.trend_overlay) return agent;
    std::unique_ptr<TrendPredictor> predictor;
    if (cfg.trend_schedule.empty()) {
        predictor = std::make_unique<MomentumPredictor>(cfg.trend_horizon);
    } else {
        predictor = std::make_unique<ScheduledPredictor>(ScheduledPredictor::load(cfg.trend_schedule));
    }
    return std::make_unique<TrendOverlayAgent>(std::move(agent), std::move(predictor));
}

Json run_spec_json(const RunSpec& spec) {
    Json j;
    j["episode"] = spec.episode;
    if (spec.data_path) {
        j["data"] = Json{{"replay", spec.data_path->string()}};
    } else {
        j["data"] = Json{{"synthetic", spec.synthetic}};
    }
    j["agent"] = spec.agent;
    j["seeds"] = spec.seeds;
    j["adverse_horizon"] = spec.adverse_horizon;
    return j;
}

EpisodeResult run_episode(Environment& env, Agent& agent, std::uint64_t seed, std::size_t adverse_horizon) {
    agent.reset(seed);
    const Observation* obs = &env.reset(seed);
    while (!env.done()) {
        env.step(agent.act(*obs));
        obs = &env.observation();
    }
    EpisodeResult out;
    out.trace = env.trace();
    out.metrics = compute_metrics(out.trace, adverse_horizon);
    return out;
}

DataSource make_source(const RunSpec& spec) {
    if (spec.data_path) {
        return std::make_shared<const std::vector<MarketDataRecord>>(load_csv(*spec.data_path, spec.episode.tick));
    }
    return spec.synthetic;
}

std::vector<EpisodeResult> simulate(const RunSpec& spec) {
    if (spec.seeds.empty()) throw Error(Errc::invalid_config, "at least one seed is required");
    spec.episode.validate();
    const DataSource source = make_source(spec);
    const Json echo = run_spec_json(spec);

    std::vector<EpisodeResult> results;
    for (std::uint64_t seed : spec.seeds) {
        EpisodeConfig cfg = spec.episode;
        cfg.seed = seed;
        Environment env(cfg, source);
        auto agent = make_agent(spec.agent, seed);
        results.push_back(run_episode(env, *agent, seed, spec.adverse_horizon));
    }

    std::vector<MetricsReport> reports;
    std::string agent_name = spec.agent.kind + (spec.agent.trend_overlay ? "+trend" : "");
    for (std::size_t i = 0; i < results.size(); ++i) {
        emit_report(spec.output_dir / fmt::format("seed_{}", spec.seeds[i]), {agent_name, spec.seeds[i], echo},
                    results[i].metrics, results[i].trace, spec.episode.tick);
        reports.push_back(results[i].metrics);
    }
    Json agg;
    agg["agent"] = agent_name;
    agg["seeds"] = spec.seeds;
    agg["metrics"] = aggregate_json(reports);
    agg["config"] = echo;
    write_json_file(agg, spec.output_dir / "aggregate.json");
    return results;
}

}  // namespace mmsim

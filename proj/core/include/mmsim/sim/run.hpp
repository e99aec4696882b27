#pragma once

#include "mmsim/agents/agent.hpp"
#include "mmsim/agents/baselines.hpp"
#include "mmsim/data/config_io.hpp"
#include "mmsim/env/environment.hpp"
#include "mmsim/metrics/metrics.hpp"

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace mmsim {

struct AgentConfig {
    std::string kind = "foic";  // foic, liic, as, scripted, random, bridge
    QuoteParams quote;
    double liic_skew = 0.0005;  // currency per unit of inventory
    double as_risk_aversion = 5e-5;
    double as_intensity = 40.0;
    std::string script_path;  // scripted: CSV of action indices; empty = random actions
    std::string policy_host = "127.0.0.1";
    std::uint16_t policy_port = 0;
    bool trend_overlay = false;
    std::size_t trend_horizon = 30;
    std::string trend_schedule;  // CSV of step,trend; empty = momentum predictor
};

void to_json(Json& j, const AgentConfig& c);
void from_json(const Json& j, AgentConfig& c);

/// Builds the configured agent, wrapped in the trend overlay when enabled.
/// Throws InvalidConfig for an unknown kind.
std::unique_ptr<Agent> make_agent(const AgentConfig& cfg, std::uint64_t seed);

struct RunSpec {
    EpisodeConfig episode;
    std::optional<std::filesystem::path> data_path;  // replay file; synthetic when empty
    SyntheticConfig synthetic;
    AgentConfig agent;
    std::vector<std::uint64_t> seeds{1};
    std::filesystem::path output_dir = "out";
    std::size_t adverse_horizon = 1;
};

/// Effective configuration as echoed into reports.
Json run_spec_json(const RunSpec& spec);

struct EpisodeResult {
    std::vector<StepRecord> trace;
    MetricsReport metrics;
};

/// Resets the environment with `seed`, lets `agent` act until done.
EpisodeResult run_episode(Environment& env, Agent& agent, std::uint64_t seed, std::size_t adverse_horizon = 1);

/// Resolves the data source: loads the replay file or returns the synthetic config.
DataSource make_source(const RunSpec& spec);

/// Runs every seed, then writes <output_dir>/seed_<n>/ reports and
/// <output_dir>/aggregate.json. Nothing is written unless every run succeeds.
std::vector<EpisodeResult> simulate(const RunSpec& spec);

}  // namespace mmsim

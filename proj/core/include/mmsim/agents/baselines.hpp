#pragma once

#include "mmsim/agents/agent.hpp"
#include "mmsim/common/rng.hpp"

#include <vector>

namespace mmsim {

struct QuoteParams {
    Quantity volume = 100;
    Millis wait = 2500;
};

/// Closes the bid at q >= limit and the ask at q <= -limit.
void suppress_beyond_limit(QuoteSet& quotes, Quantity inventory, Quantity limit);

/// Quotes at the best bid and best ask.
class FoicAgent : public Agent {
public:
    explicit FoicAgent(QuoteParams params = {}) : params_(params) {}
    QuoteSet act(const Observation& obs) override;
    std::string name() const override { return "foic"; }

private:
    QuoteParams params_;
};

/// FOIC shifted down by round(skew * q / tick) ticks on both sides; skew is
/// in currency per unit of inventory.
class LiicAgent : public Agent {
public:
    explicit LiicAgent(double skew = 0.0005, QuoteParams params = {}) : skew_(skew), params_(params) {}
    QuoteSet act(const Observation& obs) override;
    std::string name() const override { return "liic"; }
    Ticks shift_ticks(Quantity inventory, double tick) const;

private:
    double skew_;
    QuoteParams params_;
};

struct AvellanedaStoikovParams {
    double risk_aversion = 5e-5;
    double intensity = 40.0;  // order arrival decay
    QuoteParams quote;
};

/// Reservation price m - q * g * s^2 * T and half-spread
/// g * s^2 * T / 2 + ln(1 + g / k) / g, with s the per-step mid volatility
/// and T the remaining steps.
class AvellanedaStoikovAgent : public Agent {
public:
    explicit AvellanedaStoikovAgent(AvellanedaStoikovParams params = {}) : params_(params) {}
    QuoteSet act(const Observation& obs) override;
    std::string name() const override { return "as"; }

    struct Targets {
        double reservation = 0.0;
        double half_spread = 0.0;
    };
    Targets targets(double mid, double sigma, Quantity inventory, double remaining_steps) const;

private:
    AvellanedaStoikovParams params_;
};

/// Replays a fixed list of action vectors, cycling when it runs out.
class ScriptedAgent : public Agent {
public:
    explicit ScriptedAgent(std::vector<ActionVector> script);
    QuoteSet act(const Observation& obs) override;
    std::string name() const override { return "scripted"; }
    void reset(std::uint64_t) override { next_ = 0; }

private:
    std::vector<ActionVector> script_;
    std::size_t next_ = 0;
};

/// Uniformly random action indices from a seeded stream.
class RandomAgent : public Agent {
public:
    explicit RandomAgent(std::uint64_t seed = 1) : rng_(mix_seed(seed, 0xac7)) {}
    QuoteSet act(const Observation& obs) override;
    std::string name() const override { return "random"; }
    void reset(std::uint64_t seed) override { rng_ = Rng(mix_seed(seed, 0xac7)); }

    ActionVector sample(const ActionGrids& grids);

private:
    Rng rng_;
};

/// Reads action scripts: a header line then six comma-separated indices per row.
std::vector<ActionVector> load_action_script(const std::string& path);

}  // namespace mmsim

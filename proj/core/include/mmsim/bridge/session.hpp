#pragma once

#include "mmsim/agents/agent.hpp"
#include "mmsim/data/config_io.hpp"
#include "mmsim/env/environment.hpp"
#include "mmsim/teacher/qtable.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace mmsim {

struct BridgeOptions {
    EpisodeConfig episode;
    DataSource source = SyntheticConfig{};
    std::shared_ptr<const QTable> qtable;  // enables the teacher command
    TeacherConfig teacher;                 // distribution mode and smoothing
};

/// One client's session: a JSON object per request line, one per response.
///
/// Requests: {"cmd":"reset","seed":n,"config":{...episode keys}},
/// {"cmd":"step","action":[6 indices]}, {"cmd":"teacher","t":n,"q":n},
/// {"cmd":"close"}. Responses carry ok, state (90 numbers), reward,
/// breakdown{pnl,ip,comp,er}, done and info; teacher replies carry
/// teacher{t,q,dist}. Failures answer {"ok":false,"error":Name,"message":...}
/// and leave the session usable.
class BridgeSession {
public:
    explicit BridgeSession(BridgeOptions options);

    std::string handle_line(std::string_view line);
    bool closed() const noexcept { return closed_; }
    /// The current episode, or nullptr before the first reset.
    const Environment* environment() const noexcept { return env_.get(); }

private:
    Json reset(const Json& req);
    Json step(const Json& req);
    Json teacher(const Json& req);
    Json state_response(const RewardBreakdown& reward) const;

    BridgeOptions options_;
    std::unique_ptr<Environment> env_;
    bool closed_ = false;
};

/// Reads request lines until EOF or close, writing one response line each.
void serve_stream(BridgeSession& session, std::istream& in, std::ostream& out);

/// Accepts TCP connections on `port` (0 picks a free one) and serves each
/// with a fresh session, one at a time. `on_listen` receives the bound
/// port. Returns after `max_connections` sessions when it is non-zero.
void serve_tcp(const BridgeOptions& options, std::uint16_t port, std::size_t max_connections = 0,
               const std::function<void(std::uint16_t)>& on_listen = {});

/// Agent whose actions come from an external policy process. Each step it
/// sends {"cmd":"act","t":n,"state":[...]} and expects {"action":[6 indices]}.
class RemotePolicyAgent : public Agent {
public:
    RemotePolicyAgent(const std::string& host, std::uint16_t port);
    ~RemotePolicyAgent() override;
    QuoteSet act(const Observation& obs) override;
    std::string name() const override { return "bridge"; }
    void reset(std::uint64_t seed) override;

private:
    struct Connection;
    std::unique_ptr<Connection> conn_;
};

}  // namespace mmsim

#include "mmsim/bridge/session.hpp"

#include "mmsim/common/error.hpp"

#include <boost/asio.hpp>
#include <fmt/format.h>

#include <istream>
#include <limits>
#include <ostream>

namespace mmsim {

namespace asio = boost::asio;
using asio::ip::tcp;

namespace {

Json error_response(std::string_view name, const std::string& message) {
    return Json{{"ok", false}, {"error", name}, {"message", message}};
}

[[noreturn]] void malformed(const std::string& what) { throw Error(Errc::malformed_request, what); }

Json breakdown_json(const RewardBreakdown& r) {
    return Json{{"pnl", r.pnl}, {"ip", r.ip}, {"comp", r.comp}, {"er", r.er}};
}

}  // namespace

BridgeSession::BridgeSession(BridgeOptions options) : options_(std::move(options)) {}

std::string BridgeSession::handle_line(std::string_view line) {
    Json resp;
    try {
        Json req;
        try {
            req = Json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            malformed(fmt::format("request is not valid JSON: {}", e.what()));
        }
        if (!req.is_object() || !req.contains("cmd") || !req["cmd"].is_string()) {
            malformed("request must be an object with a string 'cmd'");
        }
        const std::string cmd = req["cmd"].get<std::string>();
        if (cmd == "reset") {
            resp = reset(req);
        } else if (cmd == "step") {
            resp = step(req);
        } else if (cmd == "teacher") {
            resp = teacher(req);
        } else if (cmd == "close") {
            closed_ = true;
            resp = Json{{"ok", true}, {"done", true}};
        } else {
            malformed(fmt::format("unknown cmd '{}'", cmd));
        }
    } catch (const Error& e) {
        resp = error_response(errc_name(e.code()), e.what());
    } catch (const std::exception& e) {
        resp = error_response(errc_name(Errc::malformed_request), e.what());
    }
    // Error messages may echo raw request bytes; never fail on bad UTF-8.
    return resp.dump(-1, ' ', false, Json::error_handler_t::replace);
}

Json BridgeSession::state_response(const RewardBreakdown& reward) const {
    const Observation& obs = env_->observation();
    Json resp;
    resp["ok"] = true;
    resp["state"] = obs.state;
    resp["reward"] = reward.total;
    resp["breakdown"] = breakdown_json(reward);
    resp["done"] = env_->done();
    Json info;
    info["t"] = env_->t();
    info["time_ms"] = obs.time;
    info["mid"] = obs.mid;
    info["inventory"] = obs.inventory;
    info["cash"] = obs.cash;
    info["net_value"] = obs.net_value;
    resp["info"] = std::move(info);
    return resp;
}

Json BridgeSession::reset(const Json& req) {
    std::uint64_t seed = options_.episode.seed;
    if (auto it = req.find("seed"); it != req.end()) {
        if (!it->is_number_integer()) malformed("'seed' must be an integer");
        seed = it->get<std::uint64_t>();
    }
    EpisodeConfig cfg = options_.episode;
    if (auto it = req.find("config"); it != req.end() && !it->is_null()) from_json(*it, cfg);
    cfg.seed = seed;
    auto env = std::make_unique<Environment>(cfg, options_.source);
    env->reset(seed);
    env_ = std::move(env);
    return state_response({});
}

Json BridgeSession::step(const Json& req) {
    if (!env_) throw Error(Errc::stepped_after_done, "no episode; send reset first");
    auto it = req.find("action");
    if (it == req.end() || !it->is_array() || it->size() != 6) malformed("'action' must be an array of 6 indices");
    ActionVector a;
    for (std::size_t i = 0; i < 6; ++i) {
        const Json& v = (*it)[i];
        if (!v.is_number_integer()) malformed("action indices must be integers");
        auto x = v.get<std::int64_t>();
        if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
            throw Error(Errc::action_index_out_of_range, fmt::format("action index {} = {} out of range", i, x));
        }
        a.index[i] = static_cast<int>(x);
    }
    const StepRecord& r = env_->step(a);
    Json resp = state_response(r.reward);
    Json fills = Json::array();
    for (const AgentFill& f : r.fills) {
        fills.push_back(Json{{"side", to_string(f.side)},
                             {"price", static_cast<double>(f.price) * env_->config().tick},
                             {"volume", f.volume}});
    }
    resp["info"]["fills"] = std::move(fills);
    resp["info"]["ask_skipped"] = r.ask_skipped;
    resp["info"]["bid_skipped"] = r.bid_skipped;
    return resp;
}

Json BridgeSession::teacher(const Json& req) {
    if (!options_.qtable) throw Error(Errc::invalid_config, "no q-table loaded for teacher queries");
    auto t_it = req.find("t");
    auto q_it = req.find("q");
    if (t_it == req.end() || q_it == req.end() || !t_it->is_number_integer() || !q_it->is_number_integer()) {
        malformed("teacher needs integer 't' and 'q'");
    }
    const auto t = t_it->get<std::int64_t>();
    if (t < 0) throw Error(Errc::index_out_of_range, "teacher step must be >= 0");
    const QTable& table = *options_.qtable;
    const std::size_t p = nearest_grid_index(table.grid, q_it->get<Quantity>());
    auto dist = teacher_distribution(table, static_cast<std::size_t>(t), p, options_.teacher);
    return Json{{"ok", true}, {"teacher", Json{{"t", t}, {"q", table.grid[p]}, {"dist", dist}}}};
}

void serve_stream(BridgeSession& session, std::istream& in, std::ostream& out) {
    std::string line;
    while (!session.closed() && std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        out << session.handle_line(line) << '\n';
        out.flush();
    }
}

void serve_tcp(const BridgeOptions& options, std::uint16_t port, std::size_t max_connections,
               const std::function<void(std::uint16_t)>& on_listen) {
    asio::io_context io;
    tcp::acceptor acceptor(io, tcp::endpoint(asio::ip::address_v4::loopback(), port));
    if (on_listen) on_listen(acceptor.local_endpoint().port());
    for (std::size_t served = 0; max_connections == 0 || served < max_connections; ++served) {
        tcp::socket socket(io);
        acceptor.accept(socket);
        BridgeSession session(options);
        asio::streambuf buf;
        boost::system::error_code ec;
        while (!session.closed()) {
            asio::read_until(socket, buf, '\n', ec);
            if (ec) break;
            std::istream is(&buf);
            std::string line;
            std::getline(is, line);
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            std::string resp = session.handle_line(line) + '\n';
            asio::write(socket, asio::buffer(resp), ec);
            if (ec) break;
        }
        socket.shutdown(tcp::socket::shutdown_both, ec);
    }
}

struct RemotePolicyAgent::Connection {
    asio::io_context io;
    tcp::socket socket{io};
    asio::streambuf buf;

    Json request(const Json& msg) {
        std::string line = msg.dump() + '\n';
        boost::system::error_code ec;
        asio::write(socket, asio::buffer(line), ec);
        if (!ec) asio::read_until(socket, buf, '\n', ec);
        if (ec) throw Error(Errc::io_error, fmt::format("policy connection failed: {}", ec.message()));
        std::istream is(&buf);
        std::string reply;
        std::getline(is, reply);
        try {
            return Json::parse(reply);
        } catch (const nlohmann::json::parse_error& e) {
            throw Error(Errc::malformed_request, fmt::format("policy reply is not JSON: {}", e.what()));
        }
    }
};

RemotePolicyAgent::RemotePolicyAgent(const std::string& host, std::uint16_t port)
    : conn_(std::make_unique<Connection>()) {
    boost::system::error_code ec;
    tcp::resolver resolver(conn_->io);
    auto endpoints = resolver.resolve(host, std::to_string(port), ec);
    if (!ec) asio::connect(conn_->socket, endpoints, ec);
    if (ec) throw Error(Errc::io_error, fmt::format("cannot reach policy at {}:{}: {}", host, port, ec.message()));
}

RemotePolicyAgent::~RemotePolicyAgent() = default;

void RemotePolicyAgent::reset(std::uint64_t seed) {
    Json reply = conn_->request(Json{{"cmd", "episode"}, {"seed", seed}});
    if (!reply.value("ok", false)) throw Error(Errc::malformed_request, "policy rejected the episode start");
}

QuoteSet RemotePolicyAgent::act(const Observation& obs) {
    Json reply = conn_->request(Json{{"cmd", "act"}, {"t", obs.step}, {"state", obs.state}});
    auto it = reply.find("action");
    if (it == reply.end() || !it->is_array() || it->size() != 6) {
        throw Error(Errc::malformed_request, "policy reply lacks a 6-index 'action'");
    }
    ActionVector a;
    for (std::size_t i = 0; i < 6; ++i) {
        if (!(*it)[i].is_number_integer()) throw Error(Errc::malformed_request, "policy action indices must be integers");
        a.index[i] = (*it)[i].get<int>();
    }
    return decode_action(a, obs.best_bid, obs.best_ask, *obs.grids, obs.tick);
}

}  // namespace mmsim

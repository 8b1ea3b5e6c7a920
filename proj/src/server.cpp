#include "gridsim/server.hpp"

#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>

#include "gridsim/engine.hpp"
#include "gridsim/perception.hpp"
#include "gridsim/replay.hpp"
#include "gridsim/world.hpp"
#include "socket_io.hpp"

namespace gridsim {

namespace {

long long epoch_ms() {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
}

}  // namespace

MatchReport run_match(const SimConfig& cfg, AgentFrontend& frontend, const std::string& sim_id) {
    WorldState world = create_world(cfg, cfg.seed);
    ReplayRecorder recorder(world, sim_id);

    std::map<std::string, SimStart> starts;
    for (int id : world.agent_ids()) {
        const Thing& agent = world.thing(id);
        starts[agent.name] = SimStart{sim_id,     agent.team, agent.name,
                                      cfg.agents_per_team, cfg.steps,  cfg.vision_range};
    }
    frontend.sim_start(starts);

    for (int t = 1; t <= cfg.steps; ++t) {
        std::map<std::string, Percept> percepts;
        for (int id : world.agent_ids()) {
            percepts[world.thing(id).name] = compute_percept(world, id);
        }
        std::map<std::string, Action> answers =
            frontend.collect(t, percepts, std::chrono::milliseconds(cfg.deadline_ms));
        std::map<int, Action> actions;
        for (int id : world.agent_ids()) {
            auto it = answers.find(world.thing(id).name);
            actions[id] = it == answers.end() ? Action::no_op() : it->second;
        }
        StepOutput out = step(world, actions);
        recorder.record_step(world, out);
    }

    std::map<std::string, SimEnd> ends;
    for (int id : world.agent_ids()) {
        const Thing& agent = world.thing(id);
        long long score = world.scores.at(agent.team);
        int ranking = 1;
        for (const auto& [team, other] : world.scores) {
            if (other > score) ++ranking;
        }
        ends[agent.name] = SimEnd{score, ranking};
    }
    frontend.sim_end(ends);

    return MatchReport{sim_id, world.scores, recorder.finish()};
}

// --- InProcessFrontend ----------------------------------------------------

InProcessFrontend::InProcessFrontend(const SimConfig& cfg,
                                     const std::map<std::string, std::string>& team_behaviors)
    : seed_(cfg.seed) {
    for (const auto& [team, behavior] : team_behaviors) {
        BehaviorFn fn = behavior_from(behavior);
        if (!fn) throw std::invalid_argument("unknown behavior '" + behavior + "'");
        behavior_of_team_[team] = fn;
    }
}

void InProcessFrontend::sim_start(const std::map<std::string, SimStart>& starts) {
    for (const auto& [name, start] : starts) {
        if (!behavior_of_team_.count(start.team)) continue;
        AgentMind& mind = minds_[name];
        init_mind(mind, start, seed_);
        team_of_[name] = start.team;
        register_agent(boards_[start.team], name);
    }
}

std::map<std::string, Action> InProcessFrontend::collect(
    long long id, const std::map<std::string, Percept>& percepts, std::chrono::milliseconds) {
    std::map<std::string, Action> answers;
    for (const auto& [name, percept] : percepts) {
        auto it = minds_.find(name);
        if (it == minds_.end()) continue;
        AgentMind& mind = it->second;
        observe(mind, percept, id);
        answers[name] = behavior_of_team_.at(team_of_.at(name))(percept, mind,
                                                                boards_.at(team_of_.at(name)));
    }
    return answers;
}

void InProcessFrontend::sim_end(const std::map<std::string, SimEnd>& ends) {
    results_ = ends;
}

MatchReport run_match_inprocess(const SimConfig& cfg,
                                const std::map<std::string, std::string>& team_behaviors,
                                const std::string& sim_id) {
    InProcessFrontend frontend(cfg, team_behaviors);
    return run_match(cfg, frontend, sim_id);
}

// --- NetworkFrontend --------------------------------------------------------

NetworkFrontend::NetworkFrontend(Roster roster, const std::string& host, uint16_t port)
    : roster_(std::move(roster)) {
    listen_fd_ = net::listen_on(host, port);
    port_ = net::bound_port(listen_fd_);
    acceptor_ = std::thread(&NetworkFrontend::accept_loop, this);
}

NetworkFrontend::~NetworkFrontend() {
    shutdown();
}

void NetworkFrontend::accept_loop() {
    while (true) {
        int fd = ::accept(listen_fd_, nullptr, nullptr);
        if (fd < 0) return;
        auto conn = std::make_shared<Connection>();
        conn->fd = fd;
        {
            std::lock_guard lock(mu_);
            if (stopping_) {
                ::close(fd);
                return;
            }
            connections_.push_back(conn);
        }
        conn->reader = std::thread(&NetworkFrontend::reader_loop, this, conn);
    }
}

void NetworkFrontend::reader_loop(std::shared_ptr<Connection> conn) {
    FrameReader frames;
    char buf[65536];
    bool alive = true;
    while (alive) {
        ssize_t n = ::recv(conn->fd, buf, sizeof buf, 0);
        if (n <= 0) break;
        frames.feed(buf, static_cast<size_t>(n));
        try {
            while (auto doc = frames.next()) {
                try {
                    handle_message(conn, decode_document(*doc));
                } catch (const DecodeError&) {
                    // malformed or stale content is simply not an answer
                }
            }
        } catch (const DecodeError&) {
            alive = false;  // oversized frame: the stream cannot be trusted
        }
    }
    std::lock_guard lock(mu_);
    conn->closed = true;
    auto it = bound_.find(conn->agent);
    if (it != bound_.end() && it->second == conn) bound_.erase(it);
    cv_.notify_all();
}

void NetworkFrontend::handle_message(const std::shared_ptr<Connection>& conn, Message&& msg) {
    if (auto* auth = std::get_if<AuthRequest>(&msg)) {
        bool ok = std::any_of(roster_.begin(), roster_.end(), [&](const Credential& c) {
            return c.agent == auth->agent && c.password == auth->password;
        });
        std::shared_ptr<Connection> superseded;
        std::optional<SimStart> start;
        if (ok) {
            std::lock_guard lock(mu_);
            auto it = bound_.find(auth->agent);
            if (it != bound_.end() && it->second != conn) superseded = it->second;
            bound_[auth->agent] = conn;
            conn->agent = auth->agent;
            if (started_) {
                auto st = starts_.find(auth->agent);
                if (st != starts_.end()) start = st->second;
            }
            cv_.notify_all();
        }
        if (superseded) ::shutdown(superseded->fd, SHUT_RDWR);
        send_message(conn, Message{AuthResponse{ok}});
        if (start) send_message(conn, Message{*start});
        return;
    }
    if (auto* act = std::get_if<ActionMessage>(&msg)) {
        std::lock_guard lock(mu_);
        if (conn->agent.empty() || act->id != current_id_) return;  // unauthenticated or late
        if (awaiting_.erase(conn->agent)) {
            answers_[conn->agent] = act->action;
            cv_.notify_all();
        }
        return;
    }
    // anything else from a client carries no server-side meaning
}

bool NetworkFrontend::send_message(const std::shared_ptr<Connection>& conn, const Message& msg) {
    if (conn->closed) return false;
    std::string wire = encode(msg);
    std::lock_guard lock(conn->write_mu);
    if (!net::send_all(conn->fd, wire)) {
        conn->closed = true;
        return false;
    }
    return true;
}

int NetworkFrontend::wait_for_logins(std::chrono::milliseconds timeout) {
    std::unique_lock lock(mu_);
    size_t want = roster_.size();
    cv_.wait_for(lock, timeout, [&] { return bound_.size() >= want; });
    return static_cast<int>(bound_.size());
}

void NetworkFrontend::sim_start(const std::map<std::string, SimStart>& starts) {
    std::vector<std::pair<std::shared_ptr<Connection>, SimStart>> outbox;
    {
        std::lock_guard lock(mu_);
        starts_ = starts;
        started_ = true;
        for (const auto& [agent, start] : starts) {
            auto it = bound_.find(agent);
            if (it != bound_.end()) outbox.emplace_back(it->second, start);
        }
    }
    for (auto& [conn, start] : outbox) send_message(conn, Message{start});
}

std::map<std::string, Action> NetworkFrontend::collect(
    long long id, const std::map<std::string, Percept>& percepts,
    std::chrono::milliseconds deadline) {
    std::vector<std::pair<std::shared_ptr<Connection>, RequestAction>> outbox;
    {
        std::lock_guard lock(mu_);
        current_id_ = id;
        answers_.clear();
        awaiting_.clear();
        for (const auto& [agent, percept] : percepts) {
            auto it = bound_.find(agent);
            if (it == bound_.end()) continue;
            RequestAction request{id, percept};
            request.percept.deadline_ms = epoch_ms() + deadline.count();
            awaiting_.insert(agent);
            outbox.emplace_back(it->second, std::move(request));
        }
    }
    for (auto& [conn, request] : outbox) send_message(conn, Message{std::move(request)});

    // the step clock starts once the last percept is out, so the deadline is
    // the same for every agent
    auto cutoff = std::chrono::steady_clock::now() + deadline;
    std::unique_lock lock(mu_);
    cv_.wait_until(lock, cutoff, [&] { return awaiting_.empty(); });
    current_id_ = -1;
    return std::move(answers_);
}

void NetworkFrontend::sim_end(const std::map<std::string, SimEnd>& ends) {
    std::vector<std::pair<std::shared_ptr<Connection>, SimEnd>> outbox;
    {
        std::lock_guard lock(mu_);
        for (const auto& [agent, end] : ends) {
            auto it = bound_.find(agent);
            if (it != bound_.end()) outbox.emplace_back(it->second, end);
        }
    }
    for (auto& [conn, end] : outbox) {
        send_message(conn, Message{end});
        send_message(conn, Message{Bye{}});
    }
}

void NetworkFrontend::shutdown() {
    std::vector<std::shared_ptr<Connection>> connections;
    {
        std::lock_guard lock(mu_);
        if (stopping_) return;
        stopping_ = true;
        connections = connections_;
    }
    if (listen_fd_ >= 0) {
        ::shutdown(listen_fd_, SHUT_RDWR);
        ::close(listen_fd_);
    }
    if (acceptor_.joinable()) acceptor_.join();
    for (auto& conn : connections) {
        conn->closed = true;
        ::shutdown(conn->fd, SHUT_RDWR);
    }
    for (auto& conn : connections) {
        if (conn->reader.joinable()) conn->reader.join();
        ::close(conn->fd);
    }
    listen_fd_ = -1;
}

}  // namespace gridsim

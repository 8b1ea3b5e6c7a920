#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "gridsim/behaviors.hpp"
#include "gridsim/config.hpp"
#include "gridsim/protocol.hpp"
#include "json.hpp"

namespace gridsim {

// Source of agent decisions for the match loop. Keys are agent names; every
// rostered agent appears in `percepts` whether or not anyone answers for it.
class AgentFrontend {
  public:
    virtual ~AgentFrontend() = default;

    virtual void sim_start(const std::map<std::string, SimStart>& starts) = 0;

    // Answers for one step. Agents absent from the returned map act no_op.
    virtual std::map<std::string, Action> collect(long long id,
                                                  const std::map<std::string, Percept>& percepts,
                                                  std::chrono::milliseconds deadline) = 0;

    virtual void sim_end(const std::map<std::string, SimEnd>& ends) = 0;
};

struct MatchReport {
    std::string sim_id;
    std::map<std::string, long long> scores;  // by team
    nlohmann::ordered_json replay;
};

// The step-synchronous match loop: build the world from the config seed,
// then per step send percepts, collect actions, resolve, record.
MatchReport run_match(const SimConfig& cfg, AgentFrontend& frontend, const std::string& sim_id);

// Drives built-in behaviors directly: no sockets, no waiting, and the same
// inputs always produce the same match.
class InProcessFrontend : public AgentFrontend {
  public:
    // team_behaviors maps team name to a behavior name; team members share
    // one blackboard.
    InProcessFrontend(const SimConfig& cfg,
                      const std::map<std::string, std::string>& team_behaviors);

    void sim_start(const std::map<std::string, SimStart>& starts) override;
    std::map<std::string, Action> collect(long long id,
                                          const std::map<std::string, Percept>& percepts,
                                          std::chrono::milliseconds deadline) override;
    void sim_end(const std::map<std::string, SimEnd>& ends) override;

    const std::map<std::string, SimEnd>& results() const { return results_; }

  private:
    uint64_t seed_;
    std::map<std::string, BehaviorFn> behavior_of_team_;
    std::map<std::string, AgentMind> minds_;        // by agent
    std::map<std::string, std::string> team_of_;    // agent -> team
    std::map<std::string, TeamBlackboard> boards_;  // by team
    std::map<std::string, SimEnd> results_;
};

MatchReport run_match_inprocess(const SimConfig& cfg,
                                const std::map<std::string, std::string>& team_behaviors,
                                const std::string& sim_id);

// TCP frontend: accepts connections, authenticates them against the roster,
// and exchanges protocol messages. One reader thread per connection; a fresh
// login for an already-bound agent supersedes the old connection. Agents that
// never connect or answer late simply act no_op; the step never waits past
// the deadline, measured from the moment the last percept was flushed.
class NetworkFrontend : public AgentFrontend {
  public:
    // port 0 picks a free port; see port().
    NetworkFrontend(Roster roster, const std::string& host = "127.0.0.1", uint16_t port = 0);
    ~NetworkFrontend() override;

    uint16_t port() const { return port_; }

    // Blocks until every rostered agent is bound or the timeout passes;
    // returns the number of bound agents. The match can start regardless.
    int wait_for_logins(std::chrono::milliseconds timeout);

    void sim_start(const std::map<std::string, SimStart>& starts) override;
    std::map<std::string, Action> collect(long long id,
                                          const std::map<std::string, Percept>& percepts,
                                          std::chrono::milliseconds deadline) override;
    void sim_end(const std::map<std::string, SimEnd>& ends) override;

    // Sends bye to everyone still connected and tears the sockets down.
    // Safe to call more than once; the destructor calls it.
    void shutdown();

  private:
    struct Connection {
        int fd = -1;
        std::mutex write_mu;
        std::string agent;  // bound agent name, empty before auth
        std::thread reader;
        std::atomic<bool> closed{false};
    };

    void accept_loop();
    void reader_loop(std::shared_ptr<Connection> conn);
    void handle_message(const std::shared_ptr<Connection>& conn, Message&& msg);
    bool send_message(const std::shared_ptr<Connection>& conn, const Message& msg);

    Roster roster_;
    int listen_fd_ = -1;
    uint16_t port_ = 0;
    std::thread acceptor_;

    std::mutex mu_;
    std::condition_variable cv_;
    bool stopping_ = false;
    std::map<std::string, std::shared_ptr<Connection>> bound_;  // agent -> connection
    std::map<std::string, SimStart> starts_;  // replayed to agents that rebind mid-match
    bool started_ = false;
    long long current_id_ = -1;  // -1 outside a collection window
    std::set<std::string> awaiting_;
    std::map<std::string, Action> answers_;
    std::vector<std::shared_ptr<Connection>> connections_;
};

}  // namespace gridsim

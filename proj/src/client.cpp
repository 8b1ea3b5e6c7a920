#include "gridsim/client.hpp"

#include <sys/socket.h>
#include <unistd.h>

#include <cstdlib>

#include "gridsim/behaviors.hpp"
#include "gridsim/protocol.hpp"
#include "socket_io.hpp"

namespace gridsim {

void LocalMap::observe(const Percept& p, int vision) {
    if (p.last_action && p.last_action->action.kind == ActionKind::Move &&
        p.last_action->outcome == Outcome::Success) {
        offset_ = offset_ + offset_of(p.last_action->action.dir);
    }
    for (int dy = -vision; dy <= vision; ++dy) {
        int span = vision - std::abs(dy);
        for (int dx = -span; dx <= span; ++dx) {
            Position rel{dx, dy};
            MapCell cell;
            cell.step = p.step;
            cells_[offset_ + rel] = cell;
        }
    }
    for (const PerceptTerrain& t : p.terrain) {
        cells_[offset_ + t.pos].terrain = t.terrain;
    }
    for (const PerceptThing& t : p.things) {
        MapCell& cell = cells_[offset_ + t.pos];
        cell.has_thing = true;
        cell.thing_kind = t.kind;
        cell.thing_detail = t.detail;
    }
    for (const PerceptDispenser& d : p.dispensers) {
        MapCell& cell = cells_[offset_ + d.pos];
        cell.has_dispenser = true;
        cell.dispenser_type = d.block_type;
    }
}

const MapCell* LocalMap::at(Position p) const {
    auto it = cells_.find(p);
    return it == cells_.end() ? nullptr : &it->second;
}

void LocalMap::put(Position p, const MapCell& cell) { cells_[p] = cell; }

MergeResult merge_maps(const LocalMap& a, const LocalMap& b, Position b_anchor_in_a) {
    MergeResult r;
    r.map = a;
    for (const auto& [pos, cell] : b.cells()) {
        Position target = pos + b_anchor_in_a;
        const MapCell* mine = r.map.at(target);
        if (!mine || cell.step > mine->step) {
            r.map.put(target, cell);
        } else if (cell.step == mine->step && cell.terrain != mine->terrain) {
            r.conflicts.push_back(target);
        }
    }
    return r;
}

SessionLog run_client(const ClientOptions& opts, TeamBlackboard& board) {
    SessionLog log;
    BehaviorFn behavior = behavior_from(opts.behavior);
    if (!behavior) {
        log.notes.push_back("unknown behavior: " + opts.behavior);
        return log;
    }
    AgentMind mind;
    mind.name = opts.agent;

    int attempts = opts.retries + 1;
    bool done = false;
    while (attempts-- > 0 && !done) {
        int fd = net::connect_to(opts.host, opts.port);
        if (fd < 0) {
            log.notes.push_back("connect failed");
            continue;
        }
        if (!net::send_all(fd, encode(AuthRequest{opts.agent, opts.password}))) {
            close(fd);
            continue;
        }
        FrameReader reader;
        char buf[65536];
        bool open = true;
        while (open && !done) {
            ssize_t n = recv(fd, buf, sizeof buf, 0);
            if (n <= 0) break;
            reader.feed(buf, static_cast<size_t>(n));
            while (true) {
                std::optional<std::string> doc;
                try {
                    doc = reader.next();
                } catch (const DecodeError& e) {
                    log.notes.push_back(std::string("framing: ") + e.what());
                    break;
                }
                if (!doc) break;
                Message msg;
                try {
                    msg = decode_document(*doc);
                } catch (const DecodeError& e) {
                    log.notes.push_back(std::string("decode: ") + e.what());
                    continue;
                }
                if (const auto* m = std::get_if<AuthResponse>(&msg)) {
                    log.authenticated = m->ok;
                    if (!m->ok) {
                        log.notes.push_back("auth rejected");
                        open = false;
                        done = true;
                    }
                } else if (const auto* m = std::get_if<SimStart>(&msg)) {
                    init_mind(mind, *m, opts.seed);
                    register_agent(board, mind.name);
                } else if (const auto* m = std::get_if<RequestAction>(&msg)) {
                    ++log.percepts;
                    observe(mind, m->percept, m->id);
                    Action action = behavior(m->percept, mind, board);
                    if (net::send_all(fd, encode(ActionMessage{m->id, action}))) ++log.actions;
                } else if (const auto* m = std::get_if<SimEnd>(&msg)) {
                    log.final_score = m->score;
                    log.ranking = m->ranking;
                    log.completed = true;
                } else if (std::get_if<Bye>(&msg)) {
                    open = false;
                    done = true;
                }
            }
        }
        close(fd);
        if (!done) log.notes.push_back("connection lost");
    }
    return log;
}

}  // namespace gridsim

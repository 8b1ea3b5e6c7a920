#include "gridsim/render.hpp"

#include <cctype>
#include <sstream>

namespace gridsim {

std::string render_world(const WorldState& world) {
    std::string out;
    out.reserve(static_cast<size_t>(world.height()) * (static_cast<size_t>(world.width()) + 1));
    for (int y = 0; y < world.height(); ++y) {
        for (int x = 0; x < world.width(); ++x) {
            Position p{x, y};
            char glyph = '.';
            if (const Thing* t = world.thing_at(p)) {
                if (t->is_agent()) {
                    char team = t->team.empty() ? '?' : t->team[0];
                    bool disabled = t->disabled_until > world.step;
                    glyph = disabled ? static_cast<char>(std::tolower(team))
                                     : static_cast<char>(std::toupper(team));
                } else {
                    glyph = t->block_type.empty() ? 'b' : t->block_type.back();
                }
            } else if (world.dispenser_at(p)) {
                glyph = 'D';
            } else if (world.terrain_at(p) == Terrain::Obstacle) {
                glyph = '#';
            } else if (world.terrain_at(p) == Terrain::Goal) {
                glyph = 'G';
            }
            out.push_back(glyph);
        }
        out.push_back('\n');
    }
    return out;
}

std::string render_status(const WorldState& world) {
    std::ostringstream s;
    s << "step " << world.step;
    for (const auto& [team, score] : world.scores) s << "  " << team << "=" << score;
    s << "  tasks:";
    if (world.tasks.empty()) s << " none";
    for (const Task& t : world.tasks) {
        s << " " << t.name << "(" << t.requirements.size() << "b,+" << t.reward << ",until "
          << t.deadline << ")";
    }
    return s.str();
}

}  // namespace gridsim

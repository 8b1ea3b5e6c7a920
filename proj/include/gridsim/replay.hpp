#pragma once

#include <string>

#include "gridsim/engine.hpp"
#include "gridsim/world.hpp"
#include "json.hpp"

namespace gridsim {

// Records one simulation as a self-contained JSON document: header (config,
// teams), one frame per step with the action results and events, and a hash
// per frame. Full world snapshots land on frame 0 and every snapshot_every
// frames; the frames between carry deltas, so any frame can be rebuilt from
// the nearest snapshot.
class ReplayRecorder {
  public:
    ReplayRecorder(const WorldState& initial, std::string sim_id, int snapshot_every = 50);

    // Call once per engine step with the advanced world.
    void record_step(const WorldState& world, const StepOutput& out);

    // Appends the final hash and returns the finished document.
    nlohmann::ordered_json finish();

  private:
    nlohmann::ordered_json doc_;
    nlohmann::ordered_json prev_;  // serialized world of the previous frame
    int snapshot_every_;
};

// Difference between two serialized worlds: changed things and terrain rows,
// plus the full (small) attachment/task/score/marker/rng state.
nlohmann::ordered_json world_delta(const nlohmann::ordered_json& before,
                                   const nlohmann::ordered_json& after);
void apply_world_delta(nlohmann::ordered_json& world, const nlohmann::ordered_json& delta);

// Serialized world at frame `step`, rebuilt from the nearest snapshot at or
// before it. Throws std::out_of_range for steps beyond the recording.
nlohmann::ordered_json reconstruct_frame(const nlohmann::ordered_json& replay, int step);

struct VerifyResult {
    bool ok = true;
    int first_divergent_step = -1;  // -1 when ok
    std::string detail;
};

// Re-simulates the match from the header config and the recorded actions and
// compares every frame hash plus the final hash.
VerifyResult verify_replay(const nlohmann::ordered_json& replay);

}  // namespace gridsim

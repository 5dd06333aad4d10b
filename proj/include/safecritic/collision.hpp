#pragma once

#include <set>
#include <string>
#include <vector>

#include "safecritic/geom.hpp"
#include "safecritic/scene.hpp"

namespace sc {

// Absolute positions per timestep for one agent.
using Path = std::vector<Vec2>;

struct DynamicEvent {
    std::size_t i, j;  // i < j (unordered pair stored once)
    std::size_t t;
    double dist;
};

struct StaticEvent {
    std::size_t agent;
    std::size_t t;
    int violated_class;
};

struct CollisionReport {
    std::vector<DynamicEvent> dynamic_events;
    std::vector<StaticEvent> static_events;
    double epsilon_m = 0.10;

    std::size_t nc() const { return dynamic_events.size(); }
    void write_csv(std::ostream& os, const std::string& scene_id,
                   const std::vector<std::string>& classes) const;
};

// Pairwise collisions at discrete timesteps: event iff dist < epsilon.
// All paths must share one length.
CollisionReport count_collisions(const std::vector<Path>& paths, double epsilon_m = 0.10);

// Positions falling into blocked map cells.
std::vector<StaticEvent> check_static(const Path& path, const StaticMap& map,
                                      const std::set<int>& blocked, std::size_t agent = 0);

std::set<int> default_blocked_classes(const StaticMap& map);  // building, vegetation

// Per-agent, per-timestep collision count used as the critic's regression
// target: reward[agent][t] = collisions that agent causes at step t+1
// (dynamic partners + 1 per static violation). Not normalized over agents.
// reward[agent] has length steps-1.
using RewardSignal = std::vector<std::vector<double>>;

RewardSignal reward_for(const std::vector<Path>& paths, const StaticMap& map,
                        const std::set<int>& blocked, double epsilon_m = 0.10);

}  // namespace sc

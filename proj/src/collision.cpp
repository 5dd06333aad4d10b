#include "safecritic/collision.hpp"

#include <ostream>

#include "safecritic/errors.hpp"

namespace sc {

void CollisionReport::write_csv(std::ostream& os, const std::string& scene_id,
                                const std::vector<std::string>& classes) const {
    os << "scene_id,kind,i,j,t,distance_or_class\n";
    for (const auto& e : dynamic_events)
        os << scene_id << ",dynamic," << e.i << "," << e.j << "," << e.t << "," << e.dist
           << "\n";
    for (const auto& e : static_events)
        os << scene_id << ",static," << e.agent << ",," << e.t << ","
           << classes[static_cast<std::size_t>(e.violated_class)] << "\n";
}

CollisionReport count_collisions(const std::vector<Path>& paths, double epsilon_m) {
    if (epsilon_m <= 0.0) throw ConfigError("count_collisions: epsilon must be positive");
    CollisionReport rep;
    rep.epsilon_m = epsilon_m;
    if (paths.empty()) return rep;
    const std::size_t steps = paths[0].size();
    for (const auto& p : paths)
        if (p.size() != steps)
            throw DataError("count_collisions: trajectory length mismatch (" +
                            std::to_string(p.size()) + " vs " + std::to_string(steps) + ")");
    for (std::size_t i = 0; i < paths.size(); ++i)
        for (std::size_t j = i + 1; j < paths.size(); ++j)
            for (std::size_t t = 0; t < steps; ++t) {
                const double d = distance(paths[i][t], paths[j][t]);
                if (d < epsilon_m) rep.dynamic_events.push_back({i, j, t, d});
            }
    return rep;
}

std::vector<StaticEvent> check_static(const Path& path, const StaticMap& map,
                                      const std::set<int>& blocked, std::size_t agent) {
    std::vector<StaticEvent> events;
    for (std::size_t t = 0; t < path.size(); ++t) {
        const int cls = map.class_at(path[t]);
        if (blocked.count(cls)) events.push_back({agent, t, cls});
    }
    return events;
}

std::set<int> default_blocked_classes(const StaticMap& map) {
    std::set<int> blocked;
    for (const char* name : {"building", "vegetation"}) {
        const int idx = map.class_index(name);
        if (idx >= 0) blocked.insert(idx);
    }
    return blocked;
}

RewardSignal reward_for(const std::vector<Path>& paths, const StaticMap& map,
                        const std::set<int>& blocked, double epsilon_m) {
    RewardSignal reward(paths.size());
    if (paths.empty()) return reward;
    const std::size_t steps = paths[0].size();
    if (steps == 0) throw DataError("reward_for: empty trajectories");
    for (auto& r : reward) r.assign(steps - 1, 0.0);

    const CollisionReport rep = count_collisions(paths, epsilon_m);
    for (const auto& e : rep.dynamic_events) {
        if (e.t == 0) continue;  // no step predicts the initial positions
        reward[e.i][e.t - 1] += 1.0;
        reward[e.j][e.t - 1] += 1.0;
    }
    for (std::size_t i = 0; i < paths.size(); ++i)
        for (const auto& e : check_static(paths[i], map, blocked, i))
            if (e.t > 0) reward[i][e.t - 1] += 1.0;
    return reward;
}

}  // namespace sc

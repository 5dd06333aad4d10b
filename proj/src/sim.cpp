#include "safecritic/sim.hpp"

#include <algorithm>
#include <cmath>

#include "safecritic/errors.hpp"
#include "safecritic/rng.hpp"

namespace sc {

SimConfig preset_config(const std::string& name) {
    SimConfig c;
    if (name == "crossing") {
        c.layout = SimConfig::Layout::Crossing;
    } else if (name == "crossing-unsafe") {
        c.layout = SimConfig::Layout::Crossing;
        c.agent_strength = 0.0;
    } else if (name == "corridor") {
        c.layout = SimConfig::Layout::Corridor;
    } else {
        throw ConfigError("unknown simulator preset: " + name +
                          " (known: crossing, crossing-unsafe, corridor)");
    }
    return c;
}

namespace {

std::shared_ptr<const StaticMap> build_map(const SimConfig& cfg) {
    const double extent = cfg.arena_half + 2.0;
    const double cell = 0.5;
    const auto n = static_cast<std::size_t>(std::ceil(2.0 * extent / cell));
    StaticMap m = StaticMap::all_free(n, n, cell, Vec2{-extent, -extent});
    if (cfg.layout == SimConfig::Layout::Corridor) {
        const int building = m.class_index("building");
        for (std::size_t r = 0; r < m.height; ++r)
            for (std::size_t c = 0; c < m.width; ++c) {
                const double y = m.origin.y + (static_cast<double>(r) + 0.5) * cell;
                if (std::abs(y) > 2.0) m.grid[r * m.width + c] = building;
            }
    }
    return std::make_shared<const StaticMap>(std::move(m));
}

struct Agent {
    Vec2 pos, vel, goal;
};

Vec2 obstacle_force(const SimConfig& cfg, const StaticMap& map, Vec2 pos) {
    Vec2 f{};
    if (cfg.obstacle_strength <= 0.0) return f;
    const double cutoff = 4.0 * cfg.obstacle_range;
    const double cell = map.cell_size_m;
    const auto lo_c = static_cast<long long>((pos.x - cutoff - map.origin.x) / cell);
    const auto hi_c = static_cast<long long>((pos.x + cutoff - map.origin.x) / cell);
    const auto lo_r = static_cast<long long>((pos.y - cutoff - map.origin.y) / cell);
    const auto hi_r = static_cast<long long>((pos.y + cutoff - map.origin.y) / cell);
    for (long long r = std::max(0LL, lo_r);
         r <= std::min<long long>(static_cast<long long>(map.height) - 1, hi_r); ++r)
        for (long long c = std::max(0LL, lo_c);
             c <= std::min<long long>(static_cast<long long>(map.width) - 1, hi_c); ++c) {
            if (map.grid[static_cast<std::size_t>(r) * map.width +
                         static_cast<std::size_t>(c)] == 0)
                continue;
            const Vec2 center{map.origin.x + (static_cast<double>(c) + 0.5) * cell,
                              map.origin.y + (static_cast<double>(r) + 0.5) * cell};
            const Vec2 away = pos - center;
            const double d = away.norm();
            if (d < 1e-9 || d > cutoff) continue;
            f += away * (cfg.obstacle_strength * std::exp(-d / cfg.obstacle_range) / d);
        }
    return f;
}

Scene simulate_scene(const SimConfig& cfg, const StaticMap& map, Rng& rng,
                     std::size_t scene_idx) {
    const std::size_t n =
        cfg.agents_min + (cfg.agents_max > cfg.agents_min
                              ? rng.index(cfg.agents_max - cfg.agents_min + 1)
                              : 0);
    std::vector<Agent> agents;
    const double h = cfg.arena_half;
    for (std::size_t i = 0; i < n; ++i) {
        Agent a;
        // goals cluster near the arena center so streams genuinely conflict
        a.goal = {rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8)};
        const bool horizontal = (i % 2 == 0) || cfg.layout == SimConfig::Layout::Corridor;
        if (horizontal) {
            const double side = (i % 4 < 2) ? -1.0 : 1.0;
            a.pos = {side * (h + rng.uniform(0.0, 1.0)), rng.uniform(-1.5, 1.5)};
        } else {
            const double side = (i % 4 == 1) ? -1.0 : 1.0;
            a.pos = {rng.uniform(-1.5, 1.5), side * (h + rng.uniform(0.0, 1.0))};
        }
        const Vec2 dir = a.goal - a.pos;
        a.vel = dir * (cfg.desired_speed / std::max(dir.norm(), 1e-9));
        agents.push_back(a);
    }

    std::vector<Path> paths(n);
    for (std::size_t i = 0; i < n; ++i) paths[i].push_back(agents[i].pos);

    for (std::size_t step = 1; step < kWindowFrames; ++step) {
        std::vector<Vec2> acc(n);
        for (std::size_t i = 0; i < n; ++i) {
            const Agent& a = agents[i];
            const Vec2 to_goal = a.goal - a.pos;
            const double dist = to_goal.norm();
            Vec2 desired{};
            if (dist > 1e-9) desired = to_goal * (cfg.desired_speed / dist);
            Vec2 f = (desired - a.vel) * (1.0 / cfg.relaxation_time);
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                const Vec2 away = a.pos - agents[j].pos;
                const double d = away.norm();
                if (d < 1e-9 || cfg.agent_strength <= 0.0) continue;
                f += away * (cfg.agent_strength * std::exp(-d / cfg.agent_range) / d);
            }
            f += obstacle_force(cfg, map, a.pos);
            acc[i] = f;
        }
        for (std::size_t i = 0; i < n; ++i) {
            agents[i].vel += acc[i] * cfg.dt;
            const double speed = agents[i].vel.norm();
            const double cap = 2.0 * cfg.desired_speed;
            if (speed > cap) agents[i].vel = agents[i].vel * (cap / speed);
            agents[i].pos += agents[i].vel * cfg.dt;
            paths[i].push_back(agents[i].pos);
        }
    }

    Scene s;
    s.video_id = "synthetic";
    s.scene_id = "synthetic:" + std::to_string(scene_idx);
    for (std::size_t i = 0; i < n; ++i)
        s.agents.push_back(to_displacements(static_cast<int>(i), paths[i]));
    return s;
}

}  // namespace

SimResult simulate(const SimConfig& cfg) {
    if (cfg.dt <= 0.0) throw ConfigError("simulate: dt must be positive");
    if (cfg.desired_speed <= 0.0) throw ConfigError("simulate: desired speed must be positive");
    if (cfg.agents_min == 0 || cfg.agents_max < cfg.agents_min)
        throw ConfigError("simulate: invalid agent count range");
    SimResult out;
    out.map = build_map(cfg);
    Rng rng(cfg.seed);
    out.scenes.reserve(cfg.num_scenes);
    for (std::size_t k = 0; k < cfg.num_scenes; ++k) {
        Scene s = simulate_scene(cfg, *out.map, rng, k);
        s.map = out.map;
        out.scenes.push_back(std::move(s));
    }
    return out;
}

}  // namespace sc

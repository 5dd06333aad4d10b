#pragma once

#include <cstdint>
#include <vector>

#include "safecritic/data.hpp"

namespace sc {

// Social-force crowd simulator used as the synthetic ground-truth source.
// Explicit Euler; acceleration = goal attraction + exponential agent
// repulsion + exponential obstacle repulsion.
struct SimConfig {
    std::size_t num_scenes = 100;
    std::size_t agents_min = 3;
    std::size_t agents_max = 8;
    double desired_speed = 1.2;     // m/s
    double relaxation_time = 0.5;   // s
    double agent_strength = 5.0;    // repulsion amplitude, m/s^2
    double agent_range = 0.6;       // m
    double obstacle_strength = 6.0; // m/s^2
    double obstacle_range = 0.5;    // m
    double dt = kFrameDt;           // 0.4 s
    std::uint64_t seed = 1;

    // Spawn layout: two pedestrian streams crossing at right angles inside
    // a square arena; "corridor" adds building walls above and below.
    enum class Layout { Crossing, Corridor };
    Layout layout = Layout::Crossing;
    double arena_half = 6.0;  // m
};

// Named presets consumed by the CLI (`simulate --preset`). "crossing" and
// "corridor" differ in layout; "crossing-unsafe" zeroes agent repulsion to
// produce colliding ground truth.
SimConfig preset_config(const std::string& name);

struct SimResult {
    std::vector<Scene> scenes;
    std::shared_ptr<const StaticMap> map;
};

SimResult simulate(const SimConfig& config);

}  // namespace sc

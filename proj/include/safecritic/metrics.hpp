#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "safecritic/collision.hpp"
#include "safecritic/model.hpp"
#include "safecritic/rng.hpp"

namespace sc {

// Minimum average displacement error: min over samples of the mean per-step
// Euclidean distance to the ground truth. All paths must have equal length.
// argmin_out, if non-null, receives the index of the best sample.
double made(const Path& truth, const std::vector<Path>& samples,
            std::size_t* argmin_out = nullptr);

// Minimum final displacement error: min over samples of the final-position
// Euclidean distance.
double mfde(const Path& truth, const std::vector<Path>& samples,
            std::size_t* argmin_out = nullptr);

// Mean pairwise final-position distance among K >= 2 samples of one agent.
double diversity(const std::vector<Path>& samples);

struct SceneEval {
    std::string scene_id;
    std::string video_id;
    std::size_t num_agents = 0;
    double made = 0.0;
    double mfde = 0.0;
    double nc_total = 0.0;      // collision events, mean over K samples
    double nc_per_agent = 0.0;  // nc_total / num_agents
    double nc_per_frame = 0.0;  // nc_total / kTPred
    double diversity = 0.0;
    double gt_nc = 0.0;         // collision events in the ground-truth futures
};

struct EvalResult {
    std::vector<SceneEval> per_scene;
    SceneEval aggregate;  // unweighted mean over scenes; scene_id = "aggregate"
    std::size_t k_eval = 0;
    double epsilon_m = 0.10;

    void write_csv(std::ostream& os) const;
};

// Runs the model K times per scene and aggregates all metrics. NC is counted
// by the collision engine on the sampled paths (positions after the anchor).
EvalResult evaluate(const SafeCriticModel& model, const std::vector<Scene>& scenes,
                    std::size_t k, double epsilon_m, Rng& rng);

}  // namespace sc

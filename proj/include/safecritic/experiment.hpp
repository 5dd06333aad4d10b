#pragma once

#include <string>
#include <vector>

#include "safecritic/config.hpp"
#include "safecritic/metrics.hpp"
#include "safecritic/model.hpp"
#include "safecritic/sim.hpp"
#include "safecritic/trainer.hpp"

namespace sc {

// Everything a `train` or `ablate` run needs, parsed from a flat config
// file. Data comes either from a TrajNet file (`data = path`) or, when that
// key is absent, from the built-in simulator preset.
struct ExperimentConfig {
    ModelConfig model;
    TrainConfig train;

    std::string data;                    // TrajNet input; empty -> simulate
    std::string preset = "crossing";
    std::size_t sim_scenes = 100;
    std::uint64_t sim_seed = 7;

    std::string out_dir = "out";
    std::size_t k_eval = 20;
    std::uint64_t eval_seed = 1234;
    std::string held_out_video;          // empty -> evaluate on training scenes
    std::size_t svg_scenes = 3;          // overlays/heat maps rendered

    static ExperimentConfig from_file(const std::string& path);
    static ExperimentConfig from_config(const Config& cfg);
};

// Train + evaluate + write artifacts into out_dir:
//   loss_log.csv, results.csv, model.ckpt, scene_<i>.svg,
//   attention_<i>_{dyn,stat}.svg.
EvalResult run_experiment(const ExperimentConfig& cfg);

// Evaluate a saved checkpoint without training; writes results.csv next to
// nothing (pure return) unless out_csv is non-empty.
EvalResult eval_checkpoint(const ExperimentConfig& cfg, const std::string& checkpoint,
                           const std::vector<Scene>& scenes,
                           const std::string& out_csv = "");

// Loads the configured dataset (TrajNet file or simulator preset).
std::vector<Scene> load_experiment_scenes(const ExperimentConfig& cfg);

}  // namespace sc

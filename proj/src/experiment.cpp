#include "safecritic/experiment.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <string>

#include "safecritic/checkpoint.hpp"
#include "safecritic/data.hpp"
#include "safecritic/errors.hpp"
#include "safecritic/svg.hpp"

namespace sc {

namespace {

const std::set<std::string> kKnownKeys = {
    // model
    "hidden", "noise_dim", "score_hidden", "use_asr", "rebuild_dynamic_per_step",
    "init_seed",
    // training
    "lr_generator", "lr_discriminator", "lr_critic", "k_train", "lambda_ae",
    "lambda_critic", "critic_positive_weight", "batch_size", "epochs", "seed", "clip_norm", "epsilon",
    "replay_ring",
    // data
    "data", "preset", "sim_scenes", "sim_seed", "held_out_video",
    // output / evaluation
    "out_dir", "k_eval", "eval_seed", "svg_scenes",
};

}  // namespace

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    return from_config(Config::load(path));
}

ExperimentConfig ExperimentConfig::from_config(const Config& cfg) {
    cfg.check_known(kKnownKeys);
    ExperimentConfig e;
    e.model.hidden = cfg.get_uint("hidden", e.model.hidden);
    e.model.noise_dim = cfg.get_uint("noise_dim", e.model.noise_dim);
    e.model.score_hidden = cfg.get_uint("score_hidden", e.model.score_hidden);
    e.model.use_asr = cfg.get_bool("use_asr", e.model.use_asr);
    e.model.rebuild_dynamic_per_step =
        cfg.get_bool("rebuild_dynamic_per_step", e.model.rebuild_dynamic_per_step);
    e.model.init_seed = cfg.get_uint("init_seed", e.model.init_seed);

    e.train.lr_generator = cfg.get_double("lr_generator", e.train.lr_generator);
    e.train.lr_discriminator =
        cfg.get_double("lr_discriminator", e.train.lr_discriminator);
    e.train.lr_critic = cfg.get_double("lr_critic", e.train.lr_critic);
    e.train.k_train = cfg.get_uint("k_train", e.train.k_train);
    e.train.lambda_ae = cfg.get_double("lambda_ae", e.train.lambda_ae);
    e.train.lambda_critic = cfg.get_double("lambda_critic", e.train.lambda_critic);
    e.train.critic_positive_weight =
        cfg.get_double("critic_positive_weight", e.train.critic_positive_weight);
    e.train.batch_size = cfg.get_uint("batch_size", e.train.batch_size);
    e.train.epochs = cfg.get_uint("epochs", e.train.epochs);
    e.train.seed = cfg.get_uint("seed", e.train.seed);
    e.train.clip_norm = cfg.get_double("clip_norm", e.train.clip_norm);
    e.train.epsilon_m = cfg.get_double("epsilon", e.train.epsilon_m);
    e.train.replay_ring = cfg.get_uint("replay_ring", e.train.replay_ring);
    e.train.validate();

    e.data = cfg.get_string("data", e.data);
    e.preset = cfg.get_string("preset", e.preset);
    e.sim_scenes = cfg.get_uint("sim_scenes", e.sim_scenes);
    e.sim_seed = cfg.get_uint("sim_seed", e.sim_seed);
    e.held_out_video = cfg.get_string("held_out_video", e.held_out_video);
    e.out_dir = cfg.get_string("out_dir", e.out_dir);
    e.k_eval = cfg.get_uint("k_eval", e.k_eval);
    e.eval_seed = cfg.get_uint("eval_seed", e.eval_seed);
    e.svg_scenes = cfg.get_uint("svg_scenes", e.svg_scenes);
    if (e.k_eval == 0) throw ConfigError("k_eval must be >= 1");
    return e;
}

std::vector<Scene> load_experiment_scenes(const ExperimentConfig& cfg) {
    if (!cfg.data.empty()) return load_trajnet(cfg.data);
    SimConfig sim = preset_config(cfg.preset);
    sim.num_scenes = cfg.sim_scenes;
    sim.seed = cfg.sim_seed;
    return simulate(sim).scenes;
}

EvalResult run_experiment(const ExperimentConfig& cfg) {
    const std::vector<Scene> all = load_experiment_scenes(cfg);
    std::vector<Scene> train_set = all, eval_set = all;
    if (!cfg.held_out_video.empty()) {
        auto split = leave_one_out(all, cfg.held_out_video);
        train_set = std::move(split.first);
        eval_set = std::move(split.second);
    }
    if (train_set.empty()) throw DataError("run_experiment: empty training set");
    if (eval_set.empty()) throw DataError("run_experiment: empty evaluation set");

    std::filesystem::create_directories(cfg.out_dir);

    SafeCriticModel model(cfg.model);
    Trainer trainer(model, cfg.train);
    {
        std::ofstream log(cfg.out_dir + "/loss_log.csv");
        if (!log) throw DataError("cannot write " + cfg.out_dir + "/loss_log.csv");
        trainer.train(train_set, &log);
    }
    save_checkpoint(cfg.out_dir + "/model.ckpt", model.all_params());

    Rng eval_rng(cfg.eval_seed);
    EvalResult result = evaluate(model, eval_set, cfg.k_eval, cfg.train.epsilon_m, eval_rng);
    {
        std::ofstream csv(cfg.out_dir + "/results.csv");
        if (!csv) throw DataError("cannot write " + cfg.out_dir + "/results.csv");
        result.write_csv(csv);
    }

    Rng plot_rng(cfg.eval_seed + 1);
    const std::size_t n_svg = std::min(cfg.svg_scenes, eval_set.size());
    for (std::size_t i = 0; i < n_svg; ++i) {
        const Scene& scene = eval_set[i];
        const PredictionSet set =
            model.sample_set(scene, std::min<std::size_t>(cfg.k_eval, 8), plot_rng, false);
        write_text_file(cfg.out_dir + "/scene_" + std::to_string(i) + ".svg",
                        svg_scene_overlay(scene, set));
        const auto att = model.attention_snapshot(scene, 0, plot_rng);
        const auto& g = cfg.model.grid;
        write_text_file(cfg.out_dir + "/attention_" + std::to_string(i) + "_dyn.svg",
                        svg_attention_heatmap(att.dyn_weights, g.rows, g.cols,
                                              "F_d attention, scene " + scene.scene_id));
        write_text_file(cfg.out_dir + "/attention_" + std::to_string(i) + "_stat.svg",
                        svg_attention_heatmap(att.stat_weights, g.rows, g.cols,
                                              "F_s attention, scene " + scene.scene_id));
    }
    return result;
}

EvalResult eval_checkpoint(const ExperimentConfig& cfg, const std::string& checkpoint,
                           const std::vector<Scene>& scenes, const std::string& out_csv) {
    SafeCriticModel model(cfg.model);
    load_checkpoint(checkpoint, model.all_params());
    Rng eval_rng(cfg.eval_seed);
    EvalResult result = evaluate(model, scenes, cfg.k_eval, cfg.train.epsilon_m, eval_rng);
    if (!out_csv.empty()) {
        std::ofstream csv(out_csv);
        if (!csv) throw DataError("cannot write " + out_csv);
        result.write_csv(csv);
    }
    return result;
}

}  // namespace sc

#pragma once

#include <cstdint>
#include <vector>

#include "safecritic/data.hpp"
#include "safecritic/nn.hpp"
#include "safecritic/params.hpp"
#include "safecritic/rng.hpp"
#include "safecritic/scene.hpp"

namespace sc {

struct ModelConfig {
    std::size_t hidden = 32;        // LSTM hidden size and embedding size
    std::size_t noise_dim = 8;
    std::size_t score_hidden = 16;  // attention scoring MLP hidden width
    std::size_t num_classes = 5;
    EgoGridSpec grid;
    bool use_asr = true;  // false: contexts replaced by zero vectors
    // F_d rebuilt from predicted positions each decode step (default), or
    // frozen at the last observed step.
    bool rebuild_dynamic_per_step = true;
    std::uint64_t init_seed = 42;
};

// One sampled joint future for every agent in a scene, with the recorded
// graph handles needed by the losses.
struct Rollout {
    std::vector<std::vector<Var>> deltas;   // [agent][t], rank-1 (2)
    std::vector<Path> paths;                // [agent], kTPred+1 absolute positions
    std::vector<std::vector<Var>> hiddens;  // decoder hidden [agent][t]
};

// Numeric K-sample prediction set for evaluation.
struct PredictionSample {
    std::vector<Path> paths;                         // [agent]
    std::vector<std::vector<double>> critic_scores;  // [agent][t]
    std::vector<double> disc_scores;                 // [agent]
};
struct PredictionSet {
    std::vector<PredictionSample> samples;  // K entries
};

class SafeCriticModel {
public:
    explicit SafeCriticModel(const ModelConfig& cfg);
    SafeCriticModel(const SafeCriticModel&) = delete;
    SafeCriticModel& operator=(const SafeCriticModel&) = delete;

    const ModelConfig& config() const { return cfg_; }
    ParamStore& generator_params() { return gen_store_; }
    ParamStore& discriminator_params() { return disc_store_; }
    ParamStore& critic_params() { return critic_store_; }
    ParamStore& all_params() { return all_store_; }

    // Final encoder hidden state per agent after embedding and unrolling
    // the observed displacements.
    std::vector<Var> encode(Tape& tape, ParamBinder& bind, const Scene& scene,
                            bool training) const;

    // Joint autoregressive rollout for all agents; noise is one vector per
    // agent, fed at every step.
    Rollout decode(Tape& tape, ParamBinder& bind, const Scene& scene,
                   const std::vector<Var>& u, const std::vector<Tensor>& noise,
                   bool training) const;

    // Probability that (past, future) is a real trajectory. fake_deltas ==
    // nullptr uses the ground-truth future.
    Var discriminate(Tape& tape, ParamBinder& bind, const Scene& scene, std::size_t agent,
                     const std::vector<Var>* fake_deltas, bool training) const;

    // Per-agent, per-step nonnegative collision scores v_t for a rollout.
    // Inputs may be live rollout Vars (gradient reaches the generator) or
    // constants rebuilt from stored values.
    std::vector<std::vector<Var>> criticise(Tape& tape, ParamBinder& bind, const Scene& scene,
                                            const std::vector<std::vector<Var>>& deltas,
                                            const std::vector<Path>& paths,
                                            const std::vector<std::vector<Var>>& hiddens) const;

    // Evaluation helper: K independent samples on throwaway tapes.
    PredictionSet sample_set(const Scene& scene, std::size_t k, Rng& rng,
                             bool with_scores) const;

    // Convenience for tests/plots: attention maps of one agent at the first
    // decode step.
    struct AttentionSnapshot {
        Tensor dyn_weights, stat_weights;
    };
    AttentionSnapshot attention_snapshot(const Scene& scene, std::size_t agent,
                                         Rng& rng) const;

    // Observed-model inputs: kTObs displacement vectors, the first (0,0).
    static std::vector<Tensor> observed_inputs(const Scene& scene, std::size_t agent);
    // Ground-truth future: kTPred displacement tensors.
    static std::vector<Tensor> future_deltas(const Scene& scene, std::size_t agent);
    // Prediction anchor: last observed position.
    static Vec2 anchor(const Scene& scene, std::size_t agent);

private:
    struct StepContext {
        Var ctx_d, ctx_s;
    };
    StepContext generator_context(Tape& tape, ParamBinder& bind, const Scene& scene,
                                  std::size_t agent, const std::vector<Vec2>& positions,
                                  const std::vector<Var>& neighbor_hidden,
                                  Var agent_hidden) const;
    const StaticMap& map_of(const Scene& scene) const;
    static void check_scene(const Scene& scene);

    ModelConfig cfg_;
    StaticMap fallback_map_;

    // generator (theta, omega)
    Mlp gen_emb_;        // W_emb: 2 -> hidden
    BatchNorm gen_bn_;   // over embedded observed steps
    LstmCell gen_enc_;
    LstmCell gen_dec_;
    Mlp gen_out_;        // W_T: hidden -> 2
    AttentionHead gen_att_d_, gen_att_s_;
    // discriminator (phi)
    Mlp disc_emb_;
    LstmCell disc_lstm_;
    Mlp disc_head_;
    // critic (psi)
    LstmCell critic_lstm_;
    Mlp critic_head_;
    AttentionHead critic_att_d_, critic_att_s_;

    ParamStore gen_store_, disc_store_, critic_store_, all_store_;
};

}  // namespace sc

#pragma once

#include <cstdint>
#include <deque>
#include <iosfwd>
#include <string>
#include <vector>

#include "safecritic/losses.hpp"
#include "safecritic/model.hpp"
#include "safecritic/optim.hpp"
#include "safecritic/rng.hpp"

namespace sc {

struct TrainConfig {
    double lr_generator = 1e-3;
    double lr_discriminator = 1e-4;
    double lr_critic = 1e-4;
    std::size_t k_train = 5;
    double lambda_ae = 1.0;
    double lambda_critic = 1.0;
    std::size_t batch_size = 8;
    std::size_t epochs = 10;
    std::uint64_t seed = 1;
    double clip_norm = 10.0;
    double epsilon_m = 0.10;
    // weight on collision steps in the critic regression; they are rare,
    // and unweighted MSE collapses to the all-zero predictor
    double critic_positive_weight = 30.0;
    // ring buffer of past generated batches replayed into the critic
    // regression; 0 keeps the critic purely on-policy
    std::size_t replay_ring = 0;

    void validate() const;
};

struct LossBreakdown {
    double adversarial_g = 0.0;
    double adversarial_d = 0.0;
    double auto_encoding = 0.0;
    double critic_regression = 0.0;
    double critic_regularizer = 0.0;
};

class Trainer {
public:
    Trainer(SafeCriticModel& model, const TrainConfig& cfg);

    // One optimization step on a batch of scenes:
    //   1. sample K futures per scene
    //   2. discriminator update (real vs generated)
    //   3. critic regression update against observed next-step collisions
    //   4. generator update: adversarial + lambda_ae * auto-encoding
    //      + lambda_c * critic regularizer
    LossBreakdown train_step(const std::vector<const Scene*>& batch);

    // Full loop: shuffled batches, CSV log lines
    // (epoch,step,adv_g,adv_d,ae,critic_reg,critic_regul,nc_train).
    void train(const std::vector<Scene>& scenes, std::ostream* log);

    Rng& rng() { return rng_; }
    double last_train_nc() const { return last_nc_; }

private:
    // numeric snapshot of one sampled rollout
    struct StoredRollout {
        std::vector<std::vector<Tensor>> deltas;   // [agent][t]
        std::vector<std::vector<Tensor>> hiddens;  // [agent][t]
        std::vector<Path> paths;
    };
    struct ReplayEntry {
        Scene scene;
        StoredRollout rollout;
    };

    std::vector<StoredRollout> sample_scene(const Scene& scene,
                                            const std::vector<std::vector<Tensor>>& noise);
    void critic_regression_terms(Tape& tape, ParamBinder& bind, const Scene& scene,
                                 const StoredRollout& r, std::vector<Var>& flat_v,
                                 std::vector<double>& flat_target);

    SafeCriticModel& model_;
    TrainConfig cfg_;
    Adam gen_adam_, disc_adam_, critic_adam_;
    Rng rng_;
    std::deque<ReplayEntry> replay_;
    double last_nc_ = 0.0;
};

}  // namespace sc

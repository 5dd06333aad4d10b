#include "safecritic/trainer.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "safecritic/errors.hpp"

namespace sc {

void TrainConfig::validate() const {
    if (lr_generator <= 0.0 || lr_discriminator <= 0.0 || lr_critic <= 0.0)
        throw ConfigError("TrainConfig: learning rates must be positive");
    if (lambda_ae < 0.0 || lambda_critic < 0.0)
        throw ConfigError("TrainConfig: lambdas must be nonnegative");
    if (k_train == 0) throw ConfigError("TrainConfig: k_train must be >= 1");
    if (batch_size == 0) throw ConfigError("TrainConfig: batch_size must be >= 1");
    if (epsilon_m <= 0.0) throw ConfigError("TrainConfig: epsilon_m must be positive");
    if (critic_positive_weight <= 0.0)
        throw ConfigError("TrainConfig: critic_positive_weight must be positive");
}

Trainer::Trainer(SafeCriticModel& model, const TrainConfig& cfg)
    : model_(model),
      cfg_(cfg),
      gen_adam_(cfg.lr_generator),
      disc_adam_(cfg.lr_discriminator),
      critic_adam_(cfg.lr_critic),
      rng_(cfg.seed) {
    cfg_.validate();
}

std::vector<Trainer::StoredRollout> Trainer::sample_scene(
    const Scene& scene, const std::vector<std::vector<Tensor>>& noise) {
    Tape tape;
    ParamBinder bind(tape);
    const std::vector<Var> u = model_.encode(tape, bind, scene, /*training=*/true);
    std::vector<StoredRollout> out;
    out.reserve(noise.size());
    for (const auto& z : noise) {
        Rollout r = model_.decode(tape, bind, scene, u, z, /*training=*/true);
        StoredRollout s;
        s.paths = r.paths;
        s.deltas.resize(r.deltas.size());
        s.hiddens.resize(r.hiddens.size());
        for (std::size_t i = 0; i < r.deltas.size(); ++i) {
            for (Var d : r.deltas[i]) s.deltas[i].push_back(tape.val(d));
            for (Var h : r.hiddens[i]) s.hiddens[i].push_back(tape.val(h));
        }
        out.push_back(std::move(s));
    }
    return out;
}

void Trainer::critic_regression_terms(Tape& tape, ParamBinder& bind, const Scene& scene,
                                      const StoredRollout& r, std::vector<Var>& flat_v,
                                      std::vector<double>& flat_target) {
    static const StaticMap free_map = StaticMap::all_free(1, 1, 1.0);
    const StaticMap& map = scene.map ? *scene.map : free_map;
    const RewardSignal reward =
        reward_for(r.paths, map, default_blocked_classes(map), cfg_.epsilon_m);

    std::vector<std::vector<Var>> deltas(r.deltas.size()), hiddens(r.hiddens.size());
    for (std::size_t i = 0; i < r.deltas.size(); ++i) {
        for (const Tensor& d : r.deltas[i]) deltas[i].push_back(tape.constant(d));
        for (const Tensor& h : r.hiddens[i]) hiddens[i].push_back(tape.constant(h));
    }
    const auto v = model_.criticise(tape, bind, scene, deltas, r.paths, hiddens);
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t t = 0; t < v[i].size(); ++t) {
            flat_v.push_back(v[i][t]);
            flat_target.push_back(reward[i][t]);
        }
}

LossBreakdown Trainer::train_step(const std::vector<const Scene*>& batch) {
    if (batch.empty()) throw DataError("train_step: empty batch");
    LossBreakdown out;

    // ---- phase 1: sample K futures per scene ----
    std::vector<std::vector<std::vector<Tensor>>> noise(batch.size());
    for (std::size_t s = 0; s < batch.size(); ++s) {
        noise[s].resize(cfg_.k_train);
        for (std::size_t k = 0; k < cfg_.k_train; ++k)
            for (std::size_t i = 0; i < batch[s]->agents.size(); ++i)
                noise[s][k].push_back(rng_.normal_vec(model_.config().noise_dim));
    }
    std::vector<std::vector<StoredRollout>> stored(batch.size());
    double nc_acc = 0.0;
    for (std::size_t s = 0; s < batch.size(); ++s) {
        stored[s] = sample_scene(*batch[s], noise[s]);
        for (const auto& r : stored[s])
            nc_acc += static_cast<double>(count_collisions(r.paths, cfg_.epsilon_m).nc());
    }
    last_nc_ = nc_acc / static_cast<double>(batch.size() * cfg_.k_train);

    const double gen_sum_before = model_.generator_params().checksum();
    const double critic_sum_before = model_.critic_params().checksum();

    // ---- phase 2: discriminator update on real vs generated ----
    {
        Tape tape;
        ParamBinder bind(tape);
        std::vector<Var> d_real, d_fake;
        for (std::size_t s = 0; s < batch.size(); ++s) {
            const Scene& scene = *batch[s];
            for (std::size_t i = 0; i < scene.agents.size(); ++i)
                d_real.push_back(
                    model_.discriminate(tape, bind, scene, i, nullptr, true));
            for (const auto& r : stored[s])
                for (std::size_t i = 0; i < scene.agents.size(); ++i) {
                    std::vector<Var> fake;
                    for (const Tensor& d : r.deltas[i]) fake.push_back(tape.constant(d));
                    d_fake.push_back(model_.discriminate(tape, bind, scene, i, &fake, true));
                }
        }
        AdversarialLoss adv = loss_adversarial(tape, d_real, d_fake);
        out.adversarial_d = tape.val(adv.d_loss).data[0];
        tape.backward(adv.d_loss);
        GradMap grads = bind.collect(model_.discriminator_params());
        clip_global_norm(grads, cfg_.clip_norm);
        disc_adam_.step(model_.discriminator_params(), grads);
    }
    if (model_.generator_params().checksum() != gen_sum_before ||
        model_.critic_params().checksum() != critic_sum_before)
        throw NumericError("train_step: discriminator update touched foreign parameters");

    const double disc_sum_after_d = model_.discriminator_params().checksum();

    // ---- phase 3: critic regression against observed collisions ----
    {
        Tape tape;
        ParamBinder bind(tape);
        std::vector<Var> flat_v;
        std::vector<double> flat_target;
        for (std::size_t s = 0; s < batch.size(); ++s)
            for (const auto& r : stored[s])
                critic_regression_terms(tape, bind, *batch[s], r, flat_v, flat_target);
        for (const auto& entry : replay_)
            critic_regression_terms(tape, bind, entry.scene, entry.rollout, flat_v,
                                    flat_target);
        Var pred = tape.concat(flat_v);
        // Collision steps are rare; upweighting them keeps the regression
        // from collapsing to the all-zero predictor. The sqrt of the weight
        // is folded into both prediction and target so the loss stays a
        // plain squared error on the tape.
        const double rw = std::sqrt(cfg_.critic_positive_weight);
        std::vector<double> wts(flat_target.size()), wtarget(flat_target.size());
        for (std::size_t j = 0; j < flat_target.size(); ++j) {
            wts[j] = flat_target[j] > 0.0 ? rw : 1.0;
            wtarget[j] = flat_target[j] * wts[j];
        }
        Var wpred = tape.mul(pred, tape.constant(Tensor::from({wts.size()}, wts)));
        Var err = tape.squared_error(
            wpred, tape.constant(Tensor::from({wtarget.size()}, wtarget)));
        Var loss = tape.scale(err, 1.0 / static_cast<double>(flat_target.size()));
        out.critic_regression = tape.val(loss).data[0];
        tape.backward(loss);
        GradMap grads = bind.collect(model_.critic_params());
        clip_global_norm(grads, cfg_.clip_norm);
        critic_adam_.step(model_.critic_params(), grads);
    }
    if (model_.generator_params().checksum() != gen_sum_before ||
        model_.discriminator_params().checksum() != disc_sum_after_d)
        throw NumericError("train_step: critic update touched foreign parameters");

    const double critic_sum_after_c = model_.critic_params().checksum();

    // ---- phase 4: generator update ----
    {
        Tape tape;
        ParamBinder bind(tape);
        std::vector<Var> d_fake;
        Var ae_total;
        std::vector<std::vector<std::vector<Var>>> v_all;
        for (std::size_t s = 0; s < batch.size(); ++s) {
            const Scene& scene = *batch[s];
            const std::vector<Var> u = model_.encode(tape, bind, scene, true);
            std::vector<Rollout> rollouts;
            rollouts.reserve(cfg_.k_train);
            for (std::size_t k = 0; k < cfg_.k_train; ++k)
                rollouts.push_back(model_.decode(tape, bind, scene, u, noise[s][k], true));
            for (const auto& r : rollouts)
                for (std::size_t i = 0; i < scene.agents.size(); ++i)
                    d_fake.push_back(
                        model_.discriminate(tape, bind, scene, i, &r.deltas[i], true));
            Var ae = loss_autoencode(tape, scene, rollouts);
            ae_total = ae_total.valid() ? tape.add(ae_total, ae) : ae;
            if (cfg_.lambda_critic > 0.0)
                for (const auto& r : rollouts)
                    v_all.push_back(
                        model_.criticise(tape, bind, scene, r.deltas, r.paths, r.hiddens));
        }
        Var g_loss = tape.bce(tape.concat(d_fake), Tensor::full({d_fake.size()}, 1.0));
        out.adversarial_g = tape.val(g_loss).data[0];
        Var ae_mean = tape.scale(ae_total, 1.0 / static_cast<double>(batch.size()));
        out.auto_encoding = tape.val(ae_mean).data[0];
        Var total = g_loss;
        if (cfg_.lambda_ae > 0.0)
            total = tape.add(total, tape.scale(ae_mean, cfg_.lambda_ae));
        if (cfg_.lambda_critic > 0.0) {
            Var reg = loss_critic_regularizer(tape, v_all);
            out.critic_regularizer = tape.val(reg).data[0];
            total = tape.add(total, tape.scale(reg, cfg_.lambda_critic));
        }
        tape.backward(total);
        GradMap grads = bind.collect(model_.generator_params());
        clip_global_norm(grads, cfg_.clip_norm);
        gen_adam_.step(model_.generator_params(), grads);
    }
    if (model_.discriminator_params().checksum() != disc_sum_after_d ||
        model_.critic_params().checksum() != critic_sum_after_c)
        throw NumericError("train_step: generator update touched foreign parameters");

    // replay ring for the critic
    if (cfg_.replay_ring > 0) {
        for (std::size_t s = 0; s < batch.size(); ++s) {
            replay_.push_back(ReplayEntry{*batch[s], stored[s].front()});
            while (replay_.size() > cfg_.replay_ring) replay_.pop_front();
        }
    }

    for (double v : {out.adversarial_g, out.adversarial_d, out.auto_encoding,
                     out.critic_regression, out.critic_regularizer})
        if (!std::isfinite(v)) {
            std::ostringstream os;
            os << "train_step: non-finite loss (adv_g=" << out.adversarial_g
               << " adv_d=" << out.adversarial_d << " ae=" << out.auto_encoding
               << " critic_reg=" << out.critic_regression
               << " critic_regul=" << out.critic_regularizer << ")";
            throw NumericError(os.str());
        }
    return out;
}

void Trainer::train(const std::vector<Scene>& scenes, std::ostream* log) {
    if (scenes.empty()) throw DataError("train: no scenes");
    if (log) *log << "epoch,step,adv_g,adv_d,ae,critic_reg,critic_regul,nc_train\n";
    std::vector<std::size_t> order(scenes.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    for (std::size_t epoch = 0; epoch < cfg_.epochs; ++epoch) {
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[rng_.index(i)]);
        std::size_t step = 0;
        for (std::size_t b = 0; b < order.size(); b += cfg_.batch_size) {
            std::vector<const Scene*> batch;
            for (std::size_t j = b; j < std::min(b + cfg_.batch_size, order.size()); ++j)
                batch.push_back(&scenes[order[j]]);
            const LossBreakdown l = train_step(batch);
            if (log)
                *log << epoch << "," << step << "," << l.adversarial_g << ","
                     << l.adversarial_d << "," << l.auto_encoding << ","
                     << l.critic_regression << "," << l.critic_regularizer << ","
                     << last_nc_ << "\n";
            ++step;
        }
    }
}

}  // namespace sc

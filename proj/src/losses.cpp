#include "safecritic/losses.hpp"

#include <limits>

#include "safecritic/errors.hpp"

namespace sc {

Var loss_autoencode(Tape& tape, const Scene& scene, const std::vector<Rollout>& samples) {
    if (samples.empty()) throw ShapeError("loss_autoencode: empty sample set");
    const std::size_t n = scene.agents.size();
    Var total;
    for (std::size_t i = 0; i < n; ++i) {
        const auto gt = SafeCriticModel::future_deltas(scene, i);
        Tensor target({kTPred * 2});
        for (std::size_t t = 0; t < kTPred; ++t) {
            target.data[2 * t] = gt[t].data[0];
            target.data[2 * t + 1] = gt[t].data[1];
        }
        // pick the argmin sample numerically, then record only its error
        std::size_t best = 0;
        double best_err = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < samples.size(); ++k) {
            double err = 0.0;
            for (std::size_t t = 0; t < kTPred; ++t) {
                const Tensor& d = tape.val(samples[k].deltas[i][t]);
                const double ex = d.data[0] - target.data[2 * t];
                const double ey = d.data[1] - target.data[2 * t + 1];
                err += ex * ex + ey * ey;
            }
            if (err < best_err) {
                best_err = err;
                best = k;
            }
        }
        std::vector<Var> parts;
        parts.reserve(kTPred);
        for (std::size_t t = 0; t < kTPred; ++t) parts.push_back(samples[best].deltas[i][t]);
        Var err = tape.squared_error(tape.concat(parts), tape.constant(target));
        total = total.valid() ? tape.add(total, err) : err;
    }
    return total;
}

AdversarialLoss loss_adversarial(Tape& tape, const std::vector<Var>& d_real,
                                 const std::vector<Var>& d_fake) {
    if (d_real.empty() || d_fake.empty())
        throw ShapeError("loss_adversarial: need at least one real and one fake probability");
    Var reals = tape.concat(d_real);
    Var fakes = tape.concat(d_fake);
    const Tensor ones_r = Tensor::full({d_real.size()}, 1.0);
    const Tensor zeros_f = Tensor({d_fake.size()});
    const Tensor ones_f = Tensor::full({d_fake.size()}, 1.0);
    AdversarialLoss out;
    out.d_loss = tape.add(tape.bce(reals, ones_r), tape.bce(fakes, zeros_f));
    out.g_loss = tape.bce(fakes, ones_f);
    return out;
}

Var loss_critic_regression(Tape& tape, const std::vector<std::vector<Var>>& v,
                           const RewardSignal& reward) {
    if (v.size() != reward.size())
        throw ShapeError("loss_critic_regression: score/reward agent count mismatch");
    std::vector<Var> flat;
    std::vector<double> target;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i].size() != reward[i].size())
            throw ShapeError("loss_critic_regression: score/reward step count mismatch for "
                             "agent " +
                             std::to_string(i));
        for (std::size_t t = 0; t < v[i].size(); ++t) {
            flat.push_back(v[i][t]);
            target.push_back(reward[i][t]);
        }
    }
    if (flat.empty()) throw ShapeError("loss_critic_regression: no scores");
    Var pred = tape.concat(flat);
    Var err = tape.squared_error(pred, tape.constant(Tensor::from({target.size()}, target)));
    return tape.scale(err, 1.0 / static_cast<double>(target.size()));
}

Var loss_critic_regularizer(Tape& tape,
                            const std::vector<std::vector<std::vector<Var>>>& v_per_sample) {
    std::vector<Var> flat;
    for (const auto& sample : v_per_sample)
        for (const auto& agent : sample)
            for (Var v : agent) flat.push_back(v);
    if (flat.empty()) throw ShapeError("loss_critic_regularizer: no scores");
    return tape.mean(tape.concat(flat));
}

}  // namespace sc

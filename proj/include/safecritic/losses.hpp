#pragma once

#include <utility>
#include <vector>

#include "safecritic/collision.hpp"
#include "safecritic/model.hpp"
#include "safecritic/tape.hpp"

namespace sc {

// Best-of-K auto-encoding loss: sum over agents of the squared L2 error to
// the ground-truth future displacements for the closest sample. Gradient
// flows only through each agent's argmin sample.
Var loss_autoencode(Tape& tape, const Scene& scene, const std::vector<Rollout>& samples);

// Non-saturating GAN losses from discriminator probabilities.
// d_loss = -E[log d_real] - E[log(1 - d_fake)], g_loss = -E[log d_fake].
struct AdversarialLoss {
    Var g_loss, d_loss;
};
AdversarialLoss loss_adversarial(Tape& tape, const std::vector<Var>& d_real,
                                 const std::vector<Var>& d_fake);

// Mean squared error between critic scores and observed next-step
// collision counts. v[agent] has kTPred entries, reward[agent] likewise.
Var loss_critic_regression(Tape& tape, const std::vector<std::vector<Var>>& v,
                           const RewardSignal& reward);

// Mean critic score over all samples, agents and steps. The critic's own
// parameters must be excluded from the subsequent update; gradient reaches
// the generator through the critic's inputs.
Var loss_critic_regularizer(Tape& tape,
                            const std::vector<std::vector<std::vector<Var>>>& v_per_sample);

}  // namespace sc

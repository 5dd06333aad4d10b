#pragma once

#include <unordered_map>

#include "safecritic/params.hpp"

namespace sc {

// Per-parameter Adam moment buffers.
struct AdamState {
    long long step_count = 0;
    std::unordered_map<std::string, Tensor> first_moment;
    std::unordered_map<std::string, Tensor> second_moment;
};

class Adam {
public:
    explicit Adam(double lr, double beta1 = 0.9, double beta2 = 0.999,
                  double epsilon_hat = 1e-8);

    // One bias-corrected update over every trainable entry. Throws on a
    // missing gradient, naming the parameter.
    void step(ParamStore& params, const GradMap& grads);

    const AdamState& state() const { return state_; }
    double learning_rate() const { return lr_; }

private:
    double lr_, beta1_, beta2_, eps_;
    AdamState state_;
};

// Scales all gradients in place so the global L2 norm is at most max_norm.
// Returns the pre-clip norm.
double clip_global_norm(GradMap& grads, double max_norm);

}  // namespace sc

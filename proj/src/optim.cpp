#include "safecritic/optim.hpp"

#include <cmath>

#include "safecritic/errors.hpp"
#include "safecritic/kernels.hpp"

namespace sc {

Adam::Adam(double lr, double beta1, double beta2, double epsilon_hat)
    : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(epsilon_hat) {
    if (lr <= 0.0) throw ConfigError("Adam: learning rate must be positive");
    if (!(beta1 > 0.0 && beta1 < 1.0 && beta2 > 0.0 && beta2 < 1.0))
        throw ConfigError("Adam: betas must lie in (0,1)");
}

void Adam::step(ParamStore& params, const GradMap& grads) {
    ++state_.step_count;
    const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(state_.step_count));
    const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(state_.step_count));
    for (const auto& e : params.entries()) {
        if (!e.trainable) continue;
        auto git = grads.find(e.name);
        if (git == grads.end())
            throw NumericError("Adam: missing gradient for parameter " + e.name);
        const Tensor& g = git->second;
        if (!g.same_shape(*e.tensor))
            throw ShapeError("Adam: gradient shape " + g.shape_str() + " != parameter " +
                             e.tensor->shape_str() + " for " + e.name);
        Tensor& m = state_.first_moment.try_emplace(e.name, Tensor(g.shape)).first->second;
        Tensor& v = state_.second_moment.try_emplace(e.name, Tensor(g.shape)).first->second;
        double* p = e.tensor->data.data();
        for (std::size_t i = 0; i < g.size(); ++i) {
            m.data[i] = beta1_ * m.data[i] + (1.0 - beta1_) * g.data[i];
            v.data[i] = beta2_ * v.data[i] + (1.0 - beta2_) * g.data[i] * g.data[i];
            const double mhat = m.data[i] / bc1;
            const double vhat = v.data[i] / bc2;
            p[i] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
        }
    }
}

double clip_global_norm(GradMap& grads, double max_norm) {
    double sq = 0.0;
    for (const auto& [name, g] : grads)
        sq += kern::ops().dot(g.data.data(), g.data.data(), g.size());
    const double norm = std::sqrt(sq);
    if (norm > max_norm && norm > 0.0) {
        const double s = max_norm / norm;
        for (auto& [name, g] : grads)
            kern::ops().scale(g.data.data(), s, g.data.data(), g.size());
    }
    return norm;
}

}  // namespace sc

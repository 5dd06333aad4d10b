#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "doctest.h"
#include "safecritic/rng.hpp"
#include "safecritic/tape.hpp"
#include "safecritic/tensor.hpp"

namespace sc::test {

// Builds a scalar loss from leaves already pushed onto the tape.
using LossBuilder = std::function<Var(Tape&, const std::vector<Var>&)>;

// Central finite differences on every element of every input tensor; checks
// the analytic gradient within rel_tol (abs_tol floor for tiny values).
inline void check_gradients(const std::vector<Tensor>& inputs, const LossBuilder& build,
                            double rel_tol = 1e-4, double h = 1e-6,
                            double abs_tol = 1e-7) {
    Tape tape;
    std::vector<Var> leaves;
    for (const Tensor& t : inputs) leaves.push_back(tape.leaf(t));
    const Var loss = build(tape, leaves);
    REQUIRE(tape.val(loss).size() == 1);
    tape.backward(loss);
    std::vector<Tensor> analytic;
    for (Var v : leaves) analytic.push_back(tape.grad(v));

    for (std::size_t i = 0; i < inputs.size(); ++i) {
        for (std::size_t j = 0; j < inputs[i].size(); ++j) {
            auto eval = [&](double delta) {
                std::vector<Tensor> shifted = inputs;
                shifted[i].data[j] += delta;
                Tape t2;
                std::vector<Var> l2;
                for (const Tensor& t : shifted) l2.push_back(t2.leaf(t));
                return t2.val(build(t2, l2)).data[0];
            };
            const double fd = (eval(h) - eval(-h)) / (2.0 * h);
            const double got = analytic[i].data[j];
            const double denom = std::max({std::abs(fd), std::abs(got), 1.0e-3});
            INFO("input ", i, " element ", j, " fd=", fd, " analytic=", got);
            CHECK(std::abs(fd - got) <= std::max(rel_tol * denom, abs_tol));
        }
    }
}

inline Tensor random_tensor(Rng& rng, std::vector<std::size_t> shape, double scale = 1.0) {
    Tensor t(std::move(shape));
    for (double& v : t.data) v = scale * rng.uniform(-1.0, 1.0);
    return t;
}

}  // namespace sc::test

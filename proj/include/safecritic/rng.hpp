#pragma once

#include <cstdint>
#include <random>

#include "safecritic/tensor.hpp"

namespace sc {

// Deterministic RNG. Normal draws use Box-Muller with an explicit spare so
// the stream does not depend on library internals.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * unit_(engine_);
    }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = unit_(engine_);
        while (u1 <= 0.0) u1 = unit_(engine_);
        const double u2 = unit_(engine_);
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    Tensor normal_vec(std::size_t n) {
        Tensor t({n});
        for (auto& v : t.data) v = normal();
        return t;
    }

    // Fill with U(-1/sqrt(fan_in), 1/sqrt(fan_in)).
    void init_uniform(Tensor& t, std::size_t fan_in) {
        const double b = 1.0 / std::sqrt(static_cast<double>(fan_in));
        for (auto& v : t.data) v = uniform(-b, b);
    }

    std::uint64_t next_u64() { return engine_(); }

    std::size_t index(std::size_t n) {
        return static_cast<std::size_t>(engine_() % n);
    }

private:
    std::mt19937_64 engine_;
    std::uniform_real_distribution<double> unit_{0.0, 1.0};
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace sc

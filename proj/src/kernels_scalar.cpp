#include "safecritic/kernels.hpp"

#include <cmath>
#include <cstring>

namespace sc::kern {

namespace {

void add_s(const double* a, const double* b, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + b[i];
}

void sub_s(const double* a, const double* b, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] - b[i];
}

void mul_s(const double* a, const double* b, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void scale_s(const double* a, double s, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * s;
}

void axpy_s(double s, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += s * x[i];
}

double dot_s(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double sum_s(const double* a, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i];
    return acc;
}

void relu_s(const double* a, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] > 0.0 ? a[i] : 0.0;
}

void matmul_s(const double* a, const double* b, double* c,
              std::size_t m, std::size_t k, std::size_t n) {
    std::memset(c, 0, m * n * sizeof(double));
    for (std::size_t i = 0; i < m; ++i) {
        const double* arow = a + i * k;
        double* crow = c + i * n;
        for (std::size_t p = 0; p < k; ++p) {
            const double aval = arow[p];
            const double* brow = b + p * n;
            for (std::size_t j = 0; j < n; ++j) crow[j] += aval * brow[j];
        }
    }
}

void tanh_s(const double* a, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = std::tanh(a[i]);
}

void sigmoid_s(const double* a, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = 1.0 / (1.0 + std::exp(-a[i]));
}

void softplus_s(const double* a, double* out, std::size_t n) {
    // log(1 + e^x), stable for large |x|
    for (std::size_t i = 0; i < n; ++i) {
        const double x = a[i];
        out[i] = x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
    }
}

void exp_s(const double* a, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(a[i]);
}

const Ops kScalar = {
    "scalar", add_s, sub_s,  mul_s,     scale_s,    axpy_s, dot_s, sum_s,
    relu_s,   matmul_s, tanh_s, sigmoid_s, softplus_s, exp_s,
};

const Ops* g_forced = nullptr;

}  // namespace

const Ops& scalar_ops() { return kScalar; }

void force_ops(const Ops* which) { g_forced = which; }

const Ops& ops() {
    if (g_forced) return *g_forced;
    static const Ops* selected = [] {
        if (const Ops* v = avx2_ops()) return v;
        return &kScalar;
    }();
    return *selected;
}

}  // namespace sc::kern

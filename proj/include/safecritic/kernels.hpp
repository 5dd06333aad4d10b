#pragma once

#include <cstddef>

// Low-level dense kernels on contiguous double buffers. A scalar reference
// implementation always exists; an AVX2/FMA variant is selected at runtime
// when the CPU supports it. Transcendentals (tanh, sigmoid, exp, softplus)
// stay scalar in every variant so results are identical across dispatch.

namespace sc::kern {

struct Ops {
    const char* name;

    void (*add)(const double* a, const double* b, double* out, std::size_t n);
    void (*sub)(const double* a, const double* b, double* out, std::size_t n);
    void (*mul)(const double* a, const double* b, double* out, std::size_t n);
    void (*scale)(const double* a, double s, double* out, std::size_t n);
    // y += s * x
    void (*axpy)(double s, const double* x, double* y, std::size_t n);
    double (*dot)(const double* a, const double* b, std::size_t n);
    double (*sum)(const double* a, std::size_t n);
    void (*relu)(const double* a, double* out, std::size_t n);
    // C(MxN) = A(MxK) * B(KxN), all row-major; C is overwritten.
    void (*matmul)(const double* a, const double* b, double* c,
                   std::size_t m, std::size_t k, std::size_t n);

    void (*tanh)(const double* a, double* out, std::size_t n);
    void (*sigmoid)(const double* a, double* out, std::size_t n);
    void (*softplus)(const double* a, double* out, std::size_t n);
    void (*exp)(const double* a, double* out, std::size_t n);
};

// Scalar reference kernels.
const Ops& scalar_ops();

// AVX2 kernels, or nullptr when unavailable (not compiled in, or CPU
// lacks avx2/fma).
const Ops* avx2_ops();

// The runtime-selected variant. Picked once on first call.
const Ops& ops();

// Force a variant for testing; pass nullptr to restore auto-selection.
void force_ops(const Ops* which);

}  // namespace sc::kern

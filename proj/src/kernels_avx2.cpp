// Compiled with -mavx2 -mfma (see CMakeLists); only reached after a
// runtime cpuid check so the binary still runs on plain x86-64.

#include "safecritic/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define SC_HAVE_AVX2_BUILD 1
#else
#define SC_HAVE_AVX2_BUILD 0
#endif

#if SC_HAVE_AVX2_BUILD

#include <immintrin.h>

#include <cstring>

namespace sc::kern {

namespace {

void add_v(const double* a, const double* b, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(a + i),
                                                _mm256_loadu_pd(b + i)));
    for (; i < n; ++i) out[i] = a[i] + b[i];
}

void sub_v(const double* a, const double* b, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, _mm256_sub_pd(_mm256_loadu_pd(a + i),
                                                _mm256_loadu_pd(b + i)));
    for (; i < n; ++i) out[i] = a[i] - b[i];
}

void mul_v(const double* a, const double* b, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i),
                                                _mm256_loadu_pd(b + i)));
    for (; i < n; ++i) out[i] = a[i] * b[i];
}

void scale_v(const double* a, double s, double* out, std::size_t n) {
    const __m256d vs = _mm256_set1_pd(s);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), vs));
    for (; i < n; ++i) out[i] = a[i] * s;
}

void axpy_v(double s, const double* x, double* y, std::size_t n) {
    const __m256d vs = _mm256_set1_pd(s);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(vs, _mm256_loadu_pd(x + i),
                                                _mm256_loadu_pd(y + i)));
    for (; i < n; ++i) y[i] += s * x[i];
}

double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

double dot_v(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
    double r = hsum(acc);
    for (; i < n; ++i) r += a[i] * b[i];
    return r;
}

double sum_v(const double* a, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i));
    double r = hsum(acc);
    for (; i < n; ++i) r += a[i];
    return r;
}

void relu_v(const double* a, double* out, std::size_t n) {
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, _mm256_max_pd(_mm256_loadu_pd(a + i), zero));
    for (; i < n; ++i) out[i] = a[i] > 0.0 ? a[i] : 0.0;
}

void matmul_v(const double* a, const double* b, double* c,
              std::size_t m, std::size_t k, std::size_t n) {
    std::memset(c, 0, m * n * sizeof(double));
    for (std::size_t i = 0; i < m; ++i) {
        const double* arow = a + i * k;
        double* crow = c + i * n;
        for (std::size_t p = 0; p < k; ++p) {
            const __m256d av = _mm256_set1_pd(arow[p]);
            const double* brow = b + p * n;
            std::size_t j = 0;
            for (; j + 4 <= n; j += 4)
                _mm256_storeu_pd(crow + j,
                                 _mm256_fmadd_pd(av, _mm256_loadu_pd(brow + j),
                                                 _mm256_loadu_pd(crow + j)));
            for (; j < n; ++j) crow[j] += arow[p] * brow[j];
        }
    }
}

const Ops kAvx2 = [] {
    Ops o = scalar_ops();  // transcendentals stay scalar
    o.name = "avx2";
    o.add = add_v;
    o.sub = sub_v;
    o.mul = mul_v;
    o.scale = scale_v;
    o.axpy = axpy_v;
    o.dot = dot_v;
    o.sum = sum_v;
    o.relu = relu_v;
    o.matmul = matmul_v;
    return o;
}();

}  // namespace

const Ops* avx2_ops() {
    static const bool ok =
        __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return ok ? &kAvx2 : nullptr;
}

}  // namespace sc::kern

#else

namespace sc::kern {
const Ops* avx2_ops() { return nullptr; }
}  // namespace sc::kern

#endif

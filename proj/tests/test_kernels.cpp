#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <array>
#include <cmath>
#include <cstring>
#include <vector>

#include "doctest.h"
#include "safecritic/kernels.hpp"
#include "safecritic/rng.hpp"

using namespace sc;
using namespace sc::kern;

namespace {

std::vector<double> random_vec(Rng& rng, std::size_t n, double scale = 2.0) {
    std::vector<double> v(n);
    for (double& x : v) x = scale * rng.uniform(-1.0, 1.0);
    return v;
}

bool have_avx2() { return avx2_ops() != nullptr; }

}  // namespace

TEST_CASE("runtime dispatch returns a usable kernel set") {
    const Ops& k = ops();
    CHECK(k.name != nullptr);
    double a[3] = {1, 2, 3}, b[3] = {4, 5, 6}, c[3];
    k.add(a, b, c, 3);
    CHECK(c[0] == 5);
    CHECK(c[2] == 9);
}

TEST_CASE("scalar and AVX2 elementwise kernels are bit-exact matches") {
    if (!have_avx2()) {
        MESSAGE("AVX2 unavailable; skipping equivalence checks");
        return;
    }
    const Ops& s = scalar_ops();
    const Ops& v = *avx2_ops();
    Rng rng(99);
    // odd lengths exercise the vector-remainder tails
    for (std::size_t n : {1u, 3u, 4u, 7u, 8u, 15u, 64u, 257u}) {
        const auto a = random_vec(rng, n), b = random_vec(rng, n);
        std::vector<double> out_s(n), out_v(n);

        s.add(a.data(), b.data(), out_s.data(), n);
        v.add(a.data(), b.data(), out_v.data(), n);
        CHECK(std::memcmp(out_s.data(), out_v.data(), n * sizeof(double)) == 0);

        s.mul(a.data(), b.data(), out_s.data(), n);
        v.mul(a.data(), b.data(), out_v.data(), n);
        CHECK(std::memcmp(out_s.data(), out_v.data(), n * sizeof(double)) == 0);

        s.scale(a.data(), 1.7, out_s.data(), n);
        v.scale(a.data(), 1.7, out_v.data(), n);
        CHECK(std::memcmp(out_s.data(), out_v.data(), n * sizeof(double)) == 0);

        s.relu(a.data(), out_s.data(), n);
        v.relu(a.data(), out_v.data(), n);
        CHECK(std::memcmp(out_s.data(), out_v.data(), n * sizeof(double)) == 0);

        // transcendentals are shared scalar code in both variants: identical
        s.tanh(a.data(), out_s.data(), n);
        v.tanh(a.data(), out_v.data(), n);
        CHECK(std::memcmp(out_s.data(), out_v.data(), n * sizeof(double)) == 0);
        s.exp(a.data(), out_s.data(), n);
        v.exp(a.data(), out_v.data(), n);
        CHECK(std::memcmp(out_s.data(), out_v.data(), n * sizeof(double)) == 0);
    }
}

TEST_CASE("scalar and AVX2 reductions agree to tight relative tolerance") {
    if (!have_avx2()) return;
    const Ops& s = scalar_ops();
    const Ops& v = *avx2_ops();
    Rng rng(7);
    for (std::size_t n : {1u, 5u, 32u, 1000u}) {
        const auto a = random_vec(rng, n), b = random_vec(rng, n);
        const double ds = s.dot(a.data(), b.data(), n);
        const double dv = v.dot(a.data(), b.data(), n);
        CHECK(std::abs(ds - dv) <= 1e-12 * std::max(1.0, std::abs(ds)));
        const double ss = s.sum(a.data(), n);
        const double sv = v.sum(a.data(), n);
        CHECK(std::abs(ss - sv) <= 1e-12 * std::max(1.0, std::abs(ss)));
    }
}

TEST_CASE("matmul variants agree on odd shapes against a naive oracle") {
    if (!have_avx2()) return;
    const Ops& s = scalar_ops();
    const Ops& v = *avx2_ops();
    Rng rng(42);
    for (auto [m, k, n] : std::vector<std::array<std::size_t, 3>>{
             {1, 1, 1}, {2, 3, 5}, {7, 7, 7}, {5, 13, 3}, {16, 9, 17}}) {
        const auto a = random_vec(rng, m * k), b = random_vec(rng, k * n);
        std::vector<double> cs(m * n), cv(m * n), oracle(m * n, 0.0);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t p = 0; p < k; ++p)
                for (std::size_t j = 0; j < n; ++j)
                    oracle[i * n + j] += a[i * k + p] * b[p * n + j];
        s.matmul(a.data(), b.data(), cs.data(), m, k, n);
        v.matmul(a.data(), b.data(), cv.data(), m, k, n);
        for (std::size_t i = 0; i < m * n; ++i) {
            CHECK(cs[i] == doctest::Approx(oracle[i]).epsilon(1e-12));
            CHECK(cv[i] == doctest::Approx(oracle[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("axpy accumulates in place") {
    const Ops& k = scalar_ops();
    std::vector<double> y = {1, 1, 1};
    const std::vector<double> x = {1, 2, 3};
    k.axpy(2.0, x.data(), y.data(), 3);
    CHECK(y[0] == 3);
    CHECK(y[2] == 7);
    if (have_avx2()) {
        std::vector<double> y2 = {1, 1, 1};
        avx2_ops()->axpy(2.0, x.data(), y2.data(), 3);
        CHECK(y == y2);
    }
}

#include <doctest.h>

#include <random>

#include "ergolab/gowers.hpp"
#include "ergolab/parallel.hpp"

using namespace ergolab;

namespace {

// Textbook definition: average over (x, h_1..h_k) of the conjugated cube product.
double brute_gowers(const std::vector<cd>& a, unsigned k) {
    const std::size_t N = a.size();
    std::vector<std::size_t> h(k + 1, 0);
    cd total{};
    std::size_t points = 1;
    for (unsigned i = 0; i <= k; ++i) points *= N;
    for (std::size_t idx = 0; idx < points; ++idx) {
        std::size_t rest = idx;
        for (unsigned i = 0; i <= k; ++i) {
            h[i] = rest % N;
            rest /= N;
        }
        cd prod = 1.0;
        for (unsigned eps = 0; eps < (1U << k); ++eps) {
            std::size_t pos = h[0];
            for (unsigned i = 0; i < k; ++i)
                if ((eps >> i) & 1U) pos += h[i + 1];
            const cd v = a[pos % N];
            prod *= (std::popcount(eps) % 2) ? std::conj(v) : v;
        }
        total += prod;
    }
    return std::pow(total.real() / static_cast<double>(points), 1.0 / (1U << k));
}

std::vector<cd> random_unimodular(std::size_t N, std::uint64_t seed) {
    const BoundedSeq s = random_seq(RandomKind::unimodular, N, seed);
    return {s.values().begin(), s.values().end()};
}

}  // namespace

TEST_CASE("constant sequence has norm one on every path") {
    const PeriodicSeq one(std::vector<cd>(16, 1.0));
    for (unsigned k = 1; k <= 3; ++k) {
        CHECK(gowers_zn_direct(one, k).value == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(gowers_zn_standard(one, k).value == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(gowers_estimator(BoundedSeq::constant(1.0, 64), k, 16).value == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(gowers_u2_fourier(one).value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("paths agree with the brute-force definition") {
    for (std::size_t N : {5, 8, 11}) {
        const auto v = random_unimodular(N, N);
        const PeriodicSeq a(v);
        for (unsigned k = 1; k <= 3; ++k) {
            const double b = brute_gowers(v, k);
            CHECK(gowers_zn_direct(a, k).value == doctest::Approx(b).epsilon(1e-10));
            CHECK(gowers_zn_standard(a, k).value == doctest::Approx(b).epsilon(1e-10));
        }
        CHECK(gowers_u2_fourier(a).value == doctest::Approx(brute_gowers(v, 2)).epsilon(1e-10));
    }
}

TEST_CASE("k = 1 is the modulus of the mean") {
    const std::vector<cd> v{1.0, cd{0, 1}, -1.0, 1.0};
    CHECK(gowers_zn_direct(PeriodicSeq(v), 1).value == doctest::Approx(std::sqrt(2.0) / 4));
}

TEST_CASE("linear phases have U2 norm one; quadratic Gauss phase has N^(-1/4)") {
    const std::size_t N = 31;  // prime
    std::vector<cd> lin(N), quad(N);
    for (std::size_t n = 0; n < N; ++n) {
        lin[n] = expi(3.0 * static_cast<double>(n) / N);
        quad[n] = expi(static_cast<double>(n * n % N) / N);
    }
    CHECK(gowers_u2_fourier(PeriodicSeq(lin)).value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(gowers_zn_direct(PeriodicSeq(lin), 3).value == doctest::Approx(1.0).epsilon(1e-12));
    const double gauss = std::pow(static_cast<double>(N), -0.25);
    CHECK(gowers_u2_fourier(PeriodicSeq(quad)).value == doctest::Approx(gauss).epsilon(1e-12));
    CHECK(gowers_zn_direct(PeriodicSeq(quad), 2).value == doctest::Approx(gauss).epsilon(1e-12));
    // quadratic phases are invisible to U3
    CHECK(gowers_zn_standard(PeriodicSeq(quad), 3).value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("norms are monotone in k") {
    const PeriodicSeq a(random_unimodular(24, 9));
    double prev = 0.0;
    for (unsigned k = 1; k <= 3; ++k) {
        const double v = gowers_zn_direct(a, k).value;
        CHECK(v >= prev - 1e-12);
        prev = v;
    }
}

TEST_CASE("estimator against a literal brute-force sum") {
    const std::size_t N = 6;
    const unsigned k = 2;
    const BoundedSeq a = random_seq(RandomKind::unimodular, k * N, 5);
    // E_{h in [1,N]} |E_{m in [1,N]} a(m + h) conj a(m)|^2
    double acc = 0.0;
    for (std::size_t h = 1; h <= N; ++h) {
        cd inner{};
        for (std::size_t m = 1; m <= N; ++m)
            inner += a(static_cast<std::int64_t>(m)) * std::conj(a(static_cast<std::int64_t>(m + h)));
        acc += std::norm(inner / static_cast<double>(N));
    }
    const double want = std::pow(acc / N, 0.25);
    CHECK(gowers_estimator(a, k, N).value == doctest::Approx(want).epsilon(1e-12));
    CHECK_THROWS_AS(gowers_estimator(a, 3, N), std::invalid_argument);
}

TEST_CASE("recursive identity closes at R = N") {
    const std::size_t N = 8;
    for (unsigned k = 1; k <= 2; ++k) {
        const BoundedSeq a = random_seq(RandomKind::unimodular, (k + 1) * N + N, 17 + k);
        const auto gap = recursive_identity_gap(a, k, N, N);
        CHECK(gap.gap < 1e-12);
        CHECK(gap.lifted_side > 0.0);
    }
}

TEST_CASE("thread count does not change values") {
    const PeriodicSeq a(random_unimodular(40, 3));
    set_thread_count(1);
    const double one = gowers_zn_standard(a, 3).value;
    set_thread_count(4);
    const double four = gowers_zn_standard(a, 3).value;
    set_thread_count(1);
    CHECK(one == four);
}

TEST_CASE("budget and argument checks") {
    const PeriodicSeq a(std::vector<cd>(64, 1.0));
    CHECK_THROWS_AS(gowers_zn_direct(a, 4, 1000), ResourceError);
    CHECK_THROWS_AS(gowers_zn_standard(a, 3, 1000), ResourceError);
    CHECK_THROWS_AS(gowers_zn_direct(a, 0), std::invalid_argument);
}

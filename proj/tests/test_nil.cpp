#include <doctest.h>

#include <random>

#include "ergolab/nil.hpp"

using namespace ergolab;

TEST_CASE("samples follow stepwise translation") {
    const HeisenbergElement a{kSqrt2Minus1, kGoldenConjugate, 0.25};
    const HeisenbergElement x0{0.1, 0.2, 0.3};
    const auto f = ObservableSpec::character({1, 2, 1});
    const BoundedSeq s = nilsequence_sample(a, x0, f, 500);
    HeisenbergPoint p = heis_reduce(x0).point;
    for (std::int64_t n = 1; n <= 500; ++n) {
        p = heis_translate(a, p);
        const auto c = p.coords();
        REQUIRE(std::abs(s(n) - f(c)) < 1e-7);
    }
}

TEST_CASE("samples do not depend on the representative of the start point") {
    const HeisenbergElement a{kSqrt2Minus1, kGoldenConjugate, 0.0};
    const auto f = ObservableSpec::character({0, 1, 1});
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> l(-4, 4);
    for (int t = 0; t < 20; ++t) {
        const HeisenbergElement x0{u(rng), u(rng), u(rng)};
        const HeisenbergElement gamma{static_cast<double>(l(rng)), static_cast<double>(l(rng)),
                                      static_cast<double>(l(rng))};
        const auto s1 = nilsequence_sample(a, x0, f, 200);
        const auto s2 = nilsequence_sample(a, heis_mul(x0, gamma), f, 200);
        for (std::int64_t n = 1; n <= 200; ++n) REQUIRE(std::abs(s1(n) - s2(n)) < 1e-9);
    }
}

TEST_CASE("samples are bounded by the observable bound") {
    const ObservableSpec f(3, {{0.5, {1, 0, 0}}, {0.25, {0, 0, 1}}});
    const auto s = nilsequence_sample({0.3, 0.7, 0.1}, {}, f, 1000);
    for (const cd& v : s.values()) CHECK(std::abs(v) <= 0.75 + 1e-12);
}

TEST_CASE("constant observable gives one") {
    const std::vector<NilTerm> terms{{{0.3, 0.7, 0.1}, parse_poly("n^2"), ObservableSpec::constant(1.0, 3), {}}};
    CHECK(std::abs(nil_polynomial_average(terms, 777) - 1.0) < 1e-12);
}

TEST_CASE("rotation-degenerate element gives a geometric mean") {
    const HeisenbergElement a{kSqrt2Minus1, 0.0, 0.0};
    const std::vector<NilTerm> terms{{a, parse_poly("n"), ObservableSpec::character({1, 0, 0}), {}}};
    const std::size_t N = 4096;
    cd g{};
    for (std::size_t n = 1; n <= N; ++n) g += expi(kSqrt2Minus1 * static_cast<double>(n));
    g /= static_cast<double>(N);
    const cd v = nil_polynomial_average(terms, N);
    CHECK(std::abs(v - g) < 1e-12);
    CHECK(std::abs(v) <= 1e-3);
}

TEST_CASE("scan agrees with pointwise averages") {
    const std::vector<NilTerm> terms{
        {{kSqrt2Minus1, kGoldenConjugate, 0.0}, parse_poly("n"), ObservableSpec::character({1, 0, 0}), {}},
        {{kGoldenConjugate, 0.7, 0.0}, parse_poly("n^2"), ObservableSpec::character({0, 0, 1}), {}}};
    const std::vector<std::size_t> grid{16, 32, 64, 128};
    const auto r = nil_convergence_scan(terms, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(std::abs(r.averages[i] - nil_polynomial_average(terms, grid[i])) < 1e-12);
}

TEST_CASE("observable dimension is checked") {
    CHECK_THROWS_AS(check_nil_observable(ObservableSpec::character({1, 0})), std::invalid_argument);
    CHECK_NOTHROW(check_nil_observable(ObservableSpec::character({0, 0, 1})));
}

#include <doctest.h>

#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "ergolab/pet.hpp"

using namespace ergolab;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::vector<std::int64_t> without_constant(const IntPoly& p) {
    return {p.coefficients().begin() + 1, p.coefficients().end()};
}

}  // namespace

TEST_CASE("polynomial parsing and printing") {
    CHECK(to_string(parse_poly("n^2+n+1")) == "n^2+n+1");
    CHECK(to_string(parse_poly("-2*n - 1")) == "-2n-1");
    CHECK(to_string(parse_poly(" 3n^3 - n ")) == "3n^3-n");
    CHECK(to_string(parse_poly("n - n")) == "0");
    CHECK(parse_poly("n^2 + 2n^2").leading() == 3);
    CHECK(to_string(parse_family("n^2, n")) == "(n^2, n)");
    CHECK_THROWS_AS(parse_poly("n^"), std::invalid_argument);
    CHECK_THROWS_AS(parse_poly("x^2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_family("n, , n"), std::invalid_argument);
}

TEST_CASE("shift and arithmetic") {
    const IntPoly p = parse_poly("n^2");
    CHECK(p.shifted(1) == parse_poly("n^2+2n+1"));
    CHECK(p.shifted(3) - p == parse_poly("6n+9"));
    for (std::int64_t n = -5; n <= 5; ++n) CHECK(p.shifted(4)(n) == p(n + 4));
    const IntPoly big = IntPoly::monomial(std::int64_t{1} << 40, 3);
    CHECK_THROWS_AS(big.shifted(1 << 20), std::overflow_error);
}

TEST_CASE("types and ordering") {
    CHECK(to_string(family_type(parse_family("n^2"))) == "(2,1,0)");
    CHECK(to_string(family_type(parse_family("n^2, n^2+n, 2n^2, n, 3n+1"))) == "(2,2,2)");
    CHECK(to_string(family_type(parse_family("n, 2n"))) == "(1,2)");
    CHECK(type_less(family_type(parse_family("2n+1")), family_type(parse_family("n^2"))));
    CHECK(type_less(family_type(parse_family("n^2, n")), family_type(parse_family("n^2, 2n^2"))));
    CHECK_FALSE(type_less(family_type(parse_family("n^2")), family_type(parse_family("n^2"))));
}

TEST_CASE("nice families") {
    CHECK(is_nice(parse_family("n^2, n")));
    CHECK_FALSE(is_nice(parse_family("n, n^2")));
    CHECK_FALSE(is_nice(parse_family("n^2, n^2+1")));
    CHECK(is_nice(parse_family("n^2+1, n^2+n")));
}

TEST_CASE("van der Corput family operation, hand expansions") {
    CHECK(vdc_family(parse_family("n^2"), parse_poly("n^2"), 1) == parse_family("2n+1"));
    CHECK(vdc_family(parse_family("n, 2n"), parse_poly("n"), 3) == parse_family("n, n+6"));
    CHECK(vdc_family(parse_family("n^2, n"), parse_poly("n"), 1) == parse_family("n^2+n+1, n^2-n"));
    CHECK_THROWS_AS(vdc_family(parse_family("n^2"), parse_poly("n"), 1), std::invalid_argument);
    CHECK_THROWS_AS(vdc_family(parse_family("n^2"), parse_poly("n^2"), 0), std::invalid_argument);
    for (const auto& q : vdc_family(parse_family("n^3, n^2, n"), parse_poly("n"), 2)) CHECK_FALSE(q.is_constant());
}

TEST_CASE("choice of the reduction polynomial") {
    CHECK(select_p(parse_family("n^2, n^2+n")) == parse_poly("n^2"));
    CHECK(select_p(parse_family("n^2, 2n^2")) == parse_poly("2n^2"));
    CHECK(select_p(parse_family("n^3, n")) == parse_poly("n"));
    CHECK(select_p(parse_family("n^3, n^2, 2n, n")) == parse_poly("2n"));
    CHECK_THROWS_AS(select_p(parse_family("2n, n")), std::invalid_argument);
}

TEST_CASE("single square reduces in one step") {
    const auto trace = reduce_trace(parse_family("n^2"), default_schedule());
    REQUIRE(trace.steps.size() == 1);
    CHECK(to_string(trace.initial_type) == "(2,1,0)");
    CHECK(trace.steps[0].family == parse_family("2n+1"));
    CHECK(to_string(trace.steps[0].type) == "(1,1)");
    CHECK(reduce_trace(parse_family("n, 2n"), default_schedule()).steps.empty());
}

TEST_CASE("golden trace for (n^2, n)") {
    const auto fam = parse_family("n^2, n");
    const std::string text = format_trace(reduce_trace(fam, default_schedule()), k_bound(fam));
    CHECK(text == read_file(std::string(ERGOLAB_SOURCE_DIR) + "/tests/golden/pet_n2_n.txt"));
}

TEST_CASE("trace steps re-evaluate to strictly decreasing types") {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 200; ++t) {
        const auto fam = random_nice_family(rng, 2, 3);
        const auto trace = reduce_trace(fam, default_schedule());
        TypeVector prev = family_type(fam);
        for (const auto& s : trace.steps) {
            const TypeVector now = family_type(s.family);
            CHECK(now == s.type);
            CHECK(type_less(now, prev));
            CHECK(is_nice(s.family));
            prev = now;
        }
        CHECK(prev.d == 1);
    }
}

TEST_CASE("class representation agrees with literal iteration") {
    std::mt19937_64 rng(5);
    int compared = 0;
    for (int t = 0; t < 300 && compared < 60; ++t) {
        const auto fam = random_nice_family(rng, 3, 3);
        ReductionTrace trace;
        try {
            trace = reduce_trace(fam, default_schedule(), 64);
        } catch (const std::length_error&) {
            continue;
        }
        PolyFamily literal = fam;
        bool small = true;
        for (const auto& s : trace.steps) {
            literal = vdc_family(literal, s.p, s.r);
            if (literal.size() > 20000) {
                small = false;
                break;
            }
            std::map<std::vector<std::int64_t>, std::size_t> slot;
            PolyFamily firsts;
            std::vector<std::uint64_t> counts;
            for (const auto& q : literal) {
                auto [it, fresh] = slot.try_emplace(without_constant(q), firsts.size());
                if (fresh) {
                    firsts.push_back(q);
                    counts.push_back(0);
                }
                ++counts[it->second];
            }
            REQUIRE(firsts == s.family);
            REQUIRE(counts == s.multiplicity);
            REQUIRE(literal.size() == s.size);
            CHECK(is_nice(literal));
            CHECK(family_type(literal) == s.type);
        }
        if (small) ++compared;
    }
    CHECK(compared >= 30);
}

TEST_CASE("schedule exhaustion and class cap are reported") {
    CHECK_THROWS_AS(reduce_trace(parse_family("n^2"), {}), std::runtime_error);
    CHECK_THROWS_AS(reduce_trace(parse_family("n^3, n^2"), default_schedule(), 8), std::length_error);
    CHECK_THROWS_AS(reduce_trace(parse_family("n, n^2"), default_schedule()), std::invalid_argument);
}

TEST_CASE("k bound of linear families") {
    for (std::uint64_t l = 1; l <= 5; ++l) {
        PolyFamily fam;
        for (std::uint64_t i = 1; i <= l; ++i) fam.push_back(IntPoly::monomial(static_cast<std::int64_t>(i), 1));
        CHECK(k_bound(fam).value == l + 1);
        CHECK_FALSE(k_bound(fam).saturated);
    }
}

TEST_CASE("k bound of a single square by two traversals") {
    const auto fam = parse_family("n^2");
    CHECK(k_bound(fam).value == 3);
    const auto ex = k_bound_exhaustive(family_type(fam), 1);
    REQUIRE(ex.has_value());
    CHECK(ex->value == 3);
}

TEST_CASE("greedy and exhaustive traversals agree on small types") {
    for (const char* text : {"n^2, n", "n^2, 2n^2", "n^2, n, 2n", "n^2, n^2+n, 3n"}) {
        const auto fam = parse_family(text);
        const auto ex = k_bound_exhaustive(family_type(fam), fam.size());
        REQUIRE(ex.has_value());
        CHECK(*ex == k_bound(fam));
    }
    CHECK_FALSE(k_bound_exhaustive(family_type(parse_family("n^3, n^2, n")), 3, 100).has_value());
}

TEST_CASE("k bound depends on type and size only, and is monotone") {
    CHECK(k_bound(parse_family("n^2, n")) == k_bound(parse_family("3n^2+1, 5n-2")));
    std::mt19937_64 rng(8);
    for (int t = 0; t < 100; ++t) {
        auto fam = random_nice_family(rng, 3, 2);
        const KBound before = k_bound(fam);
        auto bigger = fam;
        bigger.push_back(IntPoly::monomial(7, 1));
        if (!is_nice(bigger)) continue;
        const KBound after = k_bound(bigger);
        CHECK(after.value >= before.value);
    }
}

TEST_CASE("saturation") {
    const auto b = k_bound(parse_family("n^3, n^2"));
    CHECK(b.saturated);
    CHECK(b.value == kKBoundCap);
}

TEST_CASE("max_type_below") {
    const auto t = max_type_below(family_type(parse_family("n^2")), 2);
    REQUIRE(t.has_value());
    CHECK(to_string(*t) == "(1,2)");
    CHECK_FALSE(max_type_below(family_type(parse_family("n")), 1).has_value());
}

// Acceptance driver: one PASS/FAIL line per criterion, exit status 1 when
// any criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ergolab/cubic.hpp"
#include "ergolab/gowers.hpp"
#include "ergolab/heisenberg.hpp"
#include "ergolab/nil.hpp"
#include "ergolab/parallel.hpp"
#include "ergolab/pet.hpp"
#include "ergolab/polyavg.hpp"
#include "ergolab/seq.hpp"
#include "ergolab/vdc.hpp"
#include "ergolab/verify.hpp"

using namespace ergolab;

namespace {

constexpr std::uint64_t kSeed = 7;
const double kSqrt3Minus1 = std::sqrt(3.0) - 1.0;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) pass = false;
        if (detail.tellp() > 0) detail << "; ";
        detail << (ok ? "" : "FAILED ") << what;
    }
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

int failures = 0;

void criterion(const std::string& id, double limit_seconds, const std::function<void(Outcome&)>& body) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(o);
    } catch (const std::exception& e) {
        o.require(false, std::string("exception: ") + e.what());
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (limit_seconds > 0) o.require(dt <= limit_seconds, "runtime " + fmt(dt) + " s <= " + fmt(limit_seconds) + " s");
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << o.detail.str() << std::endl;
}

void require_batches(Outcome& o, const std::vector<BatchSummary>& batches) {
    for (const auto& b : batches) {
        std::ostringstream what;
        what << b.check;
        if (b.N != 0) what << " N=" << b.N;
        if (b.k != 0) what << " k=" << b.k;
        if (b.skipped) {
            what << " skipped (" << b.note << ")";
            o.require(true, what.str());
            continue;
        }
        what << " " << b.failures << "/" << b.trials << " failures, worst " << fmt(b.worst);
        if (!b.note.empty()) what << " (" << b.note << ")";
        o.require(b.failures == 0, what.str());
    }
}

ObservableSpec half_plus_half(std::vector<int> freq) {
    const std::size_t d = freq.size();
    return ObservableSpec(d, {{0.5, std::vector<int>(d, 0)}, {0.5, std::move(freq)}});
}

std::string run_cli(const std::string& args) {
    const std::string cmd = std::string(ERGOLAB_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    if (p == nullptr) throw std::runtime_error("popen failed for " + cmd);
    std::string out;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
    const int status = pclose(p);
    if (status != 0) throw std::runtime_error("'" + args + "' exited with status " + std::to_string(status));
    return out;
}

}  // namespace

int main() {
    criterion("1 (cross-path Gowers equality)", 120, [](Outcome& o) {
        std::vector<BatchSummary> batches;
        for (std::size_t N : {8, 16, 32, 64})
            for (unsigned k : {1U, 2U, 3U}) batches.push_back(gowers_cross_path_batch(N, k, 100, kSeed, 1e-9));
        require_batches(o, batches);
    });

    criterion("2 (exact inequality suite)", 600, [](Outcome& o) {
        require_batches(o, run_suite("vdc", kSeed, 1000));
        require_batches(o, run_suite("pkey", kSeed, 1000));
    });

    criterion("3 (equality witnesses)", 0, [](Outcome& o) {
        double worst_slack = 0.0;
        for (std::size_t N : {1, 7, 32, 1024})
            for (std::size_t R : {std::size_t{1}, N / 2 + 1, N}) {
                const auto rep = vdc_zn(PeriodicSeq(std::vector<cd>(N, 1.0)), R);
                worst_slack = std::max(worst_slack, std::fabs(rep.slack));
            }
        o.require(worst_slack == 0.0, "vdc_zn constant slack " + fmt(worst_slack));

        double worst = 0.0;
        auto note = [&worst](cd v) { worst = std::max(worst, std::abs(v - 1.0)); };
        const SystemSpec skew = SkewProductTorus{kSqrt2Minus1};
        const SystemSpec heis = HeisenbergTranslation{{kSqrt2Minus1, kGoldenConjugate, 0.0}};
        for (unsigned k : {1U, 2U, 3U}) {
            note(cubic_average(VertexAssignment::uniform(k, {skew, ObservableSpec::constant(1.0, 2)}, {0.2, 0.4}), 64));
            note(cubic_average(VertexAssignment::uniform(k, {heis, ObservableSpec::constant(1.0, 3)}, {0.1, 0.2, 0.3}), 64));
            if (k >= 2) {
                note(cubic_square_mean(
                    CubeAssignment(k, std::vector<VertexEntry>(1U << (k - 1), {skew, ObservableSpec::constant(1.0, 2)}), {0.2, 0.4}),
                    64));
                note(sequence_square_mean(std::vector<BoundedSeq>(1U << (k - 1), BoundedSeq::constant(1.0, 64 * k)), k, 64));
            }
            const auto ones = PeriodicSeq(std::vector<cd>(32, 1.0));
            note(gowers_zn_direct(ones, k).value);
            note(gowers_zn_standard(ones, k).value);
            note(gowers_estimator(BoundedSeq::constant(1.0, 32 * k), k, 32).value);
        }
        note(gowers_u2_fourier(PeriodicSeq(std::vector<cd>(32, 1.0))).value);
        const PolyAvgSpec poly({{skew, ObservableSpec::constant(1.0, 2), parse_poly("n^2")},
                                {skew, ObservableSpec::constant(1.0, 2), parse_poly("n")}},
                               {0.1, 0.2}, GrowthSchedule(0.4, 2));
        const auto pv = poly_evaluate(poly, 2048);
        note(pv.average);
        note(pv.square_mean);
        note(nil_polynomial_average({{{0.3, 0.7, 0.1}, parse_poly("n^2"), ObservableSpec::constant(1.0, 3), {}}}, 2048));
        o.require(worst <= 1e-12, "constant averages within " + fmt(worst) + " of 1");
    });

    criterion("4 (uniformity decay)", 60, [](Outcome& o) {
        const SystemSpec skew = SkewProductTorus{kSqrt2Minus1};
        const CubeAssignment ca(2, {{skew, ObservableSpec::character({0, 1})}, {skew, ObservableSpec::character({0, 1})}},
                                {0.0, 0.0});
        const double v2048 = cubic_square_mean(ca, 2048);
        const double v1024 = cubic_square_mean(ca, 1024);
        o.require(v2048 <= 0.05, "N=2048 value " + fmt(v2048) + " <= 0.05");
        o.require(v1024 > v2048, "N=1024 value " + fmt(v1024) + " > N=2048 value");
    });

    criterion("5 (closed-form cubic limits)", 60, [](Outcome& o) {
        const SystemSpec rot = CircleRotation{kSqrt2Minus1};
        const auto e = ObservableSpec::character({1});
        const VertexAssignment tele(2, {{rot, e}, {rot, e}, {rot, ObservableSpec::character({-1})}}, {0.0});
        double worst = 0.0;
        for (std::size_t N : {1, 2, 3, 10, 100, 512, 1000, 4096}) worst = std::max(worst, std::abs(cubic_average(tele, N) - 1.0));
        o.require(worst <= 1e-12, "telescoping within " + fmt(worst) + " of 1");
        const double same = std::abs(cubic_average(VertexAssignment::uniform(2, {rot, e}, {0.0}), 4096));
        o.require(same <= 1e-3, "same character |A_4096| = " + fmt(same));
    });

    criterion("6 (PET engine)", 120, [](Outcome& o) {
        const auto trace = reduce_trace(parse_family("n^2"), default_schedule());
        const bool one_step = trace.steps.size() == 1 && to_string(trace.initial_type) == "(2,1,0)" &&
                              to_string(trace.steps[0].type) == "(1,1)";
        o.require(one_step, "n^2 -> linear in one step, (2,1,0) -> (1,1)");
        bool linear_ok = true;
        for (std::uint64_t l = 1; l <= 5; ++l) {
            std::ostringstream fam;
            for (std::uint64_t i = 1; i <= l; ++i) fam << (i > 1 ? ", " : "") << i << "n";
            linear_ok = linear_ok && k_bound(parse_family(fam.str())).value == l + 1;
        }
        o.require(linear_ok, "k_bound of l linear members = l+1 for l=1..5");
        const auto greedy = k_bound(parse_family("n^2"));
        const auto exhaustive = k_bound_exhaustive(family_type(parse_family("n^2")), 1);
        o.require(greedy.value == 3 && exhaustive && exhaustive->value == 3,
                  "k_bound(n^2) = 3 greedy and exhaustive");
        require_batches(o, run_suite("pet", kSeed, 200));
    });

    criterion("7 (Heisenberg correctness)", 60, [](Outcome& o) { require_batches(o, run_suite("heisenberg", kSeed, 100)); });

    criterion("8a (polynomial-average decay)", 120, [](Outcome& o) {
        const PolyAvgSpec weyl({{SkewProductTorus{kSqrt2Minus1}, ObservableSpec::character({0, 1}), parse_poly("n")}},
                               {0.0, 0.0}, GrowthSchedule(0.5, 1));
        const double v = poly_square_mean(weyl, 4096);
        o.require(v <= 0.05, "quadratic Weyl square mean " + fmt(v) + " <= 0.05");
    });

    criterion("8b (eigenfunction contrast)", 120, [](Outcome& o) {
        const PolyAvgSpec eig({{CircleRotation{kSqrt2Minus1}, ObservableSpec::character({1}), parse_poly("n")}}, {0.0},
                              GrowthSchedule(0.5, 1));
        const double v = poly_square_mean(eig, 4096);
        o.require(v >= 0.9, "eigenfunction square mean " + fmt(v) + " >= 0.9");
    });

    criterion("9 (convergence scans)", 900, [](Outcome& o) {
        const HeisenbergElement a{kSqrt2Minus1, kGoldenConjugate, 0.0};
        const HeisenbergElement b{kGoldenConjugate, kSqrt3Minus1, 0.0};
        const SystemSpec ta = HeisenbergTranslation{a}, tb = HeisenbergTranslation{b};
        const auto grid = geometric_grid(9, 13);
        const State x0{0.0, 0.0, 0.0};

        const VertexAssignment cube(2, {{ta, half_plus_half({1, 0, 0})}, {tb, half_plus_half({0, 1, 0})},
                                        {ta, half_plus_half({0, 0, 1})}},
                                    x0);
        const double oa = convergence_scan(cube, grid).oscillation;
        o.require(oa <= 5e-2, "(a) cubic oscillation " + fmt(oa));

        const PolyAvgSpec poly({{ta, half_plus_half({1, 0, 0}), parse_poly("n")}, {tb, half_plus_half({0, 0, 1}), parse_poly("n^2")}},
                               x0, GrowthSchedule(0.4, 2));
        const double ob = poly_convergence_scan(poly, grid).oscillation;
        o.require(ob <= 5e-2, "(b) polynomial oscillation " + fmt(ob));

        const std::vector<NilTerm> nil{{a, parse_poly("n"), half_plus_half({0, 0, 1}), {}},
                                       {b, parse_poly("n^2"), half_plus_half({1, 1, 0}), {}}};
        const double oc = nil_convergence_scan(nil, grid).oscillation;
        o.require(oc <= 5e-2, "(c) nil oscillation " + fmt(oc));
    });

    criterion("10 (determinism)", 0, [](Outcome& o) {
        const std::filesystem::path dir = std::filesystem::path(ERGOLAB_SOURCE_DIR) / "configs";
        std::vector<std::filesystem::path> configs;
        for (const auto& entry : std::filesystem::directory_iterator(dir))
            if (entry.path().extension() == ".json") configs.push_back(entry.path());
        std::sort(configs.begin(), configs.end());
        o.require(!configs.empty(), std::to_string(configs.size()) + " configs");
        for (const auto& path : configs) {
            const std::string stem = path.stem().string();
            const std::string sub = stem.substr(0, stem.find('_'));
            const std::string base = "--config " + path.string() + " ";
            const std::string first = run_cli(base + "--threads 1 " + sub);
            bool same = true;
            for (const char* threads : {"1", "2", "4"}) same = same && run_cli(base + "--threads " + threads + " " + sub) == first;
            if (!same) o.require(false, stem + " differs");
        }
    });

    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}

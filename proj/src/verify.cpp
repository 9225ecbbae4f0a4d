#include "ergolab/verify.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "ergolab/cubic.hpp"
#include "ergolab/gowers.hpp"
#include "ergolab/heisenberg.hpp"
#include "ergolab/parallel.hpp"
#include "ergolab/pet.hpp"

namespace ergolab {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

double relative_error(double a, double b) {
    const double scale = std::max(std::fabs(a), std::fabs(b));
    return scale == 0.0 ? 0.0 : std::fabs(a - b) / scale;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index) {
    return splitmix64(splitmix64(base ^ splitmix64(stream)) + index);
}

std::string to_string(InequalityKind kind) {
    switch (kind) {
        case InequalityKind::vdc_zn: return "vdc_zn";
        case InequalityKind::vdc_finite: return "vdc_finite";
        case InequalityKind::shifted_corr_bound: return "shifted_corr_bound";
        case InequalityKind::pkey: return "pkey";
    }
    return "?";
}

InequalityKind parse_inequality_kind(const std::string& name) {
    if (name == "vdc_zn") return InequalityKind::vdc_zn;
    if (name == "vdc_finite") return InequalityKind::vdc_finite;
    if (name == "shifted_corr_bound") return InequalityKind::shifted_corr_bound;
    if (name == "pkey") return InequalityKind::pkey;
    throw std::invalid_argument("unknown inequality '" + name + "'");
}

std::vector<TrialResult> run_trials(const TrialSpec& spec) {
    if (spec.N == 0) throw std::invalid_argument("run_trials: N must be >= 1");
    const std::uint64_t stream = static_cast<std::uint64_t>(spec.inequality) * 1'000'003 + spec.N * 17 + spec.k;
    auto per_trial = parallel_map<std::vector<TrialResult>>(spec.trials, [&](std::size_t t) {
        const std::uint64_t seed = derive_seed(spec.seed, stream, t);
        std::size_t R;
        if (!spec.R.empty()) {
            R = spec.R[t % spec.R.size()];
        } else {
            std::mt19937_64 rng(splitmix64(seed));
            R = std::uniform_int_distribution<std::size_t>(1, spec.N)(rng);
        }
        std::vector<TrialResult> out;
        switch (spec.inequality) {
            case InequalityKind::vdc_zn: {
                const auto a = random_seq(spec.input, spec.N, seed, spec.alpha);
                out.push_back({seed, vdc_zn(periodize(a, spec.N), R)});
                break;
            }
            case InequalityKind::vdc_finite: {
                const auto a = random_seq(spec.input, spec.N + R, seed, spec.alpha);
                out.push_back({seed, vdc_finite(a, spec.N, R)});
                break;
            }
            case InequalityKind::shifted_corr_bound: {
                const auto a = random_seq(spec.input, spec.N, seed, spec.alpha);
                out.push_back({seed, shifted_corr_bound(periodize(a, spec.N), R)});
                break;
            }
            case InequalityKind::pkey: {
                std::vector<BoundedSeq> a;
                const std::size_t vertices = std::size_t{1} << (spec.k - 1);
                for (std::size_t mask = 0; mask < vertices; ++mask)
                    a.push_back(random_seq(spec.input, spec.k * spec.N, derive_seed(seed, 0xC0BE, mask), spec.alpha));
                for (auto& r : pkey_chain_check(a, spec.N, spec.k, spec.budget)) out.push_back({seed, r});
                break;
            }
        }
        return out;
    });
    std::vector<TrialResult> flat;
    for (auto& v : per_trial)
        for (auto& r : v) flat.push_back(std::move(r));
    return flat;
}

BatchSummary summarize(const std::string& check, const TrialSpec& spec,
                       const std::vector<TrialResult>& results) {
    BatchSummary s;
    s.check = check;
    s.N = spec.N;
    s.k = spec.inequality == InequalityKind::pkey ? spec.k : 0;
    s.trials = spec.trials;
    s.worst = std::numeric_limits<double>::infinity();
    for (const auto& r : results) {
        s.worst = std::min(s.worst, r.report.slack);
        if (!r.report.holds()) ++s.failures;
    }
    return s;
}

BatchSummary gowers_cross_path_batch(std::size_t N, unsigned k, std::size_t trials,
                                     std::uint64_t seed, double tol) {
    const auto errors = parallel_map<double>(trials, [&](std::size_t t) {
        const auto a = periodize(random_seq(RandomKind::unimodular, N, derive_seed(seed, 0x6011 + N * 8 + k, t)), N);
        const double d = gowers_zn_direct(a, k).value;
        double err = relative_error(d, gowers_zn_standard(a, k).value);
        if (k == 2) err = std::max(err, relative_error(d, gowers_u2_fourier(a).value));
        return err;
    });
    BatchSummary s;
    s.check = k == 2 ? "gowers_direct_standard_fourier" : "gowers_direct_standard";
    s.N = N;
    s.k = k;
    s.trials = trials;
    for (double e : errors) {
        s.worst = std::max(s.worst, e);
        if (!(e <= tol)) ++s.failures;
    }
    return s;
}

namespace {

std::vector<BatchSummary> gowers_suite(std::uint64_t seed, std::size_t trials) {
    std::vector<BatchSummary> out;
    for (std::size_t N : {8, 16, 32, 64})
        for (unsigned k : {1U, 2U, 3U}) out.push_back(gowers_cross_path_batch(N, k, trials, seed));
    return out;
}

std::vector<BatchSummary> vdc_suite(std::uint64_t seed, std::size_t trials) {
    std::vector<BatchSummary> out;
    for (std::size_t N : {32, 64, 1024}) {
        for (auto [kind, input] : {std::pair{InequalityKind::vdc_zn, RandomKind::unimodular},
                                   std::pair{InequalityKind::vdc_finite, RandomKind::unimodular},
                                   std::pair{InequalityKind::shifted_corr_bound, RandomKind::pm_one}}) {
            TrialSpec spec;
            spec.inequality = kind;
            spec.input = input;
            spec.N = N;
            spec.trials = trials;
            spec.seed = seed;
            out.push_back(summarize(to_string(kind), spec, run_trials(spec)));
        }
    }
    return out;
}

std::vector<BatchSummary> pkey_suite(std::uint64_t seed, std::size_t trials) {
    std::vector<BatchSummary> out;
    for (unsigned k : {2U, 3U}) {
        for (std::size_t N : {32, 64, 1024}) {
            TrialSpec spec;
            spec.inequality = InequalityKind::pkey;
            spec.input = k == 2 ? RandomKind::unimodular : RandomKind::pm_one;
            spec.N = N;
            spec.k = k;
            spec.trials = trials;
            spec.seed = seed;
            if (saturating_pow(N, k) > spec.budget) {
                BatchSummary s;
                s.check = "pkey";
                s.N = N;
                s.k = k;
                s.skipped = true;
                s.note = "N^k exceeds the lattice budget";
                out.push_back(s);
                continue;
            }
            out.push_back(summarize("pkey", spec, run_trials(spec)));
        }
    }
    return out;
}

std::vector<BatchSummary> pet_suite(std::uint64_t seed, std::size_t trials) {
    std::mt19937_64 rng(derive_seed(seed, 0x9E7, 0));
    BatchSummary s;
    s.check = "pet_trace_decreasing";
    s.trials = trials;
    const auto schedule = default_schedule();
    for (std::size_t t = 0; t < trials; ++t) {
        const PolyFamily fam = random_nice_family(rng, 3, 3);
        try {
            const auto trace = reduce_trace(fam, schedule);
            TypeVector prev = family_type(fam);
            bool ok = true;
            for (const auto& step : trace.steps) {
                const TypeVector t2 = family_type(step.family);
                if (!(t2 == step.type) || !type_less(t2, prev) || !is_nice(step.family)) ok = false;
                prev = t2;
            }
            if (prev.d != 1) ok = false;
            if (!ok) ++s.failures;
            s.worst = std::max(s.worst, static_cast<double>(trace.steps.size()));
        } catch (const std::exception& e) {
            ++s.failures;
            if (s.note.empty()) s.note = e.what();
        }
    }
    return {s};
}

std::vector<BatchSummary> heisenberg_suite(std::uint64_t seed, std::size_t trials) {
    std::mt19937_64 rng(derive_seed(seed, 0x4E15, 0));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> wide(-5.0, 5.0);
    std::uniform_int_distribution<int> lattice(-5, 5);

    BatchSummary pow_check{"heis_pow_vs_iteration", 0, 0, trials, 0, 0.0, false, "n <= 10^4"};
    for (std::size_t t = 0; t < trials; ++t) {
        const HeisenbergElement a{unit(rng), unit(rng), unit(rng)};
        HeisenbergElement it{};
        double worst = 0.0;
        for (std::int64_t n = 1; n <= 10'000; ++n) {
            it = heis_mul(it, a);
            const auto c = heis_pow(a, n);
            worst = std::max({worst, relative_error(c.x, it.x), relative_error(c.y, it.y),
                              relative_error(c.z, it.z)});
        }
        pow_check.worst = std::max(pow_check.worst, worst);
        if (worst > 1e-9) ++pow_check.failures;
    }

    BatchSummary well{"heis_reduce_well_defined", 0, 0, std::max<std::size_t>(trials, 1000), 0, 0.0, false, ""};
    for (std::size_t t = 0; t < well.trials; ++t) {
        const HeisenbergElement g{wide(rng), wide(rng), wide(rng)};
        const LatticeElement gamma{lattice(rng), lattice(rng), lattice(rng)};
        const double d = heis_point_distance(heis_reduce(g).point,
                                             heis_reduce(heis_mul(g, gamma.as_element())).point);
        well.worst = std::max(well.worst, d);
        if (d > 1e-9) ++well.failures;
    }

    BatchSummary witness{"heis_noncommutation_witness", 0, 0, 1, 0, 0.0, false, ""};
    const HeisenbergElement e1{1, 0, 0}, e2{0, 1, 0};
    if (!(heis_mul(e1, e2) == HeisenbergElement{1, 1, 1}) || !(heis_mul(e2, e1) == HeisenbergElement{1, 1, 0}))
        witness.failures = 1;
    return {pow_check, well, witness};
}

}  // namespace

std::vector<BatchSummary> run_suite(const std::string& suite, std::uint64_t seed,
                                    std::size_t trials) {
    std::vector<BatchSummary> out;
    auto append = [&out](std::vector<BatchSummary> v) { out.insert(out.end(), v.begin(), v.end()); };
    const bool all = suite == "all";
    bool known = all;
    if (all || suite == "gowers") { append(gowers_suite(seed, trials)); known = true; }
    if (all || suite == "vdc") { append(vdc_suite(seed, trials)); known = true; }
    if (all || suite == "pkey") { append(pkey_suite(seed, trials)); known = true; }
    if (all || suite == "pet") { append(pet_suite(seed, trials)); known = true; }
    if (all || suite == "heisenberg") { append(heisenberg_suite(seed, trials)); known = true; }
    if (!known) throw std::invalid_argument("unknown verify suite '" + suite + "'");
    return out;
}

}  // namespace ergolab

#include "ergolab/nil.hpp"

#include <random>
#include <sstream>
#include <stdexcept>

#include "ergolab/parallel.hpp"

namespace ergolab {

namespace {

cd eval_at(const ObservableSpec& f, const HeisenbergPoint& p) {
    const auto c = p.coords();
    return f(c);
}

void check_terms(const std::vector<NilTerm>& terms) {
    if (terms.empty()) throw std::invalid_argument("nil_polynomial_average: no terms");
    for (const auto& t : terms) check_nil_observable(t.f);
}

cd term_product(const std::vector<NilTerm>& terms, std::int64_t n) {
    cd prod = 1.0;
    for (const auto& t : terms) prod *= eval_at(t.f, heis_orbit_point(t.a, t.p(n), t.x));
    return prod;
}

}  // namespace

void check_nil_observable(const ObservableSpec& f) {
    if (f.dim() != 3) {
        std::ostringstream os;
        os << "nil observable has dimension " << f.dim() << ", expected 3";
        throw std::invalid_argument(os.str());
    }
    std::mt19937_64 rng(0x5eed);
    std::uniform_real_distribution<double> coord(-3.0, 3.0);
    std::uniform_int_distribution<int> lattice(-3, 3);
    double scale = 1.0;
    for (const auto& t : f.terms()) {
        double s = 0.0;
        for (int k : t.frequency) s += std::abs(k);
        scale = std::max(scale, s * std::abs(t.coefficient));
    }
    for (int trial = 0; trial < 64; ++trial) {
        const HeisenbergElement g{coord(rng), coord(rng), coord(rng)};
        const LatticeElement gamma{lattice(rng), lattice(rng), lattice(rng)};
        const cd lhs = eval_at(f, heis_reduce(g).point);
        const cd rhs = eval_at(f, heis_reduce(heis_mul(g, gamma.as_element())).point);
        if (std::abs(lhs - rhs) > 1e-8 * scale) {
            throw std::invalid_argument("nil observable is not well defined on the nilmanifold");
        }
    }
}

BoundedSeq nilsequence_sample(const HeisenbergElement& a, const HeisenbergElement& x0,
                              const ObservableSpec& f, std::size_t N) {
    if (N == 0) throw std::invalid_argument("nilsequence_sample: N must be >= 1");
    check_nil_observable(f);
    auto values = parallel_map<cd>(N, [&](std::size_t i) {
        return eval_at(f, heis_orbit_point(a, static_cast<std::int64_t>(i + 1), x0));
    });
    return BoundedSeq(std::move(values), f.bound());
}

cd nil_polynomial_average(const std::vector<NilTerm>& terms, std::size_t N) {
    if (N == 0) throw std::invalid_argument("nil_polynomial_average: N must be >= 1");
    check_terms(terms);
    const cd total = deterministic_sum<cd>(N, [&](std::size_t i) {
        return term_product(terms, static_cast<std::int64_t>(i + 1));
    });
    return total / static_cast<double>(N);
}

ConvergenceReport nil_convergence_scan(const std::vector<NilTerm>& terms,
                                       const std::vector<std::size_t>& grid) {
    check_scan_grid(grid, "nil_convergence_scan");
    check_terms(terms);
    const std::size_t max_n = grid.back();
    const auto values = parallel_map<cd>(max_n, [&](std::size_t i) {
        return term_product(terms, static_cast<std::int64_t>(i + 1));
    });
    ConvergenceReport r;
    r.grid = grid;
    CompensatedSum<cd> prefix;
    std::size_t next = 0;
    for (std::size_t n = 1; n <= max_n; ++n) {
        prefix.add(values[n - 1]);
        if (n == grid[next]) {
            r.averages.push_back(prefix.value() / static_cast<double>(n));
            ++next;
        }
    }
    r.oscillation = top_half_oscillation(r.averages);
    return r;
}

}  // namespace ergolab

#include "ergolab/polyavg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "ergolab/parallel.hpp"

namespace ergolab {

GrowthSchedule::GrowthSchedule(double theta, int d) : theta_(theta), d_(d) {
    if (d_ < 1) throw std::invalid_argument("GrowthSchedule: degree must be >= 1");
    if (!(theta_ > 0.0 && theta_ * d_ < 1.0)) {
        std::ostringstream os;
        os << "GrowthSchedule: theta = " << theta_ << " must lie in (0, 1/" << d_ << ")";
        throw std::invalid_argument(os.str());
    }
}

GrowthSchedule::GrowthSchedule(std::vector<std::pair<std::size_t, std::size_t>> table, int d)
    : d_(d), table_(std::move(table)) {
    if (d_ < 1) throw std::invalid_argument("GrowthSchedule: degree must be >= 1");
    if (table_.empty()) throw std::invalid_argument("GrowthSchedule: empty table");
    std::sort(table_.begin(), table_.end());
    for (std::size_t i = 0; i < table_.size(); ++i) {
        const auto [N, b] = table_[i];
        if (N == 0 || b == 0) throw std::invalid_argument("GrowthSchedule: N and b(N) must be >= 1");
        if (i > 0 && (N == table_[i - 1].first || b < table_[i - 1].second))
            throw std::invalid_argument("GrowthSchedule: table must be strictly increasing in N and nondecreasing in b");
        // b(N)^d < N on the grid, and the ratio b(N)/N^(1/d) must not grow.
        if (std::pow(static_cast<double>(b), d_) >= static_cast<double>(N)) {
            std::ostringstream os;
            os << "GrowthSchedule: b(" << N << ") = " << b << " is not below N^(1/" << d_ << ")";
            throw std::invalid_argument(os.str());
        }
        if (i > 0) {
            const auto ratio = [this](std::size_t n, std::size_t bn) {
                return static_cast<double>(bn) / std::pow(static_cast<double>(n), 1.0 / d_);
            };
            if (ratio(N, b) > ratio(table_[i - 1].first, table_[i - 1].second) + 1e-12)
                throw std::invalid_argument("GrowthSchedule: b(N)/N^(1/d) increases along the table");
        }
    }
}

std::size_t GrowthSchedule::operator()(std::size_t N) const {
    if (!table_.empty()) {
        auto it = std::lower_bound(table_.begin(), table_.end(), std::make_pair(N, std::size_t{0}));
        if (it == table_.end() || it->first != N) {
            throw std::out_of_range("GrowthSchedule: N = " + std::to_string(N) + " not in the table");
        }
        return it->second;
    }
    const double v = std::pow(static_cast<double>(N), theta_);
    const double r = std::round(v);
    const double snapped = std::fabs(v - r) <= 1e-9 * std::max(1.0, v) ? r : std::floor(v);
    return std::max<std::size_t>(1, static_cast<std::size_t>(snapped));
}

PolyAvgSpec::PolyAvgSpec(std::vector<PolyTerm> terms, State start, GrowthSchedule schedule)
    : terms_(std::move(terms)), start_(std::move(start)), schedule_(std::move(schedule)) {
    if (terms_.empty()) throw std::invalid_argument("PolyAvgSpec: no terms");
    int max_degree = 0;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        const auto& t = terms_[i];
        if (t.p.is_constant())
            throw std::invalid_argument("PolyAvgSpec: p_" + std::to_string(i + 1) + " = " + to_string(t.p) + " is constant");
        for (std::size_t j = 0; j < i; ++j) {
            if ((t.p - terms_[j].p).is_constant()) {
                std::ostringstream os;
                os << "PolyAvgSpec: p_" << j + 1 << " - p_" << i + 1 << " is constant";
                throw std::invalid_argument(os.str());
            }
        }
        if (!t.system.same_space(terms_.front().system))
            throw std::invalid_argument("PolyAvgSpec: transformations act on different spaces");
        if (t.observable.dim() != t.system.dim())
            throw std::invalid_argument("PolyAvgSpec: observable dimension does not match " + t.system.name());
        (void)t.system.normalize(start_);
        max_degree = std::max(max_degree, t.p.degree());
    }
    if (schedule_.degree() < max_degree) {
        std::ostringstream os;
        os << "PolyAvgSpec: schedule is admissible for degree " << schedule_.degree()
           << " but the family has degree " << max_degree;
        throw std::invalid_argument(os.str());
    }
}

double PolyAvgSpec::bound() const {
    double b = 1.0;
    for (const auto& t : terms_) b *= t.observable.bound();
    return b;
}

PolyAvgValue poly_evaluate(const PolyAvgSpec& spec, std::size_t N, std::uint64_t budget,
                           std::uint64_t orbit_budget) {
    if (N == 0) throw std::invalid_argument("poly_average: N must be >= 1");
    const std::size_t b = spec.schedule()(N);
    if (static_cast<double>(N) * static_cast<double>(b) > static_cast<double>(budget)) {
        std::ostringstream os;
        os << "poly_average: N b(N) = " << N << " * " << b << " exceeds budget " << budget;
        throw ResourceError(os.str());
    }
    const auto& terms = spec.terms();
    const std::size_t L = terms.size();
    const auto Nd = static_cast<std::int64_t>(N);

    std::vector<std::vector<std::int64_t>> offsets(L, std::vector<std::int64_t>(b));
    std::vector<std::unique_ptr<OrbitTable>> tables(L);
    std::vector<const OrbitTable*> table_of(L);
    std::uint64_t orbit_points = 0;
    for (std::size_t i = 0; i < L; ++i) {
        std::int64_t lo = std::numeric_limits<std::int64_t>::max();
        std::int64_t hi = std::numeric_limits<std::int64_t>::min();
        for (std::size_t n = 1; n <= b; ++n) {
            const std::int64_t v = terms[i].p(static_cast<std::int64_t>(n));
            offsets[i][n - 1] = v;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        const std::int64_t tlo = 1 + lo, thi = Nd + hi;
        orbit_points += static_cast<std::uint64_t>(thi - std::min<std::int64_t>(tlo, 0) + 1);
        if (orbit_points > orbit_budget) {
            std::ostringstream os;
            os << "poly_average: orbit tables need " << orbit_points << " entries, budget " << orbit_budget;
            throw ResourceError(os.str());
        }
        table_of[i] = nullptr;
        for (std::size_t j = 0; j < i; ++j) {
            if (terms[j].system == terms[i].system && terms[j].observable == terms[i].observable &&
                tables[j] && tables[j]->lo() <= tlo && tables[j]->hi() >= thi) {
                table_of[i] = tables[j].get();
                break;
            }
        }
        if (!table_of[i]) {
            // Shared tables span the union of the ranges of all equal terms.
            std::int64_t ulo = tlo, uhi = thi;
            for (std::size_t j = i + 1; j < L; ++j) {
                if (terms[j].system == terms[i].system && terms[j].observable == terms[i].observable) {
                    for (std::size_t n = 1; n <= b; ++n) {
                        const std::int64_t v = terms[j].p(static_cast<std::int64_t>(n));
                        ulo = std::min(ulo, 1 + v);
                        uhi = std::max(uhi, Nd + v);
                    }
                }
            }
            tables[i] = std::make_unique<OrbitTable>(terms[i].system, terms[i].observable,
                                                     spec.start(), ulo, uhi);
            table_of[i] = tables[i].get();
        }
    }

    const ChunkLayout layout(N);
    std::vector<CompensatedSum<cd>> sums(layout.chunks);
    std::vector<CompensatedSum<double>> squares(layout.chunks);
    const double bd = static_cast<double>(b);
    run_chunks(layout.chunks, [&](std::size_t c) {
        for (std::size_t mi = layout.begin(c); mi < layout.end(c); ++mi) {
            const auto m = static_cast<std::int64_t>(mi + 1);
            CompensatedSum<cd> inner;
            for (std::size_t n = 0; n < b; ++n) {
                cd prod = (*table_of[0])(m + offsets[0][n]);
                for (std::size_t i = 1; i < L; ++i) prod *= (*table_of[i])(m + offsets[i][n]);
                inner.add(prod);
            }
            const cd s = inner.value();
            sums[c].add(s);
            squares[c].add(std::norm(s / bd));
        }
    });
    CompensatedSum<cd> total;
    CompensatedSum<double> total_sq;
    for (std::size_t c = 0; c < layout.chunks; ++c) {
        total.add(sums[c].value());
        total_sq.add(squares[c].value());
    }
    const double Ndd = static_cast<double>(N);
    return {N, b, total.value() / (Ndd * bd), total_sq.value() / Ndd};
}

cd poly_average(const PolyAvgSpec& spec, std::size_t N, std::uint64_t budget,
                std::uint64_t orbit_budget) {
    return poly_evaluate(spec, N, budget, orbit_budget).average;
}

double poly_square_mean(const PolyAvgSpec& spec, std::size_t N, std::uint64_t budget,
                        std::uint64_t orbit_budget) {
    return poly_evaluate(spec, N, budget, orbit_budget).square_mean;
}

ConvergenceReport poly_convergence_scan(const PolyAvgSpec& spec,
                                        const std::vector<std::size_t>& grid,
                                        std::uint64_t budget, std::uint64_t orbit_budget) {
    check_scan_grid(grid, "poly_convergence_scan");
    ConvergenceReport r;
    r.grid = grid;
    for (std::size_t N : grid) r.averages.push_back(poly_average(spec, N, budget, orbit_budget));
    r.oscillation = top_half_oscillation(r.averages);
    return r;
}

}  // namespace ergolab

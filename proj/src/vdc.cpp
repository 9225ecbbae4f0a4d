#include "ergolab/vdc.hpp"

#include <limits>
#include <sstream>
#include <stdexcept>

#include "ergolab/gowers.hpp"
#include "ergolab/parallel.hpp"

namespace ergolab {

namespace {

// E_{n in [1,N]} a(n + s) conj a(n) on Z_N, for s in [0, N).
cd cyclic_correlation(std::span<const cd> a, std::size_t s) {
    const std::size_t N = a.size();
    CompensatedSum<cd> acc;
    for (std::size_t n = 0; n < N; ++n) {
        const std::size_t j = n + s < N ? n + s : n + s - N;
        acc.add(a[j] * std::conj(a[n]));
    }
    return acc.value() / static_cast<double>(N);
}

double mean_norm_sq(std::span<const cd> a) {
    CompensatedSum<double> acc;
    for (const cd& v : a) acc.add(std::norm(v));
    return acc.value() / static_cast<double>(a.size());
}

double norm_sq_of_mean(std::span<const cd> a) {
    CompensatedSum<cd> acc;
    for (const cd& v : a) acc.add(v);
    return std::norm(acc.value() / static_cast<double>(a.size()));
}

void require_unit_bound(std::span<const cd> a, const char* op) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::abs(a[i]) > 1.0 + 1e-12) {
            std::ostringstream os;
            os << op << ": |a(" << i + 1 << ")| = " << std::abs(a[i]) << " exceeds 1";
            throw std::invalid_argument(os.str());
        }
    }
}

}  // namespace

InequalityReport make_report(std::string name, double lhs, double rhs, std::size_t N,
                             std::size_t R, unsigned k) {
    return {std::move(name), lhs, rhs, rhs - lhs, N, R, k};
}

InequalityReport vdc_zn(const PeriodicSeq& a, std::size_t R) {
    if (R == 0) throw std::invalid_argument("vdc_zn: R must be >= 1");
    const auto v = a.values();
    const std::size_t N = v.size();
    CompensatedSum<double> weighted;
    for (std::size_t r = 1; r < R; ++r) {
        const double w = static_cast<double>(R - r);
        weighted.add(w * cyclic_correlation(v, r % N).real());
    }
    const double Rd = static_cast<double>(R);
    const double rhs = 2.0 * weighted.value() / (Rd * Rd) + mean_norm_sq(v) / Rd;
    return make_report("vdc_zn", norm_sq_of_mean(v), rhs, N, R, 0);
}

InequalityReport vdc_finite(const BoundedSeq& a, std::size_t N, std::size_t R) {
    if (N == 0) throw std::invalid_argument("vdc_finite: N must be >= 1");
    if (R == 0 || R > N) {
        std::ostringstream os;
        os << "vdc_finite: R = " << R << " must lie in [1, N] with N = " << N;
        throw std::invalid_argument(os.str());
    }
    if (a.length() < N + R) {
        std::ostringstream os;
        os << "vdc_finite: sequence length " << a.length() << " is shorter than N + R = " << N + R;
        throw std::invalid_argument(os.str());
    }
    const auto v = a.values();
    require_unit_bound(v.first(N + R), "vdc_finite");

    CompensatedSum<double> weighted;
    for (std::size_t r = 1; r < R; ++r) {
        CompensatedSum<cd> corr;
        for (std::size_t n = 0; n < N; ++n) corr.add(v[n + r] * std::conj(v[n]));
        const double c = corr.value().real() / static_cast<double>(N);
        weighted.add(static_cast<double>(R - r) * c);
    }
    const double Rd = static_cast<double>(R);
    const double Nd = static_cast<double>(N);
    const double rhs = 4.0 * (weighted.value() / (Rd * Rd) + 1.0 / Rd + Rd / Nd);
    return make_report("vdc_finite", norm_sq_of_mean(v.first(N)), rhs, N, R, 0);
}

InequalityReport shifted_corr_bound(const PeriodicSeq& a, std::size_t R) {
    if (R == 0) throw std::invalid_argument("shifted_corr_bound: R must be >= 1");
    const auto v = a.values();
    require_unit_bound(v, "shifted_corr_bound");
    const std::size_t N = v.size();
    std::vector<double> corr_sq(N);
    for (std::size_t s = 0; s < N; ++s) corr_sq[s] = std::norm(cyclic_correlation(v, s));

    // n runs over [1, N]; n = N is the zero shift.
    CompensatedSum<double> lhs;
    for (std::size_t n = 1; n <= N; ++n) lhs.add(corr_sq[n % N]);
    CompensatedSum<double> rhs;
    for (std::size_t r = 1; r <= R; ++r) rhs.add(corr_sq[r % N]);
    const double Rd = static_cast<double>(R);
    return make_report("shifted_corr_bound", lhs.value() / static_cast<double>(N),
                       2.0 * rhs.value() / Rd + 1.0 / Rd, N, R, 0);
}

std::vector<UkComparisonRow> uk_comparison(const BoundedSeq& a, unsigned k,
                                           const std::vector<std::size_t>& grid,
                                           double threshold, std::uint64_t budget) {
    if (grid.empty()) throw std::invalid_argument("uk_comparison: grid is empty");
    require_unit_bound(a.values(), "uk_comparison");
    std::vector<UkComparisonRow> rows;
    rows.reserve(grid.size());
    for (std::size_t N : grid) {
        UkComparisonRow row;
        row.N = N;
        const PeriodicSeq p = periodize(a, N);
        row.zn_norm = k == 2 ? gowers_u2_fourier(p).value : gowers_zn_direct(p, k, budget).value;
        row.estimator = gowers_estimator(a, k, N, budget).value;
        row.ratio = row.estimator > 0.0 ? row.zn_norm / row.estimator
                                        : std::numeric_limits<double>::infinity();
        row.flagged = row.zn_norm > threshold * row.estimator;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace ergolab

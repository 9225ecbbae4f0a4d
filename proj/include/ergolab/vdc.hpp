#pragma once

// van der Corput type estimates as checkable finite inequalities.

#include <cstdint>
#include <string>
#include <vector>

#include "ergolab/seq.hpp"

namespace ergolab {

inline constexpr double kSlackTolerance = 1e-9;

struct InequalityReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;  // rhs - lhs
    std::size_t N = 0;
    std::size_t R = 0;
    unsigned k = 0;

    bool holds(double tol = kSlackTolerance) const { return slack >= -tol; }
};

InequalityReport make_report(std::string name, double lhs, double rhs, std::size_t N,
                             std::size_t R, unsigned k);

/// |E_n a(n)|^2 <= 2 E_{r<=R} (1 - r/R) Re E_n a(n+r) conj a(n) + E_n |a(n)|^2 / R,
/// cyclic indexing on Z_N.
InequalityReport vdc_zn(const PeriodicSeq& a, std::size_t R);

/// |E_{n<=N} a(n)|^2 <= 4 (E_{r<=R} (1 - r/R) Re E_{n<=N} a(n+r) conj a(n) + 1/R + R/N)
/// with literal entries a(n + r); needs length >= N + R, |a| <= 1, 1 <= R <= N.
InequalityReport vdc_finite(const BoundedSeq& a, std::size_t N, std::size_t R);

/// E_n |E_m a(m+n) conj a(m)|^2 <= 2 E_{r<=R} |E_m a(m+r) conj a(m)|^2 + 1/R on Z_N,
/// for |a| <= 1.
InequalityReport shifted_corr_bound(const PeriodicSeq& a, std::size_t R);

struct UkComparisonRow {
    std::size_t N = 0;
    double zn_norm = 0.0;    // ||a_N||_{U_k(Z_N)}
    double estimator = 0.0;  // diagonal truncation at N
    double ratio = 0.0;      // zn_norm / estimator, +inf if the estimator vanishes
    bool flagged = false;    // zn_norm > threshold * estimator
};

/// Paired Z_N norms and estimator values along a grid of truncations.
std::vector<UkComparisonRow> uk_comparison(const BoundedSeq& a, unsigned k,
                                           const std::vector<std::size_t>& grid,
                                           double threshold = 10.0,
                                           std::uint64_t budget = kDefaultBudget);

}  // namespace ergolab

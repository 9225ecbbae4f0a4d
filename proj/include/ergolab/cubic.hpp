#pragma once

// Cubic multiple ergodic averages over arbitrary (possibly non-commuting)
// vertex assignments, the associated square means, the finite chain of
// inequalities behind the key estimate, and convergence scans.

#include <array>
#include <cstdint>
#include <vector>

#include "ergolab/seq.hpp"
#include "ergolab/vdc.hpp"

namespace ergolab {

struct VertexEntry {
    SystemSpec system;
    ObservableSpec observable;
};

/// T_eps and f_eps for every nonzero eps in {0,1}^k (entry mask - 1 holds
/// eps = mask), plus the common start point.
class VertexAssignment {
public:
    VertexAssignment(unsigned k, std::vector<VertexEntry> entries, State start);

    /// Same system and observable at every vertex.
    static VertexAssignment uniform(unsigned k, const VertexEntry& entry, State start);

    unsigned k() const { return k_; }
    const VertexEntry& at(unsigned mask) const { return entries_[mask - 1]; }
    const std::vector<VertexEntry>& entries() const { return entries_; }
    const State& start() const { return start_; }
    double bound() const;

private:
    unsigned k_;
    std::vector<VertexEntry> entries_;
    State start_;
};

/// T_eps and f_eps for every eps in {0,1}^{k-1}, origin included (entry
/// mask holds eps = mask). Used by the square means.
class CubeAssignment {
public:
    CubeAssignment(unsigned k, std::vector<VertexEntry> entries, State start);

    unsigned k() const { return k_; }
    const VertexEntry& at(unsigned mask) const { return entries_[mask]; }
    const std::vector<VertexEntry>& entries() const { return entries_; }
    const State& start() const { return start_; }

private:
    unsigned k_;
    std::vector<VertexEntry> entries_;
    State start_;
};

inline constexpr unsigned kMaxCubicDim = 4;

/// True when every non-constant vertex has weight 1, so the lattice sum
/// factors into one-dimensional averages.
bool decouples(const VertexAssignment& va);

/// (1/N^k) sum_{n in [1,N]^k} prod_{eps != 0} f_eps(T_eps^{eps.n} x).
cd cubic_average(const VertexAssignment& va, std::size_t N,
                 std::uint64_t budget = kDefaultBudget);

/// E_{n in [1,N]^{k-1}} |E_{m in [1,N]} prod_{eps in V_{k-1}} f_eps(T_eps^{m + eps.n} x)|^2.
double cubic_square_mean(const CubeAssignment& ca, std::size_t N,
                         std::uint64_t budget = kDefaultBudget);

/// Same square mean for explicit sequences a_eps (mask-indexed, literal
/// entries, conjugated at odd-weight vertices). Needs length >= k N.
double sequence_square_mean(const std::vector<BoundedSeq>& a, unsigned k, std::size_t N,
                            std::uint64_t budget = kDefaultBudget);

/// The three exact links, with M = floor(N/k) and c = N/M:
///  (i)   window average over [1,M]         <= c^2     * padded average over n in [1,M]^{k-1}
///  (ii)  c^2 * padded average              <= c^{k+1} * padded full-lattice average
///  (iii) padded full-lattice average       <= prod_eps ||a_{eps,N}||^2_{U_k(Z_N)}
/// a is mask-indexed over {0,1}^{k-1}; the origin sequence is cut off after M.
std::array<InequalityReport, 3> pkey_chain_check(const std::vector<BoundedSeq>& a,
                                                 std::size_t N, unsigned k,
                                                 std::uint64_t budget = kDefaultBudget);

struct ConvergenceReport {
    std::vector<std::size_t> grid;
    std::vector<cd> averages;
    double oscillation = 0.0;  // max |A_i - A_j| over the top half of the grid
};

/// Max pairwise distance among averages[i], i >= size / 2.
double top_half_oscillation(const std::vector<cd>& averages);

/// Validates a scan grid: at least 4 points, strictly increasing, no zeros.
void check_scan_grid(const std::vector<std::size_t>& grid, const char* op);

ConvergenceReport convergence_scan(const VertexAssignment& va,
                                   const std::vector<std::size_t>& grid,
                                   std::uint64_t budget = kDefaultBudget);

/// 2^lo, 2^(lo+1), ..., 2^hi.
std::vector<std::size_t> geometric_grid(unsigned lo, unsigned hi);

}  // namespace ergolab

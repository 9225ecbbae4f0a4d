#pragma once

// Two-window polynomial multiple averages
//   (1/(N b(N))) sum_{m <= N, n <= b(N)} prod_i f_i(T_i^{m + p_i(n)} x)
// and their square means.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ergolab/cubic.hpp"
#include "ergolab/pet.hpp"
#include "ergolab/seq.hpp"

namespace ergolab {

inline constexpr std::uint64_t kDefaultOrbitBudget = std::uint64_t{1} << 26;

/// b(N) = max(1, floor(N^theta)) with 0 < theta < 1/d, or an explicit
/// table of (N, b(N)) pairs.
class GrowthSchedule {
public:
    GrowthSchedule(double theta, int d);
    GrowthSchedule(std::vector<std::pair<std::size_t, std::size_t>> table, int d);

    double theta() const { return theta_; }
    int degree() const { return d_; }
    bool tabulated() const { return !table_.empty(); }

    std::size_t operator()(std::size_t N) const;

private:
    double theta_ = 0.0;
    int d_ = 1;
    std::vector<std::pair<std::size_t, std::size_t>> table_;
};

struct PolyTerm {
    SystemSpec system;
    ObservableSpec observable;
    IntPoly p;
};

class PolyAvgSpec {
public:
    PolyAvgSpec(std::vector<PolyTerm> terms, State start, GrowthSchedule schedule);

    const std::vector<PolyTerm>& terms() const { return terms_; }
    const State& start() const { return start_; }
    const GrowthSchedule& schedule() const { return schedule_; }
    double bound() const;

private:
    std::vector<PolyTerm> terms_;
    State start_;
    GrowthSchedule schedule_;
};

struct PolyAvgValue {
    std::size_t N = 0;
    std::size_t b = 0;
    cd average;
    double square_mean = 0.0;
};

/// Both displayed quantities from one pass over the window.
PolyAvgValue poly_evaluate(const PolyAvgSpec& spec, std::size_t N,
                           std::uint64_t budget = kDefaultBudget,
                           std::uint64_t orbit_budget = kDefaultOrbitBudget);

cd poly_average(const PolyAvgSpec& spec, std::size_t N, std::uint64_t budget = kDefaultBudget,
                std::uint64_t orbit_budget = kDefaultOrbitBudget);

/// (1/N) sum_{m <= N} |E_{n <= b(N)} prod_i f_i(T_i^{m + p_i(n)} x)|^2.
double poly_square_mean(const PolyAvgSpec& spec, std::size_t N,
                        std::uint64_t budget = kDefaultBudget,
                        std::uint64_t orbit_budget = kDefaultOrbitBudget);

ConvergenceReport poly_convergence_scan(const PolyAvgSpec& spec,
                                        const std::vector<std::size_t>& grid,
                                        std::uint64_t budget = kDefaultBudget,
                                        std::uint64_t orbit_budget = kDefaultOrbitBudget);

}  // namespace ergolab

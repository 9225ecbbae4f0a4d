#pragma once

// Seeded property batches for the exact finite-N inequalities and the
// cross-path identities.

#include <cstdint>
#include <string>
#include <vector>

#include "ergolab/seq.hpp"
#include "ergolab/vdc.hpp"

namespace ergolab {

/// Independent per-trial seed derived from a base seed and a stream tag.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index);

enum class InequalityKind { vdc_zn, vdc_finite, shifted_corr_bound, pkey };

std::string to_string(InequalityKind kind);
InequalityKind parse_inequality_kind(const std::string& name);

struct TrialSpec {
    InequalityKind inequality = InequalityKind::vdc_zn;
    RandomKind input = RandomKind::unimodular;
    double alpha = 0.0;            // for quadratic_weyl input
    std::size_t N = 64;
    std::vector<std::size_t> R;    // cycled through; empty: drawn uniformly from [1, N]
    unsigned k = 2;                // pkey only
    std::size_t trials = 100;
    std::uint64_t seed = 0;
    std::uint64_t budget = kDefaultBudget;
};

struct TrialResult {
    std::uint64_t seed = 0;
    InequalityReport report;
};

/// One result per trial (three per trial for pkey), in trial order.
std::vector<TrialResult> run_trials(const TrialSpec& spec);

struct BatchSummary {
    std::string check;
    std::size_t N = 0;
    unsigned k = 0;
    std::size_t trials = 0;
    std::size_t failures = 0;
    double worst = 0.0;  // smallest slack, or largest relative error
    bool skipped = false;
    std::string note;
};

BatchSummary summarize(const std::string& check, const TrialSpec& spec,
                       const std::vector<TrialResult>& results);

/// |direct - standard| and, for k = 2, |direct - fourier| relative errors
/// over random unimodular inputs.
BatchSummary gowers_cross_path_batch(std::size_t N, unsigned k, std::size_t trials,
                                     std::uint64_t seed, double tol = 1e-9);

/// Runs the named suite ("all", "gowers", "vdc", "pkey", "pet", "heisenberg").
std::vector<BatchSummary> run_suite(const std::string& suite, std::uint64_t seed,
                                    std::size_t trials);

}  // namespace ergolab

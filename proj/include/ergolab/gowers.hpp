#pragma once

// Uniformity seminorms: the Gowers norm on Z_N by three independent routes,
// and the diagonal finite-truncation estimator of the limsup norm on N.

#include <cstdint>
#include <string>

#include "ergolab/numeric.hpp"
#include "ergolab/seq.hpp"

namespace ergolab {

enum class GowersMethod { direct, standard_form, fourier, estimator };

std::string to_string(GowersMethod m);

struct GowersResult {
    unsigned k = 1;
    double value = 0.0;
    std::size_t N = 0;
    GowersMethod method = GowersMethod::direct;
};

/// ||a||_{U_k(Z_N)} from the averaged squared inner means:
/// ( E_{n in [1,N]^{k-1}} |E_m prod_{eps in V_{k-1}} C^{|eps|} a(m + eps.n)|^2 )^{1/2^k}.
/// k = 1 gives |E_n a(n)|. Requires N^k <= budget.
GowersResult gowers_zn_direct(const PeriodicSeq& a, unsigned k,
                              std::uint64_t budget = kDefaultBudget);

/// Same norm expanded into the full 2^k-fold average over (m, n_1, ..., n_k),
/// evaluated through iterated multiplicative derivatives without the
/// squared-modulus shortcut. Visits N^{k+1} points; requires that to fit the budget.
GowersResult gowers_zn_standard(const PeriodicSeq& a, unsigned k,
                                std::uint64_t budget = kDefaultBudget);

/// U_2 norm from the fourth moment of the normalised DFT. O(N log N).
GowersResult gowers_u2_fourier(const PeriodicSeq& a);

/// Diagonal truncation of the limsup norm: every nested average is taken
/// over [1, N] with literal (non-cyclic) shifts. Needs length >= k N.
/// An estimator of the limit, not the limit.
GowersResult gowers_estimator(const BoundedSeq& a, unsigned k, std::size_t N,
                              std::uint64_t budget = kDefaultBudget);

struct RecursiveIdentityGap {
    double shifted_side;  // E_{r in [1,R]} est(S_r a . conj a, k, N)^{2^k}
    double lifted_side;   // est(a, k+1, N)^{2^{k+1}}
    double gap;
};

/// Finite-truncation check of the recursive identity linking U_k of the
/// multiplicative derivatives with U_{k+1}. Both sides use truncation N;
/// for R = N they coincide up to rounding. Needs length >= (k+1) N + R.
RecursiveIdentityGap recursive_identity_gap(const BoundedSeq& a, unsigned k, std::size_t N,
                                            std::size_t R,
                                            std::uint64_t budget = kDefaultBudget);

}  // namespace ergolab

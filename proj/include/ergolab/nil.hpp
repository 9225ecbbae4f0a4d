#pragma once

// Nilsequences on the Heisenberg nilmanifold and polynomial averages along
// interval Folner sets.

#include <vector>

#include "ergolab/cubic.hpp"
#include "ergolab/heisenberg.hpp"
#include "ergolab/pet.hpp"
#include "ergolab/seq.hpp"

namespace ergolab {

/// Rejects observables that are not three-dimensional or whose value on a
/// coset depends on the chosen representative (random probe).
void check_nil_observable(const ObservableSpec& f);

/// f evaluated at the reduced points of a^n x0, n = 1..N. x0 may be any
/// representative of its coset.
BoundedSeq nilsequence_sample(const HeisenbergElement& a, const HeisenbergElement& x0,
                              const ObservableSpec& f, std::size_t N);

struct NilTerm {
    HeisenbergElement a;
    IntPoly p;
    ObservableSpec f;
    HeisenbergElement x;
};

/// (1/N) sum_{n <= N} prod_i f_i(a_i^{p_i(n)} x_i).
cd nil_polynomial_average(const std::vector<NilTerm>& terms, std::size_t N);

/// Averages over every N of the grid from one pass of samples.
ConvergenceReport nil_convergence_scan(const std::vector<NilTerm>& terms,
                                       const std::vector<std::size_t>& grid);

}  // namespace ergolab

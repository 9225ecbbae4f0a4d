#pragma once

// Three-dimensional Heisenberg group in Mal'cev coordinates and its
// nilmanifold G/Gamma, Gamma = integer-coordinate elements.
//
// Group law: (x, y, z) * (x', y', z') = (x + x', y + y', z + z' + x * y').

#include <array>
#include <cstdint>
#include <iosfwd>

namespace ergolab {

struct HeisenbergElement {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend bool operator==(const HeisenbergElement&, const HeisenbergElement&) = default;
};

/// Element of the lattice Gamma.
struct LatticeElement {
    std::int64_t x = 0;
    std::int64_t y = 0;
    std::int64_t z = 0;

    HeisenbergElement as_element() const {
        return {static_cast<double>(x), static_cast<double>(y), static_cast<double>(z)};
    }
    friend bool operator==(const LatticeElement&, const LatticeElement&) = default;
};

/// Point of G/Gamma stored by its representative in the fundamental
/// domain [0, 1)^3.
struct HeisenbergPoint {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    HeisenbergElement as_element() const { return {x, y, z}; }
    std::array<double, 3> coords() const { return {x, y, z}; }
    friend bool operator==(const HeisenbergPoint&, const HeisenbergPoint&) = default;
};

struct Reduction {
    HeisenbergPoint point;
    LatticeElement lattice;  // g == point * lattice
};

HeisenbergElement heis_mul(const HeisenbergElement& a, const HeisenbergElement& b);
HeisenbergElement heis_inv(const HeisenbergElement& a);

/// a^n via the closed form (n a_x, n a_y, n a_z + C(n, 2) a_x a_y).
HeisenbergElement heis_pow(const HeisenbergElement& a, std::int64_t n);

/// Fundamental-domain representative of g Gamma together with the lattice
/// part, so that g = point * lattice.
Reduction heis_reduce(const HeisenbergElement& g);

/// Reduced point of a^n * x0 for large |n|. Uses error-free products so
/// the fractional parts stay accurate when the raw coordinates reach
/// 1e15; requires C(n, 2) < 2^53.
HeisenbergPoint heis_orbit_point(const HeisenbergElement& a, std::int64_t n,
                                 const HeisenbergElement& x0);

/// Left translation by a on G/Gamma, one step.
HeisenbergPoint heis_translate(const HeisenbergElement& a, const HeisenbergPoint& p);

/// Torus distance between two reduced points (coordinate-wise wraparound).
double heis_point_distance(const HeisenbergPoint& p, const HeisenbergPoint& q);

std::ostream& operator<<(std::ostream& os, const HeisenbergElement& g);
std::ostream& operator<<(std::ostream& os, const HeisenbergPoint& p);

}  // namespace ergolab

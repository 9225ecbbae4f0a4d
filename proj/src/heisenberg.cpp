#include "ergolab/heisenberg.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "ergolab/numeric.hpp"

namespace ergolab {

HeisenbergElement heis_mul(const HeisenbergElement& a, const HeisenbergElement& b) {
    return {a.x + b.x, a.y + b.y, a.z + b.z + a.x * b.y};
}

HeisenbergElement heis_inv(const HeisenbergElement& a) {
    return {-a.x, -a.y, -a.z + a.x * a.y};
}

HeisenbergElement heis_pow(const HeisenbergElement& a, std::int64_t n) {
    const double nd = static_cast<double>(n);
    // n(n-1)/2 is exact in int64 for |n| < 3e9.
    const double c2 = static_cast<double>(n * (n - 1) / 2);
    return {nd * a.x, nd * a.y, nd * a.z + c2 * (a.x * a.y)};
}

Reduction heis_reduce(const HeisenbergElement& g) {
    const double fx = std::floor(g.x);
    const double fy = std::floor(g.y);
    const double w = g.z - g.x * fy;
    const double fw = std::floor(w);

    Reduction r;
    r.point = {frac(g.x), frac(g.y), frac(w)};
    r.lattice = {static_cast<std::int64_t>(fx), static_cast<std::int64_t>(fy),
                 static_cast<std::int64_t>(fw) +
                     static_cast<std::int64_t>(fx) * static_cast<std::int64_t>(fy)};
    return r;
}

HeisenbergPoint heis_orbit_point(const HeisenbergElement& a, std::int64_t n,
                                 const HeisenbergElement& x0) {
    constexpr std::int64_t kMaxAbsN = 134'000'000;  // keeps C(n,2) below 2^53
    if (n > kMaxAbsN || n < -kMaxAbsN) {
        throw std::out_of_range("heis_orbit_point: |n| too large for exact binomial");
    }
    const double nd = static_cast<double>(n);

    // a^n * x0 = (n a.x + x0.x, n a.y + x0.y, Z) with
    // Z = n a.z + C(n,2) a.x a.y + x0.z + n a.x * x0.y.
    // Reduced z is frac(Z - X * floor(Y)).
    const double px = nd * a.x;
    const double ex = std::fma(nd, a.x, -px);
    const double x_red = frac(frac(px) + ex + x0.x);

    const double py = nd * a.y;
    const double ey = std::fma(nd, a.y, -py);
    const double fpy = std::floor(py);
    const double rem_y = (py - fpy) + ey + x0.y;
    const double floor_rem = std::floor(rem_y);
    const double y_red = frac(rem_y - floor_rem);
    const std::int64_t y_floor = static_cast<std::int64_t>(fpy + floor_rem);

    const double c2 = static_cast<double>(n * (n - 1) / 2);
    const double ab = a.x * a.y;
    const double ab_err = std::fma(a.x, a.y, -ab);

    // X * floor(Y) = (n floor(Y)) a.x + x0.x floor(Y); n floor(Y) is an
    // integer and exact in double below 2^53.
    const double n_floor_y_abs = std::fabs(nd) * std::fabs(static_cast<double>(y_floor));
    if (n_floor_y_abs >= 9.0e15) {
        throw std::out_of_range("heis_orbit_point: n * floor(y) exceeds exact double range");
    }
    const double n_floor_y = static_cast<double>(n * y_floor);
    const double fy = static_cast<double>(y_floor);

    double z = frac_prod(nd, a.z);
    z += frac_prod(c2, ab);
    z += frac_prod(c2, ab_err);
    z += frac(x0.z);
    // n a.x x0.y = (px + ex) x0.y
    z += frac_prod(px, x0.y);
    z += frac_prod(ex, x0.y);
    z -= frac_prod(n_floor_y, a.x);
    z -= frac_prod(x0.x, fy);
    return {x_red, y_red, frac(z)};
}

HeisenbergPoint heis_translate(const HeisenbergElement& a, const HeisenbergPoint& p) {
    return heis_reduce(heis_mul(a, p.as_element())).point;
}

double heis_point_distance(const HeisenbergPoint& p, const HeisenbergPoint& q) {
    auto wrap = [](double d) {
        d = std::fabs(d);
        return std::min(d, 1.0 - d);
    };
    return std::max({wrap(p.x - q.x), wrap(p.y - q.y), wrap(p.z - q.z)});
}

std::ostream& operator<<(std::ostream& os, const HeisenbergElement& g) {
    return os << '(' << g.x << ", " << g.y << ", " << g.z << ')';
}

std::ostream& operator<<(std::ostream& os, const HeisenbergPoint& p) {
    return os << '[' << p.x << ", " << p.y << ", " << p.z << ']';
}

}  // namespace ergolab

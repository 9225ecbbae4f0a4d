#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace ergolab {

using cd = std::complex<double>;

/// Default cap on lattice points visited by a single evaluation.
inline constexpr std::uint64_t kDefaultBudget = 100'000'000;

/// Raised when a request would exceed a configured resource budget.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Fractional part in [0, 1).
inline double frac(double t) {
    double f = t - std::floor(t);
    return f >= 1.0 ? 0.0 : f;
}

/// frac(a * b) computed from the exact product a*b = p + e (fma split),
/// so the result keeps full absolute precision even when |a*b| is large.
inline double frac_prod(double a, double b) {
    const double p = a * b;
    const double e = std::fma(a, b, -p);
    return frac(frac(p) + e);
}

/// e(t) = exp(2 pi i t). The argument is reduced mod 1 first.
inline cd expi(double t) {
    const double phase = 2.0 * std::numbers::pi * frac(t);
    return {std::cos(phase), std::sin(phase)};
}

/// Neumaier-compensated accumulator.
template <class T>
class CompensatedSum {
public:
    void add(T x) {
        if constexpr (std::is_same_v<T, cd>) {
            add_real(x.real(), sum_re_, c_re_);
            add_real(x.imag(), sum_im_, c_im_);
        } else {
            add_real(x, sum_re_, c_re_);
        }
    }

    T value() const {
        if constexpr (std::is_same_v<T, cd>) {
            return {sum_re_ + c_re_, sum_im_ + c_im_};
        } else {
            return sum_re_ + c_re_;
        }
    }

private:
    static void add_real(double x, double& sum, double& c) {
        const double t = sum + x;
        if (std::fabs(sum) >= std::fabs(x)) {
            c += (sum - t) + x;
        } else {
            c += (x - t) + sum;
        }
        sum = t;
    }

    double sum_re_ = 0.0, c_re_ = 0.0;
    double sum_im_ = 0.0, c_im_ = 0.0;
};

/// Root of a nonnegative quantity; rounding residue down to -1e-12 is
/// clamped to zero (with a warning), anything more negative throws.
double clamped_root(double value, unsigned root, const char* context);

/// Writes a diagnostic line to the warning sink (stderr unless silenced).
void warn(const std::string& message);
void set_warnings_enabled(bool enabled);

/// n^k with overflow saturation, used for budget checks.
std::uint64_t saturating_pow(std::uint64_t n, unsigned k);

}  // namespace ergolab

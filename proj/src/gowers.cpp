#include "ergolab/gowers.hpp"

#include <fftw3.h>

#include <mutex>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "ergolab/parallel.hpp"

namespace ergolab {

namespace {

using Buffer = std::vector<cd>;

void check_k(unsigned k, const char* op) {
    if (k == 0) throw std::invalid_argument(std::string(op) + ": k must be >= 1");
    if (k > 16) throw std::invalid_argument(std::string(op) + ": k too large");
}

void check_budget(std::uint64_t points, std::uint64_t budget, const char* op,
                  const char* what) {
    if (points > budget) {
        std::ostringstream os;
        os << op << ": " << what << " = " << points << " lattice points exceeds budget " << budget;
        throw ResourceError(os.str());
    }
}

double sum_norm_sq_mean(const cd* p, std::size_t len) {
    CompensatedSum<cd> s;
    for (std::size_t m = 0; m < len; ++m) s.add(p[m]);
    const double L = static_cast<double>(len);
    return std::norm(s.value()) / (L * L);
}

// Cyclic cube products: P_j(m) = P_{j-1}(m) conj(P_{j-1}(m + h_j)), leaf
// contributes |E_m P(m)|^2. Returns the (unnormalised) sum over the
// remaining shift coordinates.
double cyclic_subtree(const Buffer& P, unsigned remaining, std::vector<Buffer>& scratch,
                      unsigned depth) {
    const std::size_t N = P.size();
    if (remaining == 0) return sum_norm_sq_mean(P.data(), N);
    Buffer& Q = scratch[depth];
    CompensatedSum<double> acc;
    for (std::size_t h = 0; h < N; ++h) {
        const std::size_t split = N - h;
        for (std::size_t m = 0; m < split; ++m) Q[m] = P[m] * std::conj(P[m + h]);
        for (std::size_t m = split; m < N; ++m) Q[m] = P[m] * std::conj(P[m + h - N]);
        acc.add(cyclic_subtree(Q, remaining - 1, scratch, depth + 1));
    }
    return acc.value();
}

// Literal shifts h in [1, N]; each level shortens the live window by N.
double literal_subtree(const Buffer& P, std::size_t len, std::size_t N, unsigned remaining,
                       std::vector<Buffer>& scratch, unsigned depth) {
    if (remaining == 0) return sum_norm_sq_mean(P.data(), N);
    Buffer& Q = scratch[depth];
    const std::size_t out_len = len - N;
    CompensatedSum<double> acc;
    for (std::size_t h = 1; h <= N; ++h) {
        for (std::size_t m = 0; m < out_len; ++m) Q[m] = P[m] * std::conj(P[m + h]);
        acc.add(literal_subtree(Q, out_len, N, remaining - 1, scratch, depth + 1));
    }
    return acc.value();
}

// 2^k-th power of the direct formula.
double direct_power(std::span<const cd> a, unsigned k) {
    const std::size_t N = a.size();
    if (k == 1) return sum_norm_sq_mean(a.data(), N);
    const Buffer P0(a.begin(), a.end());
    const double total = deterministic_sum<double>(N, [&](std::size_t h) {
        std::vector<Buffer> scratch(k, Buffer(N));
        Buffer& P1 = scratch[0];
        for (std::size_t m = 0; m < N; ++m) P1[m] = P0[m] * std::conj(P0[(m + h) % N]);
        return cyclic_subtree(P1, k - 2, scratch, 1);
    });
    return total / static_cast<double>(saturating_pow(N, k - 1));
}

// Multiplicative derivatives D_j(x) = D_{j-1}(x + h_j) conj(D_{j-1}(x)); the
// last coordinate is summed explicitly together with x.
double derivative_subtree(const Buffer& D, unsigned remaining, std::vector<Buffer>& scratch,
                          unsigned depth) {
    const std::size_t N = D.size();
    if (remaining == 1) {
        CompensatedSum<cd> acc;
        for (std::size_t h = 0; h < N; ++h) {
            cd row{};
            for (std::size_t x = 0; x < N; ++x) {
                const std::size_t xs = x + h < N ? x + h : x + h - N;
                row += D[xs] * std::conj(D[x]);
            }
            acc.add(row);
        }
        return acc.value().real();
    }
    Buffer& E = scratch[depth];
    CompensatedSum<double> acc;
    for (std::size_t h = 0; h < N; ++h) {
        for (std::size_t x = 0; x < N; ++x) {
            const std::size_t xs = x + h < N ? x + h : x + h - N;
            E[x] = D[xs] * std::conj(D[x]);
        }
        acc.add(derivative_subtree(E, remaining - 1, scratch, depth + 1));
    }
    return acc.value();
}

std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

std::string to_string(GowersMethod m) {
    switch (m) {
        case GowersMethod::direct: return "direct";
        case GowersMethod::standard_form: return "standard_form";
        case GowersMethod::fourier: return "fourier";
        case GowersMethod::estimator: return "estimator";
    }
    return "?";
}

GowersResult gowers_zn_direct(const PeriodicSeq& a, unsigned k, std::uint64_t budget) {
    check_k(k, "gowers_zn_direct");
    const std::size_t N = a.period();
    check_budget(saturating_pow(N, k), budget, "gowers_zn_direct", "N^k");
    const double power = direct_power(a.values(), k);
    return {k, clamped_root(power, 1U << k, "gowers_zn_direct"), N, GowersMethod::direct};
}

GowersResult gowers_zn_standard(const PeriodicSeq& a, unsigned k, std::uint64_t budget) {
    check_k(k, "gowers_zn_standard");
    const std::size_t N = a.period();
    if (k == 1) {
        const double power = sum_norm_sq_mean(a.values().data(), N);
        return {k, clamped_root(power, 2, "gowers_zn_standard"), N, GowersMethod::standard_form};
    }
    check_budget(saturating_pow(N, k + 1), budget, "gowers_zn_standard", "N^(k+1)");
    const Buffer D0(a.values().begin(), a.values().end());
    const double total = deterministic_sum<double>(N, [&](std::size_t h) {
        std::vector<Buffer> scratch(k + 1, Buffer(N));
        Buffer& D1 = scratch[0];
        for (std::size_t x = 0; x < N; ++x) D1[x] = D0[(x + h) % N] * std::conj(D0[x]);
        return derivative_subtree(D1, k - 1, scratch, 1);
    });
    const double power = total / static_cast<double>(saturating_pow(N, k + 1));
    return {k, clamped_root(power, 1U << k, "gowers_zn_standard"), N,
            GowersMethod::standard_form};
}

GowersResult gowers_u2_fourier(const PeriodicSeq& a) {
    const std::size_t N = a.period();
    fftw_complex* in = fftw_alloc_complex(N);
    fftw_complex* out = fftw_alloc_complex(N);
    if (in == nullptr || out == nullptr) {
        fftw_free(in);
        fftw_free(out);
        throw std::bad_alloc();
    }
    fftw_plan plan;
    {
        std::lock_guard lock(fftw_planner_mutex());
        plan = fftw_plan_dft_1d(static_cast<int>(N), in, out, FFTW_FORWARD, FFTW_ESTIMATE);
    }
    const auto v = a.values();
    for (std::size_t i = 0; i < N; ++i) {
        in[i][0] = v[i].real();
        in[i][1] = v[i].imag();
    }
    fftw_execute(plan);
    CompensatedSum<double> s;
    const double scale = 1.0 / static_cast<double>(N);
    for (std::size_t i = 0; i < N; ++i) {
        const double m2 = (out[i][0] * out[i][0] + out[i][1] * out[i][1]) * scale * scale;
        s.add(m2 * m2);
    }
    {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
    fftw_free(in);
    fftw_free(out);
    return {2, clamped_root(s.value(), 4, "gowers_u2_fourier"), N, GowersMethod::fourier};
}

namespace {

double estimator_power(std::span<const cd> a, unsigned k, std::size_t N) {
    if (k == 1) return sum_norm_sq_mean(a.data(), N);
    const std::size_t len = k * N;
    const Buffer P0(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(len));
    const double total = deterministic_sum<double>(N, [&](std::size_t idx) {
        const std::size_t h = idx + 1;
        std::vector<Buffer> scratch(k, Buffer(len));
        Buffer& P1 = scratch[0];
        const std::size_t out_len = len - N;
        for (std::size_t m = 0; m < out_len; ++m) P1[m] = P0[m] * std::conj(P0[m + h]);
        return literal_subtree(P1, out_len, N, k - 2, scratch, 1);
    });
    return total / static_cast<double>(saturating_pow(N, k - 1));
}

void check_length(std::size_t have, std::size_t need, const char* op) {
    if (have < need) {
        std::ostringstream os;
        os << op << ": sequence length " << have << " is shorter than the required " << need;
        throw std::invalid_argument(os.str());
    }
}

}  // namespace

GowersResult gowers_estimator(const BoundedSeq& a, unsigned k, std::size_t N,
                              std::uint64_t budget) {
    check_k(k, "gowers_estimator");
    if (N == 0) throw std::invalid_argument("gowers_estimator: N must be >= 1");
    check_length(a.length(), k * N, "gowers_estimator");
    check_budget(saturating_pow(N, k), budget, "gowers_estimator", "N^k");
    const double power = estimator_power(a.values(), k, N);
    return {k, clamped_root(power, 1U << k, "gowers_estimator"), N, GowersMethod::estimator};
}

RecursiveIdentityGap recursive_identity_gap(const BoundedSeq& a, unsigned k, std::size_t N,
                                            std::size_t R, std::uint64_t budget) {
    check_k(k, "recursive_identity_gap");
    if (N == 0 || R == 0) throw std::invalid_argument("recursive_identity_gap: N and R must be >= 1");
    check_length(a.length(), (k + 1) * N + R, "recursive_identity_gap");
    check_budget(saturating_pow(N, k + 1), budget, "recursive_identity_gap", "N^(k+1)");

    const auto v = a.values();
    const std::size_t len = k * N;
    CompensatedSum<double> shifted;
    Buffer b(len);
    for (std::size_t r = 1; r <= R; ++r) {
        for (std::size_t m = 0; m < len; ++m) b[m] = v[m + r] * std::conj(v[m]);
        shifted.add(estimator_power(b, k, N));
    }
    RecursiveIdentityGap out;
    out.shifted_side = shifted.value() / static_cast<double>(R);
    out.lifted_side = estimator_power(v, k + 1, N);
    out.gap = std::fabs(out.shifted_side - out.lifted_side);
    return out;
}

}  // namespace ergolab

#pragma once

// Input layer: bounded sequences, periodic wrappers, concrete
// measure-preserving systems, trigonometric observables and orbit sampling.

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ergolab/heisenberg.hpp"
#include "ergolab/numeric.hpp"

namespace ergolab {

/// Finite sequence a(1..L) with a declared sup bound.
class BoundedSeq {
public:
    BoundedSeq(std::vector<cd> values, double bound);

    std::size_t length() const { return values_.size(); }
    double bound() const { return bound_; }
    std::span<const cd> values() const { return values_; }

    /// a(n), 1-based.
    cd operator()(std::int64_t n) const { return values_[static_cast<std::size_t>(n - 1)]; }

    /// Constant sequence of the given length.
    static BoundedSeq constant(cd value, std::size_t length);

private:
    std::vector<cd> values_;
    double bound_;
};

/// Sequence on Z_N: a(n) = values[((n - 1) mod N) + 1].
class PeriodicSeq {
public:
    explicit PeriodicSeq(std::vector<cd> values);

    std::size_t period() const { return values_.size(); }
    std::span<const cd> values() const { return values_; }

    /// Cyclic, 1-based.
    cd operator()(std::int64_t n) const {
        const auto N = static_cast<std::int64_t>(values_.size());
        std::int64_t r = (n - 1) % N;
        if (r < 0) r += N;
        return values_[static_cast<std::size_t>(r)];
    }

    double sup() const;

private:
    std::vector<cd> values_;
};

/// Vertex of the discrete cube {0,1}^dim; bit i holds epsilon_{i+1}.
struct Vertex {
    unsigned bits = 0;
    unsigned dim = 0;

    int weight() const;
    bool bit(unsigned i) const { return (bits >> i) & 1U; }
    /// Odd weight means the value at this vertex is conjugated.
    bool conjugated() const { return weight() % 2 == 1; }
    cd apply(cd z) const { return conjugated() ? std::conj(z) : z; }

    /// epsilon . n
    template <class Int>
    Int dot(std::span<const Int> n) const {
        Int s = 0;
        for (unsigned i = 0; i < dim; ++i)
            if (bit(i)) s += n[i];
        return s;
    }
};

/// All 2^dim vertices in increasing bit order (origin first).
std::vector<Vertex> cube_vertices(unsigned dim);

using State = std::vector<double>;

struct CircleRotation {
    double alpha;
    friend bool operator==(const CircleRotation&, const CircleRotation&) = default;
};
/// (x, y) -> (x + alpha, y + x) on the 2-torus.
struct SkewProductTorus {
    double alpha;
    friend bool operator==(const SkewProductTorus&, const SkewProductTorus&) = default;
};
/// Left translation on the Heisenberg nilmanifold.
struct HeisenbergTranslation {
    HeisenbergElement element;
    friend bool operator==(const HeisenbergTranslation&, const HeisenbergTranslation&) = default;
};
struct ProductRotation {
    std::vector<double> alphas;
    friend bool operator==(const ProductRotation&, const ProductRotation&) = default;
};

using SystemVariant =
    std::variant<CircleRotation, SkewProductTorus, HeisenbergTranslation, ProductRotation>;

/// Invertible measure-preserving map on a declared state space.
class SystemSpec {
public:
    SystemSpec(SystemVariant v);  // NOLINT: implicit from any variant alternative
    template <class T>
        requires std::is_constructible_v<SystemVariant, T> &&
                 (!std::is_same_v<std::decay_t<T>, SystemVariant>)
    SystemSpec(T s) : SystemSpec(SystemVariant(std::move(s))) {}  // NOLINT

    const SystemVariant& variant() const { return v_; }
    std::size_t dim() const;
    std::string name() const;

    /// Validates the dimension and returns the canonical representative.
    State normalize(std::span<const double> x) const;

    void step(State& x) const;
    void step_back(State& x) const;

    bool same_space(const SystemSpec& other) const;

    friend bool operator==(const SystemSpec&, const SystemSpec&) = default;

private:
    SystemVariant v_;
};

struct FourierTerm {
    cd coefficient;
    std::vector<int> frequency;
    friend bool operator==(const FourierTerm&, const FourierTerm&) = default;
};

/// f(x) = sum_j c_j e(freq_j . x).
class ObservableSpec {
public:
    ObservableSpec(std::size_t dim, std::vector<FourierTerm> terms);

    static ObservableSpec constant(cd value, std::size_t dim);
    static ObservableSpec character(std::vector<int> frequency, cd coefficient = 1.0);

    std::size_t dim() const { return dim_; }
    const std::vector<FourierTerm>& terms() const { return terms_; }
    double bound() const;
    bool is_constant() const;

    cd operator()(std::span<const double> x) const;

    friend bool operator==(const ObservableSpec&, const ObservableSpec&) = default;

private:
    std::size_t dim_;
    std::vector<FourierTerm> terms_;
};

/// Values f(T^j x) for j in [lo, hi], built by stepping forward and backward
/// from j = 0 with per-step reduction.
class OrbitTable {
public:
    OrbitTable(const SystemSpec& system, const ObservableSpec& observable,
               std::span<const double> start, std::int64_t lo, std::int64_t hi);

    std::int64_t lo() const { return lo_; }
    std::int64_t hi() const { return hi_; }
    cd operator()(std::int64_t j) const { return values_[static_cast<std::size_t>(j - lo_)]; }

private:
    std::int64_t lo_, hi_;
    std::vector<cd> values_;
};

/// (f(T^n x))_{n=1..N}.
BoundedSeq trajectory(const SystemSpec& system, const ObservableSpec& observable,
                      std::span<const double> start, std::size_t N);

/// First N values viewed on Z_N.
PeriodicSeq periodize(const BoundedSeq& a, std::size_t N);

enum class RandomKind { pm_one, unimodular, quadratic_weyl };

/// Deterministic test input. quadratic_weyl gives e(n^2 alpha) and ignores
/// the seed.
BoundedSeq random_seq(RandomKind kind, std::size_t N, std::uint64_t seed, double alpha = 0.0);

RandomKind parse_random_kind(const std::string& name);

/// Conventional irrational parameters.
inline const double kSqrt2Minus1 = 0.41421356237309504880;
inline const double kGoldenConjugate = 0.61803398874989484820;

}  // namespace ergolab

#pragma once

// PET induction on ordered families of integer polynomials: types, nice
// families, the van der Corput family operation, reduction traces and the
// k(W, l) bound recursion.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace ergolab {

/// Integer polynomial in one variable, constant term first, no trailing
/// zeros. Arithmetic is overflow-checked (std::overflow_error).
class IntPoly {
public:
    IntPoly() = default;
    explicit IntPoly(std::vector<std::int64_t> coefficients);

    static IntPoly monomial(std::int64_t coefficient, unsigned power);

    const std::vector<std::int64_t>& coefficients() const { return c_; }
    /// Degree of the polynomial; the zero polynomial reports 0.
    int degree() const { return c_.empty() ? 0 : static_cast<int>(c_.size()) - 1; }
    std::int64_t leading() const { return c_.empty() ? 0 : c_.back(); }
    bool is_constant() const { return c_.size() <= 1; }

    std::int64_t operator()(std::int64_t n) const;

    /// (S_r p)(n) = p(n + r).
    IntPoly shifted(std::int64_t r) const;

    friend IntPoly operator+(const IntPoly& a, const IntPoly& b);
    friend IntPoly operator-(const IntPoly& a, const IntPoly& b);
    friend bool operator==(const IntPoly&, const IntPoly&) = default;

private:
    void trim();
    std::vector<std::int64_t> c_;
};

/// Compact form, e.g. "n^2+n+1", "-2n-1", "3".
std::string to_string(const IntPoly& p);

/// Parses "n^2", "2n+1", "-3*n^3 + n", ... (variable n).
IntPoly parse_poly(const std::string& text);

using PolyFamily = std::vector<IntPoly>;

/// Comma-separated, order-significant list of polynomials.
PolyFamily parse_family(const std::string& text);
std::string to_string(const PolyFamily& family);

/// (d, w_d, ..., w_1); w[0] holds w_d.
struct TypeVector {
    int d = 0;
    std::vector<int> w;

    friend bool operator==(const TypeVector&, const TypeVector&) = default;
};

std::string to_string(const TypeVector& t);

/// Rejects empty families and constant members.
void validate_family(const PolyFamily& family, const char* op);

TypeVector family_type(const PolyFamily& family);

/// Strict lexicographic order, degree first.
bool type_less(const TypeVector& a, const TypeVector& b);

bool is_nice(const PolyFamily& family);

/// (p, r) family: non-constant members of {S_r p_i - p, p_i - p}, with
/// S_r p_1 - p first, then p_1 - p, ..., p_l - p, then S_r p_2 - p, ...,
/// S_r p_l - p. Duplicates are kept.
PolyFamily vdc_family(const PolyFamily& family, const IntPoly& p, std::int64_t r);

/// The reduction polynomial for a nice family with deg p_1 >= 2; ties go
/// to the first candidate in family order.
IntPoly select_p(const PolyFamily& family);

/// The family of a step is listed modulo additive constants: each class
/// appears once, as its first literal member, and multiplicity[i] counts the
/// literal members in class i (saturating). Type, niceness and the choice of
/// p only see the family modulo constants, so the trace is exact. When every
/// multiplicity is 1 the listed family is the literal one.
struct TraceStep {
    IntPoly p;
    std::int64_t r = 0;
    std::size_t rejected = 0;  // schedule values tried before r
    PolyFamily family;
    std::vector<std::uint64_t> multiplicity;
    std::uint64_t size = 0;  // literal family size, saturating
    TypeVector type;
};

struct ReductionTrace {
    PolyFamily initial;
    TypeVector initial_type;
    std::vector<TraceStep> steps;
};

/// Reduces until every member is linear. Each step uses the first r of the
/// schedule whose result is nice and of strictly smaller type. Throws
/// std::length_error past max_classes classes; the trace keeps every step,
/// so memory grows with steps times classes.
ReductionTrace reduce_trace(const PolyFamily& family, const std::vector<std::int64_t>& schedule,
                            std::size_t max_classes = 1 << 13);

/// 1, 2, ..., n.
std::vector<std::int64_t> default_schedule(std::int64_t n = 32);

struct KBound {
    std::uint64_t value = 0;
    bool saturated = false;  // true value exceeds kKBoundCap; value is the cap

    friend bool operator==(const KBound&, const KBound&) = default;
};

inline constexpr std::uint64_t kKBoundCap = std::uint64_t{1} << 62;

/// Largest valid type strictly below w whose counts sum to at most L.
std::optional<TypeVector> max_type_below(const TypeVector& w, std::uint64_t L);

/// k(W, l): l + 1 for linear types, otherwise the maximum of k(W', l') over
/// W' < W and l' <= 2 l. Evaluated along the chain of maximal types.
KBound k_bound(const TypeVector& type, std::uint64_t l);
KBound k_bound(const PolyFamily& family);

/// Same recursion by memoised enumeration of every (W', l'); nullopt when
/// more than state_budget states would be visited.
std::optional<KBound> k_bound_exhaustive(const TypeVector& type, std::uint64_t l,
                                         std::size_t state_budget = 200000);

/// Indented text trace followed by the k bound.
std::string format_trace(const ReductionTrace& trace, const KBound& bound);

/// Random nice family, degree <= max_degree, 1..max_size members,
/// coefficients in [-coef_range, coef_range].
PolyFamily random_nice_family(std::mt19937_64& rng, int max_degree, std::size_t max_size,
                              std::int64_t coef_range = 3);

}  // namespace ergolab

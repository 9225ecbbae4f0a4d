#include "ergolab/pet.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace ergolab {

namespace {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t out;
    if (__builtin_add_overflow(a, b, &out)) throw std::overflow_error("IntPoly: coefficient overflow");
    return out;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t out;
    if (__builtin_mul_overflow(a, b, &out)) throw std::overflow_error("IntPoly: coefficient overflow");
    return out;
}

std::int64_t checked_neg(std::int64_t a) { return checked_mul(a, -1); }

}  // namespace

// --- IntPoly -----------------------------------------------------------------

IntPoly::IntPoly(std::vector<std::int64_t> coefficients) : c_(std::move(coefficients)) { trim(); }

IntPoly IntPoly::monomial(std::int64_t coefficient, unsigned power) {
    std::vector<std::int64_t> c(power + 1, 0);
    c[power] = coefficient;
    return IntPoly(std::move(c));
}

void IntPoly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

std::int64_t IntPoly::operator()(std::int64_t n) const {
    std::int64_t v = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) v = checked_add(checked_mul(v, n), *it);
    return v;
}

IntPoly IntPoly::shifted(std::int64_t r) const {
    // p(n + r) = sum_i c_i sum_j C(i, j) r^(i-j) n^j
    std::vector<std::int64_t> out(c_.size(), 0);
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        std::int64_t binom = 1;  // C(i, j), j running down from i
        std::int64_t rpow = 1;   // r^(i - j)
        for (std::size_t j = i + 1; j-- > 0;) {
            out[j] = checked_add(out[j], checked_mul(c_[i], checked_mul(binom, rpow)));
            if (j == 0) break;
            // C(i, j-1) = C(i, j) * j / (i - j + 1)
            binom = checked_mul(binom, static_cast<std::int64_t>(j)) /
                    static_cast<std::int64_t>(i - j + 1);
            rpow = checked_mul(rpow, r);
        }
    }
    return IntPoly(std::move(out));
}

IntPoly operator+(const IntPoly& a, const IntPoly& b) {
    std::vector<std::int64_t> c(std::max(a.c_.size(), b.c_.size()), 0);
    for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] = a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] = checked_add(c[i], b.c_[i]);
    return IntPoly(std::move(c));
}

IntPoly operator-(const IntPoly& a, const IntPoly& b) {
    std::vector<std::int64_t> c(std::max(a.c_.size(), b.c_.size()), 0);
    for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] = a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] = checked_add(c[i], checked_neg(b.c_[i]));
    return IntPoly(std::move(c));
}

std::string to_string(const IntPoly& p) {
    const auto& c = p.coefficients();
    if (c.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = c.size(); i-- > 0;) {
        const std::int64_t v = c[i];
        if (v == 0) continue;
        if (v < 0) os << '-';
        else if (!first) os << '+';
        const std::uint64_t mag = v < 0 ? 0 - static_cast<std::uint64_t>(v) : static_cast<std::uint64_t>(v);
        if (i == 0 || mag != 1) os << mag;
        if (i >= 1) os << 'n';
        if (i >= 2) os << '^' << i;
        first = false;
    }
    return os.str();
}

IntPoly parse_poly(const std::string& text) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
    auto fail = [&](std::size_t pos, const std::string& why) {
        std::ostringstream os;
        os << "cannot parse polynomial '" << text << "' at offset " << pos << ": " << why;
        throw std::invalid_argument(os.str());
    };
    if (s.empty()) fail(0, "empty polynomial");

    auto read_uint = [&](std::size_t& i) -> std::optional<std::int64_t> {
        if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i]))) return std::nullopt;
        std::int64_t v = 0;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
            v = checked_add(checked_mul(v, 10), s[i] - '0');
            ++i;
        }
        return v;
    };

    IntPoly result;
    std::size_t i = 0;
    while (i < s.size()) {
        std::int64_t sign = 1;
        if (s[i] == '+' || s[i] == '-') {
            sign = s[i] == '-' ? -1 : 1;
            ++i;
        } else if (i != 0) {
            fail(i, "expected '+' or '-'");
        }
        const std::size_t term_start = i;
        auto coef = read_uint(i);
        if (coef && i < s.size() && s[i] == '*') {
            ++i;
            if (i >= s.size() || s[i] != 'n') fail(i, "expected 'n' after '*'");
        }
        unsigned power = 0;
        if (i < s.size() && s[i] == 'n') {
            ++i;
            power = 1;
            if (i < s.size() && s[i] == '^') {
                ++i;
                auto e = read_uint(i);
                if (!e) fail(i, "expected exponent after '^'");
                if (*e > 64) fail(i, "exponent too large");
                power = static_cast<unsigned>(*e);
            }
        } else if (!coef) {
            fail(term_start, "expected a coefficient or 'n'");
        }
        result = result + IntPoly::monomial(checked_mul(sign, coef.value_or(1)), power);
    }
    return result;
}

PolyFamily parse_family(const std::string& text) {
    PolyFamily out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_poly(item));
    if (out.empty()) throw std::invalid_argument("empty polynomial family");
    return out;
}

std::string to_string(const PolyFamily& family) {
    std::string s = "(";
    for (std::size_t i = 0; i < family.size(); ++i) {
        if (i) s += ", ";
        s += to_string(family[i]);
    }
    return s + ")";
}

// --- types -------------------------------------------------------------------

std::string to_string(const TypeVector& t) {
    std::string s = "(" + std::to_string(t.d);
    for (int v : t.w) s += "," + std::to_string(v);
    return s + ")";
}

void validate_family(const PolyFamily& family, const char* op) {
    if (family.empty()) throw std::invalid_argument(std::string(op) + ": empty family");
    for (const auto& p : family) {
        if (p.is_constant()) {
            throw std::invalid_argument(std::string(op) + ": constant polynomial " + to_string(p) +
                                        " in family");
        }
    }
}

TypeVector family_type(const PolyFamily& family) {
    validate_family(family, "family_type");
    TypeVector t;
    for (const auto& p : family) t.d = std::max(t.d, p.degree());
    t.w.assign(static_cast<std::size_t>(t.d), 0);
    for (int deg = t.d; deg >= 1; --deg) {
        std::vector<std::int64_t> leads;
        for (const auto& p : family)
            if (p.degree() == deg) leads.push_back(p.leading());
        std::sort(leads.begin(), leads.end());
        t.w[static_cast<std::size_t>(t.d - deg)] =
            static_cast<int>(std::unique(leads.begin(), leads.end()) - leads.begin());
    }
    return t;
}

bool type_less(const TypeVector& a, const TypeVector& b) {
    if (a.d != b.d) return a.d < b.d;
    return std::lexicographical_compare(a.w.begin(), a.w.end(), b.w.begin(), b.w.end());
}

bool is_nice(const PolyFamily& family) {
    if (family.empty() || family.front().is_constant()) return false;
    const IntPoly& p1 = family.front();
    for (std::size_t i = 1; i < family.size(); ++i) {
        if (family[i].degree() > p1.degree()) return false;
        if ((p1 - family[i]).is_constant()) return false;
    }
    return true;
}

PolyFamily vdc_family(const PolyFamily& family, const IntPoly& p, std::int64_t r) {
    validate_family(family, "vdc_family");
    if (r < 1) throw std::invalid_argument("vdc_family: r must be >= 1");
    if (std::find(family.begin(), family.end(), p) == family.end()) {
        throw std::invalid_argument("vdc_family: " + to_string(p) + " is not a member of " +
                                    to_string(family));
    }
    PolyFamily out;
    auto push = [&out](IntPoly q) {
        if (!q.is_constant()) out.push_back(std::move(q));
    };
    push(family.front().shifted(r) - p);
    for (const auto& q : family) push(q - p);
    for (std::size_t i = 1; i < family.size(); ++i) push(family[i].shifted(r) - p);
    return out;
}

IntPoly select_p(const PolyFamily& family) {
    if (!is_nice(family)) throw std::invalid_argument("select_p: family " + to_string(family) + " is not nice");
    const IntPoly& p1 = family.front();
    if (p1.degree() < 2) throw std::invalid_argument("select_p: first polynomial is linear");
    const bool same_degree = std::all_of(family.begin(), family.end(),
                                         [&](const IntPoly& q) { return q.degree() == p1.degree(); });
    if (same_degree) {
        for (const auto& q : family)
            if (q.leading() != p1.leading()) return q;
        return p1;
    }
    const IntPoly* best = nullptr;
    for (const auto& q : family) {
        if (q.degree() < p1.degree() && (best == nullptr || q.degree() < best->degree())) best = &q;
    }
    return *best;
}

std::vector<std::int64_t> default_schedule(std::int64_t n) {
    std::vector<std::int64_t> s;
    for (std::int64_t r = 1; r <= n; ++r) s.push_back(r);
    return s;
}

namespace {

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t s;
    return __builtin_add_overflow(a, b, &s) ? std::numeric_limits<std::uint64_t>::max() : s;
}

struct ClassKeyHash {
    std::size_t operator()(const std::vector<std::int64_t>& c) const {
        std::size_t h = c.size();
        for (std::int64_t v : c) h ^= std::hash<std::int64_t>{}(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }
};

// Family modulo additive constants: first appearance of each class, in
// order, with the number of literal members it stands for.
struct ClassFamily {
    PolyFamily reps;
    std::vector<std::uint64_t> mult;
    std::unordered_map<std::vector<std::int64_t>, std::size_t, ClassKeyHash> index;

    void add(IntPoly q, std::uint64_t m) {
        if (q.is_constant()) return;
        std::vector<std::int64_t> key(q.coefficients().begin() + 1, q.coefficients().end());
        auto [it, inserted] = index.try_emplace(std::move(key), reps.size());
        if (inserted) {
            reps.push_back(std::move(q));
            mult.push_back(m);
        } else {
            mult[it->second] = saturating_add(mult[it->second], m);
        }
    }

    std::uint64_t size() const {
        std::uint64_t s = 0;
        for (auto m : mult) s = saturating_add(s, m);
        return s;
    }

    bool nice() const { return !mult.empty() && mult.front() == 1 && is_nice(reps); }
};

ClassFamily class_vdc(const ClassFamily& f, const IntPoly& p, std::int64_t r) {
    ClassFamily out;
    out.add(f.reps.front().shifted(r) - p, f.mult.front());
    for (std::size_t i = 0; i < f.reps.size(); ++i) out.add(f.reps[i] - p, f.mult[i]);
    for (std::size_t i = 1; i < f.reps.size(); ++i) out.add(f.reps[i].shifted(r) - p, f.mult[i]);
    return out;
}

}  // namespace

ReductionTrace reduce_trace(const PolyFamily& family, const std::vector<std::int64_t>& schedule,
                            std::size_t max_classes) {
    validate_family(family, "reduce_trace");
    if (!is_nice(family)) throw std::invalid_argument("reduce_trace: family " + to_string(family) + " is not nice");
    ReductionTrace trace;
    trace.initial = family;
    trace.initial_type = family_type(family);

    ClassFamily current;
    for (const auto& q : family) current.add(q, 1);
    TypeVector current_type = trace.initial_type;
    while (current_type.d >= 2) {
        const IntPoly p = select_p(current.reps);
        bool accepted = false;
        std::size_t rejected = 0;
        for (std::int64_t r : schedule) {
            ClassFamily next;
            try {
                next = class_vdc(current, p, r);
            } catch (const std::overflow_error&) {
                ++rejected;
                continue;
            }
            if (next.nice()) {
                TypeVector t = family_type(next.reps);
                if (type_less(t, current_type)) {
                    if (next.reps.size() > max_classes) {
                        throw std::length_error("reduce_trace: more than " + std::to_string(max_classes) +
                                                " members distinct up to constants after " +
                                                std::to_string(trace.steps.size()) + " steps at type " +
                                                to_string(t));
                    }
                    trace.steps.push_back({p, r, rejected, next.reps, next.mult, next.size(), t});
                    current = std::move(next);
                    current_type = std::move(t);
                    accepted = true;
                    break;
                }
            }
            ++rejected;
        }
        if (!accepted) {
            throw std::runtime_error("reduce_trace: schedule exhausted at family " + to_string(current.reps) +
                                     " of type " + to_string(current_type));
        }
    }
    return trace;
}

// --- k bound -----------------------------------------------------------------

std::optional<TypeVector> max_type_below(const TypeVector& w, std::uint64_t L) {
    const std::size_t len = w.w.size();
    // Keep the prefix w[0..i), lower w[i], put everything left into w[i+1].
    std::uint64_t prefix_sums[64] = {};
    if (len > 63) throw std::invalid_argument("max_type_below: degree too large");
    for (std::size_t i = 0; i < len; ++i) prefix_sums[i + 1] = prefix_sums[i] + static_cast<std::uint64_t>(w.w[i]);
    for (std::size_t i = len; i-- > 0;) {
        const std::uint64_t P = prefix_sums[i];
        if (P > L || w.w[i] == 0) continue;
        const std::uint64_t cand = std::min<std::uint64_t>(static_cast<std::uint64_t>(w.w[i]) - 1, L - P);
        if (i == 0 && cand < 1) continue;
        TypeVector out;
        out.d = w.d;
        out.w.assign(w.w.begin(), w.w.begin() + static_cast<std::ptrdiff_t>(i));
        out.w.push_back(static_cast<int>(cand));
        const std::uint64_t rest = L - P - cand;
        for (std::size_t j = i + 1; j < len; ++j) {
            const std::uint64_t fill = j == i + 1 ? rest : 0;
            if (fill > static_cast<std::uint64_t>(std::numeric_limits<int>::max()))
                throw std::overflow_error("max_type_below: count does not fit");
            out.w.push_back(static_cast<int>(fill));
        }
        return out;
    }
    if (w.d <= 1 || L == 0) return std::nullopt;
    if (L > static_cast<std::uint64_t>(std::numeric_limits<int>::max()))
        throw std::overflow_error("max_type_below: count does not fit");
    TypeVector out;
    out.d = w.d - 1;
    out.w.assign(static_cast<std::size_t>(out.d), 0);
    out.w[0] = static_cast<int>(L);
    return out;
}

KBound k_bound(const TypeVector& type, std::uint64_t l) {
    if (l == 0) throw std::invalid_argument("k_bound: family size must be >= 1");
    TypeVector w = type;
    while (w.d >= 2) {
        if (l > kKBoundCap / 2 || l > static_cast<std::uint64_t>(std::numeric_limits<int>::max()) / 2)
            return {kKBoundCap, true};
        l *= 2;
        auto next = max_type_below(w, l);
        if (!next) throw std::logic_error("k_bound: no smaller type");
        w = std::move(*next);
    }
    if (l >= kKBoundCap) return {kKBoundCap, true};
    return {l + 1, false};
}

KBound k_bound(const PolyFamily& family) {
    if (!is_nice(family)) throw std::invalid_argument("k_bound: family " + to_string(family) + " is not nice");
    return k_bound(family_type(family), family.size());
}

namespace {

struct ExhaustiveBudget {};

void enumerate_types(int d, std::uint64_t L, std::vector<int>& prefix, std::uint64_t used,
                     std::vector<TypeVector>& out) {
    if (prefix.size() == static_cast<std::size_t>(d)) {
        out.push_back({d, prefix});
        return;
    }
    const int lo = prefix.empty() ? 1 : 0;
    for (std::uint64_t v = static_cast<std::uint64_t>(lo); used + v <= L; ++v) {
        prefix.push_back(static_cast<int>(v));
        enumerate_types(d, L, prefix, used + v, out);
        prefix.pop_back();
    }
}

struct Exhaustive {
    std::size_t budget;
    std::map<std::pair<std::vector<int>, std::uint64_t>, std::uint64_t> memo;

    std::uint64_t eval(const TypeVector& w, std::uint64_t l) {
        if (w.d <= 1) return l + 1;
        std::vector<int> key = w.w;
        key.insert(key.begin(), w.d);
        if (auto it = memo.find({key, l}); it != memo.end()) return it->second;
        if (memo.size() >= budget || l > 1'000'000) throw ExhaustiveBudget{};
        std::uint64_t best = 0;
        for (std::uint64_t lp = 1; lp <= 2 * l; ++lp) {
            for (int d = 1; d <= w.d; ++d) {
                std::vector<TypeVector> cands;
                std::vector<int> prefix;
                enumerate_types(d, lp, prefix, 0, cands);
                for (const auto& c : cands)
                    if (type_less(c, w)) best = std::max(best, eval(c, lp));
            }
        }
        memo[{key, l}] = best;
        return best;
    }
};

}  // namespace

std::optional<KBound> k_bound_exhaustive(const TypeVector& type, std::uint64_t l,
                                         std::size_t state_budget) {
    if (l == 0) throw std::invalid_argument("k_bound_exhaustive: family size must be >= 1");
    Exhaustive ex{state_budget, {}};
    try {
        return KBound{ex.eval(type, l), false};
    } catch (const ExhaustiveBudget&) {
        return std::nullopt;
    }
}

std::string format_trace(const ReductionTrace& trace, const KBound& bound) {
    std::ostringstream os;
    os << "family: " << to_string(trace.initial) << "\n";
    os << "type: " << to_string(trace.initial_type) << "\n";
    for (std::size_t i = 0; i < trace.steps.size(); ++i) {
        const auto& s = trace.steps[i];
        os << "step " << i + 1 << ": p = " << to_string(s.p) << ", r = " << s.r;
        if (s.rejected) os << " (" << s.rejected << " smaller r rejected)";
        os << "\n";
        os << "  family: " << to_string(s.family) << "\n";
        if (s.size != s.family.size()) {
            os << "  members: " << s.size
               << (s.size == std::numeric_limits<std::uint64_t>::max() ? "+" : "") << " ("
               << s.family.size() << " distinct up to constants)\n";
        }
        os << "  type: " << to_string(s.type) << "\n";
    }
    os << "k_bound: " << bound.value << (bound.saturated ? " (saturated)" : "") << "\n";
    return os.str();
}

PolyFamily random_nice_family(std::mt19937_64& rng, int max_degree, std::size_t max_size,
                              std::int64_t coef_range) {
    if (max_degree < 1 || max_size < 1) throw std::invalid_argument("random_nice_family: bad limits");
    std::uniform_int_distribution<int> deg_dist(1, max_degree);
    std::uniform_int_distribution<std::size_t> size_dist(1, max_size);
    std::uniform_int_distribution<std::int64_t> coef(-coef_range, coef_range);
    for (;;) {
        const int d = deg_dist(rng);
        const std::size_t size = size_dist(rng);
        PolyFamily fam;
        for (std::size_t i = 0; i < size; ++i) {
            const int deg = i == 0 ? d : std::uniform_int_distribution<int>(1, d)(rng);
            std::vector<std::int64_t> c(static_cast<std::size_t>(deg) + 1);
            for (auto& v : c) v = coef(rng);
            while (c.back() == 0) c.back() = coef(rng);
            fam.emplace_back(std::move(c));
        }
        if (is_nice(fam)) return fam;
    }
}

}  // namespace ergolab

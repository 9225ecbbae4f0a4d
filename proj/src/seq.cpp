#include "ergolab/seq.hpp"

#include <bit>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace ergolab {

namespace {

constexpr double kBoundSlack = 1e-12;

double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void require_finite(std::span<const double> x, const char* what) {
    for (double v : x) {
        if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + ": non-finite coordinate");
    }
}

}  // namespace

BoundedSeq::BoundedSeq(std::vector<cd> values, double bound)
    : values_(std::move(values)), bound_(bound) {
    if (values_.empty()) throw std::invalid_argument("BoundedSeq: length must be >= 1");
    if (!(bound_ >= 0.0)) throw std::invalid_argument("BoundedSeq: bound must be nonnegative");
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (std::abs(values_[i]) > bound_ + kBoundSlack) {
            std::ostringstream os;
            os << "BoundedSeq: |a(" << i + 1 << ")| = " << std::abs(values_[i])
               << " exceeds declared bound " << bound_;
            throw std::invalid_argument(os.str());
        }
    }
}

BoundedSeq BoundedSeq::constant(cd value, std::size_t length) {
    return BoundedSeq(std::vector<cd>(length, value), std::abs(value));
}

PeriodicSeq::PeriodicSeq(std::vector<cd> values) : values_(std::move(values)) {
    if (values_.empty()) throw std::invalid_argument("PeriodicSeq: period must be >= 1");
}

double PeriodicSeq::sup() const {
    double s = 0.0;
    for (const cd& v : values_) s = std::max(s, std::abs(v));
    return s;
}

int Vertex::weight() const { return std::popcount(bits); }

std::vector<Vertex> cube_vertices(unsigned dim) {
    std::vector<Vertex> out;
    out.reserve(std::size_t{1} << dim);
    for (unsigned b = 0; b < (1U << dim); ++b) out.push_back({b, dim});
    return out;
}

// --- systems ---------------------------------------------------------------

SystemSpec::SystemSpec(SystemVariant v) : v_(std::move(v)) {
    std::visit(
        [](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, CircleRotation> || std::is_same_v<T, SkewProductTorus>) {
                if (!(s.alpha > 0.0 && s.alpha < 1.0))
                    throw std::invalid_argument("rotation parameter alpha must lie in (0, 1)");
            } else if constexpr (std::is_same_v<T, ProductRotation>) {
                if (s.alphas.empty())
                    throw std::invalid_argument("ProductRotation needs at least one angle");
                require_finite(s.alphas, "ProductRotation");
            } else {
                const auto& e = s.element;
                const double c[3] = {e.x, e.y, e.z};
                require_finite(c, "HeisenbergTranslation");
            }
        },
        v_);
}

std::size_t SystemSpec::dim() const {
    return std::visit(
        [](const auto& s) -> std::size_t {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, CircleRotation>) return 1;
            else if constexpr (std::is_same_v<T, SkewProductTorus>) return 2;
            else if constexpr (std::is_same_v<T, HeisenbergTranslation>) return 3;
            else return s.alphas.size();
        },
        v_);
}

std::string SystemSpec::name() const {
    return std::visit(
        [](const auto& s) -> std::string {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, CircleRotation>) return "circle_rotation";
            else if constexpr (std::is_same_v<T, SkewProductTorus>) return "skew_product_torus";
            else if constexpr (std::is_same_v<T, HeisenbergTranslation>) return "heisenberg_translation";
            else return "product_rotation";
        },
        v_);
}

bool SystemSpec::same_space(const SystemSpec& other) const {
    const bool heis_a = std::holds_alternative<HeisenbergTranslation>(v_);
    const bool heis_b = std::holds_alternative<HeisenbergTranslation>(other.v_);
    return heis_a == heis_b && dim() == other.dim();
}

State SystemSpec::normalize(std::span<const double> x) const {
    if (x.size() != dim()) {
        std::ostringstream os;
        os << name() << ": start point has dimension " << x.size() << ", expected " << dim();
        throw std::invalid_argument(os.str());
    }
    require_finite(x, "start point");
    if (std::holds_alternative<HeisenbergTranslation>(v_)) {
        const auto p = heis_reduce({x[0], x[1], x[2]}).point;
        return {p.x, p.y, p.z};
    }
    State out(x.begin(), x.end());
    for (double& c : out) c = frac(c);
    return out;
}

void SystemSpec::step(State& x) const {
    std::visit(
        [&x](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, CircleRotation>) {
                x[0] = frac(x[0] + s.alpha);
            } else if constexpr (std::is_same_v<T, SkewProductTorus>) {
                const double old_x = x[0];
                x[0] = frac(x[0] + s.alpha);
                x[1] = frac(x[1] + old_x);
            } else if constexpr (std::is_same_v<T, HeisenbergTranslation>) {
                const auto p = heis_translate(s.element, {x[0], x[1], x[2]});
                x[0] = p.x;
                x[1] = p.y;
                x[2] = p.z;
            } else {
                for (std::size_t i = 0; i < x.size(); ++i) x[i] = frac(x[i] + s.alphas[i]);
            }
        },
        v_);
}

void SystemSpec::step_back(State& x) const {
    std::visit(
        [&x](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, CircleRotation>) {
                x[0] = frac(x[0] - s.alpha);
            } else if constexpr (std::is_same_v<T, SkewProductTorus>) {
                // inverse of (x, y) -> (x + a, y + x) is (x, y) -> (x - a, y - x + a)
                const double prev_x = frac(x[0] - s.alpha);
                x[1] = frac(x[1] - prev_x);
                x[0] = prev_x;
            } else if constexpr (std::is_same_v<T, HeisenbergTranslation>) {
                const auto p = heis_translate(heis_inv(s.element), {x[0], x[1], x[2]});
                x[0] = p.x;
                x[1] = p.y;
                x[2] = p.z;
            } else {
                for (std::size_t i = 0; i < x.size(); ++i) x[i] = frac(x[i] - s.alphas[i]);
            }
        },
        v_);
}

// --- observables -----------------------------------------------------------

ObservableSpec::ObservableSpec(std::size_t dim, std::vector<FourierTerm> terms)
    : dim_(dim), terms_(std::move(terms)) {
    if (dim_ == 0) throw std::invalid_argument("ObservableSpec: dimension must be >= 1");
    for (const auto& t : terms_) {
        if (t.frequency.size() != dim_) {
            std::ostringstream os;
            os << "ObservableSpec: frequency vector of length " << t.frequency.size()
               << " in a " << dim_ << "-dimensional observable";
            throw std::invalid_argument(os.str());
        }
        if (!std::isfinite(t.coefficient.real()) || !std::isfinite(t.coefficient.imag()))
            throw std::invalid_argument("ObservableSpec: non-finite coefficient");
    }
}

ObservableSpec ObservableSpec::constant(cd value, std::size_t dim) {
    return ObservableSpec(dim, {FourierTerm{value, std::vector<int>(dim, 0)}});
}

ObservableSpec ObservableSpec::character(std::vector<int> frequency, cd coefficient) {
    const std::size_t d = frequency.size();
    return ObservableSpec(d, {FourierTerm{coefficient, std::move(frequency)}});
}

double ObservableSpec::bound() const {
    double b = 0.0;
    for (const auto& t : terms_) b += std::abs(t.coefficient);
    return b;
}

bool ObservableSpec::is_constant() const {
    for (const auto& t : terms_)
        for (int f : t.frequency)
            if (f != 0 && t.coefficient != cd{}) return false;
    return true;
}

cd ObservableSpec::operator()(std::span<const double> x) const {
    cd s{};
    for (const auto& t : terms_) {
        double phase = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) phase += t.frequency[i] * x[i];
        s += t.coefficient * expi(phase);
    }
    return s;
}

// --- orbits ----------------------------------------------------------------

OrbitTable::OrbitTable(const SystemSpec& system, const ObservableSpec& observable,
                       std::span<const double> start, std::int64_t lo, std::int64_t hi)
    : lo_(std::min<std::int64_t>(lo, 0)), hi_(std::max<std::int64_t>(hi, 0)) {
    if (observable.dim() != system.dim()) {
        std::ostringstream os;
        os << "observable of dimension " << observable.dim() << " on " << system.name()
           << " of dimension " << system.dim();
        throw std::invalid_argument(os.str());
    }
    values_.resize(static_cast<std::size_t>(hi_ - lo_ + 1));
    const State x0 = system.normalize(start);

    State x = x0;
    values_[static_cast<std::size_t>(-lo_)] = observable(x);
    for (std::int64_t j = 1; j <= hi_; ++j) {
        system.step(x);
        values_[static_cast<std::size_t>(j - lo_)] = observable(x);
    }
    x = x0;
    for (std::int64_t j = -1; j >= lo_; --j) {
        system.step_back(x);
        values_[static_cast<std::size_t>(j - lo_)] = observable(x);
    }
}

BoundedSeq trajectory(const SystemSpec& system, const ObservableSpec& observable,
                      std::span<const double> start, std::size_t N) {
    if (N == 0) throw std::invalid_argument("trajectory: N must be >= 1");
    const OrbitTable table(system, observable, start, 1, static_cast<std::int64_t>(N));
    std::vector<cd> values(N);
    for (std::size_t n = 1; n <= N; ++n) values[n - 1] = table(static_cast<std::int64_t>(n));
    return BoundedSeq(std::move(values), observable.bound());
}

PeriodicSeq periodize(const BoundedSeq& a, std::size_t N) {
    if (N == 0 || N > a.length()) {
        std::ostringstream os;
        os << "periodize: period " << N << " not in [1, " << a.length() << "]";
        throw std::invalid_argument(os.str());
    }
    const auto v = a.values();
    return PeriodicSeq(std::vector<cd>(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(N)));
}

BoundedSeq random_seq(RandomKind kind, std::size_t N, std::uint64_t seed, double alpha) {
    if (N == 0) throw std::invalid_argument("random_seq: N must be >= 1");
    std::vector<cd> values(N);
    std::mt19937_64 rng(seed);
    switch (kind) {
        case RandomKind::pm_one:
            for (auto& v : values) v = (rng() >> 63) ? 1.0 : -1.0;
            break;
        case RandomKind::unimodular:
            for (auto& v : values) v = expi(unit_uniform(rng));
            break;
        case RandomKind::quadratic_weyl:
            for (std::size_t n = 1; n <= N; ++n) {
                const double nn = static_cast<double>(n) * static_cast<double>(n);
                values[n - 1] = expi(frac_prod(nn, alpha));
            }
            break;
    }
    return BoundedSeq(std::move(values), 1.0);
}

RandomKind parse_random_kind(const std::string& name) {
    if (name == "pm_one") return RandomKind::pm_one;
    if (name == "unimodular") return RandomKind::unimodular;
    if (name == "quadratic_weyl") return RandomKind::quadratic_weyl;
    throw std::invalid_argument("unknown random sequence kind '" + name + "'");
}

}  // namespace ergolab

#include "ergolab/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "ergolab/cubic.hpp"
#include "ergolab/nil.hpp"

namespace ergolab::cli {

json parse_config_text(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, col = 1;
        const std::size_t upto = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t i = 0; i < upto; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        std::ostringstream os;
        os << origin << ":" << line << ":" << col << ": JSON syntax error: " << e.what();
        throw ConfigError(os.str());
    }
}

json load_config(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open config " + path.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str(), path.string());
}

// --- Field -------------------------------------------------------------------

void Field::fail(const std::string& message) const {
    throw ConfigError("config field " + (path_.empty() ? std::string("/") : path_) + ": " + message);
}

bool Field::has(const std::string& key) const { return node_->is_object() && node_->contains(key); }

Field Field::at(const std::string& key) const {
    if (!node_->is_object()) fail("expected an object");
    auto it = node_->find(key);
    if (it == node_->end()) fail("missing required key '" + key + "'");
    return Field(*it, path_ + "/" + key);
}

std::optional<Field> Field::find(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return at(key);
}

Field Field::at(std::size_t index) const {
    if (!node_->is_array()) fail("expected an array");
    if (index >= node_->size()) fail("index " + std::to_string(index) + " out of range");
    return Field((*node_)[index], path_ + "/" + std::to_string(index));
}

std::size_t Field::size() const {
    if (!node_->is_array()) fail("expected an array");
    return node_->size();
}

double Field::real() const {
    if (!node_->is_number()) fail("expected a number");
    const double v = node_->get<double>();
    if (!std::isfinite(v)) fail("expected a finite number");
    return v;
}

std::int64_t Field::integer() const {
    if (!node_->is_number_integer()) fail("expected an integer");
    return node_->get<std::int64_t>();
}

std::uint64_t Field::unsigned_integer() const {
    if (!node_->is_number_integer() || (node_->is_number_integer() && !node_->is_number_unsigned()))
        fail("expected a nonnegative integer");
    return node_->get<std::uint64_t>();
}

std::string Field::string() const {
    if (!node_->is_string()) fail("expected a string");
    return node_->get<std::string>();
}

cd Field::complex() const {
    if (node_->is_number()) return {real(), 0.0};
    if (node_->is_array() && node_->size() == 2) return {at(std::size_t{0}).real(), at(std::size_t{1}).real()};
    fail("expected a number or a [re, im] pair");
}

std::vector<double> Field::reals() const {
    std::vector<double> v;
    for (std::size_t i = 0; i < size(); ++i) v.push_back(at(i).real());
    return v;
}

std::vector<std::size_t> Field::sizes() const {
    std::vector<std::size_t> v;
    for (std::size_t i = 0; i < size(); ++i) v.push_back(static_cast<std::size_t>(at(i).unsigned_integer()));
    return v;
}

// --- domain objects ----------------------------------------------------------

double parse_parameter(const Field& f) {
    if (f.node().is_string()) {
        const std::string s = f.string();
        if (s == "sqrt2_minus_1") return kSqrt2Minus1;
        if (s == "golden_conjugate") return kGoldenConjugate;
        if (s == "sqrt3_minus_1") return std::sqrt(3.0) - 1.0;
        f.fail("unknown named constant '" + s + "'");
    }
    return f.real();
}

SystemSpec parse_system(const Field& f) {
    const std::string type = f.at("type").string();
    try {
        if (type == "circle_rotation") return CircleRotation{parse_parameter(f.at("alpha"))};
        if (type == "skew_product_torus") return SkewProductTorus{parse_parameter(f.at("alpha"))};
        if (type == "heisenberg_translation") return HeisenbergTranslation{parse_element(f.at("element"))};
        if (type == "product_rotation") {
            const Field a = f.at("alphas");
            std::vector<double> alphas;
            for (std::size_t i = 0; i < a.size(); ++i) alphas.push_back(parse_parameter(a.at(i)));
            return ProductRotation{alphas};
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        f.fail(e.what());
    }
    f.at("type").fail("unknown system type '" + type + "'");
}

ObservableSpec parse_observable(const Field& f, std::size_t dim) {
    auto frequency = [dim](const Field& g) {
        std::vector<int> freq;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const std::int64_t v = g.at(i).integer();
            if (v < -1'000'000 || v > 1'000'000) g.at(i).fail("frequency out of range");
            freq.push_back(static_cast<int>(v));
        }
        if (freq.size() != dim) {
            g.fail("frequency vector of length " + std::to_string(freq.size()) + " for a " +
                   std::to_string(dim) + "-dimensional space");
        }
        return freq;
    };
    try {
        if (auto c = f.find("constant")) return ObservableSpec::constant(c->complex(), dim);
        if (auto c = f.find("character")) {
            const cd coef = f.has("coefficient") ? f.at("coefficient").complex() : cd{1.0};
            return ObservableSpec(dim, {FourierTerm{coef, frequency(*c)}});
        }
        if (auto t = f.find("terms")) {
            std::vector<FourierTerm> terms;
            for (std::size_t i = 0; i < t->size(); ++i) {
                const Field term = t->at(i);
                terms.push_back({term.at("coefficient").complex(), frequency(term.at("frequency"))});
            }
            return ObservableSpec(dim, std::move(terms));
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        f.fail(e.what());
    }
    f.fail("observable needs one of 'constant', 'character', 'terms'");
}

State parse_point(const Field& f, std::size_t dim) {
    State s = f.reals();
    if (s.size() != dim) {
        f.fail("point of dimension " + std::to_string(s.size()) + ", expected " + std::to_string(dim));
    }
    return s;
}

HeisenbergElement parse_element(const Field& f) {
    if (f.size() != 3) f.fail("expected [x, y, z]");
    return {parse_parameter(f.at(std::size_t{0})), parse_parameter(f.at(std::size_t{1})),
            parse_parameter(f.at(std::size_t{2}))};
}

IntPoly parse_poly_field(const Field& f) {
    try {
        return parse_poly(f.string());
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        f.fail(e.what());
    }
}

std::vector<std::size_t> parse_grid(const Field& f) {
    std::vector<std::size_t> grid;
    if (f.node().is_object()) {
        const Field g = f.at("geometric");
        if (g.size() != 2) g.fail("expected [lo, hi] exponents");
        const auto lo = g.at(std::size_t{0}).unsigned_integer();
        const auto hi = g.at(std::size_t{1}).unsigned_integer();
        if (lo > hi || hi > 40) g.fail("bad exponent range");
        grid = geometric_grid(static_cast<unsigned>(lo), static_cast<unsigned>(hi));
    } else if (f.node().is_number_integer()) {
        grid.push_back(static_cast<std::size_t>(f.unsigned_integer()));
    } else {
        grid = f.sizes();
    }
    if (grid.empty()) f.fail("grid is empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] == 0) f.fail("grid values must be positive");
        if (i > 0 && grid[i] <= grid[i - 1]) f.fail("grid must be strictly increasing");
    }
    return grid;
}

BoundedSeq parse_sequence(const Field& f, std::size_t length, std::uint64_t default_seed) {
    const std::string kind = f.at("kind").string();
    try {
        if (kind == "constant") return BoundedSeq::constant(f.at("value").complex(), length);
        if (kind == "random") {
            const RandomKind rk = parse_random_kind(f.at("distribution").string());
            const std::uint64_t seed = f.has("seed") ? f.at("seed").unsigned_integer() : default_seed;
            const double alpha = f.has("alpha") ? parse_parameter(f.at("alpha")) : 0.0;
            return random_seq(rk, length, seed, alpha);
        }
        if (kind == "values") {
            const Field v = f.at("values");
            std::vector<cd> values;
            double bound = 0.0;
            for (std::size_t i = 0; i < v.size(); ++i) {
                values.push_back(v.at(i).complex());
                bound = std::max(bound, std::abs(values.back()));
            }
            if (values.size() < length) {
                f.fail("sequence has " + std::to_string(values.size()) + " values, the experiment needs " +
                       std::to_string(length));
            }
            if (f.has("bound")) bound = f.at("bound").real();
            return BoundedSeq(std::move(values), bound);
        }
        if (kind == "character") {
            // e(frequency * n / modulus)
            const std::int64_t freq = f.at("frequency").integer();
            const auto modulus = static_cast<double>(f.at("modulus").unsigned_integer());
            if (modulus <= 0) f.at("modulus").fail("modulus must be positive");
            std::vector<cd> values(length);
            for (std::size_t n = 1; n <= length; ++n) {
                const std::int64_t num = (freq * static_cast<std::int64_t>(n)) % static_cast<std::int64_t>(modulus);
                values[n - 1] = expi(static_cast<double>(num) / modulus);
            }
            return BoundedSeq(std::move(values), 1.0);
        }
        if (kind == "trajectory") {
            const SystemSpec sys = parse_system(f.at("system"));
            const ObservableSpec obs = parse_observable(f.at("observable"), sys.dim());
            const State start = parse_point(f.at("start"), sys.dim());
            return trajectory(sys, obs, start, length);
        }
        if (kind == "nilsequence") {
            const HeisenbergElement a = parse_element(f.at("element"));
            const HeisenbergElement x0 = parse_element(f.at("start"));
            const ObservableSpec obs = parse_observable(f.at("observable"), 3);
            return nilsequence_sample(a, x0, obs, length);
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        f.fail(e.what());
    }
    f.at("kind").fail("unknown sequence kind '" + kind + "'");
}

}  // namespace ergolab::cli

#pragma once

// JSON experiment configs: loading with line/column diagnostics and typed
// field access that reports the JSON pointer of the offending field.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ergolab/heisenberg.hpp"
#include "ergolab/pet.hpp"
#include "ergolab/seq.hpp"

namespace ergolab::cli {

using json = nlohmann::json;

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Parses JSON text; syntax errors name line and column.
json parse_config_text(const std::string& text, const std::string& origin);
json load_config(const std::filesystem::path& path);

/// A node of the config together with its JSON pointer.
class Field {
public:
    Field(const json& node, std::string path) : node_(&node), path_(std::move(path)) {}

    const json& node() const { return *node_; }
    const std::string& path() const { return path_; }

    bool has(const std::string& key) const;
    Field at(const std::string& key) const;
    std::optional<Field> find(const std::string& key) const;
    Field at(std::size_t index) const;
    std::size_t size() const;  // array length

    [[noreturn]] void fail(const std::string& message) const;

    double real() const;
    std::int64_t integer() const;
    std::uint64_t unsigned_integer() const;
    std::string string() const;
    cd complex() const;
    std::vector<double> reals() const;
    std::vector<std::size_t> sizes() const;

private:
    const json* node_;
    std::string path_;
};

/// Real parameter: a number or one of "sqrt2_minus_1", "golden_conjugate",
/// "sqrt3_minus_1".
double parse_parameter(const Field& f);

SystemSpec parse_system(const Field& f);
ObservableSpec parse_observable(const Field& f, std::size_t dim);
State parse_point(const Field& f, std::size_t dim);
HeisenbergElement parse_element(const Field& f);
IntPoly parse_poly_field(const Field& f);

/// Array of positive integers, or {"geometric": [lo, hi]} for 2^lo..2^hi.
/// Must be strictly increasing.
std::vector<std::size_t> parse_grid(const Field& f);

/// Sequence description (constant, random, values, character, trajectory,
/// nilsequence) materialised to at least the given length.
BoundedSeq parse_sequence(const Field& f, std::size_t length, std::uint64_t default_seed);

}  // namespace ergolab::cli

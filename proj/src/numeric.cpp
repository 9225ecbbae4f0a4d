#include "ergolab/numeric.hpp"

#include <atomic>
#include <iostream>
#include <limits>
#include <sstream>

namespace ergolab {

namespace {
std::atomic<bool> g_warnings{true};
}

void set_warnings_enabled(bool enabled) { g_warnings = enabled; }

void warn(const std::string& message) {
    if (g_warnings) std::clog << "warning: " << message << '\n';
}

double clamped_root(double value, unsigned root, const char* context) {
    if (value < 0.0) {
        if (value < -1e-12) {
            std::ostringstream os;
            os << context << ": negative power " << value << " beyond rounding tolerance";
            throw std::logic_error(os.str());
        }
        std::ostringstream os;
        os << context << ": clamped rounding residue " << value << " to 0";
        warn(os.str());
        return 0.0;
    }
    if (root == 1) return value;
    if (root == 2) return std::sqrt(value);
    return std::pow(value, 1.0 / static_cast<double>(root));
}

std::uint64_t saturating_pow(std::uint64_t n, unsigned k) {
    std::uint64_t r = 1;
    for (unsigned i = 0; i < k; ++i) {
        if (n != 0 && r > std::numeric_limits<std::uint64_t>::max() / n) {
            return std::numeric_limits<std::uint64_t>::max();
        }
        r *= n;
    }
    return r;
}

}  // namespace ergolab

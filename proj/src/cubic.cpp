#include "ergolab/cubic.hpp"

#include <algorithm>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "ergolab/gowers.hpp"
#include "ergolab/parallel.hpp"

namespace ergolab {

namespace {

using Table = std::vector<cd>;
using TablePtr = std::shared_ptr<const Table>;

void check_entries(const std::vector<VertexEntry>& entries, std::span<const double> start,
                   const char* what) {
    const SystemSpec& first = entries.front().system;
    for (const auto& e : entries) {
        if (!e.system.same_space(first)) {
            std::ostringstream os;
            os << what << ": " << e.system.name() << " and " << first.name()
               << " act on different spaces";
            throw std::invalid_argument(os.str());
        }
        if (e.observable.dim() != e.system.dim()) {
            std::ostringstream os;
            os << what << ": observable of dimension " << e.observable.dim() << " on "
               << e.system.name();
            throw std::invalid_argument(os.str());
        }
        (void)e.system.normalize(start);
    }
}

// f(T^j x) for j in [0, hi], one table per distinct (system, observable).
std::vector<TablePtr> orbit_tables(const std::vector<VertexEntry>& entries, const State& start,
                                   std::size_t hi) {
    std::vector<TablePtr> out(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (entries[j].system == entries[i].system &&
                entries[j].observable == entries[i].observable) {
                out[i] = out[j];
                break;
            }
        }
        if (out[i]) continue;
        const OrbitTable orbit(entries[i].system, entries[i].observable, start, 0,
                               static_cast<std::int64_t>(hi));
        auto t = std::make_shared<Table>(hi + 1);
        for (std::size_t j = 0; j <= hi; ++j) (*t)[j] = orbit(static_cast<std::int64_t>(j));
        out[i] = std::move(t);
    }
    return out;
}

void check_budget(std::size_t N, unsigned k, std::uint64_t budget, const char* op) {
    const std::uint64_t points = saturating_pow(N, k);
    if (points > budget) {
        std::ostringstream os;
        os << op << ": N^" << k << " = " << points << " lattice points exceeds budget " << budget;
        throw ResourceError(os.str());
    }
}

// Decodes a flat index into n in [1, range]^dim.
void decode(std::size_t idx, std::size_t range, unsigned dim, std::size_t* n) {
    for (unsigned i = 0; i < dim; ++i) {
        n[i] = 1 + idx % range;
        idx /= range;
    }
}

// E_{n in [1,n_range]^dim} |E_{m in [1,m_range]} prod_mask t[mask][m + mask.n]|^2
// over all 2^dim masks.
double square_mean_tables(const std::vector<const cd*>& t, unsigned dim, std::size_t n_range,
                          std::size_t m_range) {
    const std::size_t vertices = std::size_t{1} << dim;
    const std::size_t count = static_cast<std::size_t>(saturating_pow(n_range, dim));
    const double total = deterministic_sum<double>(count, [&](std::size_t idx) {
        std::size_t n[kMaxCubicDim + 8];
        decode(idx, n_range, dim, n);
        std::vector<const cd*> shifted(vertices);
        for (std::size_t mask = 0; mask < vertices; ++mask) {
            std::size_t s = 0;
            for (unsigned i = 0; i < dim; ++i)
                if ((mask >> i) & 1U) s += n[i];
            shifted[mask] = t[mask] + s;
        }
        CompensatedSum<cd> inner;
        for (std::size_t m = 1; m <= m_range; ++m) {
            cd p = shifted[0][m];
            for (std::size_t mask = 1; mask < vertices; ++mask) p *= shifted[mask][m];
            inner.add(p);
        }
        return std::norm(inner.value()) / (static_cast<double>(m_range) * static_cast<double>(m_range));
    });
    return total / static_cast<double>(count);
}

}  // namespace

VertexAssignment::VertexAssignment(unsigned k, std::vector<VertexEntry> entries, State start)
    : k_(k), entries_(std::move(entries)), start_(std::move(start)) {
    if (k_ == 0 || k_ > kMaxCubicDim) {
        std::ostringstream os;
        os << "VertexAssignment: dimension " << k_ << " not in [1, " << kMaxCubicDim << "]";
        throw std::invalid_argument(os.str());
    }
    const std::size_t expected = (std::size_t{1} << k_) - 1;
    if (entries_.size() != expected) {
        std::ostringstream os;
        os << "VertexAssignment: " << entries_.size() << " vertex entries, expected " << expected;
        throw std::invalid_argument(os.str());
    }
    check_entries(entries_, start_, "VertexAssignment");
}

VertexAssignment VertexAssignment::uniform(unsigned k, const VertexEntry& entry, State start) {
    return VertexAssignment(k, std::vector<VertexEntry>((std::size_t{1} << k) - 1, entry),
                            std::move(start));
}

double VertexAssignment::bound() const {
    double b = 1.0;
    for (const auto& e : entries_) b *= e.observable.bound();
    return b;
}

CubeAssignment::CubeAssignment(unsigned k, std::vector<VertexEntry> entries, State start)
    : k_(k), entries_(std::move(entries)), start_(std::move(start)) {
    if (k_ < 2 || k_ > kMaxCubicDim + 1) {
        std::ostringstream os;
        os << "CubeAssignment: k = " << k_ << " not in [2, " << kMaxCubicDim + 1 << "]";
        throw std::invalid_argument(os.str());
    }
    const std::size_t expected = std::size_t{1} << (k_ - 1);
    if (entries_.size() != expected) {
        std::ostringstream os;
        os << "CubeAssignment: " << entries_.size() << " vertex entries, expected " << expected;
        throw std::invalid_argument(os.str());
    }
    check_entries(entries_, start_, "CubeAssignment");
}

bool decouples(const VertexAssignment& va) {
    const unsigned vertices = 1U << va.k();
    for (unsigned mask = 1; mask < vertices; ++mask) {
        if (Vertex{mask, va.k()}.weight() >= 2 && !va.at(mask).observable.is_constant()) return false;
    }
    return true;
}

cd cubic_average(const VertexAssignment& va, std::size_t N, std::uint64_t budget) {
    if (N == 0) throw std::invalid_argument("cubic_average: N must be >= 1");
    const unsigned k = va.k();
    const unsigned vertices = 1U << k;
    const double Nd = static_cast<double>(N);

    if (decouples(va)) {
        const auto tables = orbit_tables(va.entries(), va.start(), N);
        cd result = 1.0;
        for (unsigned mask = 1; mask < vertices; ++mask) {
            const Vertex v{mask, k};
            const Table& t = *tables[mask - 1];
            if (v.weight() == 1) {
                CompensatedSum<cd> s;
                for (std::size_t n = 1; n <= N; ++n) s.add(t[n]);
                result *= s.value() / Nd;
            } else {
                result *= t[0];
            }
        }
        return result;
    }

    check_budget(N, k, budget, "cubic_average");
    const auto tables = orbit_tables(va.entries(), va.start(), k * N);
    std::vector<const cd*> t(vertices, nullptr);
    for (unsigned mask = 1; mask < vertices; ++mask) t[mask] = tables[mask - 1]->data();

    const unsigned dim = k - 1;
    const unsigned top = 1U << dim;
    const std::size_t count = static_cast<std::size_t>(saturating_pow(N, dim));
    const cd total = deterministic_sum<cd>(count, [&](std::size_t idx) {
        std::size_t n[kMaxCubicDim];
        decode(idx, N, dim, n);
        std::size_t s[1U << kMaxCubicDim] = {};
        cd fixed = 1.0;
        for (unsigned mask = 1; mask < top; ++mask) {
            for (unsigned i = 0; i < dim; ++i)
                if ((mask >> i) & 1U) s[mask] += n[i];
            fixed *= t[mask][s[mask]];
        }
        const cd* moving[1U << (kMaxCubicDim - 1)];
        for (unsigned low = 0; low < top; ++low) moving[low] = t[low | top] + s[low];
        CompensatedSum<cd> inner;
        for (std::size_t nk = 1; nk <= N; ++nk) {
            cd p = moving[0][nk];
            for (unsigned low = 1; low < top; ++low) p *= moving[low][nk];
            inner.add(p);
        }
        return fixed * inner.value();
    });
    return total / static_cast<double>(saturating_pow(N, k));
}

double cubic_square_mean(const CubeAssignment& ca, std::size_t N, std::uint64_t budget) {
    if (N == 0) throw std::invalid_argument("cubic_square_mean: N must be >= 1");
    const unsigned k = ca.k();
    check_budget(N, k, budget, "cubic_square_mean");
    const auto tables = orbit_tables(ca.entries(), ca.start(), k * N);
    std::vector<const cd*> t;
    for (const auto& p : tables) t.push_back(p->data());
    return square_mean_tables(t, k - 1, N, N);
}

double sequence_square_mean(const std::vector<BoundedSeq>& a, unsigned k, std::size_t N,
                            std::uint64_t budget) {
    if (k < 2) throw std::invalid_argument("sequence_square_mean: k must be >= 2");
    const std::size_t vertices = std::size_t{1} << (k - 1);
    if (a.size() != vertices) throw std::invalid_argument("sequence_square_mean: wrong vertex count");
    check_budget(N, k, budget, "sequence_square_mean");
    std::vector<Table> tables(vertices, Table(k * N + 1));
    std::vector<const cd*> t;
    for (std::size_t mask = 0; mask < vertices; ++mask) {
        if (a[mask].length() < k * N) throw std::invalid_argument("sequence_square_mean: sequence too short");
        const bool conj = Vertex{static_cast<unsigned>(mask), k - 1}.conjugated();
        for (std::size_t j = 1; j <= k * N; ++j)
            tables[mask][j] = conj ? std::conj(a[mask](static_cast<std::int64_t>(j))) : a[mask](static_cast<std::int64_t>(j));
        t.push_back(tables[mask].data());
    }
    return square_mean_tables(t, k - 1, N, N);
}

std::array<InequalityReport, 3> pkey_chain_check(const std::vector<BoundedSeq>& a,
                                                 std::size_t N, unsigned k,
                                                 std::uint64_t budget) {
    if (k < 2) throw std::invalid_argument("pkey_chain_check: k must be >= 2");
    if (k > 12) throw std::invalid_argument("pkey_chain_check: k too large");
    const std::size_t vertices = std::size_t{1} << (k - 1);
    if (a.size() != vertices) {
        std::ostringstream os;
        os << "pkey_chain_check: " << a.size() << " sequences, expected " << vertices;
        throw std::invalid_argument(os.str());
    }
    const std::size_t M = N / k;
    if (M == 0) throw std::invalid_argument("pkey_chain_check: N must be >= k");
    for (std::size_t mask = 0; mask < vertices; ++mask) {
        if (a[mask].length() < k * N) {
            std::ostringstream os;
            os << "pkey_chain_check: sequence " << mask << " has length " << a[mask].length()
               << ", needs k N = " << k * N;
            throw std::invalid_argument(os.str());
        }
    }
    check_budget(N, k, budget, "pkey_chain_check");

    const unsigned dim = k - 1;
    const std::size_t span_len = k * N + 1;
    std::vector<Table> literal(vertices, Table(span_len));
    std::vector<Table> padded(vertices, Table(span_len));
    std::vector<PeriodicSeq> padded_zn;
    for (std::size_t mask = 0; mask < vertices; ++mask) {
        const bool conj = Vertex{static_cast<unsigned>(mask), dim}.conjugated();
        const auto v = a[mask].values();
        std::vector<cd> base(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(N));
        if (mask == 0) std::fill(base.begin() + static_cast<std::ptrdiff_t>(M), base.end(), cd{});
        for (std::size_t j = 1; j < span_len; ++j) {
            const cd lit = v[j - 1];
            const cd per = base[(j - 1) % N];
            literal[mask][j] = conj ? std::conj(lit) : lit;
            padded[mask][j] = conj ? std::conj(per) : per;
        }
        padded_zn.emplace_back(std::move(base));
    }
    std::vector<const cd*> lit_ptr, pad_ptr;
    for (std::size_t mask = 0; mask < vertices; ++mask) {
        lit_ptr.push_back(literal[mask].data());
        pad_ptr.push_back(padded[mask].data());
    }

    const double q0 = square_mean_tables(lit_ptr, dim, M, M);
    const double q1 = square_mean_tables(pad_ptr, dim, M, N);
    const double q2 = square_mean_tables(pad_ptr, dim, N, N);

    double gcs = 1.0;
    for (const auto& p : padded_zn) {
        const double u = k == 2 ? gowers_u2_fourier(p).value : gowers_zn_direct(p, k, budget).value;
        gcs *= u * u;
    }

    const double c = static_cast<double>(N) / static_cast<double>(M);
    const double c2 = c * c;
    double ck1 = 1.0;
    for (unsigned i = 0; i < k + 1; ++i) ck1 *= c;

    return {make_report("pkey_window", q0, c2 * q1, N, M, k),
            make_report("pkey_lattice", c2 * q1, ck1 * q2, N, M, k),
            make_report("pkey_gcs", q2, gcs, N, M, k)};
}

double top_half_oscillation(const std::vector<cd>& averages) {
    double osc = 0.0;
    for (std::size_t i = averages.size() / 2; i < averages.size(); ++i)
        for (std::size_t j = i + 1; j < averages.size(); ++j)
            osc = std::max(osc, std::abs(averages[i] - averages[j]));
    return osc;
}

void check_scan_grid(const std::vector<std::size_t>& grid, const char* op) {
    if (grid.size() < 4) {
        std::ostringstream os;
        os << op << ": grid has " << grid.size() << " points, needs at least 4";
        throw std::invalid_argument(os.str());
    }
    if (grid.front() == 0) throw std::invalid_argument(std::string(op) + ": grid contains 0");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (grid[i] <= grid[i - 1])
            throw std::invalid_argument(std::string(op) + ": grid must be strictly increasing");
    }
}

ConvergenceReport convergence_scan(const VertexAssignment& va,
                                   const std::vector<std::size_t>& grid, std::uint64_t budget) {
    check_scan_grid(grid, "convergence_scan");
    ConvergenceReport r;
    r.grid = grid;
    for (std::size_t N : grid) r.averages.push_back(cubic_average(va, N, budget));
    r.oscillation = top_half_oscillation(r.averages);
    return r;
}

std::vector<std::size_t> geometric_grid(unsigned lo, unsigned hi) {
    if (lo > hi || hi > 40) throw std::invalid_argument("geometric_grid: bad exponent range");
    std::vector<std::size_t> g;
    for (unsigned e = lo; e <= hi; ++e) g.push_back(std::size_t{1} << e);
    return g;
}

}  // namespace ergolab

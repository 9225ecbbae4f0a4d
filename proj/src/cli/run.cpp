#include "ergolab/cli/run.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "ergolab/cli/config.hpp"
#include "ergolab/cli/csv.hpp"
#include "ergolab/cubic.hpp"
#include "ergolab/gowers.hpp"
#include "ergolab/nil.hpp"
#include "ergolab/parallel.hpp"
#include "ergolab/pet.hpp"
#include "ergolab/polyavg.hpp"
#include "ergolab/vdc.hpp"
#include "ergolab/verify.hpp"

namespace ergolab::cli {

namespace {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string config;
    std::string out;
    std::uint64_t seed = 0;
    bool seed_given = false;
    unsigned threads = 0;
    std::uint64_t budget = kDefaultBudget;

    // subcommand flags
    std::string family;
    std::string schedule;
    std::string suite = "all";
    std::size_t trials = 100;
};

struct Context {
    const Options& opt;
    json config;
    std::ostream& out;
    std::ostream& err;

    Field root() const { return Field(config, ""); }

    std::uint64_t seed() const {
        if (opt.seed_given) return opt.seed;
        if (config.contains("seed")) return root().at("seed").unsigned_integer();
        return 0;
    }

    void write(const std::string& text) const {
        if (opt.out.empty()) {
            out << text;
            return;
        }
        std::ofstream f(opt.out, std::ios::binary | std::ios::trunc);
        if (!f) throw IoError("cannot open " + opt.out + ": " + std::strerror(errno));
        f << text;
        f.close();
        if (!f) throw IoError("cannot write " + opt.out + ": " + std::strerror(errno));
    }

    void write(const CsvTable& table) const { write(to_csv(table)); }
};

std::vector<unsigned> parse_ks(const Field& f) {
    std::vector<unsigned> ks;
    if (f.node().is_number_integer()) {
        ks.push_back(static_cast<unsigned>(f.unsigned_integer()));
    } else {
        for (std::size_t v : f.sizes()) ks.push_back(static_cast<unsigned>(v));
    }
    for (unsigned k : ks)
        if (k == 0) f.fail("k must be >= 1");
    return ks;
}

void report_violation(std::ostream& err, const InequalityReport& r, std::uint64_t seed) {
    err << "violation: " << r.name << " seed=" << seed << " N=" << r.N << " R=" << r.R
        << " k=" << r.k << " lhs=" << format_real(r.lhs) << " rhs=" << format_real(r.rhs)
        << " slack=" << format_real(r.slack) << "\n";
}

// --- gowers ------------------------------------------------------------------

int cmd_gowers(const Context& ctx) {
    const Field root = ctx.root();
    const auto Ns = parse_grid(root.at("N"));
    const auto ks = parse_ks(root.at("k"));
    std::vector<GowersMethod> methods;
    if (auto m = root.find("methods")) {
        for (std::size_t i = 0; i < m->size(); ++i) {
            const std::string name = m->at(i).string();
            if (name == "direct") methods.push_back(GowersMethod::direct);
            else if (name == "standard_form") methods.push_back(GowersMethod::standard_form);
            else if (name == "fourier") methods.push_back(GowersMethod::fourier);
            else if (name == "estimator") methods.push_back(GowersMethod::estimator);
            else m->at(i).fail("unknown method '" + name + "'");
        }
    } else {
        methods.push_back(GowersMethod::direct);
    }
    std::size_t length = 0;
    for (auto m : methods)
        for (unsigned k : ks)
            length = std::max(length, (m == GowersMethod::estimator ? k : 1U) * Ns.back());
    const BoundedSeq a = parse_sequence(root.at("sequence"), length, ctx.seed());

    CsvTable table{{{"method", CsvKind::text}, {"k", CsvKind::integer}, {"N", CsvKind::integer},
                    {"value", CsvKind::real}}, {}};
    int status = kExitOk;
    for (std::size_t N : Ns) {
        for (unsigned k : ks) {
            for (auto m : methods) {
                GowersResult r;
                switch (m) {
                    case GowersMethod::direct: r = gowers_zn_direct(periodize(a, N), k, ctx.opt.budget); break;
                    case GowersMethod::standard_form: r = gowers_zn_standard(periodize(a, N), k, ctx.opt.budget); break;
                    case GowersMethod::fourier:
                        if (k != 2) continue;
                        r = gowers_u2_fourier(periodize(a, N));
                        break;
                    case GowersMethod::estimator: r = gowers_estimator(a, k, N, ctx.opt.budget); break;
                }
                if (a.bound() <= 1.0 && r.value > 1.0 + 1e-9) {
                    ctx.err << "violation: " << to_string(m) << " value " << format_real(r.value)
                            << " exceeds 1 for an input bounded by 1\n";
                    status = kExitViolation;
                }
                table.add_row({to_string(m), static_cast<std::int64_t>(k), static_cast<std::int64_t>(N), r.value});
            }
        }
    }
    ctx.write(table);
    return status;
}

// --- inequality trials (vdc, cubic pkey) ---------------------------------------

int run_inequality_trials(const Context& ctx, InequalityKind kind) {
    const Field root = ctx.root();
    TrialSpec base;
    base.inequality = kind;
    if (auto f = root.find("input")) {
        try {
            base.input = parse_random_kind(f->string());
        } catch (const ConfigError&) {
            throw;
        } catch (const std::invalid_argument& e) {
            f->fail(e.what());
        }
    }
    if (auto f = root.find("alpha")) base.alpha = parse_parameter(*f);
    if (auto f = root.find("R")) base.R = f->sizes();
    for (std::size_t R : base.R)
        if (R == 0) root.at("R").fail("R values must be >= 1");
    if (auto f = root.find("trials")) base.trials = static_cast<std::size_t>(f->unsigned_integer());
    if (auto f = root.find("k")) base.k = static_cast<unsigned>(f->unsigned_integer());
    base.seed = ctx.seed();
    base.budget = ctx.opt.budget;

    CsvTable table{{{"check", CsvKind::text}, {"seed", CsvKind::text}, {"N", CsvKind::integer},
                    {"R", CsvKind::integer}, {"k", CsvKind::integer}, {"lhs", CsvKind::real},
                    {"rhs", CsvKind::real}, {"slack", CsvKind::real}}, {}};
    int status = kExitOk;
    for (std::size_t N : parse_grid(root.at("N"))) {
        TrialSpec spec = base;
        spec.N = N;
        for (const auto& t : run_trials(spec)) {
            const auto& r = t.report;
            if (!r.holds()) {
                report_violation(ctx.err, r, t.seed);
                status = kExitViolation;
            }
            table.add_row({r.name, std::to_string(t.seed), static_cast<std::int64_t>(r.N),
                           static_cast<std::int64_t>(r.R), static_cast<std::int64_t>(r.k), r.lhs, r.rhs,
                           r.slack});
        }
    }
    ctx.write(table);
    return status;
}

int cmd_vdc(const Context& ctx) {
    const Field root = ctx.root();
    const std::string inequality = root.at("inequality").string();
    if (inequality != "uk_comparison") {
        InequalityKind kind;
        try {
            kind = parse_inequality_kind(inequality);
        } catch (const std::invalid_argument& e) {
            root.at("inequality").fail(e.what());
        }
        return run_inequality_trials(ctx, kind);
    }
    const unsigned k = static_cast<unsigned>(root.at("k").unsigned_integer());
    const auto grid = parse_grid(root.at("grid"));
    const double threshold = root.has("threshold") ? root.at("threshold").real() : 10.0;
    const BoundedSeq a = parse_sequence(root.at("sequence"), k * grid.back(), ctx.seed());
    CsvTable table{{{"N", CsvKind::integer}, {"zn_norm", CsvKind::real}, {"estimator", CsvKind::real},
                    {"ratio", CsvKind::real}, {"flagged", CsvKind::integer}}, {}};
    int status = kExitOk;
    for (const auto& row : uk_comparison(a, k, grid, threshold, ctx.opt.budget)) {
        if (row.flagged) {
            ctx.err << "flagged: N=" << row.N << " ratio " << format_real(row.ratio) << " exceeds "
                    << format_real(threshold) << "\n";
            status = kExitViolation;
        }
        table.add_row({static_cast<std::int64_t>(row.N), row.zn_norm, row.estimator, row.ratio,
                       static_cast<std::int64_t>(row.flagged)});
    }
    ctx.write(table);
    return status;
}

// --- cubic -------------------------------------------------------------------

std::vector<VertexEntry> parse_vertices(const Field& root, std::size_t count) {
    std::vector<VertexEntry> entries;
    if (auto u = root.find("uniform")) {
        const SystemSpec sys = parse_system(u->at("system"));
        entries.assign(count, VertexEntry{sys, parse_observable(u->at("observable"), sys.dim())});
        return entries;
    }
    const Field v = root.at("vertices");
    if (v.size() != count) {
        v.fail("expected " + std::to_string(count) + " vertex entries, got " + std::to_string(v.size()));
    }
    for (std::size_t i = 0; i < count; ++i) {
        const Field e = v.at(i);
        const SystemSpec sys = parse_system(e.at("system"));
        entries.push_back({sys, parse_observable(e.at("observable"), sys.dim())});
    }
    return entries;
}

int cmd_cubic(const Context& ctx) {
    const Field root = ctx.root();
    const std::string mode = root.has("mode") ? root.at("mode").string() : "average";
    if (mode == "pkey") return run_inequality_trials(ctx, InequalityKind::pkey);

    const unsigned k = static_cast<unsigned>(root.at("k").unsigned_integer());
    if (k == 0 || k > kMaxCubicDim) root.at("k").fail("k must lie in [1, " + std::to_string(kMaxCubicDim) + "]");
    const auto grid = parse_grid(root.at("grid"));

    if (mode == "square_mean") {
        if (k < 2) root.at("k").fail("square means need k >= 2");
        auto entries = parse_vertices(root, std::size_t{1} << (k - 1));
        const State start = parse_point(root.at("start"), entries.front().system.dim());
        const CubeAssignment ca(k, std::move(entries), start);
        CsvTable table{{{"N", CsvKind::integer}, {"square_mean", CsvKind::real}}, {}};
        for (std::size_t N : grid)
            table.add_row({static_cast<std::int64_t>(N), cubic_square_mean(ca, N, ctx.opt.budget)});
        ctx.write(table);
        return kExitOk;
    }
    if (mode != "average" && mode != "scan") root.at("mode").fail("unknown mode '" + mode + "'");

    auto entries = parse_vertices(root, (std::size_t{1} << k) - 1);
    const State start = parse_point(root.at("start"), entries.front().system.dim());
    const VertexAssignment va(k, std::move(entries), start);
    ConvergenceReport rep;
    if (mode == "scan") {
        rep = convergence_scan(va, grid, ctx.opt.budget);
    } else {
        rep.grid = grid;
        for (std::size_t N : grid) rep.averages.push_back(cubic_average(va, N, ctx.opt.budget));
        rep.oscillation = top_half_oscillation(rep.averages);
    }
    int status = kExitOk;
    CsvTable table{{{"N", CsvKind::integer}, {"average", CsvKind::complex}, {"oscillation", CsvKind::real}}, {}};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (std::abs(rep.averages[i]) > va.bound() + 1e-9) {
            ctx.err << "violation: |A_N| = " << format_real(std::abs(rep.averages[i])) << " exceeds the bound "
                    << format_real(va.bound()) << " at N=" << grid[i] << "\n";
            status = kExitViolation;
        }
        table.add_row({static_cast<std::int64_t>(grid[i]), rep.averages[i], rep.oscillation});
    }
    ctx.write(table);
    return status;
}

// --- pet ---------------------------------------------------------------------

std::vector<std::int64_t> parse_schedule_text(const std::string& text) {
    std::vector<std::int64_t> s;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t pos = 0;
        long long v = 0;
        try {
            v = std::stoll(item, &pos);
        } catch (const std::exception&) {
            throw ConfigError("--schedule: cannot parse '" + item + "'");
        }
        while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
        if (pos != item.size() || v < 1) throw ConfigError("--schedule: '" + item + "' is not a positive integer");
        s.push_back(v);
    }
    if (s.empty()) throw ConfigError("--schedule: empty schedule");
    return s;
}

int cmd_pet(const Context& ctx) {
    const Field root = ctx.root();
    std::string family_text = ctx.opt.family;
    if (family_text.empty()) {
        if (!ctx.config.contains("family")) throw ConfigError("pet: give --family or a config with 'family'");
        family_text = root.at("family").string();
    }
    PolyFamily family;
    try {
        family = parse_family(family_text);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("--family: ") + e.what());
    }
    std::vector<std::int64_t> schedule = default_schedule();
    if (!ctx.opt.schedule.empty()) {
        schedule = parse_schedule_text(ctx.opt.schedule);
    } else if (auto f = root.find("schedule")) {
        schedule.clear();
        for (std::size_t i = 0; i < f->size(); ++i) {
            const std::int64_t r = f->at(i).integer();
            if (r < 1) f->at(i).fail("schedule values must be >= 1");
            schedule.push_back(r);
        }
    }
    validate_family(family, "pet");
    if (!is_nice(family)) throw ConfigError("pet: family " + to_string(family) + " is not nice");
    const ReductionTrace trace = reduce_trace(family, schedule);
    ctx.write(format_trace(trace, k_bound(family)));
    return kExitOk;
}

// --- polyavg -----------------------------------------------------------------

int cmd_polyavg(const Context& ctx) {
    const Field root = ctx.root();
    const Field t = root.at("terms");
    std::vector<PolyTerm> terms;
    int max_degree = 1;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const Field e = t.at(i);
        const SystemSpec sys = parse_system(e.at("system"));
        PolyTerm term{sys, parse_observable(e.at("observable"), sys.dim()), parse_poly_field(e.at("p"))};
        max_degree = std::max(max_degree, term.p.degree());
        terms.push_back(std::move(term));
    }
    if (terms.empty()) t.fail("no terms");
    const int degree = root.has("degree") ? static_cast<int>(root.at("degree").unsigned_integer()) : max_degree;
    auto schedule = [&]() -> GrowthSchedule {
        try {
            if (auto tab = root.find("schedule_table")) {
                std::vector<std::pair<std::size_t, std::size_t>> rows;
                for (std::size_t i = 0; i < tab->size(); ++i) {
                    const auto pair = tab->at(i).sizes();
                    if (pair.size() != 2) tab->at(i).fail("expected [N, b]");
                    rows.emplace_back(pair[0], pair[1]);
                }
                return GrowthSchedule(std::move(rows), degree);
            }
            return GrowthSchedule(root.at("theta").real(), degree);
        } catch (const ConfigError&) {
            throw;
        } catch (const std::invalid_argument& e) {
            root.fail(e.what());
        }
    }();
    const State start = parse_point(root.at("start"), terms.front().system.dim());
    std::optional<PolyAvgSpec> spec;
    try {
        spec.emplace(std::move(terms), start, schedule);
    } catch (const std::invalid_argument& e) {
        root.fail(e.what());
    }
    const auto grid = parse_grid(root.at("grid"));

    CsvTable table{{{"N", CsvKind::integer}, {"b", CsvKind::integer}, {"average", CsvKind::complex},
                    {"square_mean", CsvKind::real}}, {}};
    int status = kExitOk;
    std::vector<cd> averages;
    for (std::size_t N : grid) {
        const PolyAvgValue v = poly_evaluate(*spec, N, ctx.opt.budget);
        if (std::abs(v.average) > spec->bound() + 1e-9 || v.square_mean < std::norm(v.average) - 1e-12) {
            ctx.err << "violation: polynomial average invariants fail at N=" << N << "\n";
            status = kExitViolation;
        }
        averages.push_back(v.average);
        table.add_row({static_cast<std::int64_t>(N), static_cast<std::int64_t>(v.b), v.average, v.square_mean});
    }
    if (grid.size() >= 4) ctx.err << "oscillation: " << format_real(top_half_oscillation(averages)) << "\n";
    ctx.write(table);
    return status;
}

// --- nil ---------------------------------------------------------------------

int cmd_nil(const Context& ctx) {
    const Field root = ctx.root();
    const std::string mode = root.has("mode") ? root.at("mode").string() : "average";
    if (mode == "sample") {
        const HeisenbergElement a = parse_element(root.at("element"));
        const HeisenbergElement x0 = parse_element(root.at("start"));
        const ObservableSpec f = parse_observable(root.at("observable"), 3);
        const auto N = static_cast<std::size_t>(root.at("N").unsigned_integer());
        BoundedSeq s = [&] {
            try {
                return nilsequence_sample(a, x0, f, N);
            } catch (const std::invalid_argument& e) {
                root.fail(e.what());
            }
        }();
        CsvTable table{{{"n", CsvKind::integer}, {"value", CsvKind::complex}}, {}};
        for (std::size_t n = 1; n <= N; ++n) table.add_row({static_cast<std::int64_t>(n), s(static_cast<std::int64_t>(n))});
        ctx.write(table);
        return kExitOk;
    }
    if (mode != "average") root.at("mode").fail("unknown mode '" + mode + "'");
    const Field t = root.at("terms");
    std::vector<NilTerm> terms;
    double bound = 1.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const Field e = t.at(i);
        NilTerm term{parse_element(e.at("element")), parse_poly_field(e.at("p")),
                     parse_observable(e.at("observable"), 3), parse_element(e.at("start"))};
        try {
            check_nil_observable(term.f);
        } catch (const std::invalid_argument& ex) {
            e.at("observable").fail(ex.what());
        }
        bound *= term.f.bound();
        terms.push_back(std::move(term));
    }
    if (terms.empty()) t.fail("no terms");
    const auto grid = parse_grid(root.at("grid"));
    ConvergenceReport rep;
    if (grid.size() >= 4) {
        rep = nil_convergence_scan(terms, grid);
    } else {
        rep.grid = grid;
        for (std::size_t N : grid) rep.averages.push_back(nil_polynomial_average(terms, N));
        rep.oscillation = top_half_oscillation(rep.averages);
    }
    int status = kExitOk;
    CsvTable table{{{"N", CsvKind::integer}, {"average", CsvKind::complex}, {"oscillation", CsvKind::real}}, {}};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (std::abs(rep.averages[i]) > bound + 1e-9) {
            ctx.err << "violation: nil average exceeds the observable bound at N=" << grid[i] << "\n";
            status = kExitViolation;
        }
        table.add_row({static_cast<std::int64_t>(grid[i]), rep.averages[i], rep.oscillation});
    }
    ctx.write(table);
    return status;
}

// --- verify ------------------------------------------------------------------

int cmd_verify(const Context& ctx) {
    const auto results = run_suite(ctx.opt.suite, ctx.seed(), ctx.opt.trials);
    CsvTable table{{{"check", CsvKind::text}, {"N", CsvKind::integer}, {"k", CsvKind::integer},
                    {"trials", CsvKind::integer}, {"failures", CsvKind::integer}, {"worst", CsvKind::real},
                    {"status", CsvKind::text}, {"note", CsvKind::text}}, {}};
    int status = kExitOk;
    for (const auto& s : results) {
        const std::string st = s.skipped ? "skipped" : (s.failures ? "fail" : "pass");
        if (s.failures) {
            ctx.err << "verify: " << s.check << " N=" << s.N << " k=" << s.k << " failed " << s.failures
                    << " of " << s.trials << " trials (worst " << format_real(s.worst) << ")\n";
            status = kExitViolation;
        }
        table.add_row({s.check, static_cast<std::int64_t>(s.N), static_cast<std::int64_t>(s.k),
                       static_cast<std::int64_t>(s.trials), static_cast<std::int64_t>(s.failures), s.worst, st,
                       s.note});
    }
    ctx.write(table);
    return status;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options opt;
    CLI::App app{"ergolab: finite-scale experiments on uniformity norms and multiple ergodic averages"};
    app.name("ergolab");
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--config", opt.config, "JSON experiment config")->check(CLI::ExistingFile);
    app.add_option("--out", opt.out, "output file (default: stdout)");
    auto* seed_opt = app.add_option("--seed", opt.seed, "base seed (overrides the config)");
    app.add_option("--threads", opt.threads, "worker threads (default: hardware concurrency)");
    app.add_option("--budget", opt.budget, "lattice-point budget per evaluation");

    auto* gowers = app.add_subcommand("gowers", "Gowers norms on Z_N and the truncated estimator");
    auto* vdc = app.add_subcommand("vdc", "van der Corput inequality trials");
    auto* cubic = app.add_subcommand("cubic", "cubic averages, square means, key-estimate chain");
    auto* pet = app.add_subcommand("pet", "PET reduction trace and k bound");
    pet->add_option("--family", opt.family, "polynomial family, e.g. \"n^2, n\"");
    pet->add_option("--schedule", opt.schedule, "comma-separated r values tried in order");
    auto* polyavg = app.add_subcommand("polyavg", "polynomial multiple averages");
    auto* nil = app.add_subcommand("nil", "Heisenberg nilsequences and polynomial averages");
    auto* verify = app.add_subcommand("verify", "run the exact-inequality property batches");
    verify->add_option("--suite", opt.suite, "all, gowers, vdc, pkey, pet or heisenberg");
    verify->add_option("--trials", opt.trials, "trials per batch");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    opt.seed_given = seed_opt->count() > 0;
    set_thread_count(opt.threads ? opt.threads : std::max(1U, std::thread::hardware_concurrency()));

    try {
        json config = json::object();
        if (!opt.config.empty()) config = load_config(opt.config);
        if (!config.is_object()) throw ConfigError("config root must be a JSON object");
        const Context ctx{opt, std::move(config), out, err};
        const bool needs_config = !pet->parsed() && !verify->parsed();
        if (needs_config && opt.config.empty()) throw ConfigError("this subcommand needs --config");
        if (gowers->parsed()) return cmd_gowers(ctx);
        if (vdc->parsed()) return cmd_vdc(ctx);
        if (cubic->parsed()) return cmd_cubic(ctx);
        if (pet->parsed()) return cmd_pet(ctx);
        if (polyavg->parsed()) return cmd_polyavg(ctx);
        if (nil->parsed()) return cmd_nil(ctx);
        if (verify->parsed()) return cmd_verify(ctx);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ResourceError& e) {
        err << "error: " << e.what() << "\n";
        return kExitResource;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitViolation;
    }
    return kExitUsage;
}

}  // namespace ergolab::cli

#include <doctest.h>

#include <fstream>
#include <sstream>

#include "ergolab/cli/config.hpp"
#include "ergolab/cli/csv.hpp"
#include "ergolab/cli/run.hpp"
#include "ergolab/parallel.hpp"

using namespace ergolab;
using namespace ergolab::cli;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string config(const std::string& name) {
    return std::string(ERGOLAB_SOURCE_DIR) + "/configs/" + name;
}

}  // namespace

TEST_CASE("csv round trip") {
    CsvTable t{{{"n", CsvKind::integer}, {"x", CsvKind::real}, {"z", CsvKind::complex}, {"s", CsvKind::text}}, {}};
    t.add_row({std::int64_t{3}, 0.1, cd{1.0 / 3.0, -2.5e-300}, std::string("a,\"b\"")});
    t.add_row({std::int64_t{-7}, -1e20, cd{0.0, 1.0}, std::string("plain")});
    const std::string text = to_csv(t);
    CHECK(text.substr(0, text.find('\n')) == "n,x,re_z,im_z,s");
    const CsvTable back = parse_csv(text, t.columns);
    REQUIRE(back.rows.size() == 2);
    CHECK(back.rows == t.rows);
    CHECK(to_csv(back) == text);
}

TEST_CASE("header only table") {
    CsvTable t{{{"N", CsvKind::integer}, {"v", CsvKind::real}}, {}};
    CHECK(to_csv(t) == "N,v\n");
    CHECK(parse_csv("N,v\n", t.columns).rows.empty());
}

TEST_CASE("row width is checked") {
    CsvTable t{{{"N", CsvKind::integer}}, {}};
    CHECK_THROWS(t.add_row({std::int64_t{1}, 2.0}));
}

TEST_CASE("config syntax errors name the position") {
    try {
        parse_config_text("{\n  \"N\": [8,\n", "cfg.json");
        FAIL("no throw");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("cfg.json:3:") != std::string::npos);
    }
}

TEST_CASE("typed fields report their path") {
    const json j = parse_config_text(R"({"grid": [4, 2], "k": "x"})", "t");
    const Field root(j, "");
    CHECK_THROWS_WITH_AS(parse_grid(root.at("grid")), doctest::Contains("/grid"), ConfigError);
    CHECK_THROWS_WITH_AS(root.at("k").integer(), doctest::Contains("/k"), ConfigError);
    CHECK_THROWS_AS(root.at("missing"), ConfigError);
    const json g = parse_config_text(R"({"geometric": [3, 5]})", "t");
    CHECK(parse_grid(Field(g, "")) == std::vector<std::size_t>{8, 16, 32});
}

TEST_CASE("pet subcommand prints the square trace") {
    const auto r = invoke({"pet", "--family", "n^2"});
    CHECK(r.code == kExitOk);
    CHECK(r.out ==
          "family: (n^2)\n"
          "type: (2,1,0)\n"
          "step 1: p = n^2, r = 1\n"
          "  family: (2n+1)\n"
          "  type: (1,1)\n"
          "k_bound: 3\n");
}

TEST_CASE("gowers of a constant sequence is one") {
    const auto r = invoke({"--config", config("gowers_constant.json"), "gowers"});
    REQUIRE(r.code == kExitOk);
    const auto rows = split_csv(r.out);
    REQUIRE(rows.size() > 1);
    CHECK(rows[0] == std::vector<std::string>{"method", "k", "N", "value"});
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::stod(rows[i][3]) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("output is identical across reruns and thread counts") {
    const std::vector<std::pair<std::string, std::string>> cases{
        {"gowers_random.json", "gowers"}, {"cubic_heisenberg_scan.json", "cubic"}, {"polyavg_weyl.json", "polyavg"}};
    for (const auto& [name, sub] : cases) {
        const auto a = invoke({"--config", config(name), "--threads", "1", sub});
        const auto b = invoke({"--config", config(name), "--threads", "4", sub});
        const auto c = invoke({"--config", config(name), "--threads", "1", sub});
        CHECK(a.code == kExitOk);
        CHECK(a.out == b.out);
        CHECK(a.out == c.out);
    }
    set_thread_count(1);
}

TEST_CASE("seed flag overrides the config") {
    const auto a = invoke({"--config", config("gowers_random.json"), "--seed", "5", "gowers"});
    const auto b = invoke({"--config", config("gowers_random.json"), "--seed", "6", "gowers"});
    CHECK(a.code == kExitOk);
    CHECK(a.out != b.out);
}

TEST_CASE("exit codes") {
    CHECK(invoke({}).code == kExitUsage);
    CHECK(invoke({"bogus"}).code == kExitUsage);
    CHECK(invoke({"gowers"}).code == kExitUsage);  // no config
    CHECK(invoke({"pet", "--family", "n^2+"}).code == kExitUsage);
    CHECK(invoke({"--config", config("gowers_constant.json"), "--budget", "10", "gowers"}).code == kExitResource);
    CHECK(invoke({"--config", config("gowers_constant.json"), "--out", "/nonexistent/dir/x.csv", "gowers"}).code ==
          kExitIo);

    const std::string path = "cli_test_bad.json";
    {
        std::ofstream f(path);
        f << "{\"N\": [8,\n";
    }
    const auto r = invoke({"--config", path, "gowers"});
    CHECK(r.code == kExitUsage);
    CHECK(r.err.find(":2:") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("out flag writes the same bytes as stdout") {
    const std::string path = "cli_test_out.csv";
    const auto a = invoke({"--config", config("nil_sample.json"), "nil"});
    const auto b = invoke({"--config", config("nil_sample.json"), "--out", path, "nil"});
    CHECK(b.code == kExitOk);
    CHECK(b.out.empty());
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    CHECK(ss.str() == a.out);
    std::remove(path.c_str());
}

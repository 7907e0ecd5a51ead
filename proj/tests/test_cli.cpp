#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "slspec/config.hpp"
#include "slspec/output.hpp"

using namespace slspec;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string tmpdir(const std::string& tag) {
    const auto dir = std::filesystem::temp_directory_path() / ("slspec_test_" + tag);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir.string();
}

const char* kClassifyConfig = R"(
[family]
family = example2
kappa = 0.5
c = 1.0
omega = 6.283185307179586

[run]
command = classify
)";

} // namespace

TEST_CASE("parse_config materializes defaults") {
    const RunConfig cfg = parse_config(kClassifyConfig);
    CHECK(cfg.family == "example2");
    CHECK(cfg.command == "classify");
    CHECK(cfg.tol == 1e-10);
    CHECK(cfg.eps_case == 1e-6);
    CHECK_FALSE(cfg.plot);
    bool has_tol = false;
    for (const auto& [k, v] : cfg.effective())
        if (k == "run.tol") has_tol = true;
    CHECK(has_tol);
}

TEST_CASE("parse_config rejects bad input with line numbers") {
    {
        // kappa out of range names the offending line
        const std::string text = "[family]\nfamily = example2\nkappa = 1.5\n";
        try {
            parse_config(text);
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(e.line() == 3);
            CHECK(std::string(e.what()).find("kappa") != std::string::npos);
        }
    }
    {
        const std::string text =
            "[family]\nfamily = free\nomega = 1.0\nomega = 2.0\n[run]\ncommand = classify\n";
        try {
            parse_config(text);
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(e.line() == 4);
            CHECK(std::string(e.what()).find("duplicate") != std::string::npos);
        }
    }
    CHECK_THROWS_AS(parse_config("[family]\nfamily = free\nomega = 1\nbogus = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[nope]\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("key = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[run]\ncommand = classify\n"), ConfigError); // family missing
    CHECK_THROWS_AS(parse_config("[family]\nfamily = example2\nomega = 1\n[run]\ncommand = "
                                 "classify\n"),
                    ConfigError); // kappa/c missing
}

TEST_CASE("classify run emits the verdict and a CSV") {
    const std::string dir = tmpdir("classify");
    RunConfig cfg = parse_config(kClassifyConfig);
    const auto artifacts = run(cfg, dir);
    REQUIRE(artifacts.size() == 1);
    const std::string text = slurp(artifacts[0]);
    CHECK(text.find("case,trace,distance_to_boundary,marginal") != std::string::npos);
    CHECK(text.find("III") != std::string::npos);
    CHECK(text.find("# family.family = example2") != std::string::npos);
}

TEST_CASE("trace scan run is deterministic byte for byte") {
    const std::string config = R"(
[family]
family = example2
kappa = 0.5
c = 0.0
omega = 6.283185307179586

[run]
command = trace-scan
jobs = 4

[trace-scan]
param = c
lo = -0.75
hi = 1.25
count = 9
)";
    const std::string dir_a = tmpdir("scan_a");
    const std::string dir_b = tmpdir("scan_b");
    RunConfig cfg = parse_config(config);
    run(cfg, dir_a);
    run(cfg, dir_b);
    const std::string a = slurp(dir_a + "/run_trace-scan.csv");
    const std::string b = slurp(dir_b + "/run_trace-scan.csv");
    CHECK(a == b);
    CHECK(a.find("param,trace") != std::string::npos);
    // 17-significant-digit cells
    CHECK(a.find("0.7726511") != std::string::npos);
}

TEST_CASE("plot flag emits an SVG polyline") {
    const std::string config = R"(
[family]
family = free
omega = 3.141592653589793

[run]
command = trace-scan
plot = true

[trace-scan]
param = omega
lo = 1.0
hi = 3.0
count = 5
)";
    const std::string dir = tmpdir("svg");
    RunConfig cfg = parse_config(config);
    const auto artifacts = run(cfg, dir);
    REQUIRE(artifacts.size() == 2);
    const std::string svg = slurp(artifacts[1]);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("<polyline") != std::string::npos);
}

TEST_CASE("bands command writes the interval table") {
    const std::string config = R"(
[family]
family = free
omega = 3.141592653589793

[run]
command = bands

[bands]
lambda_min = -1.0
lambda_max = 10.0
)";
    const std::string dir = tmpdir("bands");
    RunConfig cfg = parse_config(config);
    run(cfg, dir);
    const std::string text = slurp(dir + "/run_bands.csv");
    CHECK(text.find("lo,hi,lo_clamped,hi_clamped") != std::string::npos);
    std::size_t rows = 0;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line))
        if (!line.empty() && line[0] != '#' && line.find("lo,") != 0) ++rows;
    CHECK(rows == 4);
}

TEST_CASE("phi header reports the adaptive start index") {
    const std::string config = R"(
[family]
family = example2
kappa = 0.5
c = 0.0
omega = 6.283185307179586

[run]
command = phi

[phi]
z = 0.0
t = 0.0
n_max = 60
eta1 = 0
eta2 = 1
)";
    const std::string dir = tmpdir("phi");
    RunConfig cfg = parse_config(config);
    run(cfg, dir);
    const std::string text = slurp(dir + "/run_phi.csv");
    CHECK(text.find("# adaptive_m = 1") != std::string::npos);
    CHECK(text.find("# delta = ") != std::string::npos);
    CHECK(text.find("n,scaled_u,phase") != std::string::npos);
}

TEST_CASE("example1-check stays near the closed-form identity") {
    const std::string config = R"(
[family]
family = free
omega = 3.141592653589793

[run]
command = example1-check

[example1]
lambda_lo = 0.5
lambda_hi = 4.0
count = 4
t = 0.7
periods = 120
)";
    const std::string dir = tmpdir("ex1");
    RunConfig cfg = parse_config(config);
    run(cfg, dir);
    const std::string text = slurp(dir + "/run_example1-check.csv");
    std::istringstream lines(text);
    std::string line;
    bool saw_data = false;
    while (std::getline(lines, line)) {
        if (line.empty() || line[0] == '#' || line.find("lambda,") == 0) continue;
        saw_data = true;
        const auto last_comma = line.rfind(',');
        CHECK(std::stod(line.substr(last_comma + 1)) < 0.02);
    }
    CHECK(saw_data);
    // only defined for the free family
    CHECK_THROWS_AS(
        parse_config("[family]\nfamily = example2\nkappa = 0.5\nc = 0\nomega = 6.28\n[run]\n"
                     "command = example1-check\n"),
        ConfigError);
}

TEST_CASE("cli entry point maps error classes to exit codes") {
    const std::string dir = tmpdir("cli");
    const std::string good = dir + "/good.conf";
    {
        std::ofstream out(good);
        out << kClassifyConfig;
    }
    const std::string bad = dir + "/bad.conf";
    {
        std::ofstream out(bad);
        out << "[family]\nfamily = example2\nkappa = 1.5\n";
    }

    {
        std::string cfg_arg = "--config=" + good;
        std::string out_arg = "--out=" + dir;
        char* argv[] = {const_cast<char*>("slspec"), const_cast<char*>(cfg_arg.c_str()),
                        const_cast<char*>(out_arg.c_str())};
        CHECK(cli_main(3, argv) == 0);
    }
    {
        std::string cfg_arg = "--config=" + bad;
        char* argv[] = {const_cast<char*>("slspec"), const_cast<char*>(cfg_arg.c_str())};
        CHECK(cli_main(2, argv) == 2);
    }
    {
        std::string cfg_arg = "--config=" + dir + "/missing.conf";
        char* argv[] = {const_cast<char*>("slspec"), const_cast<char*>(cfg_arg.c_str())};
        CHECK(cli_main(2, argv) == 2);
    }
}

TEST_CASE("fmt17 is stable") {
    CHECK(fmt17(1.0) == "1");
    CHECK(fmt17(0.1) == "0.10000000000000001");
    CHECK(fmt17(2.0 / 3.0) == "0.66666666666666663");
}

#ifndef SLSPEC_CONFIG_HPP
#define SLSPEC_CONFIG_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "slspec/transfer.hpp"

namespace slspec {

/// Parsed and validated run description. Every field has its default
/// materialized so the echoed effective config is complete.
struct RunConfig {
    // [family]
    std::string family;
    std::map<std::string, double> family_params;

    // [run]
    std::string command;
    bool plot = false;
    int jobs = 1;
    double tol = 1e-10;
    double eps_case = 1e-6;
    std::string out_prefix = "run";
    Frame frame = Frame::DPrime;

    struct EtaCfg {
        double e1 = 0.0, e2 = 1.0;
        std::string frame = "s1"; // "s1" | "stilde"
    };

    // [trace-scan]
    struct ScanCfg {
        std::string param = "c";
        double lo = 0.0, hi = 1.0;
        int count = 101;
    } scan;

    // [bands]
    struct BandsCfg {
        double lambda_min = -1.0, lambda_max = 10.0;
        double scan_step = 0.0; // 0 -> (max-min)/2000
        double edge_tol = 1e-9;
    } band;

    // [turan] and [phi]
    struct SeqCfg {
        double z = 0.0, t = 0.0;
        int n_max = 200;
        EtaCfg eta;
    } turan, phi;

    // [density]
    struct DensityCfg {
        double lambda = 0.0;
        EtaCfg eta;
        int schedule_start = 10, schedule_stop = 200, schedule_step = 1; // periods
        double s = 0.0; // offset: schedule points sit at s + n omega
    } density;

    // [dos]
    struct DosCfg {
        double window_a = -0.5, window_b = 0.5;
        std::vector<int> schedule = {50, 100, 200}; // periods
        EtaCfg eta;
    } dos;

    // [eigcount]
    struct EigcountCfg {
        double l_periods = 100.0;
        double window_a = -1.0, window_b = 1.0;
        double grid_step = 0.0;
        EtaCfg eta;
    } eigcount;

    // [cauchy]
    struct CauchyCfg {
        double z_re = 0.0, z_im = 0.5;
        std::vector<int> schedule = {50, 100, 200};
        EtaCfg eta;
    } cauchy;

    // [example1]
    struct Example1Cfg {
        double lambda_lo = 0.5, lambda_hi = 4.0;
        int count = 8;
        double t = 0.7;
        int periods = 200;
        EtaCfg eta;
    } example1;

    /// Fixed-order (key, value) list echoed at the top of every output file.
    std::vector<std::pair<std::string, std::string>> effective() const;
};

/// Strict, line-oriented `key = value` parsing under [section] headers.
/// Unknown sections/keys, duplicate keys, type mismatches and out-of-range
/// values raise ConfigError carrying the offending line number.
RunConfig parse_config(const std::string& text);

/// Executes the configured command, writing artifacts under out_dir.
/// Returns the list of paths written.
std::vector<std::string> run(const RunConfig& config, const std::string& out_dir);

/// Full command-line entry point (flags: --config, --out, --jobs, --plot).
/// Returns the process exit status: 0 ok, 2 config error, 3 numeric failure.
int cli_main(int argc, char** argv);

} // namespace slspec

#endif

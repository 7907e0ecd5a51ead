#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "slspec/config.hpp"

namespace slspec {

namespace {

std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\')
            out += std::string("\\") + c;
        else if (c == '\n')
            out += "\\n";
        else
            out += c;
    }
    return out;
}

void print_error_record(const std::string& kind, const std::string& message) {
    std::cerr << "{\"error\":\"" << kind << "\",\"message\":\"" << json_escape(message)
              << "\"}\n";
}

} // namespace

int cli_main(int argc, char** argv) {
    CLI::App app{"spectral toolkit for half-line Sturm-Liouville operators"};
    std::string config_path;
    std::string out_dir = ".";
    int jobs = -1;
    bool plot = false;
    app.add_option("--config", config_path, "path to the run configuration")->required();
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--jobs", jobs, "worker threads for sweeps (overrides config)");
    app.add_flag("--plot", plot, "also emit an SVG chart");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (app.exit(e) == 0) return 0;
        print_error_record("config", e.what());
        return 2;
    }

    try {
        std::ifstream in(config_path);
        if (!in) throw ConfigError("cannot read config file: " + config_path);
        std::stringstream buf;
        buf << in.rdbuf();
        RunConfig cfg = parse_config(buf.str());
        if (jobs >= 0) cfg.jobs = jobs;
        if (plot) cfg.plot = true;
        const auto artifacts = run(cfg, out_dir);
        for (const auto& path : artifacts) std::cout << "wrote " << path << "\n";
        return 0;
    } catch (const ConfigError& e) {
        print_error_record("config", e.what());
        return 2;
    } catch (const std::exception& e) {
        print_error_record("numeric", e.what());
        return 3;
    }
}

} // namespace slspec

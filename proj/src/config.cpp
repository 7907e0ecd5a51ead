#include "slspec/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <set>
#include <sstream>

#include "slspec/coefficients.hpp"
#include "slspec/output.hpp"

namespace slspec {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& v, int line) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError("expected a number, got '" + v + "'", line);
    return x;
}

int parse_int(const std::string& v, int line) {
    char* end = nullptr;
    const long x = std::strtol(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError("expected an integer, got '" + v + "'", line);
    return static_cast<int>(x);
}

bool parse_bool(const std::string& v, int line) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw ConfigError("expected true/false, got '" + v + "'", line);
}

std::vector<int> parse_int_list(const std::string& v, int line) {
    std::vector<int> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw ConfigError("empty element in list", line);
        out.push_back(parse_int(item, line));
    }
    if (out.empty()) throw ConfigError("empty list", line);
    return out;
}

using Handler = std::function<void(const std::string&, int)>;
using Section = std::map<std::string, Handler>;

void add_eta_keys(Section& sec, RunConfig::EtaCfg& eta) {
    sec["eta1"] = [&eta](const std::string& v, int ln) { eta.e1 = parse_double(v, ln); };
    sec["eta2"] = [&eta](const std::string& v, int ln) { eta.e2 = parse_double(v, ln); };
    sec["eta_frame"] = [&eta](const std::string& v, int ln) {
        if (v != "s1" && v != "stilde") throw ConfigError("eta_frame must be s1 or stilde", ln);
        eta.frame = v;
    };
}

const std::set<std::string> known_commands = {"classify", "trace-scan", "bands",    "turan",
                                              "phi",      "density",    "dos",      "eigcount",
                                              "cauchy",   "example1-check"};

} // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;

    std::map<std::string, Section> schema;
    {
        Section fam;
        for (const char* key : {"kappa", "c", "omega", "a", "b", "q0"}) {
            fam[key] = [&cfg, key](const std::string& v, int ln) {
                const double x = parse_double(v, ln);
                if (std::string(key) == "kappa" && !(x > 0.0 && x <= 1.0))
                    throw ConfigError("kappa must lie in (0, 1]", ln);
                if (std::string(key) == "omega" && !(x > 0.0))
                    throw ConfigError("omega must be positive", ln);
                if ((std::string(key) == "a" || std::string(key) == "b") && !(x > 0.0 && x < 1.0))
                    throw ConfigError(std::string(key) + " must lie in (0, 1)", ln);
                cfg.family_params[key] = x;
            };
        }
        fam["family"] = [&cfg](const std::string& v, int ln) {
            static const std::set<std::string> names = {"free", "constant-q", "example2",
                                                        "example5", "appendix-asymptotic"};
            if (!names.count(v)) throw ConfigError("unknown family '" + v + "'", ln);
            cfg.family = v;
        };
        schema["family"] = std::move(fam);
    }
    {
        Section runsec;
        runsec["command"] = [&cfg](const std::string& v, int ln) {
            if (!known_commands.count(v)) throw ConfigError("unknown command '" + v + "'", ln);
            cfg.command = v;
        };
        runsec["plot"] = [&cfg](const std::string& v, int ln) { cfg.plot = parse_bool(v, ln); };
        runsec["jobs"] = [&cfg](const std::string& v, int ln) {
            cfg.jobs = parse_int(v, ln);
            if (cfg.jobs < 0) throw ConfigError("jobs must be >= 0", ln);
        };
        runsec["tol"] = [&cfg](const std::string& v, int ln) {
            cfg.tol = parse_double(v, ln);
            if (!(cfg.tol > 0.0 && cfg.tol < 1.0)) throw ConfigError("tol must be in (0, 1)", ln);
        };
        runsec["eps_case"] = [&cfg](const std::string& v, int ln) {
            cfg.eps_case = parse_double(v, ln);
            if (!(cfg.eps_case > 0.0)) throw ConfigError("eps_case must be positive", ln);
        };
        runsec["out_prefix"] = [&cfg](const std::string& v, int) { cfg.out_prefix = v; };
        runsec["frame"] = [&cfg](const std::string& v, int ln) {
            if (v == "dprime")
                cfg.frame = Frame::DPrime;
            else if (v == "pdprime")
                cfg.frame = Frame::PDPrime;
            else
                throw ConfigError("frame must be dprime or pdprime", ln);
        };
        schema["run"] = std::move(runsec);
    }
    {
        Section s;
        s["param"] = [&cfg](const std::string& v, int ln) {
            static const std::set<std::string> ok = {"kappa", "c", "omega", "a", "b", "q0"};
            if (!ok.count(v)) throw ConfigError("unknown sweep parameter '" + v + "'", ln);
            cfg.scan.param = v;
        };
        s["lo"] = [&cfg](const std::string& v, int ln) { cfg.scan.lo = parse_double(v, ln); };
        s["hi"] = [&cfg](const std::string& v, int ln) { cfg.scan.hi = parse_double(v, ln); };
        s["count"] = [&cfg](const std::string& v, int ln) {
            cfg.scan.count = parse_int(v, ln);
            if (cfg.scan.count < 2) throw ConfigError("count must be >= 2", ln);
        };
        schema["trace-scan"] = std::move(s);
    }
    {
        Section s;
        s["lambda_min"] = [&cfg](const std::string& v, int ln) {
            cfg.band.lambda_min = parse_double(v, ln);
        };
        s["lambda_max"] = [&cfg](const std::string& v, int ln) {
            cfg.band.lambda_max = parse_double(v, ln);
        };
        s["scan_step"] = [&cfg](const std::string& v, int ln) {
            cfg.band.scan_step = parse_double(v, ln);
        };
        s["edge_tol"] = [&cfg](const std::string& v, int ln) {
            cfg.band.edge_tol = parse_double(v, ln);
            if (!(cfg.band.edge_tol > 0.0)) throw ConfigError("edge_tol must be positive", ln);
        };
        schema["bands"] = std::move(s);
    }
    for (auto [name, target] :
         std::initializer_list<std::pair<const char*, RunConfig::SeqCfg*>>{
             {"turan", &cfg.turan}, {"phi", &cfg.phi}}) {
        Section s;
        s["z"] = [target](const std::string& v, int ln) { target->z = parse_double(v, ln); };
        s["t"] = [target](const std::string& v, int ln) { target->t = parse_double(v, ln); };
        s["n_max"] = [target](const std::string& v, int ln) {
            target->n_max = parse_int(v, ln);
            if (target->n_max < 1) throw ConfigError("n_max must be >= 1", ln);
        };
        add_eta_keys(s, target->eta);
        schema[name] = std::move(s);
    }
    {
        Section s;
        s["lambda"] = [&cfg](const std::string& v, int ln) {
            cfg.density.lambda = parse_double(v, ln);
        };
        s["schedule_start"] = [&cfg](const std::string& v, int ln) {
            cfg.density.schedule_start = parse_int(v, ln);
        };
        s["schedule_stop"] = [&cfg](const std::string& v, int ln) {
            cfg.density.schedule_stop = parse_int(v, ln);
        };
        s["schedule_step"] = [&cfg](const std::string& v, int ln) {
            cfg.density.schedule_step = parse_int(v, ln);
            if (cfg.density.schedule_step < 1) throw ConfigError("schedule_step must be >= 1", ln);
        };
        s["s"] = [&cfg](const std::string& v, int ln) {
            cfg.density.s = parse_double(v, ln);
            if (cfg.density.s < 0.0) throw ConfigError("s must be >= 0", ln);
        };
        add_eta_keys(s, cfg.density.eta);
        schema["density"] = std::move(s);
    }
    {
        Section s;
        s["window_a"] = [&cfg](const std::string& v, int ln) {
            cfg.dos.window_a = parse_double(v, ln);
        };
        s["window_b"] = [&cfg](const std::string& v, int ln) {
            cfg.dos.window_b = parse_double(v, ln);
        };
        s["schedule"] = [&cfg](const std::string& v, int ln) {
            cfg.dos.schedule = parse_int_list(v, ln);
        };
        add_eta_keys(s, cfg.dos.eta);
        schema["dos"] = std::move(s);
    }
    {
        Section s;
        s["l_periods"] = [&cfg](const std::string& v, int ln) {
            cfg.eigcount.l_periods = parse_double(v, ln);
            if (!(cfg.eigcount.l_periods > 0.0))
                throw ConfigError("l_periods must be positive", ln);
        };
        s["window_a"] = [&cfg](const std::string& v, int ln) {
            cfg.eigcount.window_a = parse_double(v, ln);
        };
        s["window_b"] = [&cfg](const std::string& v, int ln) {
            cfg.eigcount.window_b = parse_double(v, ln);
        };
        s["grid_step"] = [&cfg](const std::string& v, int ln) {
            cfg.eigcount.grid_step = parse_double(v, ln);
        };
        add_eta_keys(s, cfg.eigcount.eta);
        schema["eigcount"] = std::move(s);
    }
    {
        Section s;
        s["z_re"] = [&cfg](const std::string& v, int ln) { cfg.cauchy.z_re = parse_double(v, ln); };
        s["z_im"] = [&cfg](const std::string& v, int ln) { cfg.cauchy.z_im = parse_double(v, ln); };
        s["schedule"] = [&cfg](const std::string& v, int ln) {
            cfg.cauchy.schedule = parse_int_list(v, ln);
        };
        add_eta_keys(s, cfg.cauchy.eta);
        schema["cauchy"] = std::move(s);
    }
    {
        Section s;
        s["lambda_lo"] = [&cfg](const std::string& v, int ln) {
            cfg.example1.lambda_lo = parse_double(v, ln);
        };
        s["lambda_hi"] = [&cfg](const std::string& v, int ln) {
            cfg.example1.lambda_hi = parse_double(v, ln);
        };
        s["count"] = [&cfg](const std::string& v, int ln) {
            cfg.example1.count = parse_int(v, ln);
            if (cfg.example1.count < 1) throw ConfigError("count must be >= 1", ln);
        };
        s["t"] = [&cfg](const std::string& v, int ln) { cfg.example1.t = parse_double(v, ln); };
        s["periods"] = [&cfg](const std::string& v, int ln) {
            cfg.example1.periods = parse_int(v, ln);
            if (cfg.example1.periods < 4) throw ConfigError("periods must be >= 4", ln);
        };
        add_eta_keys(s, cfg.example1.eta);
        schema["example1"] = std::move(s);
    }

    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    std::string section;
    std::set<std::string> seen;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("malformed section header", line_no);
            section = trim(line.substr(1, line.size() - 2));
            if (!schema.count(section))
                throw ConfigError("unknown section [" + section + "]", line_no);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("expected key = value", line_no);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty()) throw ConfigError("key outside any [section]", line_no);
        auto& sec = schema.at(section);
        auto it = sec.find(key);
        if (it == sec.end())
            throw ConfigError("unknown key '" + key + "' in [" + section + "]", line_no);
        if (!seen.insert(section + "." + key).second)
            throw ConfigError("duplicate key '" + key + "' in [" + section + "]", line_no);
        it->second(value, line_no);
    }

    if (cfg.family.empty()) throw ConfigError("missing required key family.family");
    if (cfg.command.empty()) throw ConfigError("missing required key run.command");
    make_family(cfg.family, cfg.family_params); // validates required family parameters
    if (cfg.command == "example1-check" && cfg.family != "free")
        throw ConfigError("example1-check requires the free family");
    return cfg;
}

std::vector<std::pair<std::string, std::string>> RunConfig::effective() const {
    std::vector<std::pair<std::string, std::string>> out;
    out.emplace_back("family.family", family);
    for (const auto& [k, v] : family_params) out.emplace_back("family." + k, fmt17(v));
    out.emplace_back("run.command", command);
    out.emplace_back("run.plot", plot ? "true" : "false");
    out.emplace_back("run.jobs", std::to_string(jobs));
    out.emplace_back("run.tol", fmt17(tol));
    out.emplace_back("run.eps_case", fmt17(eps_case));
    out.emplace_back("run.out_prefix", out_prefix);
    out.emplace_back("run.frame", frame == Frame::DPrime ? "dprime" : "pdprime");

    auto eta_keys = [&out](const std::string& sec, const RunConfig::EtaCfg& e) {
        out.emplace_back(sec + ".eta1", fmt17(e.e1));
        out.emplace_back(sec + ".eta2", fmt17(e.e2));
        out.emplace_back(sec + ".eta_frame", e.frame);
    };
    auto int_list = [](const std::vector<int>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(v[i]);
        }
        return s;
    };

    if (command == "trace-scan") {
        out.emplace_back("trace-scan.param", scan.param);
        out.emplace_back("trace-scan.lo", fmt17(scan.lo));
        out.emplace_back("trace-scan.hi", fmt17(scan.hi));
        out.emplace_back("trace-scan.count", std::to_string(scan.count));
    } else if (command == "bands") {
        out.emplace_back("bands.lambda_min", fmt17(band.lambda_min));
        out.emplace_back("bands.lambda_max", fmt17(band.lambda_max));
        out.emplace_back("bands.scan_step", fmt17(band.scan_step));
        out.emplace_back("bands.edge_tol", fmt17(band.edge_tol));
    } else if (command == "turan" || command == "phi") {
        const SeqCfg& s = command == "turan" ? turan : phi;
        out.emplace_back(command + ".z", fmt17(s.z));
        out.emplace_back(command + ".t", fmt17(s.t));
        out.emplace_back(command + ".n_max", std::to_string(s.n_max));
        eta_keys(command, s.eta);
    } else if (command == "density") {
        out.emplace_back("density.lambda", fmt17(density.lambda));
        out.emplace_back("density.schedule_start", std::to_string(density.schedule_start));
        out.emplace_back("density.schedule_stop", std::to_string(density.schedule_stop));
        out.emplace_back("density.schedule_step", std::to_string(density.schedule_step));
        out.emplace_back("density.s", fmt17(density.s));
        eta_keys("density", density.eta);
    } else if (command == "dos") {
        out.emplace_back("dos.window_a", fmt17(dos.window_a));
        out.emplace_back("dos.window_b", fmt17(dos.window_b));
        out.emplace_back("dos.schedule", int_list(dos.schedule));
        eta_keys("dos", dos.eta);
    } else if (command == "eigcount") {
        out.emplace_back("eigcount.l_periods", fmt17(eigcount.l_periods));
        out.emplace_back("eigcount.window_a", fmt17(eigcount.window_a));
        out.emplace_back("eigcount.window_b", fmt17(eigcount.window_b));
        out.emplace_back("eigcount.grid_step", fmt17(eigcount.grid_step));
        eta_keys("eigcount", eigcount.eta);
    } else if (command == "cauchy") {
        out.emplace_back("cauchy.z_re", fmt17(cauchy.z_re));
        out.emplace_back("cauchy.z_im", fmt17(cauchy.z_im));
        out.emplace_back("cauchy.schedule", int_list(cauchy.schedule));
        eta_keys("cauchy", cauchy.eta);
    } else if (command == "example1-check") {
        out.emplace_back("example1.lambda_lo", fmt17(example1.lambda_lo));
        out.emplace_back("example1.lambda_hi", fmt17(example1.lambda_hi));
        out.emplace_back("example1.count", std::to_string(example1.count));
        out.emplace_back("example1.t", fmt17(example1.t));
        out.emplace_back("example1.periods", std::to_string(example1.periods));
        eta_keys("example1", example1.eta);
    }
    return out;
}

} // namespace slspec

#include "nlj/config.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "nlj/csv.hpp"
#include "nlj/fpt.hpp"

namespace nlj {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& origin, int line, const std::string& key,
                    const std::string& value) {
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0')
        throw ConfigError(origin + ":" + std::to_string(line) + ": value for '" + key +
                          "' is not a number: '" + value + "'");
    return v;
}

}  // namespace

Config parse_config_text(const std::string& text, const std::string& origin) {
    static const std::map<std::string, int> phys_keys = {
        {"V_I", 0}, {"V_E", 1}, {"tau", 2},    {"nu_e", 3}, {"nu_i", 4},
        {"e", 5},   {"i", 6},   {"sigma2", 7}, {"S", 8},    {"x0", 9}};

    Config cfg;
    bool seen[10] = {false};
    bool have_alpha = false;
    std::string jump = "none";
    int jump_line = 0;

    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = raw;
        if (const auto hash = s.find('#'); hash != std::string::npos) s.erase(hash);
        s = trim(s);
        if (s.empty()) continue;

        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(line) +
                              ": expected 'key = value', got '" + trim(raw) + "'");
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (value.empty())
            throw ConfigError(origin + ":" + std::to_string(line) + ": empty value for '" +
                              key + "'");

        if (auto it = phys_keys.find(key); it != phys_keys.end()) {
            const double v = parse_double(origin, line, key, value);
            switch (it->second) {
                case 0: cfg.phys.v_inh = v; break;
                case 1: cfg.phys.v_exc = v; break;
                case 2: cfg.phys.tau = v; break;
                case 3: cfg.phys.nu_e = v; break;
                case 4: cfg.phys.nu_i = v; break;
                case 5: cfg.phys.e_amp = v; break;
                case 6: cfg.phys.i_amp = v; break;
                case 7: cfg.phys.sigma2 = v; break;
                case 8: cfg.phys.threshold = v; break;
                case 9: cfg.phys.reset = v; break;
            }
            seen[it->second] = true;
        } else if (key == "jump") {
            if (value != "none" && value != "exponential" && value != "tabulated")
                throw ConfigError(origin + ":" + std::to_string(line) +
                                  ": jump must be none, exponential or tabulated");
            jump = value;
            jump_line = line;
        } else if (key == "alpha") {
            cfg.alpha = parse_double(origin, line, key, value);
            have_alpha = true;
        } else if (key == "jump_table") {
            cfg.jump_table_path = value;
        } else {
            throw ConfigError(origin + ":" + std::to_string(line) + ": unknown key '" +
                              key + "'");
        }
    }

    static const char* names[10] = {"V_I", "V_E", "tau",    "nu_e", "nu_i",
                                    "e",   "i",   "sigma2", "S",    "x0"};
    for (int k = 0; k < 10; ++k)
        if (!seen[k])
            throw ConfigError(origin + ": missing required key '" + std::string(names[k]) +
                              "'");

    try {
        cfg.phys.validate();
    } catch (const std::invalid_argument& err) {
        throw ConfigError(origin + ": " + err.what());
    }

    cfg.jump_kind = jump;
    if (jump == "none") {
        cfg.jumps = JumpMeasure::none();
    } else if (jump == "exponential") {
        if (!have_alpha)
            throw ConfigError(origin + ":" + std::to_string(jump_line) +
                              ": jump = exponential requires alpha");
        try {
            cfg.jumps = JumpMeasure::exponential(cfg.alpha);
        } catch (const std::invalid_argument& err) {
            throw ConfigError(origin + ": " + err.what());
        }
    } else {
        if (cfg.jump_table_path.empty())
            throw ConfigError(origin + ":" + std::to_string(jump_line) +
                              ": jump = tabulated requires jump_table");
        cfg.jumps = load_jump_table(cfg.jump_table_path);
    }
    return cfg;
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

JumpMeasure load_jump_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open jump table '" + path + "'");

    std::vector<double> r, p;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = raw;
        if (const auto hash = s.find('#'); hash != std::string::npos) s.erase(hash);
        s = trim(s);
        if (s.empty()) continue;
        std::istringstream row(s);
        double rv, pv;
        if (!(row >> rv >> pv))
            throw ConfigError(path + ":" + std::to_string(line) +
                              ": expected two numeric columns (r, density)");
        std::string extra;
        if (row >> extra)
            throw ConfigError(path + ":" + std::to_string(line) +
                              ": expected exactly two columns");
        r.push_back(rv);
        p.push_back(pv);
    }
    try {
        return JumpMeasure::tabulated(std::move(r), std::move(p));
    } catch (const std::invalid_argument& err) {
        throw ConfigError(path + ": " + err.what());
    }
}

std::string config_comment_block(const Config& cfg) {
    const PhysiologicalParams& p = cfg.phys;
    std::ostringstream os;
    os << "# V_I = " << format_number(p.v_inh) << " mV\n"
       << "# V_E = " << format_number(p.v_exc) << " mV\n"
       << "# tau = " << format_number(p.tau) << " ms\n"
       << "# nu_e = " << format_number(p.nu_e) << " ms^-1\n"
       << "# nu_i = " << format_number(p.nu_i) << " ms^-1\n"
       << "# e = " << format_number(p.e_amp) << " (dimensionless)\n"
       << "# i = " << format_number(p.i_amp) << " (dimensionless)\n"
       << "# sigma2 = " << format_number(p.sigma2) << " ms^-1\n"
       << "# S = " << format_number(p.threshold) << " mV\n"
       << "# x0 = " << format_number(p.reset) << " mV\n"
       << "# jump = " << cfg.jump_kind << "\n";
    if (cfg.jump_kind == "exponential")
        os << "# alpha = " << format_number(cfg.alpha) << " (dimensionless)\n";
    if (cfg.jump_kind == "tabulated")
        os << "# jump_table = " << cfg.jump_table_path << "\n";

    const ReducedModel m = reduce(p);
    os << "# reduced: lambda = " << format_number(m.lambda)
       << " ms^-1, mu = " << format_number(m.mu) << " ms^-1, y = " << format_number(m.y0)
       << ", a = " << format_number(m.a) << " (dimensionless)\n";
    return os.str();
}

}  // namespace nlj

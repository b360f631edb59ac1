#pragma once

#include <stdexcept>
#include <string>

#include "nlj/model.hpp"

namespace nlj {

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct Config {
    PhysiologicalParams phys{};
    JumpMeasure jumps = JumpMeasure::none();
    std::string jump_kind = "none";
    double alpha = 0.0;            // set when jump_kind == "exponential"
    std::string jump_table_path;   // set when jump_kind == "tabulated"
};

// Plain-text key = value configuration. Keys: V_I, V_E, tau, nu_e, nu_i,
// e, i, sigma2, S, x0, jump (none|exponential|tabulated), alpha,
// jump_table. '#' starts a comment. Parse errors carry the line number.
Config parse_config_text(const std::string& text, const std::string& origin = "<config>");
Config load_config(const std::string& path);

// Tabulated densities: two whitespace-separated numeric columns
// (r, density), strictly increasing r. '#' comments allowed.
JumpMeasure load_jump_table(const std::string& path);

// Resolved configuration as '# key = value [unit]' lines, for CSV
// provenance headers.
std::string config_comment_block(const Config& cfg);

}  // namespace nlj

#include "hemo/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace hemo {

double RunConfig::wall_friction(double rho) const { return 22.0 * M_PI * mu / rho; }

void RunConfig::validate() const {
    auto pos = [](double x, const char* what) {
        if (!(x > 0.0)) throw config_error(std::string("config: ") + what + " must be positive");
    };
    pos(dt, "dt");
    pos(dx, "dx");
    pos(cfl_safety, "cfl_safety");
    if (cfl_safety > 1.0) throw config_error("config: cfl_safety must not exceed 1");
    if (warmup_cycles < 0) throw config_error("config: warmup_cycles must be non-negative");
    pos(p0, "p0");
    pos(mu, "mu");
    pos(rho_arm, "rho_arm");
    pos(rho_trunk, "rho_trunk");
    pos(arm_length, "arm_length");
    pos(trunk_length, "trunk_length");
    pos(beta_grid.lo, "beta_lo");
    if (!(beta_grid.hi > beta_grid.lo)) throw config_error("config: beta_hi must exceed beta_lo");
    pos(beta_grid.coarse_step, "beta_coarse_step");
    pos(beta_grid.refined_step, "beta_refined_step");
    pos(rcr_compliance, "rcr_compliance");
    pos(p_pv, "p_pv");
    if (!(p_pv > p_v)) throw config_error("config: p_pv must exceed p_v");
    pos(p_v, "p_v");
    pos(c_l, "c_l");
    pos(liver_mass, "liver_mass");
    if (liver_lobes < 1) throw config_error("config: liver_lobes must be at least 1");
    const auto& k = inflow_knots;
    if (!(0.0 <= k[0] && k[0] < k[1] && k[1] < k[2] && k[2] < k[3] && k[3] <= 1.0))
        throw config_error("config: inflow knots must be strictly increasing within [0, 1]");
}

namespace {

double to_double(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(value, &used);
    } catch (const std::exception&) {
        throw config_error("config: bad number for " + key + ": '" + value + "'");
    }
    if (used != value.size())
        throw config_error("config: bad number for " + key + ": '" + value + "'");
    return x;
}

}  // namespace

RunConfig load_config(const std::string& path) {
    RunConfig cfg;
    std::ifstream in(path);
    if (!in) throw config_error("config: cannot open " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string trimmed;
        for (char ch : line)
            if (!std::isspace(static_cast<unsigned char>(ch))) trimmed += ch;
        if (trimmed.empty()) continue;
        const auto eq = trimmed.find('=');
        if (eq == std::string::npos)
            throw config_error("config: line " + std::to_string(lineno) + " is not key=value");
        const std::string key = trimmed.substr(0, eq);
        const std::string value = trimmed.substr(eq + 1);
        if (key == "dt") cfg.dt = to_double(key, value);
        else if (key == "dx") cfg.dx = to_double(key, value);
        else if (key == "cfl_safety") cfg.cfl_safety = to_double(key, value);
        else if (key == "warmup_cycles") cfg.warmup_cycles = static_cast<int>(to_double(key, value));
        else if (key == "p0") cfg.p0 = to_double(key, value);
        else if (key == "mu") cfg.mu = to_double(key, value);
        else if (key == "rho_arm") cfg.rho_arm = to_double(key, value);
        else if (key == "rho_trunk") cfg.rho_trunk = to_double(key, value);
        else if (key == "gravity") cfg.gravity = to_double(key, value);
        else if (key == "arm_length") cfg.arm_length = to_double(key, value);
        else if (key == "trunk_length") cfg.trunk_length = to_double(key, value);
        else if (key == "beta_lo") cfg.beta_grid.lo = to_double(key, value);
        else if (key == "beta_hi") cfg.beta_grid.hi = to_double(key, value);
        else if (key == "beta_coarse_step") cfg.beta_grid.coarse_step = to_double(key, value);
        else if (key == "beta_refined_step") cfg.beta_grid.refined_step = to_double(key, value);
        else if (key == "rcr_compliance") cfg.rcr_compliance = to_double(key, value);
        else if (key == "p_pv") cfg.p_pv = to_double(key, value);
        else if (key == "p_v") cfg.p_v = to_double(key, value);
        else if (key == "c_l") cfg.c_l = to_double(key, value);
        else if (key == "liver_mass") cfg.liver_mass = to_double(key, value);
        else if (key == "liver_lobes") cfg.liver_lobes = static_cast<int>(to_double(key, value));
        else if (key == "knot0") cfg.inflow_knots[0] = to_double(key, value);
        else if (key == "knot1") cfg.inflow_knots[1] = to_double(key, value);
        else if (key == "knot2") cfg.inflow_knots[2] = to_double(key, value);
        else if (key == "knot3") cfg.inflow_knots[3] = to_double(key, value);
        else if (key == "ha_diameter") {
            if (value == "right") cfg.ha_diameter = RunConfig::HaDiameter::right;
            else if (value == "left") cfg.ha_diameter = RunConfig::HaDiameter::left;
            else if (value == "mean") cfg.ha_diameter = RunConfig::HaDiameter::mean;
            else throw config_error("config: ha_diameter must be right, left, or mean");
        } else {
            throw config_error("config: unknown key '" + key + "' on line " +
                               std::to_string(lineno));
        }
    }
    cfg.validate();
    return cfg;
}

std::string default_config_path() {
    const char* env = std::getenv("HEMO_CONFIG");
    return env ? std::string(env) : std::string();
}

}  // namespace hemo

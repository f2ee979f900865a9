#pragma once

#include <array>
#include <stdexcept>
#include <string>

namespace hemo {

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BetaGrid {
    double lo = 1e5;
    double hi = 1e6;
    double coarse_step = 1e4;
    double refined_step = 1e3;
};

/*! @brief Tunables shared by calibration, verification, and the CLI.
 *  Everything is CGS; the defaults reproduce the published setup. */
struct RunConfig {
    double dt = 1e-4;        ///< step cap, s (CFL may shorten a step)
    double dx = 0.1;         ///< cell width, cm
    double cfl_safety = 0.9;
    int warmup_cycles = 2;   ///< beats discarded before cycle means

    double p0 = 1e5;         ///< reference pressure, dyn/cm^2
    double mu = 0.04;
    double rho_arm = 1.05;   ///< density for the arm networks
    double rho_trunk = 1.06; ///< density for the abdominal/liver network
    double gravity = 0.0;

    double arm_length = 10.0;    ///< brachial/radial segment length, cm
    double trunk_length = 5.0;   ///< abdominal + hepatic segment length, cm

    BetaGrid beta_grid;
    double rcr_compliance = 4e-5;  ///< cm^5/dyn, hepatic RCR capacitor

    double p_pv = 8000.0;   ///< portal vein pressure, dyn/cm^2
    double p_v = 4500.0;    ///< hepatic outlet pressure, dyn/cm^2
    double c_l = 1.5;       ///< liver compliance per gram
    double liver_mass = 1500.0;
    int liver_lobes = 3;

    std::array<double, 4> inflow_knots{0.15, 0.25, 0.42, 0.45};

    /// Which brachial diameter stands in for the hepatic artery.
    enum class HaDiameter { right, left, mean };
    HaDiameter ha_diameter = HaDiameter::mean;

    double wall_friction(double rho) const;  ///< 22*pi*mu/rho
    void validate() const;
};

/// Key=value file, '#' comments, unknown keys rejected. Missing path with
/// allow_missing returns the defaults.
RunConfig load_config(const std::string& path);

/// Path from HEMO_CONFIG if set, else empty (defaults).
std::string default_config_path();

}  // namespace hemo

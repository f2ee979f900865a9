#pragma once

#include <span>
#include <stdexcept>
#include <vector>

namespace hemo {

struct liver_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/*! @brief Lumped liver: identical lobes in parallel, one tissue pressure.
 *
 * c_l is compliance per gram; every formula uses the product c_l * total mass,
 * so scaling all lobe masses by x and c_l by 1/x changes nothing.
 */
struct LiverParams {
    double c_l = 1.5;  ///< cm^5 / (dyn * g)
    std::vector<double> lobe_masses{500.0, 500.0, 500.0};  ///< g

    double total_mass() const;
};

/// Fixed pressures around the liver: hepatic-artery entry, portal vein, and
/// the venous outlet.
struct LiverBoundary {
    double p_a = 0.0;
    double p_pv = 0.0;
    double p_v = 0.0;
};

struct LiverResistances {
    double r_ha = 0.0;
    double r_pv = 0.0;
    double r_l = 0.0;
};

struct LiverFlows {
    double q_a = 0.0;   ///< hepatic artery inflow
    double q_pv = 0.0;  ///< portal vein inflow
    double q_v = 0.0;   ///< hepatic vein outflow
};

/// Tissue pressure at time t for constant boundary pressures, starting from
/// p_t0 at t = 0.
double pt_analytic(double t, const LiverParams& params, const LiverBoundary& bound,
                   const LiverResistances& res, double p_t0);

/// Whole-organ flows at a given tissue pressure.
LiverFlows lobe_flows(double p_t, const LiverBoundary& bound, const LiverResistances& res);

/// Per-lobe share of a whole-organ flow.
std::vector<double> lobe_split(double total_flow, const LiverParams& params);

/// Resistances that reproduce the given operating point.
LiverResistances calibrate_resistances(const LiverBoundary& bound, double p_t,
                                       const LiverFlows& flows);

/*! @brief Closure rules tying the unmeasured liver quantities to q_a:
 *  portal flow three times arterial, venous four times, and the tissue pressure
 *  sits 80% of the way down the portal-to-venous drop. */
struct DerivedLiverPoint {
    LiverFlows flows;
    double p_t = 0.0;
};
DerivedLiverPoint derive_liver_point(double q_a, double p_pv, double p_v);

}  // namespace hemo

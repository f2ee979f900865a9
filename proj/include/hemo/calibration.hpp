#pragma once

#include "hemo/cohort.hpp"
#include "hemo/config.hpp"
#include "hemo/liver.hpp"
#include "hemo/network.hpp"

#include <string>
#include <vector>

namespace hemo {

struct calibration_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BetaSweepPoint {
    double beta = 0.0;
    double mismatch = 0.0;  ///< |measured radial flow - simulated cycle mean|
};

struct ArmSweep {
    Site brachial = Site::d;
    Site radial = Site::c;
    double beta = 0.0;          ///< refined minimizer for this arm
    double q_target = 0.0;      ///< measured radial flow, cm^3/s
    bool unimodal = true;       ///< coarse curve has a single local minimum
    std::vector<BetaSweepPoint> curve;  ///< the full coarse grid
};

struct VesselEstimate {
    double beta = 0.0;   ///< mean of the two arm minimizers
    double r_tot = 0.0;
    double r_p = 0.0;    ///< proximal share, 0.1 * r_tot
    double r_d = 0.0;    ///< distal share, 0.9 * r_tot
    ArmSweep left, right;
};

struct LiverEstimate {
    double p_a = 0.0;  ///< cycle-mean hepatic-artery pressure
    double q_a = 0.0;  ///< cycle-mean hepatic-artery flow
    double p_t = 0.0;
    LiverFlows flows;
    LiverResistances res;
};

struct SubjectEstimate {
    std::string id;
    VesselEstimate vessel;
    LiverEstimate liver;
};

/// Heart period in seconds from the subject's heart-rate measurements.
double subject_period(const SubjectRecord& subject);

/// Waveform for a site from its ps/ed/vti and the subject period.
InflowWaveform site_waveform(const SubjectRecord& subject, Site site, const RunConfig& cfg);

/// Brachial-to-radial arm network: brachial trunk bifurcating into the probed
/// radial and its unprobed twin, absorbing far ends.
Network build_arm_network(const SubjectRecord& subject, Site brachial, Site radial, double beta,
                          const RunConfig& cfg);

/// Single brachial-to-radial segment used for the peripheral-resistance stage.
Network build_resistance_network(const SubjectRecord& subject, double beta, const RunConfig& cfg);

/// Abdominal trunk bifurcating into the hepatic artery (windkessel end) and
/// the distal aorta (absorbing, half the trunk area).
Network build_liver_network(const SubjectRecord& subject, double beta, double r_p, double r_d,
                            const RunConfig& cfg);

/// Cycle-mean flow at the radial midpoint for one arm at one beta.
double simulate_arm_flow(const SubjectRecord& subject, Site brachial, Site radial, double beta,
                         const RunConfig& cfg);

/// Cycle-mean (pressure, flow) pair near the hepatic-artery outlet.
std::pair<double, double> simulate_liver_point(const SubjectRecord& subject, double beta,
                                               double r_p, double r_d, const RunConfig& cfg);

/// Grid sweep plus golden-section refinement on one arm.
ArmSweep sweep_beta(const SubjectRecord& subject, Site brachial, Site radial, const RunConfig& cfg);

/// Mean of the two arm sweeps (h-g and d-c).
VesselEstimate estimate_beta(const SubjectRecord& subject, const RunConfig& cfg);

/// r_tot = cycle-mean end pressure / measured radial flow, split 10/90.
void estimate_peripheral_resistance(const SubjectRecord& subject, VesselEstimate& est,
                                    const RunConfig& cfg);

LiverEstimate estimate_liver_params(const SubjectRecord& subject, double beta, double r_p,
                                    double r_d, const RunConfig& cfg);

SubjectEstimate calibrate_subject(const SubjectRecord& subject, const RunConfig& cfg);

}  // namespace hemo

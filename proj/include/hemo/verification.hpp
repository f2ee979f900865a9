#pragma once

#include "hemo/calibration.hpp"
#include "hemo/cohort.hpp"
#include "hemo/liver.hpp"

#include <optional>
#include <span>
#include <vector>

namespace hemo {

struct verification_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/*! @brief Inferior-vena-cava return over one beat.
 *
 * Steps the tissue pressure from p_t0 across T = floor(period/dt) intervals,
 * time-averages the lobe flows, and balances them against the abdominal
 * inflow q_o. With a hepatic-artery pressure series the coefficients are
 * refreshed each step; otherwise the constant p_a applies.
 */
double ivc_flow(const LiverParams& params, const LiverBoundary& bound, const LiverResistances& res,
                double p_t0, double period, double dt, double q_o,
                std::span<const double> p_a_series = {});

struct SubjectVerification {
    std::string id;
    double q_ivc = 0.0;
    double q_superior = 0.0;      ///< summed upper-body flows (d, e, f, h)
    double cardiac_output = 0.0;  ///< q_superior + abdominal flow (o)
    double venous_return = 0.0;   ///< q_superior + q_ivc
    double relative_error = 0.0;  ///< |venous_return - cardiac_output| / cardiac_output
};

/// Balances measured outflows against the modeled return for one subject.
SubjectVerification venous_return_check(const SubjectRecord& subject, double q_ivc);

/// Mean relative error across subjects.
double cohort_mre(std::span<const SubjectVerification> rows);

/// Stroke-volume variation (max - min) / mean; needs at least two beats.
double svv(std::span<const double> stroke_volumes);

/// Convenience: run the liver return model for a calibrated subject.
SubjectVerification verify_subject(const SubjectRecord& subject, const SubjectEstimate& est,
                                   const RunConfig& cfg);

}  // namespace hemo

#pragma once

#include "hemo/vessel.hpp"

#include <array>
#include <optional>

namespace hemo {

struct boundary_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/*! @brief Piecewise-linear single-beat velocity profile, repeated each period.
 *
 * Zero until knot[0]*period, linear up to ps at knot[1], linear down to ed at
 * knot[2], back to zero at knot[3], zero for the rest of the beat. If vti is
 * set, both amplitudes are rescaled so one beat integrates to vti.
 */
struct InflowWaveform {
    double ps = 0.0;      ///< peak systolic velocity, cm/s
    double ed = 0.0;      ///< end diastolic velocity, cm/s
    double period = 0.0;  ///< beat length, s
    std::optional<double> vti;  ///< velocity-time integral, cm
    std::array<double, 4> knots{0.15, 0.25, 0.42, 0.45};

    double velocity(double t) const;
    double cycle_integral() const;  ///< integral of one beat after any rescale
};

/// State for the inlet cell: velocity from the waveform at time t, area from
/// the interior's outgoing w2 invariant.
CellState resolve_inflow(const InflowWaveform& wf, double t, const CellState& interior,
                         const TubeLaw& law, double rho);

struct TerminalResistance {
    double r = 0.0;      ///< dyn*s/cm^5
    double p_out = 0.0;  ///< downstream pressure, dyn/cm^2
};

/// Ghost state (a*, v*) closing the segment end against a pure resistance.
CellState resolve_terminal(const CellState& trace, const TerminalResistance& tr,
                           const TubeLaw& law, double rho);

/*! @brief Three-element windkessel attached to a segment end. p_c is the
 *  capacitor pressure, advanced explicitly once per step. */
struct RCR {
    double r_p = 0.0;
    double r_d = 0.0;
    double c = 0.0;      ///< cm^5/dyn
    double p_out = 0.0;
    double p_c = 0.0;
};

/// Advances p_c with the trace flow, then resolves the ghost against r_p and
/// the updated capacitor pressure.
CellState resolve_rcr(const CellState& trace, RCR& rcr, const TubeLaw& law, double rho, double dt);

}  // namespace hemo

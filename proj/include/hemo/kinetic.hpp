#pragma once

#include "hemo/vessel.hpp"

#include <span>

namespace hemo {

/*! @brief Half-range moments of the equilibrium distribution at one cell. */
struct FluxMoments {
    double u1 = 0.0;  ///< int_{xi>=0} xi   M dxi
    double v1 = 0.0;  ///< int_{xi<=0} xi   M dxi
    double u2 = 0.0;  ///< int_{xi>=0} xi^2 M dxi
    double v2 = 0.0;  ///< int_{xi<=0} xi^2 M dxi
};

FluxMoments flux_moments(const CellState& s, double gamma);

struct StepReport {
    double dt = 0.0;
    double max_courant = 0.0;
    double min_area = 0.0;
};

/// Largest stable step: safety * dx / max_i(|v_i| + sqrt(3) * gamma_i).
double stable_dt(const VesselSegment& seg, double safety = 0.9);

/// Advance every cell the segment owns (interior cells, plus ghost-driven end
/// cells). Prescribed end cells and ghost states are read, never written.
StepReport step_interior(VesselSegment& seg, double dt);

/// Mean of p0 + beta(sqrt(a) - sqrt(a0)) over a recorded area series.
double mean_boundary_pressure(std::span<const double> areas, const TubeLaw& law);

}  // namespace hemo

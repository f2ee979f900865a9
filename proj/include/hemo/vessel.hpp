#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hemo {

/// All quantities are CGS: cm, g, s, dyn. Pressures in dyn/cm^2.

enum class VesselKind { artery, vein };

/*! @brief Pressure-area closure of one vessel. */
struct TubeLaw {
    VesselKind kind = VesselKind::artery;
    double beta = 0.0;  ///< artery: dyn/cm^3, vein: dyn/cm^2
    double a0 = 0.0;    ///< reference cross-section, cm^2
    double p0 = 0.0;    ///< reference pressure, dyn/cm^2
};

struct FluidParams {
    double rho = 1.05;  ///< g/cm^3
    double mu = 0.04;   ///< dyn*s/cm^2
    double kf = 0.0;    ///< wall friction coefficient in the momentum source
    double g = 0.0;     ///< axial body-force acceleration, cm/s^2
};

struct CellState {
    double a = 0.0;  ///< cross-section, cm^2
    double v = 0.0;  ///< mean axial velocity, cm/s
};

struct vessel_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

double tube_pressure(double a, const TubeLaw& law);
double wave_speed(double a, const TubeLaw& law, double rho);

/// Half-width of the equilibrium velocity distribution; gamma^2 is the
/// area-averaged squared wave speed from eps*a0 up to a.
double kinetic_gamma(double a, const TubeLaw& law, double rho);

/// Integral of c(s)/s from the law's reference area up to a (arteries reduce
/// to 4c(a) with a zero lower limit).
double invariant_integral(double a, const TubeLaw& law, double rho);

/// Characteristic invariants (w1 runs downstream, w2 upstream).
std::pair<double, double> riemann_invariants(const CellState& s, const TubeLaw& law, double rho);
CellState state_from_invariants(double w1, double w2, const TubeLaw& law, double rho);

/// Area such that w2(a, v) equals the given invariant value, v fixed.
double area_from_w2(double v, double w2, const TubeLaw& law, double rho);

/// Which update owns a segment end cell: `prescribed` ends are written by a
/// boundary or junction each step; `ghost` ends evolve with the scheme using
/// the resolved ghost state as their outer neighbor.
enum class EndMode { prescribed, ghost };
enum class SegmentEnd { start, end };

struct VesselSegment {
    VesselSegment() = default;
    VesselSegment(std::string id, TubeLaw law, FluidParams fluid, double length, double dx);

    std::string id;
    TubeLaw law;
    FluidParams fluid;
    double length = 0.0;
    double dx = 0.0;
    std::vector<CellState> cells;  ///< floor(length/dx) + 1 nodes
    CellState ghost_start{}, ghost_end{};
    EndMode start_mode = EndMode::prescribed;
    EndMode end_mode = EndMode::prescribed;

    std::size_t last() const { return cells.size() - 1; }
};

}  // namespace hemo

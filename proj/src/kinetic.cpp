#include "hemo/kinetic.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace hemo {

namespace {

constexpr double sqrt3 = 1.7320508075688772;

double sq(double x) { return x * x; }
double cube(double x) { return x * x * x; }

}  // namespace

FluxMoments flux_moments(const CellState& s, double gamma) {
    if (!(gamma > 0.0)) throw vessel_error("flux_moments needs gamma > 0");
    const double a = s.a, v = s.v;
    const double m = -v / gamma;
    // Clamped brackets: an empty half-range collapses both limits onto -v/gamma.
    const double ulo = std::max(m, -sqrt3), uhi = std::max(m, sqrt3);
    const double vlo = std::min(m, -sqrt3), vhi = std::min(m, sqrt3);
    FluxMoments f;
    const double cu = a / (2.0 * sqrt3 * gamma);
    f.u1 = cu / 2.0 * (sq(v + gamma * uhi) - sq(v + gamma * ulo));
    f.u2 = cu / 3.0 * (cube(v + gamma * uhi) - cube(v + gamma * ulo));
    f.v1 = cu / 2.0 * (sq(v + gamma * vhi) - sq(v + gamma * vlo));
    f.v2 = cu / 3.0 * (cube(v + gamma * vhi) - cube(v + gamma * vlo));
    return f;
}

double stable_dt(const VesselSegment& seg, double safety) {
    double speed = 0.0;
    for (const auto& c : seg.cells) {
        const double g = kinetic_gamma(c.a, seg.law, seg.fluid.rho);
        speed = std::max(speed, std::abs(c.v) + sqrt3 * g);
    }
    if (!(speed > 0.0)) throw vessel_error("stable_dt: segment has no wave speed: " + seg.id);
    return safety * seg.dx / speed;
}

StepReport step_interior(VesselSegment& seg, double dt) {
    const std::size_t n = seg.cells.size();
    const std::size_t last = n - 1;
    const double r = dt / seg.dx;

    static thread_local std::vector<FluxMoments> mom;
    static thread_local std::vector<double> gam, na, nx;
    mom.resize(n + 2);  // [0] = ghost_start, [i+1] = cell i, [n+1] = ghost_end
    gam.resize(n);
    na.resize(n);
    nx.resize(n);

    auto gamma_of = [&](const CellState& c) {
        return kinetic_gamma(c.a, seg.law, seg.fluid.rho);
    };
    mom[0] = flux_moments(seg.ghost_start, gamma_of(seg.ghost_start));
    for (std::size_t i = 0; i < n; ++i) {
        gam[i] = gamma_of(seg.cells[i]);
        mom[i + 1] = flux_moments(seg.cells[i], gam[i]);
    }
    mom[n + 1] = flux_moments(seg.ghost_end, gamma_of(seg.ghost_end));

    const std::size_t lo = seg.start_mode == EndMode::ghost ? 0 : 1;
    const std::size_t hi = seg.end_mode == EndMode::ghost ? last : last - 1;

    StepReport rep{dt, 0.0, seg.cells[0].a};
    for (std::size_t i = lo; i <= hi; ++i) {
        const auto& c = seg.cells[i];
        const auto& mc = mom[i + 1];
        const auto& ml = mom[i];      // left neighbor (ghost when i == 0)
        const auto& mr = mom[i + 2];  // right neighbor (ghost when i == last)
        na[i] = c.a - r * ((mc.u1 + mr.v1) - (ml.u1 + mc.v1));
        nx[i] = c.a * c.v - r * ((mc.u2 + mr.v2) - (ml.u2 + mc.v2)) +
                dt * (seg.fluid.g * c.a - seg.fluid.kf * c.v);
        rep.max_courant =
            std::max(rep.max_courant, dt * (std::abs(c.v) + sqrt3 * gam[i]) / seg.dx);
    }
    for (std::size_t i = lo; i <= hi; ++i) {
        if (!(na[i] > 0.0))
            throw vessel_error("negative area in segment " + seg.id + " at cell " +
                               std::to_string(i));
        seg.cells[i] = {na[i], nx[i] / na[i]};
    }
    for (const auto& c : seg.cells) rep.min_area = std::min(rep.min_area, c.a);
    return rep;
}

double mean_boundary_pressure(std::span<const double> areas, const TubeLaw& law) {
    if (areas.empty()) throw vessel_error("mean_boundary_pressure: empty series");
    double sum = 0.0;
    for (double a : areas) sum += law.p0 + law.beta * (std::sqrt(a) - std::sqrt(law.a0));
    return sum / static_cast<double>(areas.size());
}

}  // namespace hemo

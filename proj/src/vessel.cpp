#include "hemo/vessel.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>

namespace hemo {

namespace {

// Lower integration limit for the vein gamma integral, as a fraction of a0;
// the vein c^2 is not integrable down to zero area.
constexpr double vein_gamma_eps = 1e-3;

void check_positive(double x, const char* what) {
    if (!(x > 0.0)) throw vessel_error(std::string(what) + " must be positive");
}

// Antiderivative of the vein squared wave speed c^2(a).
double vein_c2_primitive(double a, const TubeLaw& law, double rho) {
    const double r = a / law.a0;
    return law.beta / rho * law.a0 * (10.0 / 11.0 * std::pow(r, 11) - 3.0 / std::sqrt(r));
}

}  // namespace

double tube_pressure(double a, const TubeLaw& law) {
    check_positive(a, "area");
    if (law.kind == VesselKind::artery)
        return law.p0 + law.beta * (std::sqrt(a) - std::sqrt(law.a0));
    const double r = a / law.a0;
    return law.p0 + law.beta * (std::pow(r, 10) - std::pow(r, -1.5));
}

double wave_speed(double a, const TubeLaw& law, double rho) {
    check_positive(a, "area");
    check_positive(rho, "density");
    if (law.kind == VesselKind::artery)
        return std::sqrt(law.beta / (2.0 * rho) * std::sqrt(a));
    const double r = a / law.a0;
    return std::sqrt(law.beta / rho * (10.0 * std::pow(r, 10) + 1.5 * std::pow(r, -1.5)));
}

double kinetic_gamma(double a, const TubeLaw& law, double rho) {
    check_positive(a, "area");
    if (law.kind == VesselKind::artery) {
        // (1/a) * int_0^a c^2 = (2/3) c^2(a)
        const double c = wave_speed(a, law, rho);
        return std::sqrt(2.0 / 3.0) * c;
    }
    const double lo = vein_gamma_eps * law.a0;
    if (a <= lo) throw vessel_error("vein area below the gamma integration floor");
    const double integral = vein_c2_primitive(a, law, rho) - vein_c2_primitive(lo, law, rho);
    return std::sqrt(integral / a);
}

double invariant_integral(double a, const TubeLaw& law, double rho) {
    check_positive(a, "area");
    if (law.kind == VesselKind::artery) return 4.0 * wave_speed(a, law, rho);
    const auto f = [&](double s) { return wave_speed(s, law, rho) / s; };
    const double sign = a >= law.a0 ? 1.0 : -1.0;
    const double lo = std::min(a, law.a0), hi = std::max(a, law.a0);
    if (lo == hi) return 0.0;
    double err = 0.0;
    const double val =
        boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, lo, hi, 10, 1e-13, &err);
    return sign * val;
}

std::pair<double, double> riemann_invariants(const CellState& s, const TubeLaw& law, double rho) {
    const double i = invariant_integral(s.a, law, rho);
    return {s.v + i, s.v - i};
}

namespace {

// Invert invariant_integral: find a with I(a) == target (I strictly increasing).
double area_from_integral(double target, const TubeLaw& law, double rho) {
    if (law.kind == VesselKind::artery) {
        if (!(target > 0.0)) throw vessel_error("artery invariant inversion needs w1 > w2");
        const double k = std::sqrt(law.beta / (2.0 * rho));
        const double quarter = target / (4.0 * k);
        return quarter * quarter * quarter * quarter;
    }
    double a = law.a0;
    for (int it = 0; it < 100; ++it) {
        const double f = invariant_integral(a, law, rho) - target;
        const double df = wave_speed(a, law, rho) / a;
        double step = f / df;
        double next = a - step;
        while (next <= 0.0) {
            step *= 0.5;
            next = a - step;
        }
        if (std::abs(next - a) < 1e-14 * law.a0) return next;
        a = next;
    }
    throw vessel_error("vein invariant inversion did not converge");
}

}  // namespace

CellState state_from_invariants(double w1, double w2, const TubeLaw& law, double rho) {
    const double v = 0.5 * (w1 + w2);
    const double a = area_from_integral(0.5 * (w1 - w2), law, rho);
    return {a, v};
}

double area_from_w2(double v, double w2, const TubeLaw& law, double rho) {
    return area_from_integral(v - w2, law, rho);
}

VesselSegment::VesselSegment(std::string id_, TubeLaw law_, FluidParams fluid_, double length_,
                             double dx_)
    : id(std::move(id_)), law(law_), fluid(fluid_), length(length_), dx(dx_) {
    check_positive(length, "segment length");
    check_positive(dx, "dx");
    check_positive(law.a0, "reference area");
    check_positive(law.beta, "beta");
    if (dx > length) throw vessel_error("dx exceeds segment length: " + id);
    const auto n = static_cast<std::size_t>(std::floor(length / dx)) + 1;
    cells.assign(n, CellState{law.a0, 0.0});
    ghost_start = ghost_end = CellState{law.a0, 0.0};
}

}  // namespace hemo

#include "hemo/boundary.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace hemo {

namespace {

double raw_integral(double ps, double ed, double period, const std::array<double, 4>& k) {
    // Triangle up to ps, trapezoid ps->ed, triangle down from ed.
    return period * (0.5 * (k[1] - k[0]) * ps + 0.5 * (k[2] - k[1]) * (ps + ed) +
                     0.5 * (k[3] - k[2]) * ed);
}

void validate(const InflowWaveform& wf) {
    if (!(wf.period > 0.0)) throw boundary_error("waveform period must be positive");
    const auto& k = wf.knots;
    if (!(0.0 <= k[0] && k[0] < k[1] && k[1] < k[2] && k[2] < k[3] && k[3] <= 1.0))
        throw boundary_error("waveform knots must be strictly increasing within [0, 1]");
}

double amplitude_scale(const InflowWaveform& wf) {
    if (!wf.vti) return 1.0;
    const double raw = raw_integral(wf.ps, wf.ed, wf.period, wf.knots);
    if (raw == 0.0) throw boundary_error("cannot rescale a waveform with zero integral to a vti");
    return *wf.vti / raw;
}

}  // namespace

double InflowWaveform::velocity(double t) const {
    validate(*this);
    const double s = amplitude_scale(*this);
    const double ps_s = s * ps, ed_s = s * ed;
    double u = std::fmod(t, period);
    if (u < 0.0) u += period;
    u /= period;
    if (u < knots[0] || u >= knots[3]) return 0.0;
    if (u < knots[1]) return ps_s * (u - knots[0]) / (knots[1] - knots[0]);
    if (u < knots[2]) return ps_s + (ed_s - ps_s) * (u - knots[1]) / (knots[2] - knots[1]);
    return ed_s * (knots[3] - u) / (knots[3] - knots[2]);
}

double InflowWaveform::cycle_integral() const {
    validate(*this);
    return amplitude_scale(*this) * raw_integral(ps, ed, period, knots);
}

CellState resolve_inflow(const InflowWaveform& wf, double t, const CellState& interior,
                         const TubeLaw& law, double rho) {
    const double v = wf.velocity(t);
    const auto [w1, w2] = riemann_invariants(interior, law, rho);
    (void)w1;
    return {area_from_w2(v, w2, law, rho), v};
}

namespace {

/// Solve r*a*(v_l + I(a_l) - I(a)) = P(a) - p_ref for a, then back out v*.
CellState resolve_resistance(const CellState& trace, double r, double p_ref, const TubeLaw& law,
                             double rho, const char* what) {
    if (!(r > 0.0)) throw boundary_error(std::string(what) + ": resistance must be positive");
    const double w_in = trace.v + invariant_integral(trace.a, law, rho);
    const double p_scale = std::max({1.0, std::abs(tube_pressure(trace.a, law) - p_ref),
                                     rho * wave_speed(law.a0, law, rho) * wave_speed(law.a0, law, rho)});
    auto fval = [&](double a) {
        const double vstar = w_in - invariant_integral(a, law, rho);
        return r * a * vstar - (tube_pressure(a, law) - p_ref);
    };
    // The residual of r*a*vstar - (P - p_ref) cannot drop below the rounding
    // of its leading terms; for very large r that floor dwarfs any fixed
    // pressure tolerance, so converge relative to it.
    auto f_tol = [&](double a) {
        constexpr double eps = std::numeric_limits<double>::epsilon();
        const double lead = r * a * (std::abs(w_in) + std::abs(invariant_integral(a, law, rho))) +
                            std::abs(tube_pressure(a, law)) + std::abs(p_ref);
        return std::max(1e-11 * p_scale, 8.0 * eps * lead);
    };
    double a = trace.a;
    double f = fval(a);
    for (int it = 0; it < 100; ++it) {
        if (std::abs(f) < f_tol(a)) {
            const double v = (tube_pressure(a, law) - p_ref) / (r * a);
            return {a, v};
        }
        const double c = wave_speed(a, law, rho);
        const double vstar = w_in - invariant_integral(a, law, rho);
        const double df = r * vstar - r * c - rho * c * c / a;
        double step = f / df;
        double next = a - step;
        while (next <= 0.0) {
            step *= 0.5;
            next = a - step;
        }
        // Damp until |f| decreases; the residual is not monotone in a, and an
        // undamped step can cycle around a fold.
        double f_next = fval(next);
        for (int bt = 0; bt < 40 && std::abs(f_next) >= std::abs(f); ++bt) {
            step *= 0.5;
            next = a - step;
            f_next = fval(next);
        }
        a = next;
        f = f_next;
    }

    // Newton exhausted its iterations: either the residual genuinely has no
    // root (the circuit demands more flux than the incoming-invariant family
    // can carry subsonically, e.g. against an uncharged capacitor) or the
    // landscape defeated the damped iteration. Locate the fold (max of f)
    // by scan plus golden-section; if f is positive there a root exists and
    // a bisection against the decaying tail is guaranteed to find it.
    double a_cap = std::max(trace.a, law.a0);
    for (int it = 0; it < 200 && fval(a_cap) >= 0.0; ++it) a_cap *= 2.0;
    const double a_floor = 1e-3 * law.a0;
    double a_peak = a_floor;
    double f_peak = fval(a_floor);
    constexpr int scan_points = 64;
    for (int i = 1; i <= scan_points; ++i) {
        const double ai = a_floor * std::pow(a_cap / a_floor, double(i) / scan_points);
        const double fi = fval(ai);
        if (fi > f_peak) {
            f_peak = fi;
            a_peak = ai;
        }
    }
    {
        constexpr double gr = 0.61803398874989484;
        double lo = a_peak / std::pow(a_cap / a_floor, 1.0 / scan_points);
        double hi = std::min(a_cap, a_peak * std::pow(a_cap / a_floor, 1.0 / scan_points));
        double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
        double f1 = fval(x1), f2 = fval(x2);
        for (int it = 0; it < 200 && (hi - lo) > 1e-14 * hi; ++it) {
            if (f1 < f2) {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + gr * (hi - lo);
                f2 = fval(x2);
            } else {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - gr * (hi - lo);
                f1 = fval(x1);
            }
        }
        a_peak = 0.5 * (lo + hi);
        f_peak = fval(a_peak);
    }
    if (f_peak < 0.0) {
        // Choked flow: no root exists, hand back the fold state. It is the
        // continuous limit of the root branch, and the charging capacitor
        // restores a true root within a few steps.
        return {a_peak, w_in - invariant_integral(a_peak, law, rho)};
    }
    double lo = a_peak, hi = a_cap;
    for (int it = 0; it < 200 && (hi - lo) > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (fval(mid) >= 0.0 ? lo : hi) = mid;
    }
    a = 0.5 * (lo + hi);
    return {a, (tube_pressure(a, law) - p_ref) / (r * a)};
}

}  // namespace

CellState resolve_terminal(const CellState& trace, const TerminalResistance& tr, const TubeLaw& law,
                           double rho) {
    return resolve_resistance(trace, tr.r, tr.p_out, law, rho, "terminal-resistance");
}

CellState resolve_rcr(const CellState& trace, RCR& rcr, const TubeLaw& law, double rho, double dt) {
    if (!(rcr.c > 0.0)) throw boundary_error("rcr: compliance must be positive");
    if (!(rcr.r_d > 0.0)) throw boundary_error("rcr: distal resistance must be positive");
    rcr.p_c += dt * (trace.a * trace.v - (rcr.p_c - rcr.p_out) / rcr.r_d) / rcr.c;
    return resolve_resistance(trace, rcr.r_p, rcr.p_c, law, rho, "rcr");
}

}  // namespace hemo

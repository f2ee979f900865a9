#include "hemo/junction.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <sstream>

namespace hemo {

namespace {

constexpr int max_iterations = 50;
constexpr double scaled_tol = 1e-10;
constexpr double mass_rel_tol = 1e-11;
/// Times q_scale. Rounding in the residual rows hides mass improvements a few
/// orders below this, so near-rest junctions would otherwise never converge.
constexpr double mass_abs_floor = 1e-13;
constexpr double pressure_abs_tol = 1e-8;

struct Port {
    CellState trace;
    const TubeLaw* law;
    bool into_junction;  ///< true: segment end flows in (uses w1); false: start flows out (w2)
};

double total_pressure(const CellState& s, const TubeLaw& law, double rho) {
    return 0.5 * rho * s.v * s.v + tube_pressure(s.a, law);
}

// In-place Gaussian elimination with partial pivoting; A is row-major n x n.
void solve_dense(std::span<double> A, std::span<double> b, int n) {
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(A[r * n + col]) > std::abs(A[piv * n + col])) piv = r;
        if (std::abs(A[piv * n + col]) < 1e-300) throw junction_error("singular junction Jacobian");
        if (piv != col) {
            for (int k = 0; k < n; ++k) std::swap(A[col * n + k], A[piv * n + k]);
            std::swap(b[col], b[piv]);
        }
        for (int r = col + 1; r < n; ++r) {
            const double f = A[r * n + col] / A[col * n + col];
            if (f == 0.0) continue;
            for (int k = col; k < n; ++k) A[r * n + k] -= f * A[col * n + k];
            b[r] -= f * b[col];
        }
    }
    for (int r = n - 1; r >= 0; --r) {
        double s = b[r];
        for (int k = r + 1; k < n; ++k) s -= A[r * n + k] * b[k];
        b[r] = s / A[r * n + r];
    }
}

/// Newton solve of the coupling system on an arbitrary port list. Equations:
/// one outgoing-invariant match per port, one mass balance, and total-pressure
/// equality of every port against port 0.
JunctionSolution solve_ports(std::span<const Port> ports, double rho) {
    constexpr int max_ports = 3;
    const int np = static_cast<int>(ports.size());
    if (np < 2 || np > max_ports) throw junction_error("junction must couple 2 or 3 ports");
    const int n = 2 * np;  // unknowns: (a_i, v_i)

    std::array<double, 2 * max_ports> x{};
    std::array<double, max_ports> target{};
    double w_scale = 1.0, q_scale = 0.0;
    for (int i = 0; i < np; ++i) {
        const auto& p = ports[i];
        if (!(p.law->beta > 0.0) || !(p.law->a0 > 0.0))
            throw junction_error("junction port has a degenerate tube law");
        if (!(p.trace.a > 0.0)) throw junction_error("junction port trace has non-positive area");
        x[2 * i] = p.trace.a;
        x[2 * i + 1] = p.trace.v;
        const auto [w1, w2] = riemann_invariants(p.trace, *p.law, rho);
        target[i] = p.into_junction ? w1 : w2;
        // invariant integrals are signed (negative below the reference area),
        // so take magnitudes or a backward-flow vein port can zero the scale
        w_scale = std::max(w_scale,
                           std::abs(p.trace.v) + std::abs(invariant_integral(p.trace.a, *p.law, rho)));
        q_scale = std::max(q_scale, p.trace.a);
    }
    q_scale *= w_scale;
    const double p_scale = rho * w_scale * w_scale;

    std::array<double, 2 * max_ports> res{};
    std::array<double, 4 * max_ports * max_ports> jac{};
    JunctionSolution sol;
    sol.ports.resize(np);

    auto fill_residuals = [&]() {
        std::fill(jac.begin(), jac.begin() + n * n, 0.0);
        double mass = 0.0;
        const double c0 = wave_speed(x[0], *ports[0].law, rho);
        const double tp0 = total_pressure({x[0], x[1]}, *ports[0].law, rho);
        double max_dp = 0.0;
        for (int i = 0; i < np; ++i) {
            const double a = x[2 * i], v = x[2 * i + 1];
            const auto& law = *ports[i].law;
            const double c = wave_speed(a, law, rho);
            const double sgn = ports[i].into_junction ? 1.0 : -1.0;
            // invariant rows
            res[i] = v + sgn * invariant_integral(a, law, rho) - target[i];
            jac[i * n + 2 * i] = sgn * c / a;
            jac[i * n + 2 * i + 1] = 1.0;
            // mass row
            mass += sgn * a * v;
            jac[np * n + 2 * i] = sgn * v;
            jac[np * n + 2 * i + 1] = sgn * a;
            // pressure rows: tp_0 - tp_i for i >= 1
            if (i >= 1) {
                const int row = np + i;
                const double tpi = total_pressure({a, v}, law, rho);
                res[row] = tp0 - tpi;
                max_dp = std::max(max_dp, std::abs(res[row]));
                jac[row * n + 0] = rho * c0 * c0 / x[0];
                jac[row * n + 1] = rho * x[1];
                jac[row * n + 2 * i] = -rho * c * c / a;
                jac[row * n + 2 * i + 1] = -rho * v;
            }
        }
        res[np] = mass;
        double scaled = 0.0;
        for (int i = 0; i < np; ++i) scaled = std::max(scaled, std::abs(res[i]) / w_scale);
        scaled = std::max(scaled, std::abs(mass) / q_scale);
        for (int i = 1; i < np; ++i) scaled = std::max(scaled, std::abs(res[np + i]) / p_scale);
        sol.residual_norm = scaled;
        sol.mass_residual = std::abs(mass);
        sol.pressure_residual = max_dp;
        double q_in = 0.0;
        for (int i = 0; i < np; ++i)
            if (ports[i].into_junction) q_in += std::abs(x[2 * i] * x[2 * i + 1]);
        const double mass_tol = std::max(mass_rel_tol * q_in, mass_abs_floor * q_scale);
        return sol.residual_norm < scaled_tol && sol.mass_residual <= mass_tol &&
               sol.pressure_residual < pressure_abs_tol;
    };

    // Scaled sum-of-squares merit for the line search below. The Newton
    // direction is a descent direction for this merit under any fixed row
    // scaling, which the scaled max norm cannot guarantee.
    auto merit_at = [&](const std::array<double, 2 * max_ports>& y) {
        double mass = 0.0, merit = 0.0;
        const double tp0 = total_pressure({y[0], y[1]}, *ports[0].law, rho);
        for (int i = 0; i < np; ++i) {
            const double a = y[2 * i], v = y[2 * i + 1];
            const auto& law = *ports[i].law;
            const double sgn = ports[i].into_junction ? 1.0 : -1.0;
            const double rw = (v + sgn * invariant_integral(a, law, rho) - target[i]) / w_scale;
            merit += rw * rw;
            mass += sgn * a * v;
            if (i >= 1) {
                const double rp = (tp0 - total_pressure({a, v}, law, rho)) / p_scale;
                merit += rp * rp;
            }
        }
        const double rm = mass / q_scale;
        return merit + rm * rm;
    };

    for (int it = 0; it <= max_iterations; ++it) {
        sol.iterations = it;
        if (fill_residuals()) {
            for (int i = 0; i < np; ++i) sol.ports[i] = {x[2 * i], x[2 * i + 1]};
            return sol;
        }
        if (it == max_iterations) break;
        std::array<double, 2 * max_ports> step = res;
        std::array<double, 4 * max_ports * max_ports> mat = jac;
        solve_dense(mat, step, n);
        // Halve the step whenever an area would leave the positive cone.
        double lambda = 1.0;
        for (int tries = 0; tries < 60; ++tries) {
            bool ok = true;
            for (int i = 0; i < np; ++i)
                if (x[2 * i] - lambda * step[2 * i] <= 0.0) ok = false;
            if (ok) break;
            lambda *= 0.5;
        }
        // Backtracking line search keeps the plain Newton iteration from
        // cycling on strongly nonlinear states.
        const double base = merit_at(x);
        std::array<double, 2 * max_ports> trial = x;
        for (int bt = 0; bt < 30; ++bt) {
            for (int i = 0; i < n; ++i) trial[i] = x[i] - lambda * step[i];
            if (merit_at(trial) < base) break;
            lambda *= 0.5;
        }
        x = trial;
    }
    std::ostringstream msg;
    msg << "junction solve did not converge: scaled residual " << sol.residual_norm << ", mass "
        << sol.mass_residual << " cm^3/s, total-pressure " << sol.pressure_residual << " dyn/cm^2";
    throw junction_error(msg.str());
}

}  // namespace

JunctionSolution solve_bifurcation(const CellState& parent, const TubeLaw& parent_law,
                                   const CellState& child1, const TubeLaw& child1_law,
                                   const CellState& child2, const TubeLaw& child2_law,
                                   double rho) {
    const std::array<Port, 3> ports{Port{parent, &parent_law, true},
                                    Port{child1, &child1_law, false},
                                    Port{child2, &child2_law, false}};
    return solve_ports(ports, rho);
}

JunctionSolution solve_confluence(const CellState& parent1, const TubeLaw& parent1_law,
                                  const CellState& parent2, const TubeLaw& parent2_law,
                                  const CellState& child, const TubeLaw& child_law, double rho) {
    // Anchor the pressure equations at the child so each row pairs a parent
    // with the child, then restore the caller's port order.
    const std::array<Port, 3> ports{Port{child, &child_law, false},
                                    Port{parent1, &parent1_law, true},
                                    Port{parent2, &parent2_law, true}};
    JunctionSolution sol = solve_ports(ports, rho);
    std::rotate(sol.ports.begin(), sol.ports.begin() + 1, sol.ports.end());
    return sol;
}

JunctionSolution solve_one_to_one(const CellState& left, const TubeLaw& left_law,
                                  const CellState& right, const TubeLaw& right_law, double rho) {
    const std::array<Port, 2> ports{Port{left, &left_law, true}, Port{right, &right_law, false}};
    return solve_ports(ports, rho);
}

}  // namespace hemo

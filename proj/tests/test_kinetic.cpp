#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hemo/kinetic.hpp"
#include "hemo/vessel.hpp"

#include <cmath>
#include <random>

using namespace hemo;

namespace {

constexpr double rho = 1.05;
const double sqrt3 = std::sqrt(3.0);

TubeLaw artery() { return {VesselKind::artery, 1e5, 0.25, 1e5}; }

VesselSegment rest_segment(double length = 10.0, double dx = 0.1) {
    FluidParams fluid;
    fluid.rho = rho;
    return VesselSegment("seg", artery(), fluid, length, dx);
}

// Reflective closure: copies the neighbouring interior state with the
// velocity negated, which yields exactly zero mass flux through the wall.
void mirror_ends(VesselSegment& seg) {
    seg.ghost_start = {seg.cells[0].a, -seg.cells[0].v};
    seg.ghost_end = {seg.cells[seg.last()].a, -seg.cells[seg.last()].v};
}

double total_volume(const VesselSegment& seg) {
    double sum = 0.0;
    for (const auto& c : seg.cells) sum += c.a;
    return sum * seg.dx;
}

// Independent oracle: the half-range moments are integrals of the constant
// density a/(2 sqrt(3) gamma) over microscopic speeds s in
// [v - sqrt(3) gamma, v + sqrt(3) gamma], restricted to s >= 0 (upper) or
// s <= 0 (lower), evaluated by fine Simpson.
double moment_oracle(double a, double v, double gamma, int order, bool upper) {
    const double span = sqrt3 * gamma;
    const double lo = upper ? std::max(0.0, v - span) : std::min(0.0, v - span);
    const double hi = upper ? std::max(0.0, v + span) : std::min(0.0, v + span);
    const int n = 20000;
    const double h = (hi - lo) / n;
    if (h == 0.0) return 0.0;
    auto f = [&](double s) { return (order == 1 ? s : s * s) * a / (2 * span); };
    double sum = f(lo) + f(hi);
    for (int i = 1; i < n; ++i) sum += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

}  // namespace

TEST_CASE("rest moments split the flux symmetrically") {
    const double gamma = kinetic_gamma(1.0, artery(), rho);
    const FluxMoments m = flux_moments({1.0, 0.0}, gamma);
    CHECK(m.u1 == doctest::Approx(gamma * sqrt3 / 4.0).epsilon(1e-12));
    CHECK(m.v1 == doctest::Approx(-gamma * sqrt3 / 4.0).epsilon(1e-12));
    CHECK(m.u1 + m.v1 == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("supersonic states put the whole flux on one side") {
    const double gamma = 100.0;
    {
        const FluxMoments m = flux_moments({2.0, sqrt3 * gamma + 5.0}, gamma);
        CHECK(m.v1 == 0.0);
        CHECK(m.v2 == 0.0);
        CHECK(m.u1 == doctest::Approx(2.0 * (sqrt3 * gamma + 5.0)).epsilon(1e-12));
    }
    {
        const FluxMoments m = flux_moments({2.0, -sqrt3 * gamma - 5.0}, gamma);
        CHECK(m.u1 == 0.0);
        CHECK(m.u2 == 0.0);
        CHECK(m.v1 == doctest::Approx(-2.0 * (sqrt3 * gamma + 5.0)).epsilon(1e-12));
    }
}

TEST_CASE("half moments always sum to the full transport flux") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> area(0.05, 2.0);
    std::uniform_real_distribution<double> vel(-400.0, 400.0);
    std::uniform_real_distribution<double> gam(20.0, 300.0);
    for (int i = 0; i < 200; ++i) {
        const double a = area(rng), v = vel(rng), g = gam(rng);
        const FluxMoments m = flux_moments({a, v}, g);
        CHECK(m.u1 + m.v1 == doctest::Approx(a * v).epsilon(1e-12));
        CHECK(m.u2 + m.v2 == doctest::Approx(a * (v * v + g * g)).epsilon(1e-12));
    }
}

TEST_CASE("half moments match the quadrature oracle") {
    for (double v : {0.0, 40.0, -90.0, 250.0}) {
        const double a = 0.7, gamma = 120.0;
        const FluxMoments m = flux_moments({a, v}, gamma);
        CHECK(m.u1 == doctest::Approx(moment_oracle(a, v, gamma, 1, true)).epsilon(1e-9));
        CHECK(m.v1 == doctest::Approx(moment_oracle(a, v, gamma, 1, false)).epsilon(1e-9));
        CHECK(m.u2 == doctest::Approx(moment_oracle(a, v, gamma, 2, true)).epsilon(1e-9));
        CHECK(m.v2 == doctest::Approx(moment_oracle(a, v, gamma, 2, false)).epsilon(1e-9));
    }
}

TEST_CASE("stable time step frozen value") {
    VesselSegment seg = rest_segment();
    for (auto& c : seg.cells) c.a = 1.0;
    const double dt = stable_dt(seg, 1.0);
    CHECK(dt == doctest::Approx(3.2406e-4).epsilon(1e-4));
    CHECK(stable_dt(seg, 0.9) == doctest::Approx(0.9 * dt).epsilon(1e-12));
}

TEST_CASE("uniform rest state is preserved exactly") {
    VesselSegment seg = rest_segment();
    seg.start_mode = EndMode::ghost;
    seg.end_mode = EndMode::ghost;
    for (int step = 0; step < 500; ++step) {
        mirror_ends(seg);
        step_interior(seg, 2e-4);
        for (const auto& c : seg.cells) {
            CHECK(c.a == 0.25);
            CHECK(c.v == 0.0);
        }
    }
}

TEST_CASE("uniform moving state decays by wall friction only") {
    VesselSegment seg = rest_segment(2.0, 0.1);
    seg.fluid.kf = 2.0;
    for (auto& c : seg.cells) c = {1.0, 10.0};
    // periodic-style closure: the state is uniform, so copying it keeps all
    // flux differences identically zero and isolates the source term.
    seg.start_mode = EndMode::ghost;
    seg.end_mode = EndMode::ghost;
    const double dt = 1e-4;
    seg.ghost_start = seg.cells[0];
    seg.ghost_end = seg.cells[0];
    step_interior(seg, dt);
    const double expect = 10.0 - dt * 2.0 * 10.0 / 1.0;
    for (const auto& c : seg.cells) {
        CHECK(c.a == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(c.v == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("reflective walls conserve mass through a pulse") {
    VesselSegment seg = rest_segment(10.0, 0.05);
    seg.start_mode = EndMode::ghost;
    seg.end_mode = EndMode::ghost;
    for (size_t i = 0; i < seg.cells.size(); ++i) {
        const double x = i * seg.dx;
        seg.cells[i].a = 0.25 * (1.0 + 0.2 * std::exp(-(x - 5.0) * (x - 5.0) / 0.5));
    }
    const double v0 = total_volume(seg);
    for (int step = 0; step < 1000; ++step) {
        mirror_ends(seg);
        step_interior(seg, 0.5 * stable_dt(seg));
    }
    CHECK(total_volume(seg) == doctest::Approx(v0).epsilon(1e-10));
    for (const auto& c : seg.cells) CHECK(c.a > 0.0);
}

TEST_CASE("a small pulse travels at the rest wave speed") {
    VesselSegment seg = rest_segment(20.0, 0.05);
    seg.start_mode = EndMode::prescribed;
    seg.end_mode = EndMode::prescribed;
    const TubeLaw law = seg.law;
    const double c0 = wave_speed(law.a0, law, rho);
    // right-moving simple wave: w2 held at its rest value
    const double w2_rest = -4.0 * c0;
    for (size_t i = 0; i < seg.cells.size(); ++i) {
        const double x = i * seg.dx;
        const double a = law.a0 * (1.0 + 0.01 * std::exp(-(x - 4.0) * (x - 4.0) / 0.18));
        const double v = w2_rest + 4.0 * wave_speed(a, law, rho);
        seg.cells[i] = {a, v};
    }
    auto peak_pos = [&]() {
        size_t best = 0;
        for (size_t i = 1; i + 1 < seg.cells.size(); ++i)
            if (seg.cells[i].a > seg.cells[best].a) best = i;
        // quadratic interpolation around the discrete peak
        const double ym = seg.cells[best - 1].a, y0 = seg.cells[best].a, yp = seg.cells[best + 1].a;
        const double denom = ym - 2 * y0 + yp;
        const double shift = denom != 0.0 ? 0.5 * (ym - yp) / denom : 0.0;
        return (best + shift) * seg.dx;
    };
    const double x_start = peak_pos();
    double t = 0.0;
    while (t < 0.06) {
        const double dt = std::min(0.9 * stable_dt(seg), 0.06 - t);
        step_interior(seg, dt);
        t += dt;
    }
    const double speed = (peak_pos() - x_start) / t;
    CHECK(speed == doctest::Approx(c0).epsilon(0.05));
}

TEST_CASE("negative area aborts with context") {
    VesselSegment seg = rest_segment(1.0, 0.1);
    seg.start_mode = EndMode::ghost;
    seg.end_mode = EndMode::ghost;
    seg.ghost_start = {0.25, 0.0};
    seg.ghost_end = {0.25, 0.0};
    for (auto& c : seg.cells) c.v = 400.0;
    seg.cells[0].v = -400.0;  // violent rarefaction
    CHECK_THROWS_AS(
        [&] {
            for (int i = 0; i < 200; ++i) step_interior(seg, 5e-4);
        }(),
        vessel_error);
}

TEST_CASE("mean boundary pressure frozen value") {
    const std::vector<double> areas(32, 1.0);
    CHECK(mean_boundary_pressure(areas, artery()) == doctest::Approx(1.5e5).epsilon(1e-12));
}

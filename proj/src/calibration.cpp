#include "hemo/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hemo {

namespace {

double area_from_diameter(double d) { return M_PI * d * d / 4.0; }

TubeLaw artery_law(double beta, double diameter, double p0) {
    return {VesselKind::artery, beta, area_from_diameter(diameter), p0};
}

FluidParams arm_fluid(const RunConfig& cfg) {
    return {cfg.rho_arm, cfg.mu, cfg.wall_friction(cfg.rho_arm), cfg.gravity};
}

FluidParams trunk_fluid(const RunConfig& cfg) {
    return {cfg.rho_trunk, cfg.mu, cfg.wall_friction(cfg.rho_trunk), cfg.gravity};
}

void require_sites(const SubjectRecord& subject, std::initializer_list<Site> sites) {
    std::string missing;
    for (Site s : sites)
        if (!subject.find(s)) missing += (missing.empty() ? "" : ", ") + site_code(s);
    if (!missing.empty())
        throw calibration_error("subject " + subject.id + " is missing sites: " + missing);
}

/// Probe pinned to the last interior cell, where the end-pressure recursion
/// samples the segment.
Probe end_probe(const Network& net, const std::string& segment, const std::string& label) {
    const auto& seg = net.segment(segment);
    Probe p;
    p.segment = segment;
    p.index = static_cast<std::int64_t>(seg.last()) - 1;
    p.label = label;
    return p;
}

SimOptions sim_options(const RunConfig& cfg, double period) {
    SimOptions opt;
    opt.duration = (cfg.warmup_cycles + 1) * period;
    opt.dt_cap = cfg.dt;
    opt.cfl_safety = cfg.cfl_safety;
    return opt;
}

/// The windkessel capacitor charges with time constant r_d * C, which dwarfs
/// one beat; the liver run must idle until that transient is gone or the
/// cycle means would depend on the start-up ramp.
SimOptions liver_sim_options(const RunConfig& cfg, double period, double r_d) {
    SimOptions opt = sim_options(cfg, period);
    const double tau = r_d * cfg.rcr_compliance;
    const double warmup =
        std::clamp(std::ceil(5.0 * tau / period), static_cast<double>(cfg.warmup_cycles), 200.0);
    opt.duration = (warmup + 1) * period;
    return opt;
}

}  // namespace

double subject_period(const SubjectRecord& subject) {
    for (Site s : all_sites()) {
        const auto* m = subject.find(s);
        if (m && m->heart_rate) {
            if (!(*m->heart_rate > 0.0))
                throw calibration_error("subject " + subject.id + ": heart rate must be positive");
            return 60.0 / *m->heart_rate;
        }
    }
    throw calibration_error("subject " + subject.id + " has no heart-rate measurement");
}

InflowWaveform site_waveform(const SubjectRecord& subject, Site site, const RunConfig& cfg) {
    InflowWaveform wf;
    wf.ps = subject.need(site, "ps");
    wf.ed = subject.need(site, "ed");
    wf.period = subject_period(subject);
    wf.knots = cfg.inflow_knots;
    const auto* m = subject.find(site);
    if (m && m->vti) wf.vti = *m->vti;
    return wf;
}

Network build_arm_network(const SubjectRecord& subject, Site brachial, Site radial, double beta,
                          const RunConfig& cfg) {
    require_sites(subject, {brachial, radial});
    const double d_brachial = subject.need(brachial, "diameter");
    const double d_radial = subject.need(radial, "diameter");

    Network net;
    net.segments.emplace_back("brachial", artery_law(beta, d_brachial, cfg.p0), arm_fluid(cfg),
                              cfg.arm_length, cfg.dx);
    net.segments.emplace_back("radial", artery_law(beta, d_radial, cfg.p0), arm_fluid(cfg),
                              cfg.arm_length, cfg.dx);
    net.segments.emplace_back("radial_twin", artery_law(beta, d_radial, cfg.p0), arm_fluid(cfg),
                              cfg.arm_length, cfg.dx);
    net.junctions.push_back({JunctionKind::bifurcation, {"brachial"}, {"radial", "radial_twin"}});
    net.boundaries.push_back(
        {{"brachial", SegmentEnd::start}, site_waveform(subject, brachial, cfg)});
    net.boundaries.push_back({{"radial", SegmentEnd::end}, AbsorbingEnd{}});
    net.boundaries.push_back({{"radial_twin", SegmentEnd::end}, AbsorbingEnd{}});
    net.probes.push_back({"radial", 0.5, -1, "radial_mid"});
    return net;
}

Network build_resistance_network(const SubjectRecord& subject, double beta, const RunConfig& cfg) {
    require_sites(subject, {Site::d, Site::c});
    const double d_radial = subject.need(Site::c, "diameter");
    Network net;
    net.segments.emplace_back("arm", artery_law(beta, d_radial, cfg.p0), arm_fluid(cfg),
                              cfg.arm_length, cfg.dx);
    net.boundaries.push_back({{"arm", SegmentEnd::start}, site_waveform(subject, Site::d, cfg)});
    net.boundaries.push_back({{"arm", SegmentEnd::end}, AbsorbingEnd{}});
    net.probes.push_back(end_probe(net, "arm", "arm_end"));
    return net;
}

namespace {

double ha_diameter(const SubjectRecord& subject, const RunConfig& cfg) {
    const auto* right = subject.find(Site::d);
    const auto* left = subject.find(Site::h);
    const bool has_right = right && right->diameter;
    const bool has_left = left && left->diameter;
    switch (cfg.ha_diameter) {
        case RunConfig::HaDiameter::right:
            if (has_right) return *right->diameter;
            break;
        case RunConfig::HaDiameter::left:
            if (has_left) return *left->diameter;
            break;
        case RunConfig::HaDiameter::mean:
            if (has_right && has_left) return 0.5 * (*right->diameter + *left->diameter);
            if (has_right) return *right->diameter;
            if (has_left) return *left->diameter;
            break;
    }
    throw calibration_error("subject " + subject.id +
                            " has no brachial diameter for the hepatic-artery stand-in");
}

}  // namespace

Network build_liver_network(const SubjectRecord& subject, double beta, double r_p, double r_d,
                            const RunConfig& cfg) {
    require_sites(subject, {Site::o});
    const double d_abo = subject.need(Site::o, "diameter");
    const double a_abo = area_from_diameter(d_abo);

    Network net;
    net.segments.emplace_back("abo_a", artery_law(beta, d_abo, cfg.p0), trunk_fluid(cfg),
                              cfg.trunk_length, cfg.dx);
    TubeLaw ha = artery_law(beta, ha_diameter(subject, cfg), cfg.p0);
    net.segments.emplace_back("ha", ha, trunk_fluid(cfg), cfg.trunk_length, cfg.dx);
    TubeLaw abo_b{VesselKind::artery, beta, 0.5 * a_abo, cfg.p0};
    net.segments.emplace_back("abo_b", abo_b, trunk_fluid(cfg), cfg.trunk_length, cfg.dx);

    net.junctions.push_back({JunctionKind::bifurcation, {"abo_a"}, {"ha", "abo_b"}});
    net.boundaries.push_back({{"abo_a", SegmentEnd::start}, site_waveform(subject, Site::o, cfg)});
    RCR rcr;
    rcr.r_p = r_p;
    rcr.r_d = r_d;
    rcr.c = cfg.rcr_compliance;
    rcr.p_out = 0.0;
    rcr.p_c = 0.0;
    net.boundaries.push_back({{"ha", SegmentEnd::end}, rcr});
    net.boundaries.push_back({{"abo_b", SegmentEnd::end}, AbsorbingEnd{}});
    net.probes.push_back(end_probe(net, "ha", "ha_end"));
    return net;
}

double simulate_arm_flow(const SubjectRecord& subject, Site brachial, Site radial, double beta,
                         const RunConfig& cfg) {
    Network net = build_arm_network(subject, brachial, radial, beta, cfg);
    const double period = subject_period(subject);
    const SimResult res = simulate(net, sim_options(cfg, period));
    return cycle_mean(res.probes[0], period).q;
}

std::pair<double, double> simulate_liver_point(const SubjectRecord& subject, double beta,
                                               double r_p, double r_d, const RunConfig& cfg) {
    Network net = build_liver_network(subject, beta, r_p, r_d, cfg);
    const double period = subject_period(subject);
    const SimResult res = simulate(net, liver_sim_options(cfg, period, r_d));
    const CycleMeans m = cycle_mean(res.probes[0], period);
    return {m.p, m.q};
}

ArmSweep sweep_beta(const SubjectRecord& subject, Site brachial, Site radial,
                    const RunConfig& cfg) {
    ArmSweep sweep;
    sweep.brachial = brachial;
    sweep.radial = radial;
    sweep.q_target = subject.need(radial, "flow");

    const BetaGrid& grid = cfg.beta_grid;
    auto mismatch = [&](double beta) {
        return std::abs(sweep.q_target - simulate_arm_flow(subject, brachial, radial, beta, cfg));
    };

    const int n = static_cast<int>(std::round((grid.hi - grid.lo) / grid.coarse_step));
    std::size_t best = 0;
    for (int i = 0; i <= n; ++i) {
        const double beta = grid.lo + i * grid.coarse_step;
        sweep.curve.push_back({beta, mismatch(beta)});
        if (sweep.curve[i].mismatch < sweep.curve[best].mismatch) best = i;
    }

    int local_minima = 0;
    for (std::size_t i = 0; i < sweep.curve.size(); ++i) {
        const double f = sweep.curve[i].mismatch;
        const bool left_ok = i == 0 || sweep.curve[i - 1].mismatch > f;
        const bool right_ok = i + 1 == sweep.curve.size() || sweep.curve[i + 1].mismatch > f;
        if (left_ok && right_ok) ++local_minima;
    }
    sweep.unimodal = local_minima <= 1;

    // Golden-section refinement inside one coarse step either side.
    double lo = std::max(grid.lo, sweep.curve[best].beta - grid.coarse_step);
    double hi = std::min(grid.hi, sweep.curve[best].beta + grid.coarse_step);
    double best_beta = sweep.curve[best].beta;
    double best_f = sweep.curve[best].mismatch;
    auto consider = [&](double beta, double f) {
        if (f < best_f) {
            best_f = f;
            best_beta = beta;
        }
    };
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - gr * (hi - lo);
    double x2 = lo + gr * (hi - lo);
    double f1 = mismatch(x1);
    double f2 = mismatch(x2);
    consider(x1, f1);
    consider(x2, f2);
    while (hi - lo > grid.refined_step) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = mismatch(x1);
            consider(x1, f1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = mismatch(x2);
            consider(x2, f2);
        }
    }
    sweep.beta = best_beta;
    return sweep;
}

VesselEstimate estimate_beta(const SubjectRecord& subject, const RunConfig& cfg) {
    require_sites(subject, {Site::h, Site::g, Site::d, Site::c});
    VesselEstimate est;
    est.left = sweep_beta(subject, Site::h, Site::g, cfg);
    est.right = sweep_beta(subject, Site::d, Site::c, cfg);
    est.beta = 0.5 * (est.left.beta + est.right.beta);
    return est;
}

void estimate_peripheral_resistance(const SubjectRecord& subject, VesselEstimate& est,
                                    const RunConfig& cfg) {
    const double q = subject.need(Site::c, "flow");
    if (!(q > 0.0))
        throw calibration_error("subject " + subject.id + ": radial flow must be positive");
    Network net = build_resistance_network(subject, est.beta, cfg);
    const double period = subject_period(subject);
    const SimResult res = simulate(net, sim_options(cfg, period));
    const double p = cycle_mean(res.probes[0], period).p;
    if (!(p > 0.0))
        throw calibration_error("subject " + subject.id + ": non-positive mean end pressure");
    est.r_tot = p / q;
    est.r_p = 0.1 * est.r_tot;
    est.r_d = 0.9 * est.r_tot;
}

LiverEstimate estimate_liver_params(const SubjectRecord& subject, double beta, double r_p,
                                    double r_d, const RunConfig& cfg) {
    const auto [p_a, q_a] = simulate_liver_point(subject, beta, r_p, r_d, cfg);
    if (!(q_a > 0.0))
        throw calibration_error("subject " + subject.id + ": hepatic-artery flow came out " +
                                std::to_string(q_a) + ", cannot calibrate the liver");
    LiverEstimate est;
    est.p_a = p_a;
    est.q_a = q_a;
    const DerivedLiverPoint derived = derive_liver_point(q_a, cfg.p_pv, cfg.p_v);
    est.p_t = derived.p_t;
    est.flows = derived.flows;
    const LiverBoundary bound{p_a, cfg.p_pv, cfg.p_v};
    est.res = calibrate_resistances(bound, derived.p_t, derived.flows);
    return est;
}

SubjectEstimate calibrate_subject(const SubjectRecord& subject, const RunConfig& cfg) {
    SubjectEstimate out;
    out.id = subject.id;
    out.vessel = estimate_beta(subject, cfg);
    estimate_peripheral_resistance(subject, out.vessel, cfg);
    out.liver = estimate_liver_params(subject, out.vessel.beta, out.vessel.r_p, out.vessel.r_d, cfg);
    return out;
}

}  // namespace hemo

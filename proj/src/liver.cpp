#include "hemo/liver.hpp"

#include <cmath>

namespace hemo {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw liver_error(what);
}

}  // namespace

double LiverParams::total_mass() const {
    double m = 0.0;
    for (double x : lobe_masses) {
        if (!(x > 0.0)) throw liver_error("lobe masses must be positive");
        m += x;
    }
    require(m > 0.0, "liver needs at least one lobe");
    return m;
}

double pt_analytic(double t, const LiverParams& params, const LiverBoundary& bound,
                   const LiverResistances& res, double p_t0) {
    require(res.r_ha > 0.0 && res.r_pv > 0.0 && res.r_l > 0.0, "liver resistances must be positive");
    require(params.c_l > 0.0, "liver compliance must be positive");
    const double cm = params.c_l * params.total_mass();
    const double c1 = (bound.p_a / res.r_ha + bound.p_pv / res.r_pv + bound.p_v / res.r_l) / cm;
    const double c2 = -(1.0 / res.r_ha + 1.0 / res.r_pv + 1.0 / res.r_l) / cm;
    return (p_t0 + c1 / c2) * std::exp(c2 * t) - c1 / c2;
}

LiverFlows lobe_flows(double p_t, const LiverBoundary& bound, const LiverResistances& res) {
    require(res.r_ha > 0.0 && res.r_pv > 0.0 && res.r_l > 0.0, "liver resistances must be positive");
    return {(bound.p_a - p_t) / res.r_ha, (bound.p_pv - p_t) / res.r_pv,
            (p_t - bound.p_v) / res.r_l};
}

std::vector<double> lobe_split(double total_flow, const LiverParams& params) {
    const double m = params.total_mass();
    std::vector<double> out;
    out.reserve(params.lobe_masses.size());
    for (double mi : params.lobe_masses) out.push_back(total_flow * mi / m);
    return out;
}

LiverResistances calibrate_resistances(const LiverBoundary& bound, double p_t,
                                       const LiverFlows& flows) {
    require(flows.q_a > 0.0 && flows.q_pv > 0.0 && flows.q_v > 0.0,
            "liver calibration needs positive flows");
    require(bound.p_a > p_t, "hepatic-artery pressure must exceed tissue pressure");
    require(bound.p_pv > p_t, "portal pressure must exceed tissue pressure");
    require(p_t > bound.p_v, "tissue pressure must exceed venous pressure");
    return {(bound.p_a - p_t) / flows.q_a, (bound.p_pv - p_t) / flows.q_pv,
            (p_t - bound.p_v) / flows.q_v};
}

DerivedLiverPoint derive_liver_point(double q_a, double p_pv, double p_v) {
    require(q_a > 0.0, "hepatic-artery flow must be positive");
    require(p_pv > p_v, "portal pressure must exceed venous pressure");
    DerivedLiverPoint d;
    d.flows = {q_a, 3.0 * q_a, 4.0 * q_a};
    d.p_t = p_pv - 0.8 * (p_pv - p_v);
    return d;
}

}  // namespace hemo

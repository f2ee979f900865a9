#include "hemo/verification.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace hemo {

double ivc_flow(const LiverParams& params, const LiverBoundary& bound, const LiverResistances& res,
                double p_t0, double period, double dt, double q_o,
                std::span<const double> p_a_series) {
    if (!(period > 0.0) || !(dt > 0.0)) throw verification_error("ivc_flow: bad time window");
    const auto steps = static_cast<std::size_t>(std::floor(period / dt));
    LiverFlows sum{};
    double p_t = p_t0;
    for (std::size_t n = 0; n <= steps; ++n) {
        LiverBoundary b = bound;
        if (!p_a_series.empty()) b.p_a = p_a_series[std::min(n, p_a_series.size() - 1)];
        if (n > 0) p_t = pt_analytic(dt, params, b, res, p_t);
        const LiverFlows f = lobe_flows(p_t, b, res);
        sum.q_a += f.q_a;
        sum.q_pv += f.q_pv;
        sum.q_v += f.q_v;
    }
    const auto count = static_cast<double>(steps + 1);
    return q_o - sum.q_a / count - sum.q_pv / count + sum.q_v / count;
}

SubjectVerification venous_return_check(const SubjectRecord& subject, double q_ivc) {
    std::string missing;
    const std::array<Site, 5> needed{Site::d, Site::e, Site::f, Site::h, Site::o};
    for (Site s : needed) {
        const auto* m = subject.find(s);
        if (!m || !m->flow) missing += (missing.empty() ? "" : ", ") + site_code(s);
    }
    if (!missing.empty())
        throw verification_error("subject " + subject.id +
                                 " lacks flow measurements at: " + missing);
    SubjectVerification v;
    v.id = subject.id;
    v.q_ivc = q_ivc;
    for (Site s : {Site::d, Site::e, Site::f, Site::h}) v.q_superior += *subject.find(s)->flow;
    v.cardiac_output = v.q_superior + *subject.find(Site::o)->flow;
    v.venous_return = v.q_superior + q_ivc;
    if (!(v.cardiac_output > 0.0))
        throw verification_error("subject " + subject.id + ": cardiac output must be positive");
    v.relative_error = std::abs(v.venous_return - v.cardiac_output) / v.cardiac_output;
    return v;
}

double cohort_mre(std::span<const SubjectVerification> rows) {
    if (rows.empty()) throw verification_error("cohort_mre: no subjects");
    double sum = 0.0;
    for (const auto& r : rows) sum += r.relative_error;
    return sum / static_cast<double>(rows.size());
}

double svv(std::span<const double> stroke_volumes) {
    if (stroke_volumes.size() < 2) throw verification_error("svv needs at least two beats");
    const auto [lo, hi] = std::minmax_element(stroke_volumes.begin(), stroke_volumes.end());
    double mean = 0.0;
    for (double x : stroke_volumes) mean += x;
    mean /= static_cast<double>(stroke_volumes.size());
    if (!(mean > 0.0)) throw verification_error("svv: mean stroke volume must be positive");
    return (*hi - *lo) / mean;
}

SubjectVerification verify_subject(const SubjectRecord& subject, const SubjectEstimate& est,
                                   const RunConfig& cfg) {
    LiverParams params;
    params.c_l = cfg.c_l;
    params.lobe_masses.assign(static_cast<std::size_t>(cfg.liver_lobes),
                              cfg.liver_mass / cfg.liver_lobes);
    const LiverBoundary bound{est.liver.p_a, cfg.p_pv, cfg.p_v};
    const double q_o = subject.need(Site::o, "flow");
    const double q = ivc_flow(params, bound, est.liver.res, est.liver.p_t,
                              subject_period(subject), cfg.dt, q_o);
    return venous_return_check(subject, q);
}

}  // namespace hemo

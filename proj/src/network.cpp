#include "hemo/network.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace hemo {

namespace {

std::string end_name(SegmentEnd e) { return e == SegmentEnd::start ? "start" : "end"; }

struct PendingWrite {
    VesselSegment* seg;
    SegmentEnd end;
    CellState state;
};

CellState& end_cell(VesselSegment& s, SegmentEnd e) {
    return e == SegmentEnd::start ? s.cells.front() : s.cells.back();
}

}  // namespace

VesselSegment& Network::segment(const std::string& id) {
    for (auto& s : segments)
        if (s.id == id) return s;
    throw network_error("unknown segment id: " + id);
}

const VesselSegment& Network::segment(const std::string& id) const {
    for (const auto& s : segments)
        if (s.id == id) return s;
    throw network_error("unknown segment id: " + id);
}

void Network::validate() const {
    std::set<std::string> ids;
    for (const auto& s : segments) {
        if (!ids.insert(s.id).second) throw network_error("duplicate segment id: " + s.id);
        if (s.cells.size() < 3)
            throw network_error("segment " + s.id + " needs at least three cells");
    }
    std::map<std::pair<std::string, SegmentEnd>, int> claims;
    auto claim = [&](const std::string& id, SegmentEnd e) {
        segment(id);
        if (++claims[{id, e}] > 1)
            throw network_error("segment end claimed twice: " + id + ":" + end_name(e));
    };
    for (const auto& j : junctions) {
        std::size_t np = 0, nc = 0;
        switch (j.kind) {
            case JunctionKind::bifurcation: np = 1; nc = 2; break;
            case JunctionKind::confluence: np = 2; nc = 1; break;
            case JunctionKind::one_to_one: np = 1; nc = 1; break;
        }
        if (j.parents.size() != np || j.children.size() != nc)
            throw network_error("junction arity mismatch");
        for (const auto& id : j.parents) claim(id, SegmentEnd::end);
        for (const auto& id : j.children) claim(id, SegmentEnd::start);
    }
    for (const auto& b : boundaries) {
        claim(b.at.segment, b.at.end);
        if (std::holds_alternative<InflowWaveform>(b.model) && b.at.end == SegmentEnd::end)
            throw network_error("inflow must attach to a segment start: " + b.at.segment);
    }
    for (const auto& s : segments)
        for (auto e : {SegmentEnd::start, SegmentEnd::end})
            if (!claims.count({s.id, e}))
                throw network_error("unclaimed segment end: " + s.id + ":" + end_name(e));
    for (const auto& j : junctions) {
        const double rho = segment(j.parents[0]).fluid.rho;
        for (const auto& id : j.children)
            if (segment(id).fluid.rho != rho)
                throw network_error("junction joins segments with different densities");
    }
    for (const auto& p : probes) {
        const auto& s = segment(p.segment);
        if (p.index >= 0) {
            if (static_cast<std::size_t>(p.index) >= s.cells.size())
                throw network_error("probe index out of range on segment " + p.segment);
        } else if (!(p.frac >= 0.0 && p.frac <= 1.0)) {
            throw network_error("probe fraction outside [0, 1] on segment " + p.segment);
        }
    }
}

SimResult simulate(Network& net, const SimOptions& opt) {
    net.validate();
    if (!(opt.duration > 0.0)) throw network_error("simulation duration must be positive");

    // Wire end modes: junction ports and inflow ends are prescribed, the rest
    // evolve against a resolved ghost.
    for (auto& s : net.segments) {
        s.start_mode = EndMode::prescribed;
        s.end_mode = EndMode::prescribed;
    }
    for (auto& b : net.boundaries) {
        auto& seg = net.segment(b.at.segment);
        const bool prescribed = std::holds_alternative<InflowWaveform>(b.model);
        auto mode = prescribed ? EndMode::prescribed : EndMode::ghost;
        (b.at.end == SegmentEnd::start ? seg.start_mode : seg.end_mode) = mode;
        if (auto* ab = std::get_if<AbsorbingEnd>(&b.model); ab && ab->a_ref == 0.0)
            ab->a_ref = seg.law.a0;
    }

    std::vector<std::pair<VesselSegment*, std::size_t>> probe_cells;
    SimResult out;
    for (const auto& p : net.probes) {
        auto& seg = net.segment(p.segment);
        std::size_t idx = p.index >= 0 ? static_cast<std::size_t>(p.index)
                                       : static_cast<std::size_t>(std::floor(p.frac *
                                             static_cast<double>(seg.last())));
        idx = std::min(idx, seg.last());
        probe_cells.emplace_back(&seg, idx);
        ProbeSeries series;
        series.label = p.label.empty() ? p.segment : p.label;
        out.probes.push_back(std::move(series));
    }

    auto record = [&](double t) {
        for (std::size_t i = 0; i < probe_cells.size(); ++i) {
            const auto [seg, idx] = probe_cells[i];
            const CellState& c = seg->cells[idx];
            auto& s = out.probes[i];
            s.t.push_back(t);
            s.a.push_back(c.a);
            s.v.push_back(c.v);
            s.q.push_back(c.a * c.v);
            s.p.push_back(tube_pressure(c.a, seg->law));
        }
    };

    double t = 0.0;
    record(t);
    std::vector<PendingWrite> pending;
    while (t < opt.duration) {
        double dt = opt.dt_cap;
        for (auto& s : net.segments) dt = std::min(dt, stable_dt(s, opt.cfl_safety));

        pending.clear();
        for (auto& b : net.boundaries) {
            auto& seg = net.segment(b.at.segment);
            const double rho = seg.fluid.rho;
            CellState& edge = end_cell(seg, b.at.end);
            CellState& ghost = b.at.end == SegmentEnd::start ? seg.ghost_start : seg.ghost_end;
            if (auto* wf = std::get_if<InflowWaveform>(&b.model)) {
                const CellState& interior = b.at.end == SegmentEnd::start
                                                ? seg.cells[1]
                                                : seg.cells[seg.last() - 1];
                pending.push_back({&seg, b.at.end, resolve_inflow(*wf, t + dt, interior, seg.law, rho)});
            } else if (auto* ab = std::get_if<AbsorbingEnd>(&b.model)) {
                ghost = {ab->a_ref, ab->v_ref};
            } else if (auto* tr = std::get_if<TerminalResistance>(&b.model)) {
                ghost = resolve_terminal(edge, *tr, seg.law, rho);
            } else if (auto* rc = std::get_if<RCR>(&b.model)) {
                ghost = resolve_rcr(edge, *rc, seg.law, rho, dt);
            }
        }
        for (const auto& j : net.junctions) {
            auto trace_end = [&](const std::string& id) -> std::pair<VesselSegment*, CellState> {
                auto& s = net.segment(id);
                return {&s, s.cells[s.last() - 1]};
            };
            auto trace_start = [&](const std::string& id) -> std::pair<VesselSegment*, CellState> {
                auto& s = net.segment(id);
                return {&s, s.cells[1]};
            };
            try {
                if (j.kind == JunctionKind::bifurcation) {
                    auto [ps, pt] = trace_end(j.parents[0]);
                    auto [c1s, c1t] = trace_start(j.children[0]);
                    auto [c2s, c2t] = trace_start(j.children[1]);
                    auto sol = solve_bifurcation(pt, ps->law, c1t, c1s->law, c2t, c2s->law,
                                                 ps->fluid.rho);
                    pending.push_back({ps, SegmentEnd::end, sol.ports[0]});
                    pending.push_back({c1s, SegmentEnd::start, sol.ports[1]});
                    pending.push_back({c2s, SegmentEnd::start, sol.ports[2]});
                } else if (j.kind == JunctionKind::confluence) {
                    auto [p1s, p1t] = trace_end(j.parents[0]);
                    auto [p2s, p2t] = trace_end(j.parents[1]);
                    auto [cs, ct] = trace_start(j.children[0]);
                    auto sol = solve_confluence(p1t, p1s->law, p2t, p2s->law, ct, cs->law,
                                                p1s->fluid.rho);
                    pending.push_back({p1s, SegmentEnd::end, sol.ports[0]});
                    pending.push_back({p2s, SegmentEnd::end, sol.ports[1]});
                    pending.push_back({cs, SegmentEnd::start, sol.ports[2]});
                } else {
                    auto [ls, lt] = trace_end(j.parents[0]);
                    auto [rs, rt] = trace_start(j.children[0]);
                    auto sol = solve_one_to_one(lt, ls->law, rt, rs->law, ls->fluid.rho);
                    pending.push_back({ls, SegmentEnd::end, sol.ports[0]});
                    pending.push_back({rs, SegmentEnd::start, sol.ports[1]});
                }
            } catch (const junction_error& e) {
                throw network_error("junction at " + j.parents[0] + " failed at t=" +
                                    std::to_string(t) + ": " + e.what());
            }
        }

        for (auto& s : net.segments) step_interior(s, dt);
        for (const auto& w : pending) end_cell(*w.seg, w.end) = w.state;

        t += dt;
        ++out.steps;
        record(t);
    }
    out.elapsed = t;
    return out;
}

CycleMeans cycle_mean(const ProbeSeries& series, double period) {
    if (series.t.empty()) throw network_error("cycle_mean: empty probe series");
    const double t_end = series.t.back();
    const double t_from = t_end - period;
    if (t_from < series.t.front() - 1e-12)
        throw network_error("cycle_mean: series shorter than one period");
    std::size_t first = 0;
    while (first < series.t.size() && series.t[first] < t_from - 1e-12) ++first;
    CycleMeans m;
    const auto n = static_cast<double>(series.t.size() - first);
    for (std::size_t i = first; i < series.t.size(); ++i) {
        m.a += series.a[i];
        m.v += series.v[i];
        m.q += series.q[i];
        m.p += series.p[i];
    }
    m.a /= n;
    m.v /= n;
    m.q /= n;
    m.p /= n;
    return m;
}

}  // namespace hemo

#include "hemo/network_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace hemo {

namespace {

struct Directive {
    std::string what;
    std::map<std::string, std::string> args;
    int lineno = 0;
};

[[noreturn]] void fail(const Directive& d, const std::string& msg) {
    throw network_error("network file line " + std::to_string(d.lineno) + ": " + msg);
}

double num(const Directive& d, const std::string& key) {
    const auto it = d.args.find(key);
    if (it == d.args.end()) fail(d, d.what + " needs " + key + "=");
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(it->second, &used);
    } catch (const std::exception&) {
        used = std::string::npos;
    }
    if (used != it->second.size()) fail(d, "bad number for " + key + ": '" + it->second + "'");
    return x;
}

double num_or(const Directive& d, const std::string& key, double fallback) {
    return d.args.count(key) ? num(d, key) : fallback;
}

std::string str(const Directive& d, const std::string& key) {
    const auto it = d.args.find(key);
    if (it == d.args.end()) fail(d, d.what + " needs " + key + "=");
    return it->second;
}

std::vector<std::string> id_list(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : text) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

SegmentEnd parse_end(const Directive& d) {
    const std::string e = str(d, "end");
    if (e == "start") return SegmentEnd::start;
    if (e == "end") return SegmentEnd::end;
    fail(d, "end must be 'start' or 'end'");
}

}  // namespace

Network parse_network(std::istream& in) {
    Network net;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream words(line);
        Directive d;
        d.lineno = lineno;
        if (!(words >> d.what)) continue;
        std::string token;
        while (words >> token) {
            const auto eq = token.find('=');
            if (eq == std::string::npos) fail(d, "expected key=value, got '" + token + "'");
            d.args[token.substr(0, eq)] = token.substr(eq + 1);
        }

        if (d.what == "segment") {
            TubeLaw law;
            const std::string kind = str(d, "law");
            if (kind == "artery") law.kind = VesselKind::artery;
            else if (kind == "vein") law.kind = VesselKind::vein;
            else fail(d, "law must be 'artery' or 'vein'");
            law.beta = num(d, "beta");
            law.a0 = num(d, "a0");
            law.p0 = num_or(d, "p0", 1e5);
            FluidParams fluid;
            fluid.rho = num_or(d, "rho", 1.05);
            fluid.mu = num_or(d, "mu", 0.04);
            fluid.kf = num_or(d, "kf", 22.0 * M_PI * fluid.mu / fluid.rho);
            fluid.g = num_or(d, "g", 0.0);
            try {
                net.segments.emplace_back(str(d, "id"), law, fluid, num(d, "length"),
                                          num(d, "dx"));
            } catch (const vessel_error& e) {
                fail(d, e.what());
            }
        } else if (d.what == "junction") {
            JunctionSpec j;
            const std::string kind = str(d, "kind");
            if (kind == "bifurcation") j.kind = JunctionKind::bifurcation;
            else if (kind == "confluence") j.kind = JunctionKind::confluence;
            else if (kind == "one_to_one") j.kind = JunctionKind::one_to_one;
            else fail(d, "unknown junction kind '" + kind + "'");
            j.parents = id_list(str(d, "parents"));
            j.children = id_list(str(d, "children"));
            net.junctions.push_back(std::move(j));
        } else if (d.what == "boundary") {
            BoundaryAttachment b;
            b.at = {str(d, "segment"), parse_end(d)};
            const std::string kind = str(d, "kind");
            if (kind == "inflow") {
                InflowWaveform wf;
                wf.ps = num(d, "ps");
                wf.ed = num(d, "ed");
                wf.period = num(d, "period");
                if (d.args.count("vti")) wf.vti = num(d, "vti");
                b.model = wf;
            } else if (kind == "absorbing") {
                b.model = AbsorbingEnd{num_or(d, "a", 0.0), num_or(d, "v", 0.0)};
            } else if (kind == "terminal") {
                b.model = TerminalResistance{num(d, "r"), num_or(d, "pout", 0.0)};
            } else if (kind == "rcr") {
                RCR rcr;
                rcr.r_p = num(d, "rp");
                rcr.r_d = num(d, "rd");
                rcr.c = num(d, "c");
                rcr.p_out = num_or(d, "pout", 0.0);
                b.model = rcr;
            } else {
                fail(d, "unknown boundary kind '" + kind + "'");
            }
            net.boundaries.push_back(std::move(b));
        } else if (d.what == "probe") {
            Probe p;
            p.segment = str(d, "segment");
            p.frac = num(d, "frac");
            if (d.args.count("label")) p.label = d.args.at("label");
            net.probes.push_back(std::move(p));
        } else {
            fail(d, "unknown directive '" + d.what + "'");
        }
    }
    net.validate();
    return net;
}

Network parse_network_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw network_error("cannot open network file: " + path);
    return parse_network(in);
}

void write_probe_csv(const ProbeSeries& series, std::ostream& out) {
    out << "t,A,v,Q,p\n";
    char buf[160];
    for (std::size_t i = 0; i < series.t.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g,%.12g\n", series.t[i], series.a[i],
                      series.v[i], series.q[i], series.p[i]);
        out << buf;
    }
}

}  // namespace hemo

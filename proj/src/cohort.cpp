#include "hemo/cohort.hpp"

#include "hemo/calibration.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

namespace hemo {

namespace {

const std::array<const char*, 6> column_names{"ps", "ed", "vti", "heart_rate", "diameter", "flow"};

struct UnitSpec {
    const char* canonical;
    // accepted alternates and their factor into CGS
    std::vector<std::pair<std::string, double>> accepted;
};

const UnitSpec& unit_spec(std::size_t column) {
    static const std::array<UnitSpec, 6> specs{{
        {"cm/s", {{"cm/s", 1.0}, {"m/s", 100.0}}},
        {"cm/s", {{"cm/s", 1.0}, {"m/s", 100.0}}},
        {"cm", {{"cm", 1.0}, {"mm", 0.1}}},
        {"1/min", {{"1/min", 1.0}, {"bpm", 1.0}}},
        {"cm", {{"cm", 1.0}, {"mm", 0.1}}},
        {"cm3/s", {{"cm3/s", 1.0}, {"ml/s", 1.0}, {"l/min", 1000.0 / 60.0}}},
    }};
    return specs[column];
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(field);
            field.clear();
        } else if (ch != '\r') {
            field += ch;
        }
    }
    out.push_back(field);
    for (auto& f : out) {
        while (!f.empty() && std::isspace(static_cast<unsigned char>(f.front()))) f.erase(0, 1);
        while (!f.empty() && std::isspace(static_cast<unsigned char>(f.back()))) f.pop_back();
    }
    return out;
}

double parse_number(const std::string& text, int lineno, const char* column) {
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(text, &used);
    } catch (const std::exception&) {
        used = std::string::npos;
    }
    if (used != text.size())
        throw cohort_error("cohort line " + std::to_string(lineno) + ": bad number '" + text +
                           "' in column " + column);
    return x;
}

std::string format_value(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string opt_str(const std::optional<double>& x) { return x ? format_value(*x) : ""; }

}  // namespace

const std::vector<Site>& all_sites() {
    static const std::vector<Site> sites{Site::o, Site::e, Site::f, Site::d,
                                         Site::h, Site::c, Site::g};
    return sites;
}

std::string site_code(Site s) {
    switch (s) {
        case Site::o: return "o";
        case Site::e: return "e";
        case Site::f: return "f";
        case Site::d: return "d";
        case Site::h: return "h";
        case Site::c: return "c";
        case Site::g: return "g";
    }
    return "?";
}

Site site_from_code(const std::string& code) {
    for (Site s : all_sites())
        if (site_code(s) == code) return s;
    throw cohort_error("unknown site code '" + code + "' (valid: o, e, f, d, h, c, g)");
}

const SiteMeasurement* SubjectRecord::find(Site s) const {
    const auto it = sites.find(s);
    return it == sites.end() ? nullptr : &it->second;
}

double SubjectRecord::need(Site s, const char* field) const {
    const auto* m = find(s);
    const std::optional<double>* v = nullptr;
    if (m) {
        if (std::string(field) == "ps") v = &m->ps;
        else if (std::string(field) == "ed") v = &m->ed;
        else if (std::string(field) == "vti") v = &m->vti;
        else if (std::string(field) == "heart_rate") v = &m->heart_rate;
        else if (std::string(field) == "diameter") v = &m->diameter;
        else if (std::string(field) == "flow") v = &m->flow;
    }
    if (!v || !v->has_value())
        throw cohort_error("subject " + id + ": site " + site_code(s) + " lacks " + field);
    return **v;
}

std::vector<SubjectRecord> ingest_cohort(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw cohort_error("cohort: empty input");
    const auto header = split_csv(line);
    std::vector<std::string> expected{"subject_id", "site"};
    for (const char* c : column_names) expected.emplace_back(c);
    if (header != expected) {
        std::string want;
        for (const auto& h : expected) want += (want.empty() ? "" : ",") + h;
        throw cohort_error("cohort: header must be exactly: " + want);
    }

    if (!std::getline(in, line)) throw cohort_error("cohort: missing units row");
    const auto units = split_csv(line);
    if (units.size() != expected.size() || units[0] != "units")
        throw cohort_error("cohort: second row must declare units, starting with 'units'");
    std::array<double, 6> factor{};
    for (std::size_t col = 0; col < 6; ++col) {
        const std::string& u = units[col + 2];
        const auto& spec = unit_spec(col);
        bool found = false;
        for (const auto& [name, f] : spec.accepted)
            if (name == u) {
                factor[col] = f;
                found = true;
            }
        if (!found)
            throw cohort_error("cohort: unsupported unit '" + u + "' for column " +
                               column_names[col] + " (canonical: " + spec.canonical + ")");
    }

    std::vector<SubjectRecord> subjects;
    auto subject_of = [&](const std::string& id) -> SubjectRecord& {
        for (auto& s : subjects)
            if (s.id == id) return s;
        subjects.push_back({id, {}});
        return subjects.back();
    };

    int lineno = 2;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        const auto fields = split_csv(line);
        if (fields.size() != expected.size())
            throw cohort_error("cohort line " + std::to_string(lineno) + ": expected " +
                               std::to_string(expected.size()) + " fields, got " +
                               std::to_string(fields.size()));
        if (fields[0].empty())
            throw cohort_error("cohort line " + std::to_string(lineno) + ": empty subject id");
        const Site site = site_from_code(fields[1]);
        auto& subject = subject_of(fields[0]);
        if (subject.sites.count(site))
            throw cohort_error("cohort line " + std::to_string(lineno) + ": duplicate site " +
                               fields[1] + " for subject " + fields[0]);
        SiteMeasurement m;
        std::array<std::optional<double>*, 6> slots{&m.ps, &m.ed, &m.vti,
                                                    &m.heart_rate, &m.diameter, &m.flow};
        for (std::size_t col = 0; col < 6; ++col) {
            const std::string& text = fields[col + 2];
            if (text.empty()) continue;
            *slots[col] = parse_number(text, lineno, column_names[col]) * factor[col];
        }
        if (m.heart_rate && !(*m.heart_rate > 0.0))
            throw cohort_error("cohort line " + std::to_string(lineno) +
                               ": heart rate must be positive");
        if (m.diameter && !(*m.diameter > 0.0))
            throw cohort_error("cohort line " + std::to_string(lineno) +
                               ": diameter must be positive");
        subject.sites[site] = m;
    }
    return subjects;
}

std::vector<SubjectRecord> ingest_cohort_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw cohort_error("cannot open cohort file: " + path);
    return ingest_cohort(in);
}

void emit_cohort(const std::vector<SubjectRecord>& subjects, std::ostream& out) {
    out << "subject_id,site,ps,ed,vti,heart_rate,diameter,flow\n";
    out << "units,,cm/s,cm/s,cm,1/min,cm,cm3/s\n";
    for (const auto& s : subjects) {
        for (Site site : all_sites()) {
            const auto* m = s.find(site);
            if (!m) continue;
            out << s.id << ',' << site_code(site) << ',' << opt_str(m->ps) << ','
                << opt_str(m->ed) << ',' << opt_str(m->vti) << ',' << opt_str(m->heart_rate) << ','
                << opt_str(m->diameter) << ',' << opt_str(m->flow) << '\n';
        }
    }
}

namespace {

/// Uniform draw with a fixed mapping from raw 64-bit words, so output never
/// depends on library distribution internals.
double uniform(std::mt19937_64& rng, double lo, double hi) {
    const double u = std::ldexp(static_cast<double>(rng()), -64);
    return lo + (hi - lo) * u;
}

}  // namespace

SyntheticCohort synth_cohort(int count, std::uint64_t seed, const RunConfig& cfg) {
    if (count < 1) throw cohort_error("synth_cohort: count must be at least 1");
    SyntheticCohort out;
    std::mt19937_64 rng(seed);

    for (int i = 0; i < count; ++i) {
        char id[16];
        std::snprintf(id, sizeof id, "S%03d", i + 1);

        SubjectRecord subject;
        subject.id = id;
        const double hr = std::round(uniform(rng, 60.0, 90.0));
        const double beta = uniform(rng, 1.5e5, 9.5e5);

        auto waveform_site = [&](double ps_lo, double ps_hi, double d_lo, double d_hi) {
            SiteMeasurement m;
            const double ps = uniform(rng, ps_lo, ps_hi);
            m.ps = ps;
            m.ed = uniform(rng, 0.05, 0.15) * ps;
            m.heart_rate = hr;
            m.diameter = uniform(rng, d_lo, d_hi);
            // vti jittered around the natural beat integral to exercise rescale
            InflowWaveform wf;
            wf.ps = *m.ps;
            wf.ed = *m.ed;
            wf.period = 60.0 / hr;
            wf.knots = cfg.inflow_knots;
            m.vti = wf.cycle_integral() * uniform(rng, 0.9, 1.1);
            return m;
        };

        auto& o = subject.sites[Site::o];
        o = waveform_site(70.0, 110.0, 1.4, 2.0);
        o.flow = uniform(rng, 60.0, 90.0);

        auto& d = subject.sites[Site::d];
        d = waveform_site(50.0, 80.0, 0.35, 0.45);
        d.flow = uniform(rng, 3.0, 8.0);
        auto& h = subject.sites[Site::h];
        h = waveform_site(50.0, 80.0, 0.35, 0.45);
        h.flow = uniform(rng, 3.0, 8.0);

        auto& c = subject.sites[Site::c];
        c.diameter = uniform(rng, 0.2, 0.3);
        c.heart_rate = hr;
        auto& g = subject.sites[Site::g];
        g.diameter = uniform(rng, 0.2, 0.3);
        g.heart_rate = hr;

        for (Site carotid : {Site::e, Site::f}) {
            auto& m = subject.sites[carotid];
            m.heart_rate = hr;
            m.diameter = uniform(rng, 0.5, 0.7);
            m.flow = uniform(rng, 8.0, 15.0);
        }

        // Forward runs at the true beta fix the radial flows, and the derived
        // downstream quantities become the hidden truths.
        c.flow = simulate_arm_flow(subject, Site::d, Site::c, beta, cfg);
        g.flow = simulate_arm_flow(subject, Site::h, Site::g, beta, cfg);

        SubjectTruth truth;
        truth.id = subject.id;
        truth.beta = beta;
        {
            Network net = build_resistance_network(subject, beta, cfg);
            const double period = 60.0 / hr;
            SimOptions opt;
            opt.duration = (cfg.warmup_cycles + 1) * period;
            opt.dt_cap = cfg.dt;
            opt.cfl_safety = cfg.cfl_safety;
            const SimResult res = simulate(net, opt);
            truth.r_tot = cycle_mean(res.probes[0], period).p / *c.flow;
        }
        {
            const auto [p_a, q_a] =
                simulate_liver_point(subject, beta, 0.1 * truth.r_tot, 0.9 * truth.r_tot, cfg);
            truth.p_a = p_a;
            truth.q_a = q_a;
            const DerivedLiverPoint derived = derive_liver_point(q_a, cfg.p_pv, cfg.p_v);
            const LiverBoundary bound{p_a, cfg.p_pv, cfg.p_v};
            const LiverResistances res = calibrate_resistances(bound, derived.p_t, derived.flows);
            truth.r_ha = res.r_ha;
            truth.r_pv = res.r_pv;
            truth.r_l = res.r_l;
        }

        out.subjects.push_back(std::move(subject));
        out.truths.push_back(truth);
    }
    return out;
}

void emit_truths(const std::vector<SubjectTruth>& truths, std::ostream& out) {
    out << "subject_id,beta,r_tot,r_ha,r_pv,r_l,p_a,q_a\n";
    for (const auto& t : truths)
        out << t.id << ',' << format_value(t.beta) << ',' << format_value(t.r_tot) << ','
            << format_value(t.r_ha) << ',' << format_value(t.r_pv) << ',' << format_value(t.r_l)
            << ',' << format_value(t.p_a) << ',' << format_value(t.q_a) << '\n';
}

std::vector<SubjectTruth> ingest_truths(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) ||
        split_csv(line) != std::vector<std::string>{"subject_id", "beta", "r_tot", "r_ha", "r_pv",
                                                    "r_l", "p_a", "q_a"})
        throw cohort_error("truths: bad header");
    std::vector<SubjectTruth> out;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto f = split_csv(line);
        if (f.size() != 8)
            throw cohort_error("truths line " + std::to_string(lineno) + ": expected 8 fields");
        SubjectTruth t;
        t.id = f[0];
        t.beta = parse_number(f[1], lineno, "beta");
        t.r_tot = parse_number(f[2], lineno, "r_tot");
        t.r_ha = parse_number(f[3], lineno, "r_ha");
        t.r_pv = parse_number(f[4], lineno, "r_pv");
        t.r_l = parse_number(f[5], lineno, "r_l");
        t.p_a = parse_number(f[6], lineno, "p_a");
        t.q_a = parse_number(f[7], lineno, "q_a");
        out.push_back(t);
    }
    return out;
}

}  // namespace hemo

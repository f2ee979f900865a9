#pragma once

#include "hemo/config.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hemo {

struct cohort_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Measurement sites: abdominal aorta (o), carotids (e right, f left),
/// brachials (d right, h left), radials (c right, g left).
enum class Site { o, e, f, d, h, c, g };

const std::vector<Site>& all_sites();
std::string site_code(Site s);
Site site_from_code(const std::string& code);

/// Per-site non-invasive measurements, CGS after ingest.
struct SiteMeasurement {
    std::optional<double> ps;         ///< peak systolic velocity, cm/s
    std::optional<double> ed;         ///< end diastolic velocity, cm/s
    std::optional<double> vti;        ///< velocity-time integral, cm
    std::optional<double> heart_rate; ///< 1/min
    std::optional<double> diameter;   ///< cm
    std::optional<double> flow;       ///< cm^3/s
};

struct SubjectRecord {
    std::string id;
    std::map<Site, SiteMeasurement> sites;

    const SiteMeasurement* find(Site s) const;
    /// Measurement that must exist; throws naming the subject, site, field.
    double need(Site s, const char* field) const;
};

std::vector<SubjectRecord> ingest_cohort(std::istream& in);
std::vector<SubjectRecord> ingest_cohort_file(const std::string& path);

/// Canonical form: fixed column order, CGS units row, sites in o,e,f,d,h,c,g
/// order, blanks for missing values.
void emit_cohort(const std::vector<SubjectRecord>& subjects, std::ostream& out);

/// Hidden ground truth for one generated subject.
struct SubjectTruth {
    std::string id;
    double beta = 0.0;
    double r_tot = 0.0;
    double r_ha = 0.0;
    double r_pv = 0.0;
    double r_l = 0.0;
    double p_a = 0.0;
    double q_a = 0.0;
};

struct SyntheticCohort {
    std::vector<SubjectRecord> subjects;
    std::vector<SubjectTruth> truths;
};

/// Deterministic for a given seed: draws subject physiology, forward-runs the
/// same models calibration uses, and stores the implied truths.
SyntheticCohort synth_cohort(int count, std::uint64_t seed, const RunConfig& cfg);

void emit_truths(const std::vector<SubjectTruth>& truths, std::ostream& out);
std::vector<SubjectTruth> ingest_truths(std::istream& in);

}  // namespace hemo

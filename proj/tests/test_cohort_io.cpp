#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hemo/cohort.hpp"

#include <sstream>

using namespace hemo;

namespace {

const char* sample_csv =
    "subject_id,site,ps,ed,vti,heart_rate,diameter,flow\n"
    "units,,cm/s,cm/s,cm,1/min,cm,cm3/s\n"
    "S001,o,95,9.5,18.2,72,1.62,75\n"
    "S001,d,65,6.1,11.4,72,0.41,5.2\n"
    "S001,c,,,,72,0.24,0.61\n"
    "# trailing comment line\n"
    "S002,o,88,8,16.9,64,1.55,70\n";

std::vector<SubjectRecord> ingest_str(const std::string& text) {
    std::istringstream in(text);
    return ingest_cohort(in);
}

std::string emit_str(const std::vector<SubjectRecord>& subjects) {
    std::ostringstream out;
    emit_cohort(subjects, out);
    return out.str();
}

}  // namespace

TEST_CASE("ingest reads values, blanks, and comments") {
    const auto subjects = ingest_str(sample_csv);
    REQUIRE(subjects.size() == 2);
    const SubjectRecord& s1 = subjects[0];
    CHECK(s1.id == "S001");
    CHECK(s1.need(Site::o, "ps") == 95.0);
    CHECK(s1.need(Site::d, "vti") == 11.4);
    CHECK(s1.need(Site::c, "flow") == 0.61);
    CHECK(s1.find(Site::c)->ps.has_value() == false);
    CHECK(s1.find(Site::g) == nullptr);
    CHECK(subjects[1].need(Site::o, "heart_rate") == 64.0);
}

TEST_CASE("alternate units convert into CGS") {
    const std::string csv =
        "subject_id,site,ps,ed,vti,heart_rate,diameter,flow\n"
        "units,,m/s,m/s,cm,bpm,mm,l/min\n"
        "S001,o,0.95,0.095,18.2,72,16.2,4.5\n";
    const auto subjects = ingest_str(csv);
    const SubjectRecord& s = subjects[0];
    CHECK(s.need(Site::o, "ps") == doctest::Approx(95.0).epsilon(1e-12));
    CHECK(s.need(Site::o, "ed") == doctest::Approx(9.5).epsilon(1e-12));
    CHECK(s.need(Site::o, "diameter") == doctest::Approx(1.62).epsilon(1e-12));
    CHECK(s.need(Site::o, "flow") == doctest::Approx(75.0).epsilon(1e-12));
}

TEST_CASE("emit then ingest is the identity on the canonical form") {
    const auto subjects = ingest_str(sample_csv);
    const std::string canonical = emit_str(subjects);
    const auto again = ingest_str(canonical);
    CHECK(emit_str(again) == canonical);
}

TEST_CASE("malformed input is rejected with line context") {
    CHECK_THROWS_WITH_AS(ingest_str(""), doctest::Contains("empty input"), cohort_error);
    CHECK_THROWS_WITH_AS(ingest_str("subject_id,site,ps\n"), doctest::Contains("header"),
                         cohort_error);
    CHECK_THROWS_WITH_AS(
        ingest_str("subject_id,site,ps,ed,vti,heart_rate,diameter,flow\n"),
        doctest::Contains("units"), cohort_error);
    CHECK_THROWS_WITH_AS(
        ingest_str("subject_id,site,ps,ed,vti,heart_rate,diameter,flow\n"
                   "units,,furlongs,cm/s,cm,1/min,cm,cm3/s\n"),
        doctest::Contains("furlongs"), cohort_error);
    CHECK_THROWS_WITH_AS(
        ingest_str("subject_id,site,ps,ed,vti,heart_rate,diameter,flow\n"
                   "units,,cm/s,cm/s,cm,1/min,cm,cm3/s\n"
                   "S001,z,95,9.5,18.2,72,1.62,75\n"),
        doctest::Contains("valid: o, e, f, d, h, c, g"), cohort_error);
    CHECK_THROWS_WITH_AS(
        ingest_str("subject_id,site,ps,ed,vti,heart_rate,diameter,flow\n"
                   "units,,cm/s,cm/s,cm,1/min,cm,cm3/s\n"
                   "S001,o,banana,9.5,18.2,72,1.62,75\n"),
        doctest::Contains("line 3"), cohort_error);
    CHECK_THROWS_WITH_AS(
        ingest_str("subject_id,site,ps,ed,vti,heart_rate,diameter,flow\n"
                   "units,,cm/s,cm/s,cm,1/min,cm,cm3/s\n"
                   "S001,o,95,9.5,18.2,72,1.62,75\n"
                   "S001,o,88,8,16.9,72,1.55,70\n"),
        doctest::Contains("duplicate site"), cohort_error);
}

TEST_CASE("need() names what is missing") {
    const auto subjects = ingest_str(sample_csv);
    CHECK_THROWS_WITH_AS(subjects[0].need(Site::c, "ps"),
                         doctest::Contains("subject S001: site c lacks ps"), cohort_error);
}

TEST_CASE("truth table round trip") {
    std::vector<SubjectTruth> truths{{"S001", 3.3e5, 1.9e5, 2.2e4, 190.0, 34.0, 1.18e5, 4.7},
                                     {"S002", 6.1e5, 2.4e5, 3.1e4, 240.0, 41.0, 1.22e5, 3.9}};
    std::ostringstream out;
    emit_truths(truths, out);
    std::istringstream in(out.str());
    const auto back = ingest_truths(in);
    REQUIRE(back.size() == 2);
    CHECK(back[0].beta == 3.3e5);
    CHECK(back[1].r_ha == 3.1e4);
    CHECK(back[1].id == "S002");
}

TEST_CASE("synthetic cohorts are seed-deterministic") {
    RunConfig cfg;
    const SyntheticCohort a = synth_cohort(2, 99, cfg);
    const SyntheticCohort b = synth_cohort(2, 99, cfg);
    const SyntheticCohort c = synth_cohort(2, 100, cfg);
    CHECK(emit_str(a.subjects) == emit_str(b.subjects));
    CHECK(emit_str(a.subjects) != emit_str(c.subjects));
    REQUIRE(a.truths.size() == 2);
    CHECK(a.truths[0].beta == b.truths[0].beta);
    CHECK(a.truths[0].r_tot == b.truths[0].r_tot);
    CHECK(a.truths[0].beta >= 1.5e5);
    CHECK(a.truths[0].beta <= 9.5e5);
    // the written radial flows are the forward-model outputs
    CHECK(a.subjects[0].need(Site::c, "flow") > 0.0);
    CHECK(a.subjects[0].need(Site::g, "flow") > 0.0);
}

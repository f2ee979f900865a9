#pragma once

#include "hemo/calibration.hpp"
#include "hemo/verification.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hemo {

struct SubjectOutcome {
    std::string id;
    std::optional<SubjectEstimate> estimate;
    std::optional<SubjectVerification> verification;
    std::string error;  ///< empty on success
};

struct PipelineResult {
    std::vector<SubjectOutcome> outcomes;
    double mre = 0.0;   ///< over successful subjects
    int failures = 0;
};

/// Calibrates and verifies every subject; worker threads split the cohort,
/// output order always follows the input order.
PipelineResult run_cohort(const std::vector<SubjectRecord>& subjects, const RunConfig& cfg,
                          int workers);

void emit_estimates(const PipelineResult& result, std::ostream& out);
void emit_verification(const PipelineResult& result, std::ostream& out);

/// Full run: ingest cohort, calibrate, verify, write estimates.csv and
/// verification.csv under out_dir. Returns the result for exit-code logic.
PipelineResult run_pipeline(const std::string& cohort_path, const std::string& out_dir,
                            const RunConfig& cfg, int workers);

}  // namespace hemo

#include "hemo/pipeline.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

namespace hemo {

namespace {

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

}  // namespace

PipelineResult run_cohort(const std::vector<SubjectRecord>& subjects, const RunConfig& cfg,
                          int workers) {
    cfg.validate();
    if (workers < 1) workers = 1;
    PipelineResult result;
    result.outcomes.resize(subjects.size());

    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= subjects.size()) return;
            SubjectOutcome& out = result.outcomes[i];
            out.id = subjects[i].id;
            try {
                out.estimate = calibrate_subject(subjects[i], cfg);
                out.verification = verify_subject(subjects[i], *out.estimate, cfg);
            } catch (const std::exception& e) {
                out.error = std::string("subject ") + subjects[i].id + ": " + e.what();
            }
        }
    };
    if (workers == 1 || subjects.size() <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        const int n = std::min<int>(workers, static_cast<int>(subjects.size()));
        pool.reserve(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    double sum = 0.0;
    int ok = 0;
    for (const auto& o : result.outcomes) {
        if (!o.error.empty()) {
            ++result.failures;
        } else {
            sum += o.verification->relative_error;
            ++ok;
        }
    }
    result.mre = ok > 0 ? sum / ok : 0.0;
    return result;
}

void emit_estimates(const PipelineResult& result, std::ostream& out) {
    out << "subject_id,beta,r_tot,r_p,r_d,p_a,q_a,p_t,q_pv,q_v,r_ha,r_pv,r_l\n";
    for (const auto& o : result.outcomes) {
        if (!o.estimate) continue;
        const auto& v = o.estimate->vessel;
        const auto& l = o.estimate->liver;
        out << o.id << ',' << fmt(v.beta) << ',' << fmt(v.r_tot) << ',' << fmt(v.r_p) << ','
            << fmt(v.r_d) << ',' << fmt(l.p_a) << ',' << fmt(l.q_a) << ',' << fmt(l.p_t) << ','
            << fmt(l.flows.q_pv) << ',' << fmt(l.flows.q_v) << ',' << fmt(l.res.r_ha) << ','
            << fmt(l.res.r_pv) << ',' << fmt(l.res.r_l) << '\n';
    }
}

void emit_verification(const PipelineResult& result, std::ostream& out) {
    out << "subject_id,q_ivc,q_superior,venous_return,cardiac_output,relative_error\n";
    for (const auto& o : result.outcomes) {
        if (!o.verification) continue;
        const auto& v = *o.verification;
        out << v.id << ',' << fmt(v.q_ivc) << ',' << fmt(v.q_superior) << ','
            << fmt(v.venous_return) << ',' << fmt(v.cardiac_output) << ','
            << fmt(v.relative_error) << '\n';
    }
    out << "# cohort_mre," << fmt(result.mre) << '\n';
}

PipelineResult run_pipeline(const std::string& cohort_path, const std::string& out_dir,
                            const RunConfig& cfg, int workers) {
    const auto subjects = ingest_cohort_file(cohort_path);
    PipelineResult result = run_cohort(subjects, cfg, workers);
    std::filesystem::create_directories(out_dir);
    {
        std::ofstream f(out_dir + "/estimates.csv");
        if (!f) throw cohort_error("cannot write " + out_dir + "/estimates.csv");
        emit_estimates(result, f);
    }
    {
        std::ofstream f(out_dir + "/verification.csv");
        if (!f) throw cohort_error("cannot write " + out_dir + "/verification.csv");
        emit_verification(result, f);
    }
    return result;
}

}  // namespace hemo

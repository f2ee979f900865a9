#include "hemo/cohort.hpp"
#include "hemo/network_io.hpp"
#include "hemo/pipeline.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

hemo::RunConfig load(const std::string& path) {
    if (!path.empty()) return hemo::load_config(path);
    const std::string env = hemo::default_config_path();
    if (!env.empty()) return hemo::load_config(env);
    return {};
}

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    return f;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"1-D vascular network simulation and subject calibration"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path,
                   "run configuration file (default: $HEMO_CONFIG if set)")
        ->envname("HEMO_CONFIG");

    auto* sim = app.add_subcommand("simulate", "run one network and dump probe series");
    std::string network_path, sim_out = "probes";
    double duration = 0.0;
    sim->add_option("--network", network_path, "network description file")->required();
    sim->add_option("--duration", duration, "simulated time, s")->required();
    sim->add_option("--out", sim_out, "output directory for probe CSVs");

    auto* synth = app.add_subcommand("synth-cohort", "generate a synthetic cohort");
    int subjects = 10;
    std::uint64_t seed = 1;
    std::string cohort_out = "cohort.csv", truth_out = "truth.csv";
    synth->add_option("--subjects", subjects, "number of subjects");
    synth->add_option("--seed", seed, "random seed");
    synth->add_option("--cohort", cohort_out, "cohort CSV to write");
    synth->add_option("--truth", truth_out, "hidden-truth CSV to write");

    auto* cal = app.add_subcommand("calibrate", "estimate per-subject parameters");
    std::string cohort_path, cal_out = "estimates.csv";
    cal->add_option("--cohort", cohort_path, "cohort CSV")->required();
    cal->add_option("--out", cal_out, "estimates CSV to write");
    int workers = 1;
    cal->add_option("--workers", workers, "worker threads");

    auto* ver = app.add_subcommand("verify", "calibrate then check venous return");
    std::string ver_cohort, ver_out = "verification.csv";
    int ver_workers = 1;
    ver->add_option("--cohort", ver_cohort, "cohort CSV")->required();
    ver->add_option("--out", ver_out, "verification CSV to write");
    ver->add_option("--workers", ver_workers, "worker threads");

    auto* pipe = app.add_subcommand("pipeline", "calibrate + verify, write both CSVs");
    std::string pipe_cohort, pipe_out = "out";
    int pipe_workers = 1;
    pipe->add_option("--cohort", pipe_cohort, "cohort CSV")->required();
    pipe->add_option("--out", pipe_out, "output directory");
    pipe->add_option("--workers", pipe_workers, "worker threads");

    CLI11_PARSE(app, argc, argv);

    try {
        const hemo::RunConfig cfg = load(config_path);
        cfg.validate();

        if (*sim) {
            hemo::Network net = hemo::parse_network_file(network_path);
            hemo::SimOptions opt;
            opt.duration = duration;
            opt.dt_cap = cfg.dt;
            opt.cfl_safety = cfg.cfl_safety;
            const hemo::SimResult res = hemo::simulate(net, opt);
            std::filesystem::create_directories(sim_out);
            for (const auto& series : res.probes) {
                auto f = open_out(sim_out + "/" + series.label + ".csv");
                hemo::write_probe_csv(series, f);
                std::cout << sim_out << "/" << series.label << ".csv: " << series.t.size()
                          << " samples\n";
            }
            std::cout << "steps: " << res.steps << ", simulated " << res.elapsed << " s\n";
        } else if (*synth) {
            const hemo::SyntheticCohort c = hemo::synth_cohort(subjects, seed, cfg);
            {
                auto f = open_out(cohort_out);
                hemo::emit_cohort(c.subjects, f);
            }
            {
                auto f = open_out(truth_out);
                hemo::emit_truths(c.truths, f);
            }
            std::cout << "wrote " << cohort_out << " and " << truth_out << " (" << subjects
                      << " subjects, seed " << seed << ")\n";
        } else if (*cal) {
            const auto records = hemo::ingest_cohort_file(cohort_path);
            const hemo::PipelineResult res = hemo::run_cohort(records, cfg, workers);
            auto f = open_out(cal_out);
            hemo::emit_estimates(res, f);
            for (const auto& o : res.outcomes)
                if (!o.error.empty()) std::cerr << "FAILED " << o.error << "\n";
            if (res.failures > 0) return 1;
        } else if (*ver || *pipe) {
            const std::string path = *ver ? ver_cohort : pipe_cohort;
            const int n_workers = *ver ? ver_workers : pipe_workers;
            hemo::PipelineResult res;
            if (*pipe) {
                res = hemo::run_pipeline(path, pipe_out, cfg, n_workers);
            } else {
                const auto records = hemo::ingest_cohort_file(path);
                res = hemo::run_cohort(records, cfg, n_workers);
                auto f = open_out(ver_out);
                hemo::emit_verification(res, f);
            }
            for (const auto& o : res.outcomes)
                if (!o.error.empty()) std::cerr << "FAILED " << o.error << "\n";
            std::cout << "cohort mean relative error: " << res.mre << "\n";
            if (res.failures > 0) return 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

// Benchmark of the Monte-Carlo trial loop: serial reference vs OpenMP.
// Also re-checks that both modes produce identical results, which is the
// contract that makes the parallel path safe to use everywhere.

#include <chrono>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "dcsp/analysis.hpp"
#include "dcsp/experiments.hpp"

namespace {

double time_sweep(dcsp::ExperimentConfig cfg, dcsp::RunMode mode,
                  std::vector<dcsp::ExperimentRow>& rows) {
    cfg.mode = mode;
    const auto t0 = std::chrono::steady_clock::now();
    rows = dcsp::run_success_sweep(cfg);
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool same_results(const std::vector<dcsp::ExperimentRow>& a,
                  const std::vector<dcsp::ExperimentRow>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].success_rate != b[i].success_rate) return false;
        if (a[i].mean_iterations != b[i].mean_iterations) return false;
        if (a[i].mean_total_messages != b[i].mean_total_messages) return false;
    }
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    dcsp::ExperimentConfig cfg;
    cfg.trials = 200;
    cfg.q_count = 10;
    cfg.n = 100;
    cfg.k = 5;
    cfg.g = 5;
    cfg.m_values = {30};
    cfg.snr_db = 18.0;
    cfg.seed = 1234;
    int m = 30;
    int vote_trials = 20000;

    CLI::App app{"serial vs OpenMP trial-loop benchmark"};
    app.add_option("--trials", cfg.trials, "trials per sweep point");
    app.add_option("--q", cfg.q_count, "nodes");
    app.add_option("--n", cfg.n, "dictionary columns");
    app.add_option("--k", cfg.k, "sparsity");
    app.add_option("--g", cfg.g, "neighborhood size");
    app.add_option("--m", m, "measurements");
    app.add_option("--seed", cfg.seed, "base seed");
    app.add_option("--vote-trials", vote_trials, "vote-model simulation trials");
    CLI11_PARSE(app, argc, argv);
    cfg.m_values = {m};
    if (cfg.g > cfg.q_count) cfg.g = cfg.q_count;

    std::printf("threads available: %d\n", dcsp::max_threads());

    std::vector<dcsp::ExperimentRow> serial_rows, parallel_rows;
    const double t_serial = time_sweep(cfg, dcsp::RunMode::serial, serial_rows);
    const double t_parallel = time_sweep(cfg, dcsp::RunMode::parallel, parallel_rows);
    const bool sweep_same = same_results(serial_rows, parallel_rows);
    std::printf("recovery sweep  (%d trials): serial %.3fs  openmp %.3fs  speedup %.2fx  %s\n",
                cfg.trials, t_serial, t_parallel, t_serial / t_parallel,
                sweep_same ? "results identical" : "RESULTS DIFFER");

    const auto v0 = std::chrono::steady_clock::now();
    const auto vote_serial =
        dcsp::simulate_vote_model(10, 200, 4, 13, vote_trials, cfg.seed, dcsp::RunMode::serial);
    const auto v1 = std::chrono::steady_clock::now();
    const auto vote_parallel =
        dcsp::simulate_vote_model(10, 200, 4, 13, vote_trials, cfg.seed, dcsp::RunMode::parallel);
    const auto v2 = std::chrono::steady_clock::now();
    const bool vote_same = vote_serial.detect_prob == vote_parallel.detect_prob &&
                           vote_serial.beta_covariance == vote_parallel.beta_covariance;
    std::printf("vote simulation (%d trials): serial %.3fs  openmp %.3fs  speedup %.2fx  %s\n",
                vote_trials, std::chrono::duration<double>(v1 - v0).count(),
                std::chrono::duration<double>(v2 - v1).count(),
                std::chrono::duration<double>(v1 - v0).count() /
                    std::chrono::duration<double>(v2 - v1).count(),
                vote_same ? "results identical" : "RESULTS DIFFER");

    return sweep_same && vote_same ? 0 : 1;
}

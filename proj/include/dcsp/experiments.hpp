#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dcsp/parallel.hpp"
#include "dcsp/problem.hpp"

namespace dcsp {

// Invalid user-facing configuration (CLI flags or sweep parameters);
// reported on stderr and mapped to exit code 1.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Algorithm { dcsp, gdcsp, ssp, sp };

std::string algorithm_name(Algorithm a);

struct ExperimentConfig {
    Algorithm algorithm = Algorithm::dcsp;
    int q_count = 10;
    int n = 200;
    int k = 10;
    int g = 5;                     // neighborhood size (dcsp/gdcsp; sp pins g=1, ssp g=Q)
    std::vector<int> m_values;     // measurement counts to sweep
    std::optional<double> snr_db;  // nullopt = noise-free
    int trials = 500;
    int max_iters = 0;             // 0 -> 3K
    std::uint64_t seed = 0;
    SignalModel model;
    RunMode mode = RunMode::parallel;
};

// Validates ranges; throws ConfigError naming the offending field.
void validate_config(const ExperimentConfig& cfg);

struct TrialOutcome {
    bool success = false;
    int iterations = 0;
    std::uint64_t messages = 0;
    std::uint64_t predicted_messages = 0;  // closed-form total at this trial's L
    double runtime_ms = 0.0;
};

// One fully seeded trial: generate the problem from the per-trial seed, run
// the selected algorithm, report outcome and exact message count.
TrialOutcome run_experiment_trial(const ExperimentConfig& cfg, int m, int g, int q_count,
                                  std::uint64_t trial_seed);

struct ExperimentRow {
    std::string algorithm;
    int q_count = 0, n = 0, m = 0, k = 0, g = 0;
    std::optional<double> snr_db;
    int trials = 0;
    double success_rate = 0.0;
    double mean_iterations = 0.0;
    double mean_total_messages = 0.0;  // exact integer sum divided by trials
    double mean_runtime_ms = 0.0;
};

// Success-rate sweep over M at fixed (Q, N, K, g, SNR); one row per M.
std::vector<ExperimentRow> run_success_sweep(const ExperimentConfig& cfg);

struct ScalingRow {
    std::string algorithm;
    int q_count = 0, n = 0, m = 0, k = 0, g = 0;
    std::optional<double> snr_db;
    int trials = 0;
    double success_rate = 0.0;
    double mean_iterations = 0.0;
    double mean_total_messages = 0.0;
    double predicted_total_messages = 0.0;  // closed-form cost at each trial's L, averaged
    double mean_runtime_ms = 0.0;
};

// Message-scaling sweep over network sizes; g = max(1, Q/2) per sweep point
// (integer division), cfg.m_values must hold exactly one M.
std::vector<ScalingRow> run_scaling_sweep(const ExperimentConfig& cfg,
                                          const std::vector<int>& q_values);

// Fixed headers, comma separated, '.' decimal, LF line ends, %.6g floats,
// exact integers for counters, snr_db printed as "none" when noise-free.
// mean_runtime_ms (always the last column) is the only non-reproducible
// column.
void write_success_csv(const std::vector<ExperimentRow>& rows, std::ostream& out);
void write_scaling_csv(const std::vector<ScalingRow>& rows, std::ostream& out);

struct OracleCheckReport {
    int trials = 0;
    int pursuit_runs = 0;           // single-node runs cross-checked
    int pursuit_qualifying = 0;     // runs that recovered (residual ~ 0) and
                                    // were therefore compared with exhaustive search
    int pursuit_mismatches = 0;     // qualifying runs whose support differs from exhaustive
    int pursuit_residual_failures = 0;  // QR vs normal-equations residual disagreement
    int vote_checks = 0;            // occurrence vote vs tally-vector route
    int vote_mismatches = 0;
    int projection_checks = 0;      // residual orthogonality / idempotence
    int projection_failures = 0;
    bool passed() const {
        return pursuit_mismatches == 0 && pursuit_residual_failures == 0 &&
               vote_mismatches == 0 && projection_failures == 0;
    }
};

OracleCheckReport run_oracle_check(std::uint64_t seed, int trials);

// Entry point behind the CLI binary.  Exit codes: 0 success, 1 configuration
// error (with usage on parse failures), 2 internal error.
int cli_main(int argc, const char* const* argv);

}  // namespace dcsp

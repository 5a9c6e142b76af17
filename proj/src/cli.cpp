#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "dcsp/analysis.hpp"
#include "dcsp/experiments.hpp"

namespace dcsp {

namespace {

// "start:stop:step" (inclusive stop) or a single value
std::vector<int> parse_m_range(const std::string& text) {
    std::vector<int> parts;
    std::stringstream ss(text);
    std::string piece;
    while (std::getline(ss, piece, ':')) {
        try {
            parts.push_back(std::stoi(piece));
        } catch (const std::exception&) {
            throw ConfigError("config error: bad m range '" + text + "'");
        }
    }
    if (parts.size() == 1) return parts;
    if (parts.size() != 3) throw ConfigError("config error: m must be 'value' or 'start:stop:step'");
    const int start = parts[0], stop = parts[1], step = parts[2];
    if (step < 1 || stop < start)
        throw ConfigError("config error: m range needs start <= stop and step >= 1");
    std::vector<int> values;
    for (int m = start; m <= stop; m += step) values.push_back(m);
    return values;
}

std::optional<double> parse_snr(const std::string& text) {
    if (text == "none") return std::nullopt;
    try {
        return std::stod(text);
    } catch (const std::exception&) {
        throw ConfigError("config error: snr-db must be a number or 'none'");
    }
}

std::vector<int> parse_q_list(const std::string& text) {
    std::vector<int> values;
    std::stringstream ss(text);
    std::string piece;
    while (std::getline(ss, piece, ',')) {
        try {
            values.push_back(std::stoi(piece));
        } catch (const std::exception&) {
            throw ConfigError("config error: bad q-list '" + text + "'");
        }
    }
    return values;
}

// DCSP_OUT_DIR redirects bare relative output paths.
std::filesystem::path resolve_out_path(const std::string& out) {
    std::filesystem::path p(out);
    if (p.is_relative()) {
        if (const char* dir = std::getenv("DCSP_OUT_DIR"); dir && *dir)
            return std::filesystem::path(dir) / p;
    }
    return p;
}

std::ofstream open_out(const std::string& out) {
    const std::filesystem::path path = resolve_out_path(out);
    std::ofstream file(path);
    if (!file) throw ConfigError("config error: cannot write output file '" + path.string() + "'");
    return file;
}

struct CommonFlags {
    std::string algorithm = "dcsp";
    int q = 10, n = 200, k = 10, g = 5;
    std::string m = "40";
    std::string snr = "18";
    int trials = 0;
    int max_iters = 0;
    std::uint64_t seed = 0;
    std::string model = "gauss-indep";
    double decay_c = 1.0;
    double decay_p = 0.3;
    bool serial = false;
    std::string out;
};

void add_common_flags(CLI::App* sub, CommonFlags& f, int default_trials,
                      const char* default_out) {
    f.trials = default_trials;
    f.out = default_out;
    sub->add_option("--algorithm", f.algorithm, "dcsp|gdcsp|ssp|sp")
        ->check(CLI::IsMember({"dcsp", "gdcsp", "ssp", "sp"}));
    sub->add_option("--q", f.q, "number of nodes");
    sub->add_option("--n", f.n, "dictionary columns");
    sub->add_option("--k", f.k, "sparsity level");
    sub->add_option("--g", f.g, "neighborhood size");
    sub->add_option("--snr-db", f.snr, "SNR in dB or 'none' for noise-free");
    sub->add_option("--trials", f.trials, "Monte-Carlo trials per sweep point");
    sub->add_option("--max-iters", f.max_iters, "iteration cap (0 = 3K)");
    sub->add_option("--seed", f.seed, "base seed (required)")->required();
    sub->add_option("--model", f.model, "gauss-indep|gauss-identical|exp-decay|power-decay")
        ->check(CLI::IsMember({"gauss-indep", "gauss-identical", "exp-decay", "power-decay"}));
    sub->add_option("--decay-c", f.decay_c, "decay model leading magnitude");
    sub->add_option("--decay-p", f.decay_p, "decay model rate/exponent");
    sub->add_flag("--serial", f.serial, "run the serial reference trial loop");
    sub->add_option("--out", f.out, "output CSV path");
}

ExperimentConfig to_config(const CommonFlags& f) {
    static const std::map<std::string, Algorithm> algs = {{"dcsp", Algorithm::dcsp},
                                                          {"gdcsp", Algorithm::gdcsp},
                                                          {"ssp", Algorithm::ssp},
                                                          {"sp", Algorithm::sp}};
    static const std::map<std::string, SignalKind> kinds = {
        {"gauss-indep", SignalKind::independent_gaussian},
        {"gauss-identical", SignalKind::identical_gaussian},
        {"exp-decay", SignalKind::exponential_decay},
        {"power-decay", SignalKind::power_law_decay}};
    ExperimentConfig cfg;
    cfg.algorithm = algs.at(f.algorithm);
    cfg.q_count = f.q;
    cfg.n = f.n;
    cfg.k = f.k;
    cfg.g = f.g;
    cfg.m_values = parse_m_range(f.m);
    cfg.snr_db = parse_snr(f.snr);
    cfg.trials = f.trials;
    cfg.max_iters = f.max_iters;
    cfg.seed = f.seed;
    cfg.model.kind = kinds.at(f.model);
    cfg.model.c = f.decay_c;
    cfg.model.p = f.decay_p;
    cfg.mode = f.serial ? RunMode::serial : RunMode::parallel;
    return cfg;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"joint sparsity-pattern recovery simulator"};
    app.require_subcommand(1);

    CommonFlags success_flags;
    CLI::App* success = app.add_subcommand("success", "success-rate sweep over M");
    add_common_flags(success, success_flags, 500, "success.csv");
    success->add_option("--m", success_flags.m, "measurement count: value or start:stop:step");

    CommonFlags scaling_flags;
    CLI::App* scaling = app.add_subcommand("scaling", "message scaling over network size");
    add_common_flags(scaling, scaling_flags, 100, "scaling.csv");
    scaling->add_option("--m", scaling_flags.m, "measurement count (single value)");
    std::string q_list_text = "10,20,30";
    scaling->add_option("--q-list", q_list_text, "comma-separated node counts");

    std::string curves_out = "curves.csv";
    CLI::App* curves = app.add_subcommand("curves", "closed-form analysis curves");
    curves->add_option("--out", curves_out, "output CSV path");

    std::uint64_t oracle_seed = 0;
    int oracle_trials = 100;
    CLI::App* oracle = app.add_subcommand("oracle-check", "brute-force invariant suites");
    oracle->add_option("--seed", oracle_seed, "base seed (required)")->required();
    oracle->add_option("--trials", oracle_trials, "problems per suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);  // prints help or the parse error + usage
        return code == 0 ? 0 : 1;
    }

    try {
        if (success->parsed()) {
            const ExperimentConfig cfg = to_config(success_flags);
            validate_config(cfg);
            const auto rows = run_success_sweep(cfg);
            auto file = open_out(success_flags.out);
            write_success_csv(rows, file);
            std::cout << "wrote " << resolve_out_path(success_flags.out).string() << " ("
                      << rows.size() << " rows)\n";
        } else if (scaling->parsed()) {
            const ExperimentConfig cfg = to_config(scaling_flags);
            const auto rows = run_scaling_sweep(cfg, parse_q_list(q_list_text));
            auto file = open_out(scaling_flags.out);
            write_scaling_csv(rows, file);
            std::cout << "wrote " << resolve_out_path(scaling_flags.out).string() << " ("
                      << rows.size() << " rows)\n";
        } else if (curves->parsed()) {
            auto file = open_out(curves_out);
            write_analysis_curves(file);
            std::cout << "wrote " << resolve_out_path(curves_out).string() << '\n';
        } else if (oracle->parsed()) {
            const OracleCheckReport rep = run_oracle_check(oracle_seed, oracle_trials);
            std::cout << "pursuit vs exhaustive search: " << rep.pursuit_runs << " runs, "
                      << rep.pursuit_qualifying << " qualifying, "
                      << rep.pursuit_mismatches << " mismatches, "
                      << rep.pursuit_residual_failures << " residual failures\n";
            std::cout << "occurrence vote vs tally route: " << rep.vote_checks << " checks, "
                      << rep.vote_mismatches << " mismatches\n";
            std::cout << "projection properties: " << rep.projection_checks << " checks, "
                      << rep.projection_failures << " failures\n";
            std::cout << (rep.passed() ? "all oracle suites passed\n"
                                       : "oracle suites FAILED\n");
            return rep.passed() ? 0 : 2;
        }
    } catch (const ConfigError& e) {
        std::cerr << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

}  // namespace dcsp

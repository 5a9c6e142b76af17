#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>

#include "dcsp/pursuit.hpp"

namespace dcsp {

// How the nonzero signal values on the common support are drawn.
enum class SignalKind {
    independent_gaussian,  // i.i.d. standard normal per node
    identical_gaussian,    // one standard-normal draw shared by every node
    exponential_decay,     // magnitudes c * exp(-p*(i-1)), random signs/placement
    power_law_decay,       // magnitudes c * i^(-p), p > 1, random signs/placement
};

struct SignalModel {
    SignalKind kind = SignalKind::independent_gaussian;
    double c = 1.0;  // leading magnitude (decay kinds only)
    double p = 0.0;  // decay rate / exponent (decay kinds only)
};

// One synthetic multi-node recovery instance: y_q = A_q x_q + w_q with a
// support shared by all x_q.
struct JointSparseProblem {
    int q_count = 0;
    int m = 0;
    int n = 0;
    int k = 0;
    std::vector<Matrix> dictionaries;  // Q dense M x N matrices, i.i.d. N(0,1) entries
    std::vector<Vector> signals;       // Q sparse N-vectors on true_support
    std::vector<Vector> measurements;  // Q noisy M-vectors
    SupportSet true_support;           // strictly increasing, 0-based
    double noise_variance = 0.0;       // per-entry variance of w_q
};

// Uniform K-subset of {0, ..., N-1}, sorted.
SupportSet draw_support(int n, int k, std::uint64_t seed);

// Q unnormalized standard-normal M x N matrices, one independent substream
// per node, filled in row-major order.
std::vector<Matrix> generate_dictionaries(int q_count, int m, int n, std::uint64_t seed);

// Q sparse signals on the given support.  Decay kinds place a random
// permutation of the magnitude profile with i.i.d. +/-1 signs per node.
std::vector<Vector> generate_signals(const SignalModel& model, const SupportSet& support,
                                     int q_count, int n, std::uint64_t seed);

// Adds white Gaussian noise calibrated so that
//   SNR = sum_q ||x_q||^2 / (Q * N * sigma_w^2)
// matches snr_db; returns the noisy measurements and sigma_w^2.
// std::nullopt means noise-free (exact copy, variance 0).
std::pair<std::vector<Vector>, double> apply_noise(const std::vector<Vector>& clean,
                                                   const std::vector<Vector>& signals,
                                                   std::optional<double> snr_db,
                                                   std::uint64_t seed);

JointSparseProblem make_problem(int q_count, int m, int n, int k, const SignalModel& model,
                                std::optional<double> snr_db, std::uint64_t seed);

// Plain-text dump, full precision; round-trips bit-exactly.  Format:
//   line 1: "Q M N K sigma2"
//   line 2: K support indices (1-based)
//   then per node: A_q row-major on one line, x_q on one line, y_q on one line
void write_problem(const JointSparseProblem& prob, std::ostream& out);
JointSparseProblem read_problem(std::istream& in);

}  // namespace dcsp

#pragma once

#include <cstdint>
#include <iosfwd>

#include "dcsp/network.hpp"
#include "dcsp/parallel.hpp"
#include "dcsp/problem.hpp"

namespace dcsp {

// Per-node vote probabilities in the selection model: a correct support
// index is picked with p1 = Ktilde/K, a wrong one with p2 = (K-Ktilde)/(N-K).
struct VoteProbs {
    double p1 = 0.0;
    double p2 = 0.0;
};
VoteProbs vote_probs(int k, int n, int k_tilde);

// Concentration lower bound 1 - exp(-g (p1-p2)^2 / 2) on the probability
// that a correct index out-polls a wrong one across g voters.
double hoeffding_lower_bound(int g, double p1, double p2);

// Neighborhood size sufficient for a 0.99 vote margin by the concentration
// bound: 9.21 / (p1 - p2)^2 with the worst-case Ktilde overlap.
double sufficient_neighbors(int k, int n, int k_tilde);

// Exact probability that Binomial(g, p1) strictly exceeds an independent
// Binomial(g, p2); computed in log space with compensated summation, stable
// up to g = 200, clipped to [0, 1].
double exact_vote_lower_bound(int g, double p1, double p2);

// Worst-case fraction of signal energy missed by the very first local
// estimate: sqrt(8d - 8d^2) / (1 + d) for a restricted-isometry constant d.
double initial_capture_bound(double delta);

// Per-iteration contraction of the missed-energy norm: 2d(1+d)/(1-d)^3;
// below 1 for d <= 0.206.
double contraction_factor(double delta);

// Smallest-to-total magnitude ratio min|x_i| / ||x||_2 of the decay signal
// models (exponential and power-law); equals 1 at K = 1.
double alpha_decay(const SignalModel& model, int k);

// Iteration bound ceil(log(alpha(1+d)/sqrt(8d-8d^2)) / log(contraction)),
// clamped below at 1.  Requires 0 < d with contraction_factor(d) < 1 and
// 0 < alpha <= 1.
int iterations_bound(double delta, double alpha);

// Closed-form scalar message totals for a full run with L iterations.
std::uint64_t predicted_messages_dcsp(int k, int iterations, const Topology& topo);
std::uint64_t predicted_messages_gdcsp(int n, int k, int iterations, const Topology& topo);

struct VoteSimResult {
    double detect_prob = 0.0;      // frequency of alpha(correct) > alpha(wrong)
    double beta_covariance = 0.0;  // empirical cov of the two per-node ballots
};

// Direct Monte-Carlo of the selection model: each of g voters draws Ktilde
// indices uniformly from the true support and K - Ktilde uniformly from its
// complement; tallies one fixed correct and one fixed wrong index.  Both run
// modes are bit-identical.
VoteSimResult simulate_vote_model(int k, int n, int k_tilde, int g, int trials,
                                  std::uint64_t seed, RunMode mode = RunMode::parallel);

// Deterministic curve export, CSV "x,series,y": the exact vote bound versus
// neighborhood size for four (Ktilde/K, N/K) regimes, and the iteration
// bound versus the isometry constant for both decay models.
void write_analysis_curves(std::ostream& out);

}  // namespace dcsp

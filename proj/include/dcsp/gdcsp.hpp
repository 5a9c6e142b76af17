#pragma once

#include "dcsp/network.hpp"
#include "dcsp/problem.hpp"

namespace dcsp {

// Trace record of one executed global iteration.
struct GdcspRound {
    double norm_sum = 0.0;  // sum_q ||r_q|| proposed this iteration
    bool accepted = false;  // strictly below the previous sum
    std::vector<SupportSet> candidate_unions;  // per-node union the projection ran on
    std::vector<SupportSet> omegas;            // per-node refreshed index estimate
    SupportSet fused;                          // globally voted support (same at every node)
};

struct GdcspResult {
    std::vector<SupportSet> supports;  // final estimate per node (all identical)
    int iterations = 0;                // executed global iterations L
    bool success = false;
    bool hit_iteration_cap = false;
    MessageLedger ledger;
    SupportSet initial_support;    // globally voted estimate after initialization
    double initial_norm_sum = 0.0;
    std::vector<GdcspRound> rounds;
};

// Global variant: correlation vectors and projection-coefficient pairs are
// shared inside one-hop neighborhoods, refreshed index estimates and
// residual norms are shared globally, and all nodes stop together on the
// first iteration whose residual-norm sum fails to decrease.
// max_iters <= 0 selects the default cap of 3K.  Requires 2K <= M, K <= N.
GdcspResult run_gdcsp(const JointSparseProblem& prob, const Topology& topo, int max_iters = 0);

// Centralized baseline: exactly run_gdcsp with every neighborhood equal to
// the whole network.
GdcspResult run_ssp_centralized(const JointSparseProblem& prob, int max_iters = 0);

struct LedgerComparison {
    std::uint64_t predicted = 0;  // closed-form cost with 2K scalars per coefficient payload
    std::uint64_t measured = 0;   // ledger grand total (actual payload lengths)
    std::int64_t delta = 0;       // predicted - measured, nonzero only when a union was < 2K
};

LedgerComparison predicted_vs_measured_gdcsp_ledger(const GdcspResult& result,
                                                    const Topology& topo, int n, int k);

}  // namespace dcsp

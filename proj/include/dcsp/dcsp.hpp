#pragma once

#include "dcsp/network.hpp"
#include "dcsp/problem.hpp"

namespace dcsp {

// Trace record of one executed iteration at one node.
struct DcspRound {
    bool was_active = false;      // node was still refining when the round ran
    double proposed_norm = 0.0;   // residual norm of the fused candidate (active only)
    bool accepted = false;        // candidate kept (residual strictly decreased)
    SupportSet support_after;     // state after the keep/reject decision
    double norm_after = 0.0;
};

struct DcspNode {
    SupportSet initial_omega;  // local estimate before any fusion
    SupportSet initial_fused;  // voted estimate right after initialization
    SupportSet support;        // current fused estimate T_q
    Vector resid_vec;
    double resid_norm = 0.0;
    SupportSet last_omega;     // most recently transmitted index set (frozen once stopped)
    bool flag = false;         // no-improvement flag of the current iteration
    bool stopped = false;
    int stop_round = 0;        // iteration at which the whole neighborhood was flagged
    std::vector<double> accepted_norms;  // init + accepted iterations, strictly decreasing
    std::vector<DcspRound> rounds;
};

struct DcspState {
    std::vector<DcspNode> nodes;
    int round = 0;  // executed refinement iterations so far
};

// Initialization round: every node transmits its local top-K correlation
// support, fuses the neighborhood by occurrence vote, and computes its
// residual.  Appends one ledger snapshot.
DcspState dcsp_init(const JointSparseProblem& prob, const Topology& topo, MessageLedger& ledger);

// One synchronous refinement iteration (index exchange, vote, least-squares
// refresh, keep/reject, flag exchange).  Stopped nodes re-transmit their
// frozen index set and a raised flag until every node has stopped; those
// deliveries stay on the ledger.  Returns true once all nodes are stopped.
// Appends one ledger snapshot.
bool dcsp_iteration(DcspState& state, const JointSparseProblem& prob, const Topology& topo,
                    MessageLedger& ledger);

struct DcspResult {
    std::vector<SupportSet> supports;  // final estimate per node
    int iterations = 0;                // executed refinement iterations L
    bool success = false;              // every node recovered the true support
    bool hit_iteration_cap = false;    // cap reached before global quiescence
    MessageLedger ledger;
    std::vector<DcspNode> nodes;       // final per-node traces
};

// Full decentralized run.  max_iters <= 0 selects the default cap of 3K.
// With Q = 1 this reduces bit-for-bit to subspace_pursuit.
// Requires 2K <= M and K <= N.
DcspResult run_dcsp(const JointSparseProblem& prob, const Topology& topo, int max_iters = 0);

}  // namespace dcsp

#include "dcsp/dcsp.hpp"

#include <stdexcept>

namespace dcsp {

namespace {

void check_problem(const JointSparseProblem& prob, const Topology& topo) {
    if (prob.q_count < 1 || static_cast<int>(prob.dictionaries.size()) != prob.q_count ||
        static_cast<int>(prob.measurements.size()) != prob.q_count)
        throw std::invalid_argument("dcsp: malformed problem");
    if (topo.q_count != prob.q_count)
        throw std::invalid_argument("dcsp: topology/problem node count mismatch");
    if (prob.k < 1 || 2 * prob.k > prob.m || prob.k > prob.n)
        throw std::invalid_argument("dcsp: need 1 <= K, 2K <= M, K <= N");
}

// Pool the own index set with every received one (the neighborhood bag the
// occurrence vote runs on).
std::vector<int> pooled_sets(const SupportSet& own,
                             const std::vector<std::pair<int, SupportSet>>& received) {
    std::vector<int> bag(own.begin(), own.end());
    for (const auto& [sender, set] : received) {
        (void)sender;
        bag.insert(bag.end(), set.begin(), set.end());
    }
    return bag;
}

}  // namespace

DcspState dcsp_init(const JointSparseProblem& prob, const Topology& topo, MessageLedger& ledger) {
    check_problem(prob, topo);
    const int q_count = prob.q_count;
    const int k = prob.k;

    DcspState state;
    state.nodes.resize(static_cast<std::size_t>(q_count));

    std::vector<SupportSet> omegas(static_cast<std::size_t>(q_count));
    for (int q = 0; q < q_count; ++q) {
        const Matrix& a = prob.dictionaries[static_cast<std::size_t>(q)];
        const Vector& y = prob.measurements[static_cast<std::size_t>(q)];
        omegas[static_cast<std::size_t>(q)] = top_k_indices(a.transpose() * y, k);
    }
    auto inbox = exchange(omegas, topo, Recipients::local, PayloadKind::index_set, ledger);

    for (int q = 0; q < q_count; ++q) {
        DcspNode& node = state.nodes[static_cast<std::size_t>(q)];
        node.initial_omega = omegas[static_cast<std::size_t>(q)];
        node.last_omega = omegas[static_cast<std::size_t>(q)];
        const std::vector<int> bag =
            pooled_sets(omegas[static_cast<std::size_t>(q)], inbox[static_cast<std::size_t>(q)]);
        node.support = top_k_by_occurrence(bag, k);
        node.initial_fused = node.support;
        node.resid_vec = residual(prob.measurements[static_cast<std::size_t>(q)],
                                  columns(prob.dictionaries[static_cast<std::size_t>(q)],
                                          node.support));
        node.resid_norm = node.resid_vec.norm();
        node.accepted_norms.push_back(node.resid_norm);
    }
    ledger.close_round();
    return state;
}

bool dcsp_iteration(DcspState& state, const JointSparseProblem& prob, const Topology& topo,
                    MessageLedger& ledger) {
    check_problem(prob, topo);
    const int q_count = prob.q_count;
    const int k = prob.k;
    state.round += 1;

    // step 4: active nodes refresh their local estimate; stopped nodes
    // re-transmit the frozen one
    std::vector<SupportSet> omegas(static_cast<std::size_t>(q_count));
    for (int q = 0; q < q_count; ++q) {
        DcspNode& node = state.nodes[static_cast<std::size_t>(q)];
        if (node.stopped) {
            omegas[static_cast<std::size_t>(q)] = node.last_omega;
            continue;
        }
        node.flag = false;
        const Matrix& a = prob.dictionaries[static_cast<std::size_t>(q)];
        const Vector& y = prob.measurements[static_cast<std::size_t>(q)];
        const SupportSet cand =
            sorted_union(node.support, top_k_indices(a.transpose() * node.resid_vec, k));
        const Vector coef = project_coefficients(y, columns(a, cand));
        const SupportSet local = top_k_indices(coef, k);
        SupportSet omega(local.size());
        for (std::size_t i = 0; i < local.size(); ++i)
            omega[i] = cand[static_cast<std::size_t>(local[i])];
        node.last_omega = omega;
        omegas[static_cast<std::size_t>(q)] = std::move(omega);
    }
    auto inbox = exchange(omegas, topo, Recipients::local, PayloadKind::index_set, ledger);

    // steps 5-7: fuse, refresh residual, keep or reject
    for (int q = 0; q < q_count; ++q) {
        DcspNode& node = state.nodes[static_cast<std::size_t>(q)];
        DcspRound rec;
        if (node.stopped) {
            rec.was_active = false;
            rec.accepted = false;
            rec.support_after = node.support;
            rec.norm_after = node.resid_norm;
            node.rounds.push_back(std::move(rec));
            continue;
        }
        const std::vector<int> bag =
            pooled_sets(omegas[static_cast<std::size_t>(q)], inbox[static_cast<std::size_t>(q)]);
        const SupportSet fused = top_k_by_occurrence(bag, k);
        Vector r_new = residual(prob.measurements[static_cast<std::size_t>(q)],
                                columns(prob.dictionaries[static_cast<std::size_t>(q)], fused));
        const double norm_new = r_new.norm();
        rec.was_active = true;
        rec.proposed_norm = norm_new;
        if (norm_new >= node.resid_norm) {
            node.flag = true;  // keep previous support and residual untouched
            rec.accepted = false;
        } else {
            node.support = fused;
            node.resid_vec = std::move(r_new);
            node.resid_norm = norm_new;
            node.accepted_norms.push_back(norm_new);
            rec.accepted = true;
        }
        rec.support_after = node.support;
        rec.norm_after = node.resid_norm;
        node.rounds.push_back(std::move(rec));
    }

    // flag exchange; stopped nodes keep broadcasting a raised flag
    std::vector<std::uint8_t> flags(static_cast<std::size_t>(q_count));
    for (int q = 0; q < q_count; ++q) {
        const DcspNode& node = state.nodes[static_cast<std::size_t>(q)];
        flags[static_cast<std::size_t>(q)] = (node.stopped || node.flag) ? 1 : 0;
    }
    auto flag_inbox = exchange(flags, topo, Recipients::local, PayloadKind::flag, ledger);

    bool all_stopped = true;
    for (int q = 0; q < q_count; ++q) {
        DcspNode& node = state.nodes[static_cast<std::size_t>(q)];
        if (node.stopped) continue;
        bool neighborhood_done = flags[static_cast<std::size_t>(q)] != 0;
        for (const auto& [sender, f] : flag_inbox[static_cast<std::size_t>(q)]) {
            (void)sender;
            neighborhood_done = neighborhood_done && f != 0;
        }
        if (neighborhood_done) {
            node.stopped = true;
            node.stop_round = state.round;
        } else {
            all_stopped = false;
        }
    }
    ledger.close_round();
    return all_stopped;
}

DcspResult run_dcsp(const JointSparseProblem& prob, const Topology& topo, int max_iters) {
    check_problem(prob, topo);
    if (max_iters <= 0) max_iters = 3 * prob.k;

    DcspResult res;
    DcspState state = dcsp_init(prob, topo, res.ledger);
    bool all_stopped = false;
    while (!all_stopped && state.round < max_iters)
        all_stopped = dcsp_iteration(state, prob, topo, res.ledger);

    res.iterations = state.round;
    res.hit_iteration_cap = !all_stopped;
    res.supports.reserve(state.nodes.size());
    res.success = true;
    for (const DcspNode& node : state.nodes) {
        res.supports.push_back(node.support);
        res.success = res.success && node.support == prob.true_support;
    }
    res.nodes = std::move(state.nodes);
    return res;
}

}  // namespace dcsp

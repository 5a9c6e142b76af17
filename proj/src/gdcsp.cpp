#include "dcsp/gdcsp.hpp"

#include <stdexcept>

#include "dcsp/analysis.hpp"

namespace dcsp {

namespace {

void check_problem(const JointSparseProblem& prob, const Topology& topo) {
    if (prob.q_count < 1 || static_cast<int>(prob.dictionaries.size()) != prob.q_count ||
        static_cast<int>(prob.measurements.size()) != prob.q_count)
        throw std::invalid_argument("gdcsp: malformed problem");
    if (topo.q_count != prob.q_count)
        throw std::invalid_argument("gdcsp: topology/problem node count mismatch");
    if (prob.k < 1 || 2 * prob.k > prob.m || prob.k > prob.n)
        throw std::invalid_argument("gdcsp: need 1 <= K, 2K <= M, K <= N");
}

// Sum the own N-length vector with every received one.
Vector summed_vectors(const Vector& own, const std::vector<std::pair<int, Vector>>& received) {
    Vector out = own;
    for (const auto& [sender, v] : received) {
        (void)sender;
        out += v;
    }
    return out;
}

}  // namespace

GdcspResult run_gdcsp(const JointSparseProblem& prob, const Topology& topo, int max_iters) {
    check_problem(prob, topo);
    const int q_count = prob.q_count;
    const int n = prob.n;
    const int k = prob.k;
    if (max_iters <= 0) max_iters = 3 * k;

    GdcspResult res;
    MessageLedger& ledger = res.ledger;

    // --- initialization: share measurement correlations locally, vote the
    // pooled top-K globally -------------------------------------------------
    std::vector<Vector> corr(static_cast<std::size_t>(q_count));
    for (int q = 0; q < q_count; ++q)
        corr[static_cast<std::size_t>(q)] =
            (prob.dictionaries[static_cast<std::size_t>(q)].transpose() *
             prob.measurements[static_cast<std::size_t>(q)])
                .cwiseAbs();
    auto corr_inbox = exchange(corr, topo, Recipients::local, PayloadKind::coefficients, ledger);

    std::vector<SupportSet> omegas(static_cast<std::size_t>(q_count));
    for (int q = 0; q < q_count; ++q)
        omegas[static_cast<std::size_t>(q)] = top_k_indices(
            summed_vectors(corr[static_cast<std::size_t>(q)], corr_inbox[static_cast<std::size_t>(q)]),
            k);
    auto omega_inbox = exchange(omegas, topo, Recipients::global, PayloadKind::index_set, ledger);

    SupportSet support;  // identical at every node: the vote pools all Q estimates
    std::vector<Vector> resid_vecs(static_cast<std::size_t>(q_count));
    std::vector<double> norms(static_cast<std::size_t>(q_count));
    double norm_sum = 0.0;
    for (int q = 0; q < q_count; ++q) {
        std::vector<int> bag(omegas[static_cast<std::size_t>(q)].begin(),
                             omegas[static_cast<std::size_t>(q)].end());
        for (const auto& [sender, set] : omega_inbox[static_cast<std::size_t>(q)]) {
            (void)sender;
            bag.insert(bag.end(), set.begin(), set.end());
        }
        const SupportSet fused = top_k_by_occurrence(bag, k);
        if (q == 0) support = fused;
        resid_vecs[static_cast<std::size_t>(q)] =
            residual(prob.measurements[static_cast<std::size_t>(q)],
                     columns(prob.dictionaries[static_cast<std::size_t>(q)], fused));
        norms[static_cast<std::size_t>(q)] = resid_vecs[static_cast<std::size_t>(q)].norm();
        norm_sum += norms[static_cast<std::size_t>(q)];
    }
    res.initial_support = support;
    res.initial_norm_sum = norm_sum;
    ledger.close_round();

    // --- iterations ---------------------------------------------------------
    bool stopped = false;
    while (!stopped && res.iterations < max_iters) {
        res.iterations += 1;
        GdcspRound round;

        // residual correlations, shared locally
        for (int q = 0; q < q_count; ++q)
            corr[static_cast<std::size_t>(q)] =
                (prob.dictionaries[static_cast<std::size_t>(q)].transpose() *
                 resid_vecs[static_cast<std::size_t>(q)])
                    .cwiseAbs();
        corr_inbox = exchange(corr, topo, Recipients::local, PayloadKind::coefficients, ledger);

        // per-node candidate union and projection-coefficient magnitudes,
        // shared locally as (global index, magnitude) pairs
        std::vector<std::vector<std::pair<int, double>>> coef_pairs(
            static_cast<std::size_t>(q_count));
        round.candidate_unions.resize(static_cast<std::size_t>(q_count));
        for (int q = 0; q < q_count; ++q) {
            const Vector pooled = summed_vectors(corr[static_cast<std::size_t>(q)],
                                                 corr_inbox[static_cast<std::size_t>(q)]);
            const SupportSet cand = sorted_union(support, top_k_indices(pooled, k));
            const Vector coef =
                project_coefficients(prob.measurements[static_cast<std::size_t>(q)],
                                     columns(prob.dictionaries[static_cast<std::size_t>(q)], cand))
                    .cwiseAbs();
            auto& pairs = coef_pairs[static_cast<std::size_t>(q)];
            pairs.reserve(cand.size());
            for (std::size_t i = 0; i < cand.size(); ++i)
                pairs.emplace_back(cand[i], coef[static_cast<Eigen::Index>(i)]);
            round.candidate_unions[static_cast<std::size_t>(q)] = cand;
        }
        auto pair_inbox =
            exchange(coef_pairs, topo, Recipients::local, PayloadKind::indexed_coefficients, ledger);

        // embed pairs into N-length vectors, sum over the neighborhood and
        // take the top-K; refreshed estimates are then shared globally
        round.omegas.resize(static_cast<std::size_t>(q_count));
        for (int q = 0; q < q_count; ++q) {
            Vector summed = Vector::Zero(n);
            for (const auto& [idx, mag] : coef_pairs[static_cast<std::size_t>(q)]) summed[idx] += mag;
            for (const auto& [sender, pairs] : pair_inbox[static_cast<std::size_t>(q)]) {
                (void)sender;
                for (const auto& [idx, mag] : pairs) summed[idx] += mag;
            }
            omegas[static_cast<std::size_t>(q)] = top_k_indices(summed, k);
            round.omegas[static_cast<std::size_t>(q)] = omegas[static_cast<std::size_t>(q)];
        }
        omega_inbox = exchange(omegas, topo, Recipients::global, PayloadKind::index_set, ledger);

        // global vote (identical bag at every node), residual refresh and
        // global residual-norm exchange
        SupportSet fused;
        std::vector<Vector> new_resid(static_cast<std::size_t>(q_count));
        std::vector<double> new_norms(static_cast<std::size_t>(q_count));
        for (int q = 0; q < q_count; ++q) {
            std::vector<int> bag(omegas[static_cast<std::size_t>(q)].begin(),
                                 omegas[static_cast<std::size_t>(q)].end());
            for (const auto& [sender, set] : omega_inbox[static_cast<std::size_t>(q)]) {
                (void)sender;
                bag.insert(bag.end(), set.begin(), set.end());
            }
            const SupportSet voted = top_k_by_occurrence(bag, k);
            if (q == 0) fused = voted;
            new_resid[static_cast<std::size_t>(q)] =
                residual(prob.measurements[static_cast<std::size_t>(q)],
                         columns(prob.dictionaries[static_cast<std::size_t>(q)], voted));
            new_norms[static_cast<std::size_t>(q)] = new_resid[static_cast<std::size_t>(q)].norm();
        }
        exchange(new_norms, topo, Recipients::global, PayloadKind::norm, ledger);

        double new_sum = 0.0;
        for (double v : new_norms) new_sum += v;
        round.norm_sum = new_sum;
        round.fused = fused;

        if (new_sum >= norm_sum) {
            round.accepted = false;  // keep the previous support; everyone stops
            stopped = true;
        } else {
            round.accepted = true;
            support = fused;
            resid_vecs = std::move(new_resid);
            norms = std::move(new_norms);
            norm_sum = new_sum;
        }
        res.rounds.push_back(std::move(round));
        ledger.close_round();
    }

    res.hit_iteration_cap = !stopped;
    res.supports.assign(static_cast<std::size_t>(q_count), support);
    res.success = support == prob.true_support;
    return res;
}

GdcspResult run_ssp_centralized(const JointSparseProblem& prob, int max_iters) {
    return run_gdcsp(prob, full_topology(prob.q_count), max_iters);
}

LedgerComparison predicted_vs_measured_gdcsp_ledger(const GdcspResult& result,
                                                    const Topology& topo, int n, int k) {
    LedgerComparison cmp;
    cmp.predicted = predicted_messages_gdcsp(n, k, result.iterations, topo);
    cmp.measured = result.ledger.total();
    cmp.delta = static_cast<std::int64_t>(cmp.predicted) - static_cast<std::int64_t>(cmp.measured);
    return cmp;
}

}  // namespace dcsp

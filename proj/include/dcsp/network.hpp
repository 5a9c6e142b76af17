#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "dcsp/pursuit.hpp"

namespace dcsp {

// One message = one transmitted scalar.  Counters are split by payload
// category; total() is the grand total used by the closed-form cost checks.
struct MessageLedger {
    std::uint64_t index_scalars = 0;        // support-set entries
    std::uint64_t coefficient_scalars = 0;  // correlation / projection values
    std::uint64_t flag_scalars = 0;         // one per termination flag
    std::uint64_t norm_scalars = 0;         // one per residual norm
    // Addressing halves of (index, value) pairs; informational only and
    // never part of total().
    std::uint64_t pair_index_scalars = 0;

    struct Snapshot {
        std::uint64_t index_scalars = 0;
        std::uint64_t coefficient_scalars = 0;
        std::uint64_t flag_scalars = 0;
        std::uint64_t norm_scalars = 0;
    };
    // Cumulative counters at each synchronous round boundary (round 0 is
    // initialization); monotone non-decreasing in every category.
    std::vector<Snapshot> per_round;

    std::uint64_t total() const {
        return index_scalars + coefficient_scalars + flag_scalars + norm_scalars;
    }
    void close_round() {
        per_round.push_back({index_scalars, coefficient_scalars, flag_scalars, norm_scalars});
    }
    // CSV "round,category,count" with cumulative counts per category.
    void write_csv(std::ostream& out) const;
};

// Receiver-driven neighborhoods: node q hears exactly the nodes in
// neighborhoods[q] (self always included, lists sorted ascending).
struct Topology {
    int q_count = 0;
    std::vector<std::vector<int>> neighborhoods;

    // sum_q (|G_q| - 1): the number of directed deliveries per local
    // exchange round
    std::uint64_t neighbor_link_count() const {
        std::uint64_t links = 0;
        for (const auto& g : neighborhoods) links += g.size() - 1;
        return links;
    }
};

// Ring neighborhoods: node q hears {q, q+1, ..., q+g-1} (mod Q), sorted.
Topology circulant_topology(int q_count, int g);
// Every node hears every node.
Topology full_topology(int q_count);
// Whether the symmetrized hear-graph is connected (g = 1 with Q > 1 is not).
bool symmetrized_connected(const Topology& topo);

enum class Recipients { local, global };

enum class PayloadKind {
    index_set,             // counts length(payload) index scalars
    coefficients,          // counts length(payload) coefficient scalars
    indexed_coefficients,  // counts coefficient scalars + informational pair indices
    flag,                  // counts 1 flag scalar
    norm,                  // counts 1 norm scalar
};

// Per-receiver inbox: (sender, payload) in ascending sender order, self
// excluded.
template <typename Payload>
using Inbox = std::vector<std::vector<std::pair<int, Payload>>>;

namespace detail {
inline std::uint64_t payload_length(const std::vector<int>& v) { return v.size(); }
inline std::uint64_t payload_length(const Vector& v) { return static_cast<std::uint64_t>(v.size()); }
inline std::uint64_t payload_length(const std::vector<std::pair<int, double>>& v) { return v.size(); }
inline std::uint64_t payload_length(double) { return 1; }
inline std::uint64_t payload_length(std::uint8_t) { return 1; }
}  // namespace detail

// Synchronous broadcast round: every node transmits its payload and node q
// receives the payload of every j in its recipient set minus itself.  Each
// delivered payload is charged to the ledger separately (a broadcast to
// d neighbors costs d deliveries).
template <typename Payload>
Inbox<Payload> exchange(const std::vector<Payload>& sent, const Topology& topo, Recipients rule,
                        PayloadKind kind, MessageLedger& ledger) {
    if (static_cast<int>(sent.size()) != topo.q_count)
        throw std::invalid_argument("exchange: one payload per node required");
    Inbox<Payload> inbox(sent.size());
    for (int q = 0; q < topo.q_count; ++q) {
        const std::vector<int>* recipients = &topo.neighborhoods[static_cast<std::size_t>(q)];
        std::vector<int> everyone;
        if (rule == Recipients::global) {
            everyone.resize(static_cast<std::size_t>(topo.q_count));
            for (int j = 0; j < topo.q_count; ++j) everyone[static_cast<std::size_t>(j)] = j;
            recipients = &everyone;
        }
        for (int j : *recipients) {
            if (j == q) continue;
            const Payload& p = sent[static_cast<std::size_t>(j)];
            const std::uint64_t len = detail::payload_length(p);
            switch (kind) {
                case PayloadKind::index_set: ledger.index_scalars += len; break;
                case PayloadKind::coefficients: ledger.coefficient_scalars += len; break;
                case PayloadKind::indexed_coefficients:
                    ledger.coefficient_scalars += len;
                    ledger.pair_index_scalars += len;
                    break;
                case PayloadKind::flag: ledger.flag_scalars += len; break;
                case PayloadKind::norm: ledger.norm_scalars += len; break;
            }
            inbox[static_cast<std::size_t>(q)].emplace_back(j, p);
        }
    }
    return inbox;
}

}  // namespace dcsp

#include "dcsp/network.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace dcsp {

void MessageLedger::write_csv(std::ostream& out) const {
    out << "round,category,count\n";
    for (std::size_t r = 0; r < per_round.size(); ++r) {
        const Snapshot& s = per_round[r];
        out << r << ",index," << s.index_scalars << '\n';
        out << r << ",coefficient," << s.coefficient_scalars << '\n';
        out << r << ",flag," << s.flag_scalars << '\n';
        out << r << ",norm," << s.norm_scalars << '\n';
    }
}

Topology circulant_topology(int q_count, int g) {
    if (q_count < 1) throw std::invalid_argument("circulant_topology: need Q >= 1");
    if (g < 1 || g > q_count) throw std::invalid_argument("circulant_topology: need 1 <= g <= Q");
    Topology topo;
    topo.q_count = q_count;
    topo.neighborhoods.resize(static_cast<std::size_t>(q_count));
    for (int q = 0; q < q_count; ++q) {
        std::vector<int>& hood = topo.neighborhoods[static_cast<std::size_t>(q)];
        hood.reserve(static_cast<std::size_t>(g));
        for (int d = 0; d < g; ++d) hood.push_back((q + d) % q_count);
        std::sort(hood.begin(), hood.end());
    }
    return topo;
}

Topology full_topology(int q_count) { return circulant_topology(q_count, q_count); }

bool symmetrized_connected(const Topology& topo) {
    const int q = topo.q_count;
    if (q <= 1) return true;
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(q));
    for (int a = 0; a < q; ++a)
        for (int b : topo.neighborhoods[static_cast<std::size_t>(a)])
            if (a != b) {
                adj[static_cast<std::size_t>(a)].push_back(b);
                adj[static_cast<std::size_t>(b)].push_back(a);
            }
    std::vector<char> seen(static_cast<std::size_t>(q), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int visited = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int w : adj[static_cast<std::size_t>(v)])
            if (!seen[static_cast<std::size_t>(w)]) {
                seen[static_cast<std::size_t>(w)] = 1;
                ++visited;
                stack.push_back(w);
            }
    }
    return visited == q;
}

}  // namespace dcsp

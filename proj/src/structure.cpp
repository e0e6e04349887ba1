#include "ctmc/structure.hpp"

#include <deque>

namespace ctmc {

const char* pattern_name(Pattern p) {
    switch (p) {
        case Pattern::Hub: return "hub";
        case Pattern::Cycle: return "cycle";
        default: return "tree";
    }
}

std::variant<Decomposition, UnsupportedStructure> classify(const Model& model) {
    const std::size_t n = model.state_count();
    const StateId root = model.root();
    auto edges = model.transitions();

    std::vector<std::size_t> in_degree(n, 0);
    for (const auto& t : edges) ++in_degree[t.dst];

    UnsupportedStructure bad;
    for (StateId s = 0; s < n; ++s)
        if (s != root && in_degree[s] != 1) bad.violating.push_back(s);
    if (!bad.violating.empty()) return bad;

    Decomposition d;
    d.root = root;
    d.parent_edge.assign(n, Decomposition::npos);
    for (std::size_t e = 0; e < edges.size(); ++e)
        if (edges[e].dst != root) d.parent_edge[edges[e].dst] = e;

    // breadth-first over parent edges; reachability is guaranteed by the
    // model's strong connectivity, so this covers every non-root state
    d.order.reserve(n - 1);
    std::deque<StateId> queue{root};
    while (!queue.empty()) {
        StateId s = queue.front();
        queue.pop_front();
        for (const auto& t : model.outgoing(s)) {
            if (t.dst == root) continue;
            d.order.push_back(t.dst);
            queue.push_back(t.dst);
        }
    }

    bool cycle = true;
    for (StateId s = 0; s < n; ++s)
        if (model.outgoing(s).size() != 1) cycle = false;

    bool hub = true;
    for (StateId s = 0; s < n; ++s) {
        if (s == root) continue;
        auto out = model.outgoing(s);
        if (edges[d.parent_edge[s]].src != root || out.size() != 1 || out[0].dst != root)
            hub = false;
    }

    d.pattern = cycle ? Pattern::Cycle : (hub ? Pattern::Hub : Pattern::Tree);
    return d;
}

}  // namespace ctmc

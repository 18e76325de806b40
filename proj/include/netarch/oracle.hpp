#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "netarch/detect.hpp"
#include "netarch/graph.hpp"

namespace netarch {

/// Size limits of the brute-force oracle; exceeding them is a misuse of an
/// exponential enumeration, not an ordinary validation error.
struct oracle_guard {
    vertex_id max_n = 14;
    std::uint32_t max_m = 8;
    std::uint64_t max_cycles = 200000;
};

class oracle_guard_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace oracle_detail {

/// Every simple cycle of length <= m, each exactly once: a cycle is rooted
/// at its smallest vertex and recorded for the traversal whose second
/// vertex is smaller than its last. Plain exhaustive DFS; no pruning
/// beyond the length cap, so this stays independent of the detector's
/// search strategy.
inline std::vector<std::vector<vertex_id>> all_cycles_up_to(const graph& g, std::uint32_t m,
                                                            std::uint64_t max_cycles) {
    std::vector<std::vector<vertex_id>> cycles;
    std::vector<vertex_id> path;
    std::vector<bool> on_path(static_cast<std::size_t>(g.vertex_count()) + 1, false);

    auto dfs = [&](auto&& self, vertex_id root, vertex_id u) -> void {
        if (path.size() >= 3 && g.has_edge(u, root) && path[1] < u) {
            cycles.push_back(path);
            if (cycles.size() > max_cycles)
                throw oracle_guard_error("brute_force_anchor_set: cycle count exceeds guard");
        }
        if (path.size() == m) return;
        for (vertex_id w : g.neighbors(u)) {
            if (w <= root || on_path[w]) continue;
            path.push_back(w);
            on_path[w] = true;
            self(self, root, w);
            on_path[w] = false;
            path.pop_back();
        }
    };

    for (vertex_id root = 1; root <= g.vertex_count(); ++root) {
        path.assign(1, root);
        on_path[root] = true;
        dfs(dfs, root, root);
        on_path[root] = false;
    }
    return cycles;
}

/// Anchors contributed by one cycle pair, or empty. Set-based
/// reimplementation of the double-cycle definition: the subgraph
/// intersection of the two cycles must be a single path with p vertices,
/// 1 <= p <= min(s, t)/2; the anchors are the path's endpoints (the shared
/// vertex itself when p = 1).
inline std::vector<vertex_id> double_cycle_anchors(const std::vector<vertex_id>& a,
                                                   const std::vector<vertex_id>& b) {
    std::set<vertex_id> va(a.begin(), a.end());
    std::set<vertex_id> vb(b.begin(), b.end());
    std::vector<vertex_id> shared;
    std::set_intersection(va.begin(), va.end(), vb.begin(), vb.end(),
                          std::back_inserter(shared));
    if (shared.empty()) return {};
    if (shared.size() > std::min(a.size(), b.size()) / 2) return {};
    if (shared.size() == 1) return {shared.front()};

    const auto edge_set = [](const std::vector<vertex_id>& cyc) {
        std::set<std::pair<vertex_id, vertex_id>> edges;
        for (std::size_t i = 0; i < cyc.size(); ++i) {
            vertex_id x = cyc[i], y = cyc[(i + 1) % cyc.size()];
            edges.emplace(std::min(x, y), std::max(x, y));
        }
        return edges;
    };
    const auto ea = edge_set(a);
    const auto eb = edge_set(b);
    std::vector<std::pair<vertex_id, vertex_id>> shared_edges;
    std::set_intersection(ea.begin(), ea.end(), eb.begin(), eb.end(),
                          std::back_inserter(shared_edges));
    if (shared_edges.size() + 1 != shared.size()) return {};

    std::map<vertex_id, std::vector<vertex_id>> adj;
    for (const auto& [x, y] : shared_edges) {
        adj[x].push_back(y);
        adj[y].push_back(x);
    }
    std::vector<vertex_id> endpoints;
    for (vertex_id x : shared) {
        const auto it = adj.find(x);
        const std::size_t deg = it == adj.end() ? 0 : it->second.size();
        if (deg == 0 || deg > 2) return {};
        if (deg == 1) endpoints.push_back(x);
    }
    if (endpoints.size() != 2) return {};

    // Walk from one endpoint: the intersection is one path iff the walk
    // visits every shared vertex.
    vertex_id prev = 0, cur = endpoints.front();
    std::size_t visited = 1;
    while (true) {
        vertex_id next = 0;
        for (vertex_id cand : adj[cur])
            if (cand != prev) { next = cand; break; }
        if (next == 0) break;
        prev = cur;
        cur = next;
        ++visited;
    }
    if (visited != shared.size() || cur != endpoints.back()) return {};
    return endpoints;
}

} // namespace oracle_detail

/// Exhaustive reference computation of S_m: enumerate all simple cycles of
/// length <= m, then examine every unordered cycle pair. Exponential in m
/// and n by design; refuses inputs beyond the guard.
inline anchor_set brute_force_anchor_set(const graph& g, std::uint32_t m, oracle_guard guard = {}) {
    detail::check_m(m);
    if (g.vertex_count() > guard.max_n)
        throw oracle_guard_error("brute_force_anchor_set: n exceeds guard (" +
                                 std::to_string(guard.max_n) + ")");
    if (m > guard.max_m)
        throw oracle_guard_error("brute_force_anchor_set: m exceeds guard (" +
                                 std::to_string(guard.max_m) + ")");

    const auto cycles = oracle_detail::all_cycles_up_to(g, m, guard.max_cycles);
    std::set<vertex_id> anchors;
    for (std::size_t i = 0; i < cycles.size(); ++i)
        for (std::size_t j = i + 1; j < cycles.size(); ++j)
            for (vertex_id a : oracle_detail::double_cycle_anchors(cycles[i], cycles[j]))
                anchors.insert(a);

    anchor_set out;
    out.m = m;
    out.members.assign(anchors.begin(), anchors.end());
    return out;
}

} // namespace netarch

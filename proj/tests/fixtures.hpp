// Canned graphs used across the test suites.
#pragma once

#include <vector>

#include "netarch/graph.hpp"
#include "netarch/rng.hpp"

namespace fixtures {

using netarch::graph;
using netarch::vertex_id;

/// Path 1 - 2 - ... - k.
inline graph make_path(vertex_id k) {
    graph g(k);
    for (vertex_id v = 1; v < k; ++v) g.add_edge(v, v + 1);
    return g;
}

/// Cycle 1 - 2 - ... - k - 1.
inline graph make_cycle(vertex_id k) {
    graph g = make_path(k);
    g.add_edge(k, 1);
    return g;
}

/// Two triangles 1-2-3 and 1-4-5 sharing vertex 1.
inline graph make_figure_eight() {
    graph g(5);
    g.add_edge(1, 2);
    g.add_edge(2, 3);
    g.add_edge(1, 3);
    g.add_edge(1, 4);
    g.add_edge(4, 5);
    g.add_edge(1, 5);
    return g;
}

/// Vertices 1 and 2 joined by three internally disjoint paths of a, b and c
/// edges. theta(1, 3, 3) is the canonical two-anchor case; theta(1, 2, 2)
/// anchors nothing (every cycle pair shares too long a path).
inline graph make_theta(vertex_id a, vertex_id b, vertex_id c) {
    const vertex_id n = 2 + (a - 1) + (b - 1) + (c - 1);
    graph g(n);
    vertex_id next = 3;
    for (vertex_id len : {a, b, c}) {
        vertex_id prev = 1;
        for (vertex_id step = 1; step < len; ++step) {
            g.add_edge(prev, next);
            prev = next++;
        }
        g.add_edge(prev, 2);
    }
    return g;
}

/// Every pair independently with probability p (test corpus only).
inline graph make_uniform_er(vertex_id n, double p, netarch::rng_seed seed) {
    netarch::rng_stream rng(seed);
    graph g(n);
    for (vertex_id j = 2; j <= n; ++j)
        for (vertex_id i = 1; i < j; ++i)
            if (rng.uniform01() < p) g.add_edge(i, j);
    return g;
}

} // namespace fixtures

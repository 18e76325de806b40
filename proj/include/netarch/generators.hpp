#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "netarch/graph.hpp"
#include "netarch/models.hpp"
#include "netarch/rng.hpp"

namespace netarch {

/// Edge probability of the inhomogeneous ER graph with the given rate:
/// min(1, rate / (max(i, j) - 1)). This is both the exact marginal of the
/// inhom-er sampler and the dominating bound used by the ldag checks.
inline double inhom_edge_probability(vertex_id i, vertex_id j, double rate) {
    if (i == 0 || j == 0) throw std::out_of_range("inhom_edge_probability: vertices are 1-indexed");
    if (i == j) throw std::invalid_argument("inhom_edge_probability: i and j must differ");
    if (!(rate > 0.0)) throw std::invalid_argument("inhom_edge_probability: rate must be > 0");
    const double denom = static_cast<double>(std::max(i, j)) - 1.0;
    return std::min(1.0, rate / denom);
}

/// Parent labels of a recursive tree on [n]: parents[i] is uniform on
/// [1, i-1] for i >= 2 (entries 0 and 1 are unused). This is the sufficient
/// statistic of the tree; every tree-based sampler and diagnostic draws
/// through here so they share one code path.
inline std::vector<vertex_id> urrt_parents(vertex_id n, rng_stream& rng) {
    if (n == 0) throw std::invalid_argument("urrt_parents: n must be >= 1");
    std::vector<vertex_id> parents(static_cast<std::size_t>(n) + 1, 0);
    for (vertex_id i = 2; i <= n; ++i)
        parents[i] = 1 + static_cast<vertex_id>(rng.uniform_below(i - 1));
    return parents;
}

inline graph make_urrt(vertex_id n, rng_seed seed) {
    rng_stream rng(seed);
    const auto parents = urrt_parents(n, rng);
    graph g(n);
    for (vertex_id i = 2; i <= n; ++i) g.add_edge(parents[i], i);
    return g;
}

/// Union of l independent recursive trees, duplicate edges collapsed.
/// With l = 1 this consumes the stream exactly like make_urrt and returns
/// the identical graph.
inline graph make_ldag(vertex_id n, std::uint32_t l, rng_seed seed) {
    if (l == 0) throw std::invalid_argument("make_ldag: l must be >= 1");
    rng_stream rng(seed);
    graph g(n);
    for (std::uint32_t tree = 0; tree < l; ++tree) {
        const auto parents = urrt_parents(n, rng);
        for (vertex_id i = 2; i <= n; ++i) g.add_edge(parents[i], i);
    }
    return g;
}

namespace detail {

/// Append the inhomogeneous ER edges to g, drawing from rng. Row j holds
/// the pairs {i, j} with i < j; within a row every edge has the same
/// probability q_j = min(1, c/(j-1)), so successes are located by
/// geometric skip-sampling (exact inversion of the gap distribution)
/// instead of one Bernoulli draw per pair.
inline void append_inhom_er_edges(graph& g, vertex_id n, double c, rng_stream& rng) {
    for (vertex_id j = 2; j <= n; ++j) {
        const double q = std::min(1.0, c / (static_cast<double>(j) - 1.0));
        if (q >= 1.0) {
            for (vertex_id i = 1; i < j; ++i) g.add_edge(i, j);
            continue;
        }
        const double log1mq = std::log1p(-q);
        std::uint64_t i = 0;
        while (true) {
            const double gap = std::floor(std::log(rng.uniform01_pos()) / log1mq);
            if (gap >= static_cast<double>(j)) break;
            i += static_cast<std::uint64_t>(gap) + 1;
            if (i >= j) break;
            g.add_edge(static_cast<vertex_id>(i), j);
        }
    }
}

} // namespace detail

/// Inhomogeneous ER graph: each pair {i, j} present independently with
/// probability min(1, c/(max(i,j)-1)).
inline graph make_inhom_er(vertex_id n, double c, rng_seed seed) {
    if (!(c > 0.0)) throw std::invalid_argument("make_inhom_er: c must be > 0");
    rng_stream rng(seed);
    graph g(n);
    detail::append_inhom_er_edges(g, n, c, rng);
    return g;
}

/// Recursive tree plus an independent inhomogeneous ER layer, collapsed.
inline graph make_cooper_frieze(vertex_id n, double c, rng_seed seed) {
    if (!(c > 0.0)) throw std::invalid_argument("make_cooper_frieze: c must be > 0");
    rng_stream rng(seed);
    const auto parents = urrt_parents(n, rng);
    graph g(n);
    for (vertex_id i = 2; i <= n; ++i) g.add_edge(parents[i], i);
    detail::append_inhom_er_edges(g, n, c, rng);
    return g;
}

/// Output of the sequential growth process. tree_edges are the edges
/// created together with their younger endpoint; they always form a
/// spanning tree of the final vertex set. forced_vertex_steps counts the
/// steps where an edge step was drawn while only one vertex existed and a
/// vertex addition was performed instead.
struct cf_process_result {
    graph g;
    std::vector<std::pair<vertex_id, vertex_id>> tree_edges;
    std::uint32_t forced_vertex_steps = 0;
};

/// Run the growth process for `steps` steps from a single vertex: at each
/// step a vertex (plus an edge to a uniform existing vertex) is added with
/// probability 1 - alpha, otherwise an edge between a uniform unordered
/// pair of distinct existing vertices. Multi-edges collapse.
inline cf_process_result make_cf_process(double alpha, std::uint32_t steps, rng_seed seed) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("make_cf_process: alpha must be in (0, 1)");
    if (steps == 0) throw std::invalid_argument("make_cf_process: steps must be >= 1");

    rng_stream rng(seed);
    vertex_id vcount = 1;
    std::vector<std::pair<vertex_id, vertex_id>> tree_edges;
    std::vector<std::pair<vertex_id, vertex_id>> extra_edges;
    std::uint32_t forced = 0;

    for (std::uint32_t t = 0; t < steps; ++t) {
        const bool edge_step = rng.bernoulli(alpha);
        if (edge_step && vcount >= 2) {
            // Uniform unordered pair of distinct existing vertices.
            vertex_id a = 1 + static_cast<vertex_id>(rng.uniform_below(vcount));
            vertex_id b = 1 + static_cast<vertex_id>(rng.uniform_below(vcount - 1));
            if (b >= a) ++b;
            extra_edges.emplace_back(std::min(a, b), std::max(a, b));
        } else {
            // A pair cannot be chosen from a single vertex; fall back to a
            // vertex addition and record it.
            if (edge_step) ++forced;
            const vertex_id parent = 1 + static_cast<vertex_id>(rng.uniform_below(vcount));
            ++vcount;
            tree_edges.emplace_back(parent, vcount);
        }
    }

    graph g(vcount);
    for (const auto& [u, v] : tree_edges) g.add_edge(u, v);
    for (const auto& [u, v] : extra_edges) g.add_edge(u, v);
    return {std::move(g), std::move(tree_edges), forced};
}

/// Sample a graph from any model spec.
inline graph generate(const model_spec& spec, rng_seed seed) {
    spec.validate();
    switch (spec.kind) {
        case model_kind::urrt: return make_urrt(spec.n, seed);
        case model_kind::ldag: return make_ldag(spec.n, spec.l, seed);
        case model_kind::cooper_frieze: return make_cooper_frieze(spec.n, spec.c, seed);
        case model_kind::cf_process: return make_cf_process(spec.alpha, spec.steps, seed).g;
        case model_kind::inhom_er: return make_inhom_er(spec.n, spec.c, seed);
    }
    throw std::logic_error("generate: unknown model kind");
}

/// Uniform random permutation of [1, n] (Fisher-Yates).
inline permutation sample_permutation(vertex_id n, rng_stream& rng) {
    std::vector<vertex_id> image(n);
    for (vertex_id i = 0; i < n; ++i) image[i] = i + 1;
    for (vertex_id i = n; i > 1; --i)
        std::swap(image[i - 1], image[rng.uniform_below(i)]);
    return permutation(std::move(image));
}

} // namespace netarch

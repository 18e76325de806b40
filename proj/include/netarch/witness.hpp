#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include <json.hpp>

#include "netarch/graph.hpp"

namespace netarch {

namespace detail {

inline std::pair<vertex_id, vertex_id> norm_edge(vertex_id a, vertex_id b) {
    return {std::min(a, b), std::max(a, b)};
}

/// Edges of a cyclic vertex sequence as normalized pairs, sorted.
inline std::vector<std::pair<vertex_id, vertex_id>> cycle_edges(const std::vector<vertex_id>& cyc) {
    std::vector<std::pair<vertex_id, vertex_id>> out;
    out.reserve(cyc.size());
    for (std::size_t i = 0; i < cyc.size(); ++i)
        out.push_back(norm_edge(cyc[i], cyc[(i + 1) % cyc.size()]));
    std::sort(out.begin(), out.end());
    return out;
}

/// Lexicographically minimal rotation/reflection of a cyclic sequence.
inline std::vector<vertex_id> canonical_cycle(std::vector<vertex_id> cyc) {
    const std::size_t k = cyc.size();
    std::vector<vertex_id> best = cyc;
    std::vector<vertex_id> cand(k);
    for (int dir = 0; dir < 2; ++dir) {
        for (std::size_t start = 0; start < k; ++start) {
            for (std::size_t i = 0; i < k; ++i) cand[i] = cyc[(start + i) % k];
            if (cand < best) best = cand;
        }
        std::reverse(cyc.begin(), cyc.end());
    }
    return best;
}

} // namespace detail

/// One concrete double cycle: two cycles of s and t edges whose subgraph
/// intersection is exactly the path shared_path (p vertices, p-1 edges).
/// The anchors are the endpoints of the shared path; when p = 1 the path is
/// a single vertex and the double cycle has that unique anchor.
///
/// Stored canonically: each cycle rotated/reflected to its lexicographic
/// minimum, cycle_a <= cycle_b under (length, sequence) order, shared_path
/// running from its smaller endpoint, anchors sorted.
struct double_cycle_witness {
    std::vector<vertex_id> cycle_a;
    std::vector<vertex_id> cycle_b;
    std::vector<vertex_id> shared_path;
    std::vector<vertex_id> anchors;
    std::uint32_t s = 0;
    std::uint32_t t = 0;
    std::uint32_t p = 0;

    friend bool operator==(const double_cycle_witness&, const double_cycle_witness&) = default;
};

/// Build the canonical witness from two raw cycle sequences and their
/// shared path. Performs no validation beyond canonical bookkeeping.
inline double_cycle_witness make_witness(std::vector<vertex_id> cycle_a,
                                         std::vector<vertex_id> cycle_b,
                                         std::vector<vertex_id> shared_path) {
    double_cycle_witness w;
    cycle_a = detail::canonical_cycle(std::move(cycle_a));
    cycle_b = detail::canonical_cycle(std::move(cycle_b));
    if (std::make_pair(cycle_b.size(), cycle_b) < std::make_pair(cycle_a.size(), cycle_a))
        std::swap(cycle_a, cycle_b);
    if (shared_path.size() >= 2 && shared_path.front() > shared_path.back())
        std::reverse(shared_path.begin(), shared_path.end());
    w.s = static_cast<std::uint32_t>(cycle_a.size());
    w.t = static_cast<std::uint32_t>(cycle_b.size());
    w.p = static_cast<std::uint32_t>(shared_path.size());
    if (w.p == 1)
        w.anchors = {shared_path.front()};
    else
        w.anchors = {std::min(shared_path.front(), shared_path.back()),
                     std::max(shared_path.front(), shared_path.back())};
    w.cycle_a = std::move(cycle_a);
    w.cycle_b = std::move(cycle_b);
    w.shared_path = std::move(shared_path);
    return w;
}

/// True iff w is a valid double cycle of the host graph: both sequences are
/// simple cycles of g, their vertex sets intersect exactly in the shared
/// path's vertices, their edge sets intersect exactly in the shared path's
/// edges, the anchors are the path endpoints, and 1 <= p <= min(s,t)/2.
/// Returns false on any malformed input instead of throwing.
inline bool validate_witness(const graph& g, const double_cycle_witness& w) {
    const auto in_range = [&](vertex_id v) { return v >= 1 && v <= g.vertex_count(); };

    const auto is_simple_cycle = [&](const std::vector<vertex_id>& cyc) {
        if (cyc.size() < 3) return false;
        std::vector<vertex_id> sorted = cyc;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
        for (vertex_id v : cyc)
            if (!in_range(v)) return false;
        for (std::size_t i = 0; i < cyc.size(); ++i)
            if (!g.has_edge(cyc[i], cyc[(i + 1) % cyc.size()])) return false;
        return true;
    };

    if (w.s != w.cycle_a.size() || w.t != w.cycle_b.size() || w.p != w.shared_path.size())
        return false;
    if (!is_simple_cycle(w.cycle_a) || !is_simple_cycle(w.cycle_b)) return false;
    if (w.p < 1 || w.p > std::min(w.s, w.t) / 2) return false;

    std::vector<vertex_id> va = w.cycle_a, vb = w.cycle_b;
    std::sort(va.begin(), va.end());
    std::sort(vb.begin(), vb.end());
    std::vector<vertex_id> shared_vertices;
    std::set_intersection(va.begin(), va.end(), vb.begin(), vb.end(),
                          std::back_inserter(shared_vertices));

    std::vector<vertex_id> path_sorted = w.shared_path;
    std::sort(path_sorted.begin(), path_sorted.end());
    if (std::adjacent_find(path_sorted.begin(), path_sorted.end()) != path_sorted.end())
        return false;
    if (shared_vertices != path_sorted) return false;

    const auto ea = detail::cycle_edges(w.cycle_a);
    const auto eb = detail::cycle_edges(w.cycle_b);
    std::vector<std::pair<vertex_id, vertex_id>> shared_edges;
    std::set_intersection(ea.begin(), ea.end(), eb.begin(), eb.end(),
                          std::back_inserter(shared_edges));

    std::vector<std::pair<vertex_id, vertex_id>> path_edges;
    for (std::size_t i = 0; i + 1 < w.shared_path.size(); ++i)
        path_edges.push_back(detail::norm_edge(w.shared_path[i], w.shared_path[i + 1]));
    std::sort(path_edges.begin(), path_edges.end());
    if (shared_edges != path_edges) return false;

    std::vector<vertex_id> expected_anchors;
    if (w.p == 1)
        expected_anchors = {w.shared_path.front()};
    else
        expected_anchors = {std::min(w.shared_path.front(), w.shared_path.back()),
                            std::max(w.shared_path.front(), w.shared_path.back())};
    if (w.anchors != expected_anchors) return false;

    // |V(A) u V(B)| = s + t - p.
    std::vector<vertex_id> all;
    std::set_union(va.begin(), va.end(), vb.begin(), vb.end(), std::back_inserter(all));
    return all.size() == static_cast<std::size_t>(w.s) + w.t - w.p;
}

/// Labeled exponent counts of a witness relative to one of its anchors:
/// for every vertex x of the double cycle, count(x) is the number of
/// neighbors of x within the double-cycle subgraph that carry a smaller
/// label. Vertices other than the anchor are split into those below and
/// above the anchor's label, each sorted ascending. Summing count over all
/// vertices gives the union's edge count, s + t - p + 1, since every edge
/// is counted once at its larger endpoint.
struct exponent_profile {
    vertex_id anchor = 0;
    int anchor_count = 0;                            // E(0) in the lemma setup
    std::vector<std::pair<vertex_id, int>> below;    // label < anchor
    std::vector<std::pair<vertex_id, int>> above;    // label > anchor

    int total() const {
        int sum = anchor_count;
        for (const auto& [v, e] : below) sum += e;
        for (const auto& [v, e] : above) sum += e;
        return sum;
    }
};

inline exponent_profile compute_exponent_profile(const double_cycle_witness& w, vertex_id anchor) {
    if (std::find(w.anchors.begin(), w.anchors.end(), anchor) == w.anchors.end())
        throw std::invalid_argument("compute_exponent_profile: vertex is not an anchor of the witness");

    auto edges = detail::cycle_edges(w.cycle_a);
    const auto eb = detail::cycle_edges(w.cycle_b);
    edges.insert(edges.end(), eb.begin(), eb.end());
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    std::vector<vertex_id> vertices = w.cycle_a;
    vertices.insert(vertices.end(), w.cycle_b.begin(), w.cycle_b.end());
    std::sort(vertices.begin(), vertices.end());
    vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());

    exponent_profile prof;
    prof.anchor = anchor;
    for (vertex_id x : vertices) {
        int count = 0;
        for (const auto& [a, b] : edges)
            if (b == x) ++count; // b is the larger endpoint
        if (x == anchor)
            prof.anchor_count = count;
        else if (x < anchor)
            prof.below.emplace_back(x, count);
        else
            prof.above.emplace_back(x, count);
    }
    return prof;
}

/// Both partial-sum inequality families of the labeled double cycle:
///   - over the k smallest below-anchor vertices, sum of counts <= k - 1
///     (their induced subgraph avoids the anchor, hence is a forest);
///   - over the k largest above-anchor vertices, sum of counts >= k + 1
///     (each vertex has >= 2 double-cycle neighbors and the induced
///     subgraph is again a forest).
/// These hold for every valid witness; a failure indicates a bug in the
/// witness extraction or profile computation, never sampling noise.
inline bool check_exponent_lemmas(const exponent_profile& prof) {
    int prefix = 0;
    for (std::size_t k = 1; k <= prof.below.size(); ++k) {
        prefix += prof.below[k - 1].second;
        if (prefix > static_cast<int>(k) - 1) return false;
    }
    int suffix = 0;
    for (std::size_t k = 1; k <= prof.above.size(); ++k) {
        suffix += prof.above[prof.above.size() - k].second;
        if (suffix < static_cast<int>(k) + 1) return false;
    }
    return true;
}

inline void to_json(nlohmann::json& j, const double_cycle_witness& w) {
    j = nlohmann::json{
        {"anchors", w.anchors}, {"s", w.s},   {"t", w.t},
        {"p", w.p},             {"cycle_a", w.cycle_a},
        {"cycle_b", w.cycle_b}, {"shared_path", w.shared_path},
    };
}

} // namespace netarch

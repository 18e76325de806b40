#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "netarch/graph.hpp"
#include "netarch/witness.hpp"

namespace netarch {

/// All vertices that anchor some double cycle whose two cycle lengths are
/// both <= m. members is sorted ascending; witnesses, when requested, runs
/// parallel to members.
struct anchor_set {
    std::uint32_t m = 0;
    std::vector<vertex_id> members;
    std::vector<std::optional<double_cycle_witness>> witnesses;
};

struct detect_options {
    unsigned threads = 1;
    bool with_witnesses = false;
};

namespace detail {

struct bfs_arrays {
    explicit bfs_arrays(std::size_t size)
        : vis(size, 0), dist(size, 0), branch(size, 0), parent(size, 0) {}
    std::vector<std::uint32_t> vis;
    std::vector<std::uint32_t> dist;
    std::vector<vertex_id> branch;
    std::vector<vertex_id> parent;
    std::vector<vertex_id> order;
    std::uint32_t epoch = 0;
};

/// Scratch state for per-vertex detection, reused across calls through
/// epoch stamping. One context per worker thread.
struct detect_context {
    explicit detect_context(std::size_t size)
        : main(size), probe(size), blocked(size, 0), on_path(size, 0), near_v(size, 0) {}
    bfs_arrays main;   // ball of the probed vertex
    bfs_arrays probe;  // reduced-graph searches
    std::vector<std::uint32_t> blocked;
    std::uint32_t blocked_epoch = 0;
    std::vector<std::uint32_t> on_path;
    std::vector<std::uint32_t> near_v;
    std::uint32_t stamp = 0;
    std::vector<vertex_id> path;
};

struct cycle_scan {
    bool found = false;
    vertex_id a = 0;
    vertex_id b = 0;
    std::uint32_t length = 0;
};

/// BFS ball of radius m/2 around v (skipping vertices stamped blocked),
/// recording distance, first-hop branch label and BFS parent. Returns the
/// shortest cycle through v if its length is <= m, as the non-tree edge
/// (a, b) joining two distinct branches that minimizes d(a) + d(b) + 1.
/// Every cycle through v of length c <= m contains such an edge with
/// d(a) + d(b) + 1 <= c, and every such edge closes an actual cycle of
/// exactly that length (branch-disjoint parent chains), so the minimum is
/// the exact girth through v whenever it is <= m.
inline cycle_scan bfs_scan(const graph& g, vertex_id v, std::uint32_t m, bfs_arrays& arr,
                           const std::vector<std::uint32_t>& blocked,
                           std::uint32_t blocked_epoch) {
    const std::uint32_t radius = m / 2;
    const std::uint32_t ep = ++arr.epoch;
    arr.order.clear();
    arr.order.push_back(v);
    arr.vis[v] = ep;
    arr.dist[v] = 0;
    arr.branch[v] = v;
    arr.parent[v] = 0;
    for (std::size_t head = 0; head < arr.order.size(); ++head) {
        const vertex_id u = arr.order[head];
        if (arr.dist[u] == radius) continue;
        for (vertex_id w : g.neighbors(u)) {
            if (arr.vis[w] == ep) continue;
            if (blocked_epoch != 0 && blocked[w] == blocked_epoch) continue;
            arr.vis[w] = ep;
            arr.dist[w] = arr.dist[u] + 1;
            arr.branch[w] = (u == v) ? w : arr.branch[u];
            arr.parent[w] = u;
            arr.order.push_back(w);
        }
    }

    cycle_scan best;
    for (const vertex_id u : arr.order) {
        if (u == v) continue;
        for (vertex_id w : g.neighbors(u)) {
            if (w <= u || w == v) continue;
            if (arr.vis[w] != ep) continue;
            if (arr.parent[u] == w || arr.parent[w] == u) continue;
            if (arr.branch[u] == arr.branch[w]) continue;
            const std::uint32_t len = arr.dist[u] + arr.dist[w] + 1;
            if (len > m) continue;
            if (!best.found || len < best.length) {
                best.found = true;
                best.a = u;
                best.b = w;
                best.length = len;
            }
        }
    }
    return best;
}

/// The cycle realized by a scan result, as a vertex sequence starting at v.
inline std::vector<vertex_id> cycle_from_scan(const bfs_arrays& arr, vertex_id v,
                                              const cycle_scan& sc) {
    std::vector<vertex_id> left;
    for (vertex_id x = sc.a; x != v; x = arr.parent[x]) left.push_back(x);
    std::vector<vertex_id> seq{v};
    seq.insert(seq.end(), left.rbegin(), left.rend());
    for (vertex_id x = sc.b; x != v; x = arr.parent[x]) seq.push_back(x);
    return seq;
}

/// Shortest path length from `from` to `to` avoiding blocked vertices
/// (and, when requested, the direct edge from-to). 0 when unreachable
/// within max_len edges.
inline std::uint32_t bfs_path_length(const graph& g, vertex_id from, vertex_id to,
                                     std::uint32_t max_len, bfs_arrays& arr,
                                     const std::vector<std::uint32_t>& blocked,
                                     std::uint32_t blocked_epoch, bool skip_direct) {
    const std::uint32_t ep = ++arr.epoch;
    arr.order.clear();
    arr.order.push_back(from);
    arr.vis[from] = ep;
    arr.dist[from] = 0;
    for (std::size_t head = 0; head < arr.order.size(); ++head) {
        const vertex_id u = arr.order[head];
        if (arr.dist[u] >= max_len) continue;
        for (vertex_id w : g.neighbors(u)) {
            if (skip_direct && u == from && w == to) continue;
            if (arr.vis[w] == ep) continue;
            if (w == to) return arr.dist[u] + 1;
            if (blocked[w] == blocked_epoch) continue;
            arr.vis[w] = ep;
            arr.dist[w] = arr.dist[u] + 1;
            arr.order.push_back(w);
        }
    }
    return 0;
}

struct cycle_record {
    std::vector<vertex_id> seq;                         // starts at the probed vertex
    std::vector<vertex_id> vset;                        // sorted
    std::vector<std::pair<vertex_id, vertex_id>> eset;  // sorted, normalized
    vertex_id end_first = 0;                            // the two cycle neighbors at v
    vertex_id end_last = 0;
};

inline cycle_record make_cycle_record(const std::vector<vertex_id>& seq) {
    cycle_record rec;
    rec.seq = seq;
    rec.vset = seq;
    std::sort(rec.vset.begin(), rec.vset.end());
    rec.eset = cycle_edges(seq);
    rec.end_first = seq[1];
    rec.end_last = seq.back();
    return rec;
}

enum class enum_status { completed, stopped, budget_exhausted };

/// Enumerate every simple cycle through v of length <= m, each exactly once
/// (the traversal with second vertex < last vertex is kept). Requires the
/// ctx.main ball of the current epoch. A path of length L ending at u can
/// only close into a cycle of length >= L + dist(u), which prunes the
/// depth-first search exactly. The callback receives the cycle as a vertex
/// sequence starting at v; returning false stops the enumeration. With a
/// nonzero node budget the search gives up once it has expanded that many
/// path nodes (the enumeration is then incomplete, not wrong).
template <typename Callback>
enum_status enumerate_cycles_through(const graph& g, vertex_id v, std::uint32_t m,
                                     detect_context& ctx, std::uint64_t node_budget,
                                     Callback&& cb) {
    const std::uint32_t ep = ++ctx.stamp;
    const bfs_arrays& arr = ctx.main;
    for (vertex_id w : g.neighbors(v)) ctx.near_v[w] = ep;

    ctx.path.clear();
    ctx.path.push_back(v);
    ctx.on_path[v] = ep;

    std::uint64_t nodes = 0;
    // 0 keep going, 1 stopped by callback, 2 budget exhausted
    auto dfs = [&](auto&& self, vertex_id u, std::uint32_t len) -> int {
        if (node_budget != 0 && ++nodes > node_budget) return 2;
        if (len >= 2 && ctx.near_v[u] == ep && ctx.path[1] < u) {
            if (!cb(ctx.path)) return 1;
        }
        for (vertex_id w : g.neighbors(u)) {
            if (ctx.on_path[w] == ep) continue;
            if (arr.vis[w] != arr.epoch) continue;
            if (len + 1 + arr.dist[w] > m) continue;
            ctx.path.push_back(w);
            ctx.on_path[w] = ep;
            const int r = self(self, w, len + 1);
            ctx.on_path[w] = ep - 1;
            ctx.path.pop_back();
            if (r != 0) return r;
        }
        return 0;
    };
    switch (dfs(dfs, v, 0)) {
        case 1: return enum_status::stopped;
        case 2: return enum_status::budget_exhausted;
        default: return enum_status::completed;
    }
}

/// Test whether two cycles through v form a double cycle with v as an
/// anchor: their subgraph intersection must be exactly a path having v as
/// an endpoint, with p = |shared vertices| <= min(s, t)/2. On success the
/// shared path is returned oriented from v.
inline std::optional<std::vector<vertex_id>> shared_anchor_path(const cycle_record& a,
                                                                const cycle_record& b,
                                                                vertex_id v) {
    std::vector<vertex_id> shared;
    std::set_intersection(a.vset.begin(), a.vset.end(), b.vset.begin(), b.vset.end(),
                          std::back_inserter(shared));
    const std::size_t p = shared.size();
    if (p > std::min(a.seq.size(), b.seq.size()) / 2) return std::nullopt;
    if (p == 1) return std::vector<vertex_id>{v}; // the one shared vertex is v

    std::vector<std::pair<vertex_id, vertex_id>> shared_edges;
    std::set_intersection(a.eset.begin(), a.eset.end(), b.eset.begin(), b.eset.end(),
                          std::back_inserter(shared_edges));
    if (shared_edges.size() != p - 1) return std::nullopt;

    // Walk the shared subgraph from v; it is a path with v as an endpoint
    // iff v has exactly one shared edge and the walk covers everything.
    const auto degree_of = [&](vertex_id x) {
        int d = 0;
        for (const auto& [s, t] : shared_edges) d += (s == x) + (t == x);
        return d;
    };
    if (degree_of(v) != 1) return std::nullopt;
    for (vertex_id x : shared)
        if (degree_of(x) > 2) return std::nullopt;

    std::vector<vertex_id> walk{v};
    vertex_id prev = 0, cur = v;
    while (true) {
        vertex_id next = 0;
        for (const auto& [s, t] : shared_edges) {
            if (s == cur && t != prev) { next = t; break; }
            if (t == cur && s != prev) { next = s; break; }
        }
        if (next == 0) break;
        walk.push_back(next);
        prev = cur;
        cur = next;
    }
    if (walk.size() != p) return std::nullopt;
    return walk;
}

inline std::tuple<std::uint32_t, std::uint32_t, std::vector<vertex_id>>
witness_order_key(const double_cycle_witness& w) {
    std::vector<vertex_id> concat = w.cycle_a;
    concat.insert(concat.end(), w.cycle_b.begin(), w.cycle_b.end());
    return {std::max(w.s, w.t), std::min(w.s, w.t), std::move(concat)};
}

/// Incremental cycle-pair search. Cycles are checked against all earlier
/// ones; a valid pair stops the membership search immediately, while the
/// witness search keeps the minimal witness under (max(s,t), min(s,t),
/// canonical concatenated sequences). A valid pair shares at most one edge
/// at v (the anchor is an endpoint of the shared path), which prunes most
/// candidate pairs by their two cycle neighbors at v alone.
struct pair_search {
    vertex_id v;
    bool want_witness;
    std::vector<cycle_record> cycles;
    bool member = false;
    std::optional<double_cycle_witness> best;
    std::optional<std::tuple<std::uint32_t, std::uint32_t, std::vector<vertex_id>>> best_key;

    pair_search(vertex_id v_, bool want_witness_) : v(v_), want_witness(want_witness_) {}

    bool on_cycle(const std::vector<vertex_id>& seq) {
        cycle_record rec = make_cycle_record(seq);
        for (const cycle_record& old : cycles) {
            const int shared_ends = (old.end_first == rec.end_first) +
                                    (old.end_first == rec.end_last) +
                                    (old.end_last == rec.end_first) +
                                    (old.end_last == rec.end_last);
            if (shared_ends == 2) continue;
            auto path = shared_anchor_path(old, rec, v);
            if (!path) continue;
            member = true;
            if (!want_witness) return false;
            double_cycle_witness w = make_witness(old.seq, rec.seq, std::move(*path));
            auto key = witness_order_key(w);
            if (!best_key || key < *best_key) {
                best = std::move(w);
                best_key = std::move(key);
            }
        }
        cycles.push_back(std::move(rec));
        return true;
    }
};

/// A second short cycle through v that avoids everything of c1 but v
/// certifies v with a single-vertex overlap.
inline bool probe_disjoint_cycle(const graph& g, vertex_id v, std::uint32_t m,
                                 detect_context& ctx, const std::vector<vertex_id>& c1) {
    const std::uint32_t bep = ++ctx.blocked_epoch;
    for (vertex_id x : c1)
        if (x != v) ctx.blocked[x] = bep;
    return bfs_scan(g, v, m, ctx.probe, ctx.blocked, bep).found;
}

/// Shortest-return theta probe along c1. For the prefix of length x ending
/// at u, the shortest u-v return q that internally avoids the cycle closes
/// a theta with path lengths (x, s-x, q) between v and u; sorted as
/// (a, b, c), some pairing of those three paths is a valid double cycle
/// anchored at v (and u) iff b >= a + 2 and a + c <= m, because only the
/// shortest path can serve as the shared path. Finds fast positives; a
/// negative proves nothing.
inline bool probe_theta(const graph& g, vertex_id v, std::uint32_t m, detect_context& ctx,
                        const std::vector<vertex_id>& c1) {
    const auto s = static_cast<std::uint32_t>(c1.size());
    for (std::uint32_t x = 1; x < s; ++x) {
        const vertex_id u = c1[x];
        const std::uint32_t bep = ++ctx.blocked_epoch;
        for (vertex_id w : c1)
            if (w != v && w != u) ctx.blocked[w] = bep;
        // When u is a cycle neighbor of v the direct edge belongs to c1 and
        // must not double as the return path.
        const bool skip_direct = (x == 1 || x == s - 1);
        const std::uint32_t q =
            bfs_path_length(g, u, v, m, ctx.probe, ctx.blocked, bep, skip_direct);
        if (q == 0) continue;
        std::uint32_t t[3] = {x, s - x, q};
        std::sort(t, t + 3);
        if (t[1] >= t[0] + 2 && t[0] + t[2] <= m) return true;
    }
    return false;
}

constexpr std::uint64_t kMembershipNodeBudget = 20000;

/// Exact membership of v in S_m.
///
/// Cheap exact filters first: an anchor carries 3 or 4 double-cycle edges,
/// so vertices of degree < 3 are out; the ball scan proves when no cycle of
/// length <= m passes v at all. Then a budgeted exact enumeration settles
/// every vertex with a small cycle neighborhood. Vertices that blow the
/// budget sit in cycle-rich regions, where the two constructive probes
/// almost always exhibit a witness directly; the rare remainder falls back
/// to the unbounded enumeration, which is exponential in the worst case
/// (accepted and documented).
inline bool detect_member(const graph& g, vertex_id v, std::uint32_t m, detect_context& ctx) {
    if (g.degree(v) < 3) return false;
    const cycle_scan scan = bfs_scan(g, v, m, ctx.main, ctx.blocked, 0);
    if (!scan.found) return false;

    pair_search budgeted(v, false);
    const enum_status status =
        enumerate_cycles_through(g, v, m, ctx, kMembershipNodeBudget,
                                 [&](const auto& seq) { return budgeted.on_cycle(seq); });
    if (budgeted.member) return true;
    if (status == enum_status::completed) return false;

    const std::vector<vertex_id> c1 = cycle_from_scan(ctx.main, v, scan);
    if (probe_disjoint_cycle(g, v, m, ctx, c1)) return true;
    if (probe_theta(g, v, m, ctx, c1)) return true;

    pair_search full(v, false);
    enumerate_cycles_through(g, v, m, ctx, 0,
                             [&](const auto& seq) { return full.on_cycle(seq); });
    return full.member;
}

/// Minimal witness at v, or nullopt. Runs the full enumeration only after
/// membership is established.
inline std::optional<double_cycle_witness> extract_min_witness(const graph& g, vertex_id v,
                                                               std::uint32_t m,
                                                               detect_context& ctx) {
    if (!detect_member(g, v, m, ctx)) return std::nullopt;
    pair_search search(v, true);
    enumerate_cycles_through(g, v, m, ctx, 0,
                             [&](const auto& seq) { return search.on_cycle(seq); });
    return std::move(search.best);
}

inline void check_m(std::uint32_t m) {
    if (m < 3)
        throw std::invalid_argument("anchor detection: m must be >= 3 (no shorter cycle exists)");
}

inline void check_vertex_in(const graph& g, vertex_id v) {
    if (v == 0 || v > g.vertex_count())
        throw std::out_of_range("anchor detection: vertex id out of range");
}

} // namespace detail

/// Minimal double cycle anchored at v with both cycle lengths <= m, or
/// nullopt when v anchors none. The returned witness always validates and
/// is deterministic: least under (max(s,t), min(s,t), canonical sequences).
inline std::optional<double_cycle_witness> find_witness(const graph& g, vertex_id v,
                                                        std::uint32_t m) {
    detail::check_m(m);
    detail::check_vertex_in(g, v);
    detail::detect_context ctx(static_cast<std::size_t>(g.vertex_count()) + 1);
    return detail::extract_min_witness(g, v, m, ctx);
}

/// The anchor set S_m: every vertex anchoring a double cycle of size (s, t)
/// with s <= m and t <= m. Detection over vertices runs on `threads`
/// workers; output is independent of the worker count.
inline anchor_set compute_anchor_set(const graph& g, std::uint32_t m, detect_options opts = {}) {
    detail::check_m(m);
    const vertex_id n = g.vertex_count();
    std::vector<char> member(static_cast<std::size_t>(n) + 1, 0);
    std::vector<std::optional<double_cycle_witness>> witness(
        opts.with_witnesses ? static_cast<std::size_t>(n) + 1 : 0);

    auto worker_body = [&](detail::detect_context& ctx, vertex_id v) {
        if (opts.with_witnesses) {
            witness[v] = detail::extract_min_witness(g, v, m, ctx);
            member[v] = witness[v].has_value() ? 1 : 0;
        } else {
            member[v] = detail::detect_member(g, v, m, ctx) ? 1 : 0;
        }
    };

    const unsigned threads = std::max(1u, opts.threads);
    if (threads == 1 || n < 64) {
        detail::detect_context ctx(static_cast<std::size_t>(n) + 1);
        for (vertex_id v = 1; v <= n; ++v) worker_body(ctx, v);
    } else {
        std::atomic<vertex_id> next{1};
        constexpr vertex_id chunk = 32;
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                detail::detect_context ctx(static_cast<std::size_t>(n) + 1);
                while (true) {
                    const vertex_id start = next.fetch_add(chunk);
                    if (start > n) break;
                    const vertex_id stop = std::min<vertex_id>(n, start + chunk - 1);
                    for (vertex_id v = start; v <= stop; ++v) worker_body(ctx, v);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    anchor_set out;
    out.m = m;
    for (vertex_id v = 1; v <= n; ++v) {
        if (!member[v]) continue;
        out.members.push_back(v);
        if (opts.with_witnesses) out.witnesses.push_back(std::move(witness[v]));
    }
    return out;
}

/// Number of distinct double cycles of size exactly (s, t) anchored at v,
/// counted as unordered cycle pairs (orientation-insensitive subgraph
/// configurations). Requires 3 <= s <= t. Exponential in t by nature; meant
/// for small inputs.
inline std::uint64_t count_anchored(const graph& g, vertex_id v, std::uint32_t s, std::uint32_t t) {
    if (s > t) throw std::invalid_argument("count_anchored: require s <= t (canonical order)");
    detail::check_m(s);
    detail::check_vertex_in(g, v);

    detail::detect_context ctx(static_cast<std::size_t>(g.vertex_count()) + 1);
    if (!detail::bfs_scan(g, v, t, ctx.main, ctx.blocked, 0).found) return 0;

    std::vector<detail::cycle_record> cycles;
    detail::enumerate_cycles_through(g, v, t, ctx, 0, [&](const std::vector<vertex_id>& seq) {
        if (seq.size() == s || seq.size() == t)
            cycles.push_back(detail::make_cycle_record(seq));
        return true;
    });

    std::uint64_t count = 0;
    for (std::size_t i = 0; i < cycles.size(); ++i) {
        for (std::size_t j = i + 1; j < cycles.size(); ++j) {
            const auto si = static_cast<std::uint32_t>(cycles[i].seq.size());
            const auto sj = static_cast<std::uint32_t>(cycles[j].seq.size());
            if (std::min(si, sj) != s || std::max(si, sj) != t) continue;
            if (detail::shared_anchor_path(cycles[i], cycles[j], v)) ++count;
        }
    }
    return count;
}

} // namespace netarch

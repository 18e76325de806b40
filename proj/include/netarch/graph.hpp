#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace netarch {

/// Vertices are labeled 1..n in arrival order; vertex 1 is the root of the
/// growth process.
using vertex_id = std::uint32_t;

/// Raised on malformed or inconsistent serialized input/output.
class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Simple undirected graph with 1-indexed vertices. Adjacency lists are
/// kept sorted ascending at all times; duplicate edges collapse on insert.
/// Construction is single-threaded; once built, the graph is safe to share
/// read-only across threads.
class graph {
public:
    explicit graph(vertex_id n) : adjacency_(static_cast<std::size_t>(n) + 1) {
        if (n == 0) throw std::invalid_argument("graph: vertex count must be >= 1");
    }

    vertex_id vertex_count() const { return static_cast<vertex_id>(adjacency_.size() - 1); }
    std::uint64_t edge_count() const { return edge_count_; }

    /// Insert edge {u, v}. Re-adding an existing edge is a no-op.
    void add_edge(vertex_id u, vertex_id v) {
        check_vertex(u);
        check_vertex(v);
        if (u == v) throw std::invalid_argument("add_edge: self-loops are not allowed");
        if (insert_sorted(adjacency_[u], v)) {
            insert_sorted(adjacency_[v], u);
            ++edge_count_;
        }
    }

    bool has_edge(vertex_id u, vertex_id v) const {
        check_vertex(u);
        check_vertex(v);
        if (u == v) return false;
        const auto& adj = adjacency_[u].size() <= adjacency_[v].size() ? adjacency_[u] : adjacency_[v];
        const vertex_id other = adjacency_[u].size() <= adjacency_[v].size() ? v : u;
        return std::binary_search(adj.begin(), adj.end(), other);
    }

    std::span<const vertex_id> neighbors(vertex_id v) const {
        check_vertex(v);
        return adjacency_[v];
    }

    vertex_id degree(vertex_id v) const {
        check_vertex(v);
        return static_cast<vertex_id>(adjacency_[v].size());
    }

    /// Edges as (u, v) with u < v, sorted lexicographically.
    std::vector<std::pair<vertex_id, vertex_id>> edges() const {
        std::vector<std::pair<vertex_id, vertex_id>> out;
        out.reserve(edge_count_);
        for (vertex_id u = 1; u <= vertex_count(); ++u)
            for (vertex_id v : adjacency_[u])
                if (v > u) out.emplace_back(u, v);
        return out;
    }

    friend bool operator==(const graph& a, const graph& b) {
        return a.adjacency_ == b.adjacency_;
    }

private:
    void check_vertex(vertex_id v) const {
        if (v == 0 || v > vertex_count())
            throw std::out_of_range("graph: vertex id out of range");
    }

    static bool insert_sorted(std::vector<vertex_id>& adj, vertex_id v) {
        auto it = std::lower_bound(adj.begin(), adj.end(), v);
        if (it != adj.end() && *it == v) return false;
        adj.insert(it, v);
        return true;
    }

    std::vector<std::vector<vertex_id>> adjacency_; // index 0 unused
    std::uint64_t edge_count_ = 0;
};

/// Bijection on [1, n], used to model observing a graph with its arrival
/// labels hidden.
class permutation {
public:
    /// image[i-1] is the image of vertex i.
    explicit permutation(std::vector<vertex_id> image) : image_(std::move(image)) {
        std::vector<bool> hit(image_.size() + 1, false);
        for (vertex_id target : image_) {
            if (target == 0 || target > image_.size() || hit[target])
                throw std::invalid_argument("permutation: mapping is not a bijection on [1, n]");
            hit[target] = true;
        }
    }

    static permutation identity(vertex_id n) {
        std::vector<vertex_id> image(n);
        for (vertex_id i = 0; i < n; ++i) image[i] = i + 1;
        return permutation(std::move(image));
    }

    vertex_id size() const { return static_cast<vertex_id>(image_.size()); }

    vertex_id operator()(vertex_id v) const {
        if (v == 0 || v > image_.size())
            throw std::out_of_range("permutation: vertex id out of range");
        return image_[v - 1];
    }

private:
    std::vector<vertex_id> image_;
};

/// Relabel every vertex of g through perm: {u, v} is an edge of the result
/// iff {perm^-1(u), perm^-1(v)} is an edge of g.
inline graph relabel(const graph& g, const permutation& perm) {
    if (perm.size() != g.vertex_count())
        throw std::invalid_argument("relabel: permutation size does not match graph");
    graph out(g.vertex_count());
    for (const auto& [u, v] : g.edges()) out.add_edge(perm(u), perm(v));
    return out;
}

/// Edge-list text format: first line "n m", then m lines "u v" with u < v,
/// sorted lexicographically. ASCII, LF line endings, 1-indexed vertices.
inline void write_edge_list(const graph& g, std::ostream& os) {
    os << g.vertex_count() << ' ' << g.edge_count() << '\n';
    for (const auto& [u, v] : g.edges()) os << u << ' ' << v << '\n';
    if (!os) throw io_error("write_edge_list: stream write failed");
}

inline std::string write_edge_list_text(const graph& g) {
    std::ostringstream os;
    write_edge_list(g, os);
    return os.str();
}

inline graph read_edge_list(std::istream& is) {
    std::uint64_t n = 0, m = 0;
    std::string line;
    if (!std::getline(is, line)) throw io_error("read_edge_list: missing header line");
    {
        std::istringstream header(line);
        std::string tail;
        if (!(header >> n >> m) || (header >> tail))
            throw io_error("read_edge_list: malformed header, expected \"n m\"");
    }
    if (n == 0) throw io_error("read_edge_list: vertex count must be >= 1");
    if (n > 0xFFFFFFFFULL) throw io_error("read_edge_list: vertex count too large");
    graph g(static_cast<vertex_id>(n));
    for (std::uint64_t i = 0; i < m; ++i) {
        if (!std::getline(is, line))
            throw io_error("read_edge_list: expected " + std::to_string(m) +
                           " edge lines, got " + std::to_string(i));
        std::istringstream row(line);
        std::uint64_t u = 0, v = 0;
        std::string tail;
        if (!(row >> u >> v) || (row >> tail))
            throw io_error("read_edge_list: malformed edge line " + std::to_string(i + 2));
        if (u == 0 || v == 0 || u > n || v > n)
            throw io_error("read_edge_list: endpoint out of range on line " + std::to_string(i + 2));
        if (u == v)
            throw io_error("read_edge_list: self-loop on line " + std::to_string(i + 2));
        g.add_edge(static_cast<vertex_id>(u), static_cast<vertex_id>(v));
    }
    return g;
}

inline graph read_edge_list_text(const std::string& text) {
    std::istringstream is(text);
    return read_edge_list(is);
}

} // namespace netarch

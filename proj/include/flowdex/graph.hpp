#pragma once

// Multigraph substrate: edge-indexed storage, orientations, bridges,
// BFS spanning trees with fundamental cycles, and the exhaustive
// K4-contraction test used for sharpness examples.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "flowdex/errors.hpp"

namespace flowdex {

struct Edge {
    int a = 0;
    int b = 0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Finite loopless multigraph. Vertices are 0..n-1, edges 0..m-1 in insertion order.
class MultiGraph {
public:
    MultiGraph() = default;

    MultiGraph(int vertex_count, std::vector<Edge> edges)
        : n_(vertex_count), edges_(std::move(edges)), incidence_(static_cast<std::size_t>(std::max(vertex_count, 0))) {
        if (vertex_count < 0) throw InvalidArgument("negative vertex count");
        for (std::size_t i = 0; i < edges_.size(); ++i) {
            const Edge& e = edges_[i];
            if (e.a < 0 || e.b < 0 || e.a >= n_ || e.b >= n_)
                throw InvalidArgument("edge " + std::to_string(i) + " has an out-of-range endpoint");
            if (e.a == e.b) throw InvalidArgument("edge " + std::to_string(i) + " is a loop");
            incidence_[e.a].push_back(static_cast<int>(i));
            incidence_[e.b].push_back(static_cast<int>(i));
        }
    }

    int vertex_count() const noexcept { return n_; }
    int edge_count() const noexcept { return static_cast<int>(edges_.size()); }

    const Edge& edge(int e) const { return edges_[static_cast<std::size_t>(e)]; }
    std::span<const Edge> edges() const noexcept { return edges_; }

    /// Edge indices incident to v, ascending (a parallel edge appears once).
    std::span<const int> incident(int v) const { return incidence_[static_cast<std::size_t>(v)]; }
    int degree(int v) const { return static_cast<int>(incidence_[static_cast<std::size_t>(v)].size()); }

    int other_end(int e, int v) const {
        const Edge& ed = edge(e);
        return ed.a == v ? ed.b : ed.a;
    }

    friend bool operator==(const MultiGraph& x, const MultiGraph& y) { return x.n_ == y.n_ && x.edges_ == y.edges_; }

private:
    int n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> incidence_;
};

struct Arc {
    int tail = 0;
    int head = 0;

    friend bool operator==(const Arc&, const Arc&) = default;
};

/// A direction for every edge of a graph.
class Orientation {
public:
    Orientation() = default;
    explicit Orientation(std::vector<Arc> arcs) : arcs_(std::move(arcs)) {}

    /// endpoint_a -> endpoint_b on every edge.
    static Orientation reference(const MultiGraph& g) {
        std::vector<Arc> arcs;
        arcs.reserve(g.edges().size());
        for (const Edge& e : g.edges()) arcs.push_back({e.a, e.b});
        return Orientation(std::move(arcs));
    }

    const Arc& operator[](int e) const { return arcs_[static_cast<std::size_t>(e)]; }
    std::span<const Arc> arcs() const noexcept { return arcs_; }
    int size() const noexcept { return static_cast<int>(arcs_.size()); }

    void reverse(int e) {
        Arc& a = arcs_[static_cast<std::size_t>(e)];
        std::swap(a.tail, a.head);
    }

    /// True when edge e points endpoint_a -> endpoint_b.
    bool agrees_with_reference(const MultiGraph& g, int e) const { return (*this)[e].tail == g.edge(e).a; }

    /// Each arc must be a permutation of its edge's endpoints.
    bool valid_for(const MultiGraph& g) const {
        if (size() != g.edge_count()) return false;
        for (int e = 0; e < size(); ++e) {
            const Arc& a = (*this)[e];
            const Edge& ed = g.edge(e);
            if (!((a.tail == ed.a && a.head == ed.b) || (a.tail == ed.b && a.head == ed.a))) return false;
        }
        return true;
    }

    friend bool operator==(const Orientation&, const Orientation&) = default;

private:
    std::vector<Arc> arcs_;
};

// ---------------------------------------------------------------------------
// Text format

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

inline std::optional<long long> to_int(std::string_view s) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

/// Line-by-line reader tracking 1-based line numbers.
class LineReader {
public:
    explicit LineReader(std::string_view text) : text_(text) {}

    bool next(std::string_view& line) {
        if (pos_ >= text_.size()) return false;
        auto nl = text_.find('\n', pos_);
        if (nl == std::string_view::npos) nl = text_.size();
        line = text_.substr(pos_, nl - pos_);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        pos_ = nl + 1;
        ++lineno_;
        return true;
    }

    std::size_t line_number() const noexcept { return lineno_; }
    std::string_view rest() const { return pos_ >= text_.size() ? std::string_view{} : text_.substr(pos_); }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t lineno_ = 0;
};

inline bool is_comment_or_blank(std::string_view line) {
    const auto t = trim(line);
    return t.empty() || t.front() == '#';
}

/// Reads "n m" and m edge lines from `reader`, skipping comments.
inline MultiGraph read_graph(LineReader& reader) {
    std::string_view line;
    auto next_content = [&](bool& ok) {
        while ((ok = reader.next(line))) {
            if (!is_comment_or_blank(line)) return;
        }
    };

    bool ok = false;
    next_content(ok);
    if (!ok) throw ParseError(ParseError::Kind::Truncated, reader.line_number(), "missing \"n m\" header");
    auto head = split_ws(line);
    if (head.size() != 2) throw ParseError(ParseError::Kind::Malformed, reader.line_number(), "expected \"n m\"");
    auto n = to_int(head[0]);
    auto m = to_int(head[1]);
    if (!n || !m || *n < 0 || *m < 0)
        throw ParseError(ParseError::Kind::Malformed, reader.line_number(), "expected two nonnegative integers");

    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(*m));
    for (long long i = 0; i < *m; ++i) {
        next_content(ok);
        if (!ok)
            throw ParseError(ParseError::Kind::Truncated, reader.line_number(),
                             "expected " + std::to_string(*m) + " edge lines, found " + std::to_string(i));
        auto tok = split_ws(line);
        if (tok.size() != 2) throw ParseError(ParseError::Kind::Malformed, reader.line_number(), "expected \"u v\"");
        auto u = to_int(tok[0]);
        auto v = to_int(tok[1]);
        if (!u || !v) throw ParseError(ParseError::Kind::Malformed, reader.line_number(), "edge endpoints must be integers");
        if (*u < 0 || *v < 0 || *u >= *n || *v >= *n)
            throw ParseError(ParseError::Kind::VertexOutOfRange, reader.line_number(),
                             "vertex index out of range 0.." + std::to_string(*n - 1));
        if (*u == *v) throw ParseError(ParseError::Kind::Loop, reader.line_number(), "loop edge at vertex " + std::to_string(*u));
        edges.push_back({static_cast<int>(*u), static_cast<int>(*v)});
    }
    return MultiGraph(static_cast<int>(*n), std::move(edges));
}

}  // namespace detail

/// Parses the graph file format: "n m" header, then m "u v" lines; '#' lines are comments.
inline MultiGraph parse_graph(std::string_view text) {
    detail::LineReader reader(text);
    MultiGraph g = detail::read_graph(reader);
    std::string_view line;
    while (reader.next(line)) {
        if (!detail::is_comment_or_blank(line))
            throw ParseError(ParseError::Kind::Malformed, reader.line_number(), "unexpected content after the edge list");
    }
    return g;
}

inline std::string to_text(const MultiGraph& g) {
    std::ostringstream os;
    os << g.vertex_count() << ' ' << g.edge_count() << '\n';
    for (const Edge& e : g.edges()) os << e.a << ' ' << e.b << '\n';
    return os.str();
}

// ---------------------------------------------------------------------------
// Structure

/// Component id per vertex, numbered in order of lowest vertex.
inline std::vector<int> components(const MultiGraph& g, int* count = nullptr) {
    std::vector<int> comp(static_cast<std::size_t>(g.vertex_count()), -1);
    int c = 0;
    std::vector<int> stack;
    for (int s = 0; s < g.vertex_count(); ++s) {
        if (comp[s] != -1) continue;
        comp[s] = c;
        stack.push_back(s);
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int e : g.incident(v)) {
                int w = g.other_end(e, v);
                if (comp[w] == -1) {
                    comp[w] = c;
                    stack.push_back(w);
                }
            }
        }
        ++c;
    }
    if (count) *count = c;
    return comp;
}

/// Cut edges, ascending. Parallel edges are never bridges.
inline std::vector<int> bridges(const MultiGraph& g) {
    const int n = g.vertex_count();
    std::vector<int> disc(static_cast<std::size_t>(n), -1), low(static_cast<std::size_t>(n), 0);
    std::vector<int> result;
    int timer = 0;

    struct Frame {
        int v;
        int parent_edge;
        std::size_t next;
    };
    std::vector<Frame> stack;
    for (int s = 0; s < n; ++s) {
        if (disc[s] != -1) continue;
        disc[s] = low[s] = timer++;
        stack.push_back({s, -1, 0});
        while (!stack.empty()) {
            Frame& f = stack.back();
            auto inc = g.incident(f.v);
            if (f.next < inc.size()) {
                int e = inc[f.next++];
                if (e == f.parent_edge) continue;
                int w = g.other_end(e, f.v);
                if (disc[w] == -1) {
                    disc[w] = low[w] = timer++;
                    stack.push_back({w, e, 0});
                } else {
                    low[f.v] = std::min(low[f.v], disc[w]);
                }
            } else {
                Frame done = f;
                stack.pop_back();
                if (!stack.empty()) {
                    int parent = stack.back().v;
                    low[parent] = std::min(low[parent], low[done.v]);
                    if (low[done.v] > disc[parent]) result.push_back(done.parent_edge);
                }
            }
        }
    }
    std::sort(result.begin(), result.end());
    return result;
}

inline bool is_bridgeless(const MultiGraph& g) { return bridges(g).empty(); }

/// Spanning forest plus one signed fundamental cycle per cotree edge.
///
/// rows[i][e] is +1 / -1 when the fundamental cycle of cotree_edges[i] traverses edge e
/// along / against its reference direction (endpoint_a -> endpoint_b), 0 otherwise.
/// The cycle traverses its own cotree edge forward, so rows[i][cotree_edges[i]] == +1.
struct CycleBasis {
    std::vector<int> tree_edges;
    std::vector<int> cotree_edges;
    std::vector<std::vector<int>> rows;
    int component_count = 0;

    std::size_t cycle_length(std::size_t i) const {
        return static_cast<std::size_t>(
            std::count_if(rows[i].begin(), rows[i].end(), [](int s) { return s != 0; }));
    }
};

/// BFS forest from vertex 0 (then the lowest unvisited vertex), lowest edge index first.
inline CycleBasis spanning_structure(const MultiGraph& g) {
    const int n = g.vertex_count();
    const int m = g.edge_count();
    std::vector<int> parent_edge(static_cast<std::size_t>(n), -1), depth(static_cast<std::size_t>(n), -1);
    std::vector<char> in_tree(static_cast<std::size_t>(m), 0);
    CycleBasis basis;

    std::vector<int> queue;
    for (int s = 0; s < n; ++s) {
        if (depth[s] != -1) continue;
        ++basis.component_count;
        depth[s] = 0;
        queue.assign(1, s);
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            int v = queue[qi];
            for (int e : g.incident(v)) {
                int w = g.other_end(e, v);
                if (depth[w] != -1) continue;
                depth[w] = depth[v] + 1;
                parent_edge[w] = e;
                in_tree[e] = 1;
                queue.push_back(w);
            }
        }
    }

    // Sign of walking u -> parent(u) along its parent edge.
    auto up_sign = [&](int u) { return g.edge(parent_edge[u]).a == u ? 1 : -1; };
    auto parent_of = [&](int u) { return g.other_end(parent_edge[u], u); };

    for (int e = 0; e < m; ++e) {
        if (in_tree[e]) {
            basis.tree_edges.push_back(e);
            continue;
        }
        basis.cotree_edges.push_back(e);
        std::vector<int> row(static_cast<std::size_t>(m), 0);
        row[e] = 1;
        // Close the cycle a -> b -> ... -> a: climb from b upward, and from a
        // upward in reverse, until both meet.
        int from_b = g.edge(e).b;
        int from_a = g.edge(e).a;
        while (from_b != from_a) {
            if (depth[from_b] >= depth[from_a]) {
                row[parent_edge[from_b]] += up_sign(from_b);
                from_b = parent_of(from_b);
            } else {
                row[parent_edge[from_a]] -= up_sign(from_a);
                from_a = parent_of(from_a);
            }
        }
        basis.rows.push_back(std::move(row));
    }
    return basis;
}

/// Net signed flow out of every vertex for edge values given in reference orientation.
template <typename T>
std::vector<T> vertex_excess(const MultiGraph& g, std::span<const T> values) {
    std::vector<T> excess(static_cast<std::size_t>(g.vertex_count()), T{});
    for (int e = 0; e < g.edge_count(); ++e) {
        excess[g.edge(e).a] += values[e];
        excess[g.edge(e).b] -= values[e];
    }
    return excess;
}

// ---------------------------------------------------------------------------
// Subgraphs

/// Spanning subgraph on a subset of edges; parent_edge maps local -> original edge index.
struct EdgeSubgraph {
    MultiGraph graph;
    std::vector<int> parent_edge;
};

inline EdgeSubgraph edge_subgraph(const MultiGraph& g, std::span<const int> edge_set) {
    EdgeSubgraph sub;
    std::vector<Edge> edges;
    for (int e : edge_set) {
        edges.push_back(g.edge(e));
        sub.parent_edge.push_back(e);
    }
    sub.graph = MultiGraph(g.vertex_count(), std::move(edges));
    return sub;
}

// ---------------------------------------------------------------------------
// K4 contraction

struct ContractionConfig {
    /// Maximum number of 4-block partitions to enumerate.
    std::uint64_t partition_budget = 10'000'000;
};

namespace detail {

/// Stirling number of the second kind S(n, k), saturating at UINT64_MAX.
inline std::uint64_t stirling2(int n, int k) {
    std::vector<std::uint64_t> row(static_cast<std::size_t>(k) + 1, 0);
    row[0] = 1;
    for (int i = 1; i <= n; ++i) {
        for (int j = std::min(i, k); j >= 1; --j) {
            unsigned __int128 v = static_cast<unsigned __int128>(j) * row[j] + row[j - 1];
            row[j] = v > UINT64_MAX ? UINT64_MAX : static_cast<std::uint64_t>(v);
        }
        row[0] = 0;
    }
    return row[k];
}

}  // namespace detail

/// True iff identifying the vertices of some 4-block partition yields K4 after
/// deleting loops (all six block pairs adjacent). Exhaustive over partitions.
inline bool contract_check_k4(const MultiGraph& g, const ContractionConfig& config = {}) {
    const int n = g.vertex_count();
    if (n < 4) return false;
    if (detail::stirling2(n, 4) > config.partition_budget)
        throw BudgetExceeded(config.partition_budget);

    std::vector<std::pair<int, int>> simple;
    for (const Edge& e : g.edges()) simple.emplace_back(std::min(e.a, e.b), std::max(e.a, e.b));
    std::sort(simple.begin(), simple.end());
    simple.erase(std::unique(simple.begin(), simple.end()), simple.end());
    if (simple.size() < 6) return false;

    std::vector<int> block(static_cast<std::size_t>(n), 0);
    auto all_pairs_adjacent = [&] {
        unsigned mask = 0;
        for (auto [u, v] : simple) {
            int x = block[u], y = block[v];
            if (x == y) continue;
            if (x > y) std::swap(x, y);
            // pairs (0,1)(0,2)(0,3)(1,2)(1,3)(2,3) -> bits 0..5
            static constexpr int bit[4][4] = {{-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5}, {2, 4, 5, -1}};
            mask |= 1u << bit[x][y];
        }
        return mask == 0x3Fu;
    };

    // Restricted growth strings with exactly four blocks.
    auto rec = [&](auto&& self, int v, int used) -> bool {
        if (n - v < 4 - used) return false;
        if (v == n) return used == 4 && all_pairs_adjacent();
        for (int b = 0; b < std::min(used + 1, 4); ++b) {
            block[v] = b;
            if (self(self, v + 1, std::max(used, b + 1))) return true;
        }
        return false;
    };
    return rec(rec, 0, 0);
}

}  // namespace flowdex

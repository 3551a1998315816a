#pragma once

// Small graph families used throughout the tests and the CLI.

#include <vector>

#include "flowdex/graph.hpp"

namespace flowdex::graphs {

inline MultiGraph cycle(int n) {
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n});
    return MultiGraph(n, std::move(edges));
}

inline MultiGraph triangle() { return cycle(3); }

inline MultiGraph path(int vertices) {
    std::vector<Edge> edges;
    for (int i = 0; i + 1 < vertices; ++i) edges.push_back({i, i + 1});
    return MultiGraph(vertices, std::move(edges));
}

inline MultiGraph complete(int n) {
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) edges.push_back({i, j});
    return MultiGraph(n, std::move(edges));
}

inline MultiGraph k4() { return complete(4); }

inline MultiGraph complete_bipartite(int s, int t) {
    std::vector<Edge> edges;
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < t; ++j) edges.push_back({i, s + j});
    return MultiGraph(s + t, std::move(edges));
}

inline MultiGraph k33() { return complete_bipartite(3, 3); }

/// Outer 5-cycle 0..4, spokes i -- i+5, inner pentagram 5..9.
inline MultiGraph petersen() {
    std::vector<Edge> edges;
    for (int i = 0; i < 5; ++i) edges.push_back({i, (i + 1) % 5});
    for (int i = 0; i < 5; ++i) edges.push_back({i, i + 5});
    for (int i = 0; i < 5; ++i) edges.push_back({5 + i, 5 + (i + 2) % 5});
    return MultiGraph(10, std::move(edges));
}

/// 3-cube Q3 on vertices 0..7 (bit-flip adjacency).
inline MultiGraph cube() {
    std::vector<Edge> edges;
    for (int v = 0; v < 8; ++v)
        for (int bit = 1; bit < 8; bit <<= 1)
            if (v < (v ^ bit)) edges.push_back({v, v ^ bit});
    return MultiGraph(8, std::move(edges));
}

/// Every edge of g replaced by a path of length two through a new vertex.
inline MultiGraph subdivide(const MultiGraph& g) {
    std::vector<Edge> edges;
    int next = g.vertex_count();
    for (const Edge& e : g.edges()) {
        edges.push_back({e.a, next});
        edges.push_back({next, e.b});
        ++next;
    }
    return MultiGraph(next, std::move(edges));
}

/// Two vertices joined by `multiplicity` parallel edges.
inline MultiGraph dipole(int multiplicity) {
    return MultiGraph(2, std::vector<Edge>(static_cast<std::size_t>(multiplicity), Edge{0, 1}));
}

}  // namespace flowdex::graphs

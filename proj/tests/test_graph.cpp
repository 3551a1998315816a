#include <gtest/gtest.h>

#include <algorithm>
#include <queue>
#include <set>

#include "flowdex/graph.hpp"
#include "flowdex/named_graphs.hpp"

using namespace flowdex;

namespace {

// Connectivity by plain BFS, ignoring one edge.
bool connected_without(const MultiGraph& g, int skip) {
    std::vector<bool> seen(static_cast<std::size_t>(g.vertex_count()), false);
    std::queue<int> q;
    q.push(0);
    seen[0] = true;
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int e = 0; e < g.edge_count(); ++e) {
            if (e == skip) continue;
            auto [a, b] = g.edge(e);
            int w = a == v ? b : b == v ? a : -1;
            if (w >= 0 && !seen[w]) seen[w] = true, q.push(w);
        }
    }
    return std::all_of(seen.begin(), seen.end(), [](bool s) { return s; });
}

void expect_rows_conservative(const MultiGraph& g, const CycleBasis& b) {
    for (const auto& row : b.rows) {
        std::vector<int> excess(static_cast<std::size_t>(g.vertex_count()), 0);
        for (int e = 0; e < g.edge_count(); ++e) {
            excess[g.edge(e).a] -= row[e];
            excess[g.edge(e).b] += row[e];
        }
        for (int x : excess) EXPECT_EQ(x, 0);
    }
}

}  // namespace

TEST(ParseGraph, Triangle) {
    auto g = parse_graph("3 3\n0 1\n1 2\n2 0\n");
    EXPECT_EQ(g.vertex_count(), 3);
    EXPECT_EQ(g.edge_count(), 3);
    EXPECT_EQ(g.edge(2).a, 2);
    EXPECT_EQ(g.edge(2).b, 0);
}

TEST(ParseGraph, PetersenIsCubic) {
    auto g = graphs::petersen();
    auto h = parse_graph(to_text(g));
    EXPECT_EQ(h.vertex_count(), 10);
    EXPECT_EQ(h.edge_count(), 15);
    for (int v = 0; v < 10; ++v) EXPECT_EQ(h.degree(v), 3);
    EXPECT_EQ(g, h);
}

TEST(ParseGraph, CommentsAndBlankLines) {
    auto g = parse_graph("# header\n\n2 2\n# parallel pair\n0 1\n1 0\n");
    EXPECT_EQ(g.edge_count(), 2);
    EXPECT_EQ(g.degree(0), 2);
}

TEST(ParseGraph, LoopRejected) {
    try {
        parse_graph("2 1\n0 0\n");
        FAIL() << "loop accepted";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.kind(), ParseError::Kind::Loop);
        EXPECT_EQ(e.line(), 2u);
    }
}

TEST(ParseGraph, OutOfRangeAndTruncated) {
    try {
        parse_graph("2 1\n0 2\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.kind(), ParseError::Kind::VertexOutOfRange);
    }
    try {
        parse_graph("3 3\n0 1\n1 2\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.kind(), ParseError::Kind::Truncated);
    }
    EXPECT_THROW(parse_graph("3 x\n"), ParseError);
    EXPECT_THROW(MultiGraph(2, {{1, 1}}), InvalidArgument);
}

TEST(Bridges, PathTriangleDipole) {
    EXPECT_EQ(bridges(graphs::path(3)), (std::vector<int>{0, 1}));
    EXPECT_TRUE(bridges(graphs::triangle()).empty());
    EXPECT_TRUE(bridges(graphs::dipole(2)).empty());
    EXPECT_EQ(bridges(MultiGraph(3, {{0, 1}, {0, 1}, {1, 2}})), (std::vector<int>{2}));
}

TEST(Bridges, MatchesEdgeRemoval) {
    for (const auto& g : {graphs::petersen(), graphs::k4(), graphs::cube(), graphs::k33(),
                          MultiGraph(6, {{0, 1}, {1, 2}, {2, 0}, {2, 3}, {3, 4}, {4, 5}, {5, 3}})}) {
        auto b = bridges(g);
        std::set<int> bs(b.begin(), b.end());
        for (int e = 0; e < g.edge_count(); ++e) EXPECT_EQ(bs.count(e) == 1, !connected_without(g, e)) << e;
    }
}

TEST(SpanningStructure, Triangle) {
    auto g = graphs::triangle();
    auto b = spanning_structure(g);
    EXPECT_EQ(b.tree_edges, (std::vector<int>{0, 2}));
    ASSERT_EQ(b.cotree_edges.size(), 1u);
    EXPECT_EQ(b.cotree_edges[0], 1);
    for (int x : b.rows[0]) EXPECT_NE(x, 0);
    expect_rows_conservative(g, b);
}

TEST(SpanningStructure, CotreeCounts) {
    EXPECT_EQ(spanning_structure(graphs::petersen()).cotree_edges.size(), 6u);
    EXPECT_EQ(spanning_structure(graphs::k4()).cotree_edges.size(), 3u);
    EXPECT_TRUE(spanning_structure(graphs::path(5)).cotree_edges.empty());
    auto two = MultiGraph(6, {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3}});
    auto b = spanning_structure(two);
    EXPECT_EQ(b.component_count, 2);
    EXPECT_EQ(b.cotree_edges.size(), 2u);
}

TEST(SpanningStructure, RowsConservativeAndCoverBridgeless) {
    for (const auto& g : {graphs::petersen(), graphs::k4(), graphs::cube(), graphs::k33(), graphs::dipole(4)}) {
        auto b = spanning_structure(g);
        expect_rows_conservative(g, b);
        for (int e = 0; e < g.edge_count(); ++e) {
            bool covered = std::any_of(b.rows.begin(), b.rows.end(), [e](const auto& r) { return r[e] != 0; });
            EXPECT_TRUE(covered) << e;
        }
    }
}

TEST(ContractK4, Examples) {
    EXPECT_TRUE(contract_check_k4(graphs::k4()));
    EXPECT_FALSE(contract_check_k4(graphs::cycle(4)));
    EXPECT_TRUE(contract_check_k4(graphs::subdivide(graphs::k4())));
    EXPECT_TRUE(contract_check_k4(graphs::petersen()));
    EXPECT_FALSE(contract_check_k4(graphs::cycle(6)));
}

TEST(ContractK4, BudgetExceeded) {
    ContractionConfig cfg;
    cfg.partition_budget = 10;
    EXPECT_THROW(contract_check_k4(graphs::petersen(), cfg), BudgetExceeded);
}

TEST(Orientation, ReferenceAndReverse) {
    auto g = graphs::triangle();
    auto o = Orientation::reference(g);
    EXPECT_TRUE(o.valid_for(g));
    EXPECT_TRUE(o.agrees_with_reference(g, 1));
    o.reverse(1);
    EXPECT_FALSE(o.agrees_with_reference(g, 1));
    EXPECT_EQ(o[1].tail, 2);
    EXPECT_TRUE(o.valid_for(g));
}

TEST(EdgeSubgraph, KeepsParentIndices) {
    auto g = graphs::k4();
    auto sub = edge_subgraph(g, std::vector<int>{1, 3, 5});
    EXPECT_EQ(sub.graph.edge_count(), 3);
    EXPECT_EQ(sub.parent_edge, (std::vector<int>{1, 3, 5}));
    for (int i = 0; i < 3; ++i) EXPECT_EQ(sub.graph.edge(i), g.edge(sub.parent_edge[i]));
}

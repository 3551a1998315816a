#pragma once

// Directed even subgraphs, the two-cycle decomposition of positive 3-flows,
// cycle pairs from 4-flows, and oriented k-cycle 2l-covers.

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "flowdex/errors.hpp"
#include "flowdex/graph.hpp"
#include "flowdex/integer_flows.hpp"
#include "flowdex/report.hpp"

namespace flowdex {

struct DirectedArc {
    int edge = 0;
    bool forward = true;  // endpoint_a -> endpoint_b

    friend bool operator==(const DirectedArc&, const DirectedArc&) = default;
};

/// Arc set with in-degree equal to out-degree at every vertex. Arcs are kept sorted by edge.
struct DirectedEvenSubgraph {
    std::vector<DirectedArc> arcs;

    bool empty() const noexcept { return arcs.empty(); }
    std::size_t size() const noexcept { return arcs.size(); }

    std::optional<bool> direction_of(int edge) const {
        auto it = std::lower_bound(arcs.begin(), arcs.end(), edge,
                                   [](const DirectedArc& a, int e) { return a.edge < e; });
        if (it == arcs.end() || it->edge != edge) return std::nullopt;
        return it->forward;
    }

    std::vector<int> edges() const {
        std::vector<int> out;
        for (const auto& a : arcs) out.push_back(a.edge);
        return out;
    }

    void normalize() {
        std::sort(arcs.begin(), arcs.end(), [](const DirectedArc& x, const DirectedArc& y) { return x.edge < y.edge; });
    }
};

inline Report check_directed_even(const MultiGraph& g, const DirectedEvenSubgraph& c) {
    Report report;
    std::vector<int> balance(static_cast<std::size_t>(g.vertex_count()), 0);
    std::vector<char> seen(static_cast<std::size_t>(g.edge_count()), 0);
    for (const auto& arc : c.arcs) {
        if (arc.edge < 0 || arc.edge >= g.edge_count()) {
            report.fail("arc references missing edge " + std::to_string(arc.edge));
            continue;
        }
        if (seen[arc.edge]++) report.fail("edge " + std::to_string(arc.edge) + " appears twice");
        const Edge& e = g.edge(arc.edge);
        int tail = arc.forward ? e.a : e.b;
        int head = arc.forward ? e.b : e.a;
        ++balance[tail];
        --balance[head];
    }
    for (int v = 0; v < g.vertex_count(); ++v)
        if (balance[v] != 0) report.fail("unbalanced at vertex " + std::to_string(v));
    return report;
}

/// Orients an even edge set as a union of closed trails (greedy walks).
inline DirectedEvenSubgraph orient_even_subgraph(const MultiGraph& g, const std::vector<int>& edge_set) {
    std::vector<char> in_set(static_cast<std::size_t>(g.edge_count()), 0), used(static_cast<std::size_t>(g.edge_count()), 0);
    std::vector<int> deg(static_cast<std::size_t>(g.vertex_count()), 0);
    for (int e : edge_set) {
        if (in_set[e]) throw InvalidArgument("edge " + std::to_string(e) + " listed twice");
        in_set[e] = 1;
        ++deg[g.edge(e).a];
        ++deg[g.edge(e).b];
    }
    for (int v = 0; v < g.vertex_count(); ++v)
        if (deg[v] % 2 != 0) throw InvalidArgument("odd degree at vertex " + std::to_string(v));

    DirectedEvenSubgraph out;
    auto next_unused = [&](int v) -> int {
        for (int e : g.incident(v))
            if (in_set[e] && !used[e]) return e;
        return -1;
    };
    for (int s = 0; s < g.vertex_count(); ++s) {
        while (next_unused(s) != -1) {
            int cur = s;
            do {
                int e = next_unused(cur);
                if (e == -1) throw InternalConsistency("greedy walk stuck away from its start");
                used[e] = 1;
                out.arcs.push_back({e, g.edge(e).a == cur});
                cur = g.other_end(e, cur);
            } while (cur != s);
        }
    }
    out.normalize();
    return out;
}

/// Two directed cycles covering each edge of a positive {1,2}-valued flow exactly f(e) times.
inline std::pair<DirectedEvenSubgraph, DirectedEvenSubgraph> lty_decompose_3(const MultiGraph& g, const IntFlow& flow,
                                                                            const SearchConfig& config = {}) {
    if (flow.modulus) throw InvalidArgument("lty_decompose_3 needs an integer-valued flow");
    const int m = g.edge_count();
    if (static_cast<int>(flow.values.size()) != m || !flow.orientation.valid_for(g))
        throw InvalidArgument("flow does not match the graph");
    std::vector<long long> excess(static_cast<std::size_t>(g.vertex_count()), 0);
    for (int e = 0; e < m; ++e) {
        if (flow.values[e] != 1 && flow.values[e] != 2)
            throw InvalidArgument("flow value at edge " + std::to_string(e) + " is not 1 or 2");
        excess[flow.orientation[e].tail] += flow.values[e];
        excess[flow.orientation[e].head] -= flow.values[e];
    }
    for (long long x : excess)
        if (x != 0) throw InvalidArgument("flow is not conservative");

    // x_e in {0,1}; forced 1 where f = 2. Balance of x at every vertex.
    std::vector<int> x(static_cast<std::size_t>(m), 0), balance(static_cast<std::size_t>(g.vertex_count()), 0),
        remaining(static_cast<std::size_t>(g.vertex_count()), 0);
    std::vector<int> free_edges;
    for (int e = 0; e < m; ++e) {
        const Arc& a = flow.orientation[e];
        if (flow.values[e] == 2) {
            x[e] = 1;
            ++balance[a.tail];
            --balance[a.head];
        } else {
            free_edges.push_back(e);
            ++remaining[a.tail];
            ++remaining[a.head];
        }
    }
    auto feasible = [&](int v) { return std::abs(balance[v]) <= remaining[v]; };
    for (int v = 0; v < g.vertex_count(); ++v)
        if (!feasible(v)) throw InternalConsistency("forced edges already unbalanced");

    std::uint64_t nodes = 0;
    auto rec = [&](auto&& self, std::size_t i) -> bool {
        if (i == free_edges.size()) return true;
        int e = free_edges[i];
        const Arc& a = flow.orientation[e];
        --remaining[a.tail];
        --remaining[a.head];
        for (int choice : {1, 0}) {
            if (++nodes > config.node_budget) throw BudgetExceeded(config.node_budget);
            x[e] = choice;
            balance[a.tail] += choice;
            balance[a.head] -= choice;
            if (feasible(a.tail) && feasible(a.head) && self(self, i + 1)) return true;
            balance[a.tail] -= choice;
            balance[a.head] += choice;
        }
        x[e] = 0;
        ++remaining[a.tail];
        ++remaining[a.head];
        return false;
    };
    if (!rec(rec, 0)) throw InternalConsistency("positive 3-flow admits no two-cycle decomposition");

    DirectedEvenSubgraph c1, c2;
    for (int e = 0; e < m; ++e) {
        bool fwd = flow.orientation.agrees_with_reference(g, e);
        if (x[e] == 1) c1.arcs.push_back({e, fwd});
        if (flow.values[e] - x[e] == 1) c2.arcs.push_back({e, fwd});
    }
    return {std::move(c1), std::move(c2)};
}

/// Two even subgraphs whose union is E(g), from a nowhere-zero Z2 x Z2 flow.
inline std::pair<std::vector<int>, std::vector<int>> cycles_from_4nzf(const MultiGraph& g, const SearchConfig& config = {}) {
    auto flow = find_product_flow(g, {2, 2}, config);
    if (!flow) throw NotFound("graph has no 4-NZF");
    auto e1 = flow->support(0), e2 = flow->support(1);
    if (e1.empty()) std::swap(e1, e2);
    return {std::move(e1), std::move(e2)};
}

// ---------------------------------------------------------------------------
// Oriented cycle covers

/// k directed even subgraphs covering every edge l times in each direction.
struct OrientedCycleCover {
    int k = 0;
    int l = 0;
    std::vector<DirectedEvenSubgraph> cycles;
};

inline Report verify_occ(const MultiGraph& g, const OrientedCycleCover& occ) {
    Report report;
    if (static_cast<int>(occ.cycles.size()) != occ.k) {
        report.fail("expected " + std::to_string(occ.k) + " cycles, found " + std::to_string(occ.cycles.size()));
        return report;
    }
    std::vector<int> fwd(static_cast<std::size_t>(g.edge_count()), 0), bwd(static_cast<std::size_t>(g.edge_count()), 0);
    for (int i = 0; i < occ.k; ++i) {
        auto r = check_directed_even(g, occ.cycles[i]);
        for (auto& v : r.violations) report.fail("cycle " + std::to_string(i) + ": " + v);
        for (const auto& arc : occ.cycles[i].arcs) {
            if (arc.edge < 0 || arc.edge >= g.edge_count()) continue;
            (arc.forward ? fwd : bwd)[arc.edge]++;
        }
    }
    for (int e = 0; e < g.edge_count(); ++e)
        if (fwd[e] != occ.l || bwd[e] != occ.l)
            report.fail("edge " + std::to_string(e) + " covered " + std::to_string(fwd[e]) + " forward and " +
                        std::to_string(bwd[e]) + " backward, expected " + std::to_string(occ.l) + " each");
    return report;
}

/// Complete backtracking search for a (k, 2l)-OCC.
///
/// Cycles are unlabeled: they are numbered in order of first use along the edge
/// order, with new forward cycles numbered before new backward ones on the same
/// edge. This fixes the first edge to forward {0..l-1}, backward {l..2l-1}.
inline std::optional<OrientedCycleCover> find_occ(const MultiGraph& g, int k, int l, const SearchConfig& config = {}) {
    if (k < 1 || l < 1) throw InvalidArgument("k and l must be positive");
    if (k > 30) throw InvalidArgument("k too large");
    const int n = g.vertex_count();
    const int m = g.edge_count();
    OrientedCycleCover cover{k, l, std::vector<DirectedEvenSubgraph>(static_cast<std::size_t>(k))};
    if (m == 0) return cover;
    if (2 * l > k || !is_bridgeless(g)) return std::nullopt;

    // BFS edge order so that vertices close early.
    std::vector<int> order;
    {
        std::vector<char> listed(static_cast<std::size_t>(m), 0), seen(static_cast<std::size_t>(n), 0);
        std::vector<int> queue;
        for (int s = 0; s < n; ++s) {
            if (seen[s] || g.degree(s) == 0) continue;
            seen[s] = 1;
            queue.assign(1, s);
            for (std::size_t qi = 0; qi < queue.size(); ++qi) {
                int v = queue[qi];
                for (int e : g.incident(v)) {
                    if (!listed[e]) {
                        listed[e] = 1;
                        order.push_back(e);
                    }
                    int w = g.other_end(e, v);
                    if (!seen[w]) {
                        seen[w] = 1;
                        queue.push_back(w);
                    }
                }
            }
        }
    }

    // Candidate (forward, backward) masks, disjoint, l bits each.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> choices;
    const std::uint32_t full = (k == 32) ? ~0u : ((1u << k) - 1);
    for (std::uint32_t f = 0; f <= full; ++f) {
        if (std::popcount(f) != l) continue;
        for (std::uint32_t b = 0; b <= full; ++b)
            if (std::popcount(b) == l && (f & b) == 0) choices.emplace_back(f, b);
    }

    std::vector<std::vector<int>> balance(static_cast<std::size_t>(k), std::vector<int>(static_cast<std::size_t>(n), 0));
    std::vector<int> remaining(static_cast<std::size_t>(n), 0);
    for (int v = 0; v < n; ++v) remaining[v] = g.degree(v);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> assigned(static_cast<std::size_t>(m));
    std::uint64_t nodes = 0;

    auto apply = [&](int e, std::uint32_t f, std::uint32_t b, int dir) {
        const Edge& ed = g.edge(e);
        for (int c = 0; c < k; ++c) {
            int s = ((f >> c) & 1u) ? 1 : (((b >> c) & 1u) ? -1 : 0);
            balance[c][ed.a] += dir * s;
            balance[c][ed.b] -= dir * s;
        }
    };
    auto ok_at = [&](int v) {
        for (int c = 0; c < k; ++c)
            if (std::abs(balance[c][v]) > remaining[v]) return false;
        return true;
    };
    // New cycles must be exactly used, used+1, ..., forward ones first.
    auto canonical = [&](std::uint32_t f, std::uint32_t b, int used, int& new_used) {
        const std::uint32_t old_mask = used >= 32 ? ~0u : ((1u << used) - 1);
        std::uint32_t nf = f & ~old_mask, nb = b & ~old_mask;
        int cf = std::popcount(nf), cb = std::popcount(nb);
        std::uint32_t want_f = ((1u << cf) - 1) << used;
        std::uint32_t want_b = ((1u << cb) - 1) << (used + cf);
        if (nf != want_f || nb != want_b) return false;
        new_used = used + cf + cb;
        return true;
    };

    auto rec = [&](auto&& self, std::size_t i, int used) -> bool {
        if (i == order.size()) return true;
        int e = order[i];
        const Edge& ed = g.edge(e);
        --remaining[ed.a];
        --remaining[ed.b];
        for (auto [f, b] : choices) {
            int new_used = used;
            if (!canonical(f, b, used, new_used)) continue;
            if (++nodes > config.node_budget) throw BudgetExceeded(config.node_budget);
            apply(e, f, b, +1);
            if (ok_at(ed.a) && ok_at(ed.b)) {
                assigned[e] = {f, b};
                if (self(self, i + 1, new_used)) return true;
            }
            apply(e, f, b, -1);
        }
        ++remaining[ed.a];
        ++remaining[ed.b];
        return false;
    };
    if (!rec(rec, 0, 0)) return std::nullopt;

    for (int e = 0; e < m; ++e) {
        auto [f, b] = assigned[e];
        for (int c = 0; c < k; ++c) {
            if ((f >> c) & 1u) cover.cycles[c].arcs.push_back({e, true});
            if ((b >> c) & 1u) cover.cycles[c].arcs.push_back({e, false});
        }
    }
    return cover;
}

/// Cover text: "flowdex-occ v1", "k: K", "l: L", then per cycle a "cycle i:" line
/// followed by "edge dir" lines, dir '+' for endpoint_a -> endpoint_b and '-' otherwise.
inline std::string to_text(const OrientedCycleCover& occ) {
    std::ostringstream os;
    os << "flowdex-occ v1\nk: " << occ.k << "\nl: " << occ.l << '\n';
    for (int i = 0; i < occ.k; ++i) {
        os << "cycle " << i << ":\n";
        for (const auto& arc : occ.cycles[i].arcs) os << arc.edge << ' ' << (arc.forward ? '+' : '-') << '\n';
    }
    return os.str();
}

inline OrientedCycleCover parse_cover(std::string_view text) {
    detail::LineReader reader(text);
    std::string_view line;
    auto expect = [&](std::string_view what) {
        if (!reader.next(line)) throw ParseError(ParseError::Kind::MissingSection, reader.line_number(), "missing " + std::string(what));
    };
    auto header_int = [&](std::string_view key) {
        expect(key);
        auto tok = detail::split_ws(line);
        if (tok.size() != 2 || tok[0] != std::string(key) + ":")
            throw ParseError(ParseError::Kind::Malformed, reader.line_number(), "expected \"" + std::string(key) + ": <int>\"");
        auto v = detail::to_int(tok[1]);
        if (!v || *v < 1) throw ParseError(ParseError::Kind::Malformed, reader.line_number(), "bad integer");
        return static_cast<int>(*v);
    };
    expect("header");
    if (detail::trim(line) != "flowdex-occ v1")
        throw ParseError(ParseError::Kind::Malformed, reader.line_number(), "expected \"flowdex-occ v1\"");
    OrientedCycleCover occ;
    occ.k = header_int("k");
    occ.l = header_int("l");
    int current = -1;
    while (reader.next(line)) {
        auto t = detail::trim(line);
        if (t.empty()) continue;
        if (t.starts_with("cycle ")) {
            ++current;
            if (t != "cycle " + std::to_string(current) + ":")
                throw ParseError(ParseError::Kind::Malformed, reader.line_number(), "expected \"cycle " + std::to_string(current) + ":\"");
            occ.cycles.emplace_back();
            continue;
        }
        auto tok = detail::split_ws(t);
        if (current < 0 || tok.size() != 2 || (tok[1] != "+" && tok[1] != "-"))
            throw ParseError(ParseError::Kind::Malformed, reader.line_number(), "expected \"edge +|-\"");
        auto e = detail::to_int(tok[0]);
        if (!e || *e < 0) throw ParseError(ParseError::Kind::Malformed, reader.line_number(), "bad edge index");
        occ.cycles.back().arcs.push_back({static_cast<int>(*e), tok[1] == "+"});
    }
    if (static_cast<int>(occ.cycles.size()) != occ.k)
        throw ParseError(ParseError::Kind::Truncated, reader.line_number(),
                         "expected " + std::to_string(occ.k) + " cycles, found " + std::to_string(occ.cycles.size()));
    for (auto& c : occ.cycles) c.normalize();
    return occ;
}

}  // namespace flowdex

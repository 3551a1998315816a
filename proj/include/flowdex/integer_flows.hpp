#pragma once

// Exhaustive integer and product-group nowhere-zero flow search.
//
// A flow is determined by its values on the cotree edges of a spanning forest:
// every tree edge carries the signed sum of the cotree values whose fundamental
// cycle passes through it. The search enumerates cotree values and checks each
// tree edge as soon as the last cotree variable touching it is fixed.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "flowdex/errors.hpp"
#include "flowdex/graph.hpp"
#include "flowdex/report.hpp"

namespace flowdex {

struct SearchConfig {
    std::uint64_t node_budget = 100'000'000;
};

/// Integer (modulus absent) or Z_k-valued flow. Values are read along `orientation`.
struct IntFlow {
    Orientation orientation;
    std::vector<long long> values;
    std::optional<int> modulus;
};

/// Z_{k1} x ... x Z_{kt}-valued flow; values[e][i] in [0, moduli[i]).
struct ProductGroupFlow {
    Orientation orientation;
    std::vector<int> moduli;
    std::vector<std::vector<int>> values;

    /// Edges on which component i is nonzero, ascending.
    std::vector<int> support(std::size_t i) const {
        std::vector<int> out;
        for (std::size_t e = 0; e < values.size(); ++e)
            if (values[e][i] != 0) out.push_back(static_cast<int>(e));
        return out;
    }
};

namespace detail {

/// Shared cotree enumeration. modulus 0 on a component means "integer, bounded by int_bound".
class CotreeSearch {
public:
    CotreeSearch(const MultiGraph& g, std::vector<int> moduli, long long int_bound, const SearchConfig& config)
        : g_(g), moduli_(std::move(moduli)), int_bound_(int_bound), config_(config), basis_(spanning_structure(g)) {
        build_candidates();
    }

    /// Values per edge (reference orientation), or nullopt if no nowhere-zero flow exists.
    std::optional<std::vector<std::vector<long long>>> run() {
        const int m = g_.edge_count();
        const std::size_t t = moduli_.size();
        values_.assign(static_cast<std::size_t>(m), std::vector<long long>(t, 0));
        int comp_count = 0;
        auto vcomp = components(g_, &comp_count);

        for (int c = 0; c < comp_count; ++c) {
            std::vector<std::size_t> vars;
            for (std::size_t i = 0; i < basis_.cotree_edges.size(); ++i)
                if (vcomp[g_.edge(basis_.cotree_edges[i]).a] == c) vars.push_back(i);
            std::vector<int> tree;
            for (int e : basis_.tree_edges)
                if (vcomp[g_.edge(e).a] == c) tree.push_back(e);
            if (!search_component(std::move(vars), tree)) return std::nullopt;
        }
        return values_;
    }

    std::uint64_t nodes() const noexcept { return nodes_; }

private:
    bool valid(const std::vector<long long>& v) const {
        bool any_nonzero = false;
        for (std::size_t i = 0; i < moduli_.size(); ++i) {
            if (moduli_[i] == 0) {
                long long a = v[i] < 0 ? -v[i] : v[i];
                if (a < 1 || a > int_bound_) return false;
                any_nonzero = true;
            } else {
                long long r = ((v[i] % moduli_[i]) + moduli_[i]) % moduli_[i];
                if (r != 0) any_nonzero = true;
            }
        }
        return any_nonzero;
    }

    void build_candidates() {
        const std::size_t t = moduli_.size();
        if (t == 1 && moduli_[0] == 0) {
            for (long long a = 1; a <= int_bound_; ++a) {
                candidates_.push_back({a});
                candidates_.push_back({-a});
            }
            return;
        }
        // All nonzero tuples of the product group, fewest nonzero components first, then lexicographic.
        std::vector<long long> cur(t, 0);
        auto rec = [&](auto&& self, std::size_t i) -> void {
            if (i == t) {
                if (std::any_of(cur.begin(), cur.end(), [](long long x) { return x != 0; })) candidates_.push_back(cur);
                return;
            }
            for (long long x = 0; x < moduli_[i]; ++x) {
                cur[i] = x;
                self(self, i + 1);
            }
        };
        rec(rec, 0);
        std::stable_sort(candidates_.begin(), candidates_.end(), [](const auto& x, const auto& y) {
            auto nz = [](const auto& v) { return std::count_if(v.begin(), v.end(), [](long long a) { return a != 0; }); };
            return nz(x) < nz(y);
        });
    }

    bool search_component(std::vector<std::size_t> vars, const std::vector<int>& tree) {
        // Fail-first: long fundamental cycles constrain more tree edges.
        std::stable_sort(vars.begin(), vars.end(), [&](std::size_t x, std::size_t y) {
            return basis_.cycle_length(x) > basis_.cycle_length(y);
        });
        const std::size_t depth_count = vars.size();
        std::vector<std::vector<int>> check_at(depth_count);
        for (int e : tree) {
            std::optional<std::size_t> last;
            for (std::size_t d = 0; d < depth_count; ++d)
                if (basis_.rows[vars[d]][e] != 0) last = d;
            if (!last) return false;  // bridge: forced to zero
            check_at[*last].push_back(e);
        }
        // Sparse tree-edge touches per variable.
        std::vector<std::vector<std::pair<int, int>>> touches(depth_count);
        for (std::size_t d = 0; d < depth_count; ++d)
            for (int e : tree)
                if (int s = basis_.rows[vars[d]][e]; s != 0) touches[d].emplace_back(e, s);

        const std::size_t t = moduli_.size();
        auto apply = [&](std::size_t d, const std::vector<long long>& val, int dir) {
            for (auto [e, s] : touches[d])
                for (std::size_t i = 0; i < t; ++i) values_[e][i] += dir * s * val[i];
        };

        auto rec = [&](auto&& self, std::size_t d) -> bool {
            if (d == depth_count) return true;
            const int cot = basis_.cotree_edges[vars[d]];
            for (const auto& val : candidates_) {
                if (++nodes_ > config_.node_budget) throw BudgetExceeded(config_.node_budget);
                values_[cot] = val;
                apply(d, val, +1);
                bool ok = std::all_of(check_at[d].begin(), check_at[d].end(), [&](int e) { return valid(values_[e]); });
                if (ok && self(self, d + 1)) return true;
                apply(d, val, -1);
            }
            values_[cot].assign(t, 0);
            return false;
        };
        return rec(rec, 0);
    }

    const MultiGraph& g_;
    std::vector<int> moduli_;
    long long int_bound_;
    SearchConfig config_;
    CycleBasis basis_;
    std::vector<std::vector<long long>> candidates_;
    std::vector<std::vector<long long>> values_;
    std::uint64_t nodes_ = 0;
};

}  // namespace detail

/// Some nowhere-zero k-flow (1 <= |f(e)| <= k-1) in reference orientation, or nullopt.
/// Throws BudgetExceeded when the enumeration is cut short.
inline std::optional<IntFlow> find_int_nzf(const MultiGraph& g, int k, const SearchConfig& config = {}) {
    if (k < 2) throw InvalidArgument("k must be at least 2");
    detail::CotreeSearch search(g, {0}, k - 1, config);
    auto values = search.run();
    if (!values) return std::nullopt;
    IntFlow flow{Orientation::reference(g), {}, std::nullopt};
    for (const auto& v : *values) flow.values.push_back(v[0]);
    return flow;
}

/// Some jointly nowhere-zero flow over Z_{moduli[0]} x ... in reference orientation, or nullopt.
inline std::optional<ProductGroupFlow> find_product_flow(const MultiGraph& g, const std::vector<int>& moduli,
                                                         const SearchConfig& config = {}) {
    if (moduli.empty()) throw InvalidArgument("at least one modulus required");
    for (int k : moduli)
        if (k < 2) throw InvalidArgument("moduli must be at least 2");
    detail::CotreeSearch search(g, moduli, 0, config);
    auto values = search.run();
    if (!values) return std::nullopt;
    ProductGroupFlow flow{Orientation::reference(g), moduli, {}};
    for (const auto& v : *values) {
        std::vector<int> tuple;
        for (std::size_t i = 0; i < moduli.size(); ++i)
            tuple.push_back(static_cast<int>(((v[i] % moduli[i]) + moduli[i]) % moduli[i]));
        flow.values.push_back(std::move(tuple));
    }
    return flow;
}

/// Exact check of orientation, nowhere-zero, magnitude bound k and conservation.
inline Report verify_int_flow(const MultiGraph& g, const IntFlow& flow, int k) {
    Report report;
    if (!flow.orientation.valid_for(g)) {
        report.fail("orientation does not match the graph");
        return report;
    }
    if (static_cast<int>(flow.values.size()) != g.edge_count()) {
        report.fail("expected " + std::to_string(g.edge_count()) + " values, got " + std::to_string(flow.values.size()));
        return report;
    }
    const int mod = flow.modulus.value_or(0);
    std::vector<long long> excess(static_cast<std::size_t>(g.vertex_count()), 0);
    for (int e = 0; e < g.edge_count(); ++e) {
        long long v = flow.values[e];
        if (mod == 0) {
            if (v == 0)
                report.fail("zero value at edge " + std::to_string(e));
            else if (std::llabs(v) > k - 1)
                report.fail("value " + std::to_string(v) + " at edge " + std::to_string(e) + " exceeds bound " +
                            std::to_string(k - 1));
        } else if (v % mod == 0) {
            report.fail("zero value at edge " + std::to_string(e));
        }
        excess[flow.orientation[e].tail] += v;
        excess[flow.orientation[e].head] -= v;
    }
    for (int v = 0; v < g.vertex_count(); ++v) {
        long long x = mod == 0 ? excess[v] : excess[v] % mod;
        if (x != 0) report.fail("conservation violated at vertex " + std::to_string(v));
    }
    return report;
}

inline Report verify_product_flow(const MultiGraph& g, const ProductGroupFlow& flow) {
    Report report;
    if (!flow.orientation.valid_for(g) || static_cast<int>(flow.values.size()) != g.edge_count()) {
        report.fail("flow does not match the graph");
        return report;
    }
    const std::size_t t = flow.moduli.size();
    std::vector<std::vector<long long>> excess(static_cast<std::size_t>(g.vertex_count()), std::vector<long long>(t, 0));
    for (int e = 0; e < g.edge_count(); ++e) {
        const auto& val = flow.values[e];
        if (val.size() != t) {
            report.fail("edge " + std::to_string(e) + " has the wrong tuple length");
            continue;
        }
        bool nonzero = false;
        for (std::size_t i = 0; i < t; ++i) {
            if (val[i] % flow.moduli[i] != 0) nonzero = true;
            excess[flow.orientation[e].tail][i] += val[i];
            excess[flow.orientation[e].head][i] -= val[i];
        }
        if (!nonzero) report.fail("zero value at edge " + std::to_string(e));
    }
    for (int v = 0; v < g.vertex_count(); ++v)
        for (std::size_t i = 0; i < t; ++i)
            if (excess[v][i] % flow.moduli[i] != 0)
                report.fail("conservation violated at vertex " + std::to_string(v) + " in component " + std::to_string(i));
    return report;
}

/// Reverses every edge carrying a negative value so that all values become positive.
inline IntFlow normalize_positive(IntFlow flow) {
    if (flow.modulus) throw InvalidArgument("normalize_positive needs an integer-valued flow");
    for (int e = 0; e < static_cast<int>(flow.values.size()); ++e) {
        if (flow.values[e] == 0) throw InvalidArgument("zero value at edge " + std::to_string(e));
        if (flow.values[e] < 0) {
            flow.values[e] = -flow.values[e];
            flow.orientation.reverse(e);
        }
    }
    return flow;
}

/// Covering pair from a Z2 x Z3 flow: G2 = Z2 support (an even subgraph), G1 = Z3 support
/// carrying a 3-NZF. g1_flow is indexed by position in g1_edges.
struct SixFlowDecomposition {
    std::vector<int> g1_edges;
    std::vector<int> g2_edges;
    IntFlow g1_flow;
    ProductGroupFlow group_flow;
};

/// An even graph gets G1 empty and G2 = E.
inline SixFlowDecomposition six_flow_decomposition(const MultiGraph& g, const SearchConfig& config = {}) {
    bool even = g.edge_count() > 0;
    for (int v = 0; v < g.vertex_count(); ++v) even = even && g.degree(v) % 2 == 0;
    std::optional<ProductGroupFlow> group;
    if (even)
        group = ProductGroupFlow{Orientation::reference(g), {2, 3},
                                 std::vector<std::vector<int>>(static_cast<std::size_t>(g.edge_count()), {1, 0})};
    else
        group = find_product_flow(g, {2, 3}, config);
    if (!group) throw NotFound("graph has no nowhere-zero Z2 x Z3 flow (it has a bridge)");
    SixFlowDecomposition dec;
    dec.g2_edges = group->support(0);
    dec.g1_edges = group->support(1);
    dec.group_flow = std::move(*group);
    auto sub = edge_subgraph(g, dec.g1_edges);
    auto f1 = find_int_nzf(sub.graph, 3, config);
    if (!f1) throw InternalConsistency("support of a nowhere-zero Z3 flow has no 3-NZF");
    dec.g1_flow = std::move(*f1);
    return dec;
}

/// Integer 6-NZF f1 + 3 f2 assembled from a decomposition (f2 a 2-NZF on G2).
inline IntFlow integer_six_flow(const MultiGraph& g, const SixFlowDecomposition& dec, const SearchConfig& config = {}) {
    std::vector<long long> ref(static_cast<std::size_t>(g.edge_count()), 0);
    auto sub1 = edge_subgraph(g, dec.g1_edges);
    for (std::size_t i = 0; i < dec.g1_edges.size(); ++i) {
        int e = dec.g1_edges[i];
        long long v = dec.g1_flow.values[i];
        ref[e] += dec.g1_flow.orientation.agrees_with_reference(sub1.graph, static_cast<int>(i)) ? v : -v;
    }
    auto sub2 = edge_subgraph(g, dec.g2_edges);
    auto f2 = find_int_nzf(sub2.graph, 2, config);
    if (!f2) throw InternalConsistency("Z2 support is not an even subgraph");
    for (std::size_t i = 0; i < dec.g2_edges.size(); ++i) {
        int e = dec.g2_edges[i];
        long long v = 3 * f2->values[i];
        ref[e] += f2->orientation.agrees_with_reference(sub2.graph, static_cast<int>(i)) ? v : -v;
    }
    return IntFlow{Orientation::reference(g), std::move(ref), std::nullopt};
}

}  // namespace flowdex

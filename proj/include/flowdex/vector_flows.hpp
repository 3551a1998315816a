#pragma once

// Vector-valued flows: symbolic vector sets, composition of cycle flows,
// the constructions from 3-, 4- and 6-flows and oriented cycle covers,
// certificates, and norm-transfer bounds.

#include <algorithm>
#include <bit>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "flowdex/cycles.hpp"
#include "flowdex/errors.hpp"
#include "flowdex/graph.hpp"
#include "flowdex/integer_flows.hpp"
#include "flowdex/pnorm.hpp"
#include "flowdex/report.hpp"

namespace flowdex {

using Vec = std::vector<double>;

inline Vec operator+(Vec x, const Vec& y) {
    if (x.size() != y.size()) throw InvalidArgument("dimension mismatch");
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += y[i];
    return x;
}

inline Vec operator-(Vec x, const Vec& y) {
    if (x.size() != y.size()) throw InvalidArgument("dimension mismatch");
    for (std::size_t i = 0; i < x.size(); ++i) x[i] -= y[i];
    return x;
}

inline Vec operator*(double s, Vec x) {
    for (double& v : x) v *= s;
    return x;
}

// ---------------------------------------------------------------------------
// Symbolic vector sets

/// Integer combinations of t formal vectors; each row is sum_i rows[r][i] * P_i.
struct OmegaSet {
    int t = 0;
    std::vector<std::vector<int>> rows;
    std::vector<std::string> labels;

    static OmegaSet single() { return {1, {{1}}, {"P1"}}; }

    static OmegaSet from_3nzf() { return {2, {{1, 0}, {0, 1}, {1, 1}}, {"P1", "P2", "P1+P2"}}; }

    static OmegaSet from_4nzf() {
        return {2, {{1, 0}, {0, 1}, {1, 1}, {1, -1}}, {"P1", "P2", "P1+P2", "P1-P2"}};
    }

    /// The ten vectors of Omega1 u Omega2 u Omega3 for a 3-flow/2-flow covering pair.
    static OmegaSet six_flow() {
        return {3,
                {{1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {0, 0, 1}, {1, 0, 1},
                 {1, 0, -1}, {0, 1, 1}, {0, 1, -1}, {1, 1, 1}, {1, 1, -1}},
                {"P1", "P2", "P1+P2", "P3", "P1+P3", "P1-P3", "P2+P3", "P2-P3", "P1+P2+P3", "P1+P2-P3"}};
    }

    /// sum_{i in I} P_i - sum_{j in J} P_j over disjoint I, J with |I| = |J| = l.
    static OmegaSet occ(int k, int l) {
        OmegaSet omega{k, {}, {}};
        const unsigned full = 1u << k;
        for (unsigned f = 0; f < full; ++f) {
            if (std::popcount(f) != l) continue;
            for (unsigned b = 0; b < full; ++b) {
                if (std::popcount(b) != l || (f & b) != 0) continue;
                std::vector<int> row(static_cast<std::size_t>(k), 0);
                std::string label;
                for (int i = 0; i < k; ++i) {
                    if ((f >> i) & 1u) {
                        row[i] = 1;
                        label += "+P" + std::to_string(i + 1);
                    }
                }
                for (int i = 0; i < k; ++i) {
                    if ((b >> i) & 1u) {
                        row[i] = -1;
                        label += "-P" + std::to_string(i + 1);
                    }
                }
                omega.rows.push_back(std::move(row));
                omega.labels.push_back(label.substr(1));
            }
        }
        return omega;
    }
};

inline std::vector<Vec> instantiate_omega(const OmegaSet& omega, const std::vector<Vec>& assignment) {
    if (static_cast<int>(assignment.size()) != omega.t)
        throw InvalidArgument("expected " + std::to_string(omega.t) + " vectors, got " + std::to_string(assignment.size()));
    const std::size_t d = assignment.empty() ? 0 : assignment[0].size();
    for (const auto& v : assignment)
        if (v.size() != d) throw InvalidArgument("dimension mismatch in assignment");
    std::vector<Vec> out;
    for (const auto& row : omega.rows) {
        if (static_cast<int>(row.size()) != omega.t) throw InvalidArgument("row length differs from t");
        Vec x(d, 0.0);
        for (int i = 0; i < omega.t; ++i)
            for (std::size_t c = 0; c < d; ++c) x[c] += row[i] * assignment[i][c];
        out.push_back(std::move(x));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Flows

/// Orientation plus one d-vector per edge.
struct VectorFlow {
    Orientation orientation;
    std::vector<Vec> values;
    int dim = 0;
};

/// A flow defined on a subset of edges; values off the support are zero.
struct SupportedFlow {
    VectorFlow flow;
    std::vector<bool> support;
};

/// Edge values re-expressed along endpoint_a -> endpoint_b.
inline std::vector<Vec> reference_values(const MultiGraph& g, const VectorFlow& f) {
    std::vector<Vec> out = f.values;
    for (int e = 0; e < g.edge_count(); ++e)
        if (!f.orientation.agrees_with_reference(g, e)) out[e] = -1.0 * out[e];
    return out;
}

inline double max_abs_coordinate(const VectorFlow& f) {
    double mx = 0.0;
    for (const auto& v : f.values)
        for (double x : v) mx = std::max(mx, std::abs(x));
    return mx;
}

/// Largest per-vertex, per-coordinate imbalance (out minus in).
inline double conservation_residual(const MultiGraph& g, const VectorFlow& f) {
    std::vector<Vec> excess(static_cast<std::size_t>(g.vertex_count()), Vec(static_cast<std::size_t>(f.dim), 0.0));
    for (int e = 0; e < g.edge_count(); ++e) {
        const Arc& a = f.orientation[e];
        for (int c = 0; c < f.dim; ++c) {
            excess[a.tail][c] += f.values[e][c];
            excess[a.head][c] -= f.values[e][c];
        }
    }
    double worst = 0.0;
    for (const auto& v : excess)
        for (double x : v) worst = std::max(worst, std::abs(x));
    return worst;
}

inline void check_flow_shape(const MultiGraph& g, const VectorFlow& f) {
    if (!f.orientation.valid_for(g)) throw InvalidArgument("orientation does not match the graph");
    if (static_cast<int>(f.values.size()) != g.edge_count()) throw InvalidArgument("one value per edge required");
    for (const auto& v : f.values)
        if (static_cast<int>(v.size()) != f.dim) throw InvalidArgument("dimension mismatch in flow values");
}

/// Constant value P along a directed even subgraph.
inline SupportedFlow flow_on_cycle(const MultiGraph& g, const DirectedEvenSubgraph& cycle, const Vec& value) {
    SupportedFlow out{{Orientation::reference(g), std::vector<Vec>(static_cast<std::size_t>(g.edge_count()), Vec(value.size(), 0.0)),
                       static_cast<int>(value.size())},
                      std::vector<bool>(static_cast<std::size_t>(g.edge_count()), false)};
    for (const auto& arc : cycle.arcs) {
        if (!arc.forward) out.flow.orientation.reverse(arc.edge);
        out.flow.values[arc.edge] = value;
        out.support[arc.edge] = true;
    }
    return out;
}

/// Union of two flows: first orientation wins on shared edges, values add where
/// the orientations agree and subtract where they differ.
inline SupportedFlow compose_flows(const MultiGraph& g, const SupportedFlow& f1, const SupportedFlow& f2) {
    if (f1.flow.dim != f2.flow.dim) throw InvalidArgument("dimension mismatch");
    SupportedFlow out{{Orientation::reference(g), std::vector<Vec>(static_cast<std::size_t>(g.edge_count()), Vec(static_cast<std::size_t>(f1.flow.dim), 0.0)),
                       f1.flow.dim},
                      std::vector<bool>(static_cast<std::size_t>(g.edge_count()), false)};
    std::vector<Arc> arcs(out.flow.orientation.arcs().begin(), out.flow.orientation.arcs().end());
    for (int e = 0; e < g.edge_count(); ++e) {
        const bool in1 = f1.support[e], in2 = f2.support[e];
        if (in1) {
            arcs[e] = f1.flow.orientation[e];
            if (!in2)
                out.flow.values[e] = f1.flow.values[e];
            else if (f1.flow.orientation[e] == f2.flow.orientation[e])
                out.flow.values[e] = f1.flow.values[e] + f2.flow.values[e];
            else
                out.flow.values[e] = f1.flow.values[e] - f2.flow.values[e];
        } else if (in2) {
            arcs[e] = f2.flow.orientation[e];
            out.flow.values[e] = f2.flow.values[e];
        }
        out.support[e] = in1 || in2;
    }
    out.flow.orientation = Orientation(std::move(arcs));
    return out;
}

namespace detail {

inline VectorFlow require_full_support(const SupportedFlow& f) {
    for (std::size_t e = 0; e < f.support.size(); ++e)
        if (!f.support[e]) throw InternalConsistency("construction left edge " + std::to_string(e) + " uncovered");
    return f.flow;
}

inline DirectedEvenSubgraph lift(const EdgeSubgraph& sub, const DirectedEvenSubgraph& local) {
    DirectedEvenSubgraph out;
    for (const auto& arc : local.arcs) out.arcs.push_back({sub.parent_edge[arc.edge], arc.forward});
    out.normalize();
    return out;
}

inline void require_same_dim(const Vec& x, const Vec& y) {
    if (x.size() != y.size() || x.empty()) throw InvalidArgument("vectors must share a positive dimension");
}

}  // namespace detail

/// {P1, P2, P1+P2}-flow: 3-NZF -> positive flow -> two directed cycles carrying P1 and P2.
inline VectorFlow omega_flow_from_3nzf(const MultiGraph& g, const Vec& P1, const Vec& P2, const SearchConfig& config = {}) {
    detail::require_same_dim(P1, P2);
    auto nzf = find_int_nzf(g, 3, config);
    if (!nzf) throw NotFound("graph has no 3-NZF");
    auto [c1, c2] = lty_decompose_3(g, normalize_positive(*nzf), config);
    return detail::require_full_support(compose_flows(g, flow_on_cycle(g, c1, P1), flow_on_cycle(g, c2, P2)));
}

/// {P1, P2, P1+P2, P1-P2}-flow from the two even subgraphs of a 4-NZF.
inline VectorFlow omega_flow_from_4nzf(const MultiGraph& g, const Vec& P1, const Vec& P2, const SearchConfig& config = {}) {
    detail::require_same_dim(P1, P2);
    auto [e1, e2] = cycles_from_4nzf(g, config);
    auto c1 = orient_even_subgraph(g, e1);
    auto c2 = orient_even_subgraph(g, e2);
    return detail::require_full_support(compose_flows(g, flow_on_cycle(g, c1, P1), flow_on_cycle(g, c2, P2)));
}

/// Flow with values in the ten-vector six-flow set, for any bridgeless graph.
inline VectorFlow six_flow_omega(const MultiGraph& g, const Vec& P1, const Vec& P2, const Vec& P3,
                                 const SearchConfig& config = {}) {
    detail::require_same_dim(P1, P2);
    detail::require_same_dim(P1, P3);
    auto dec = six_flow_decomposition(g, config);
    auto sub = edge_subgraph(g, dec.g1_edges);
    auto [l1, l2] = lty_decompose_3(sub.graph, normalize_positive(dec.g1_flow), config);
    auto omega1 = compose_flows(g, flow_on_cycle(g, detail::lift(sub, l1), P1), flow_on_cycle(g, detail::lift(sub, l2), P2));
    auto omega2 = flow_on_cycle(g, orient_even_subgraph(g, dec.g2_edges), P3);
    return detail::require_full_support(compose_flows(g, omega1, omega2));
}

/// f(e) = sum_{i in I(e)} P_i - sum_{j in J(e)} P_j in reference orientation, where
/// I(e) / J(e) are the cycles traversing e along / against endpoint_a -> endpoint_b.
inline VectorFlow occ_flow(const MultiGraph& g, const OrientedCycleCover& occ, const std::vector<Vec>& assignment) {
    if (auto r = verify_occ(g, occ); !r) throw InvalidArgument("invalid cover: " + r.violations.front());
    if (static_cast<int>(assignment.size()) != occ.k) throw InvalidArgument("one vector per cycle required");
    const std::size_t d = assignment.front().size();
    for (const auto& v : assignment)
        if (v.size() != d || d == 0) throw InvalidArgument("dimension mismatch in assignment");
    VectorFlow f{Orientation::reference(g), std::vector<Vec>(static_cast<std::size_t>(g.edge_count()), Vec(d, 0.0)),
                 static_cast<int>(d)};
    for (int i = 0; i < occ.k; ++i)
        for (const auto& arc : occ.cycles[i].arcs)
            f.values[arc.edge] = arc.forward ? f.values[arc.edge] + assignment[i] : f.values[arc.edge] - assignment[i];
    return f;
}

enum class Transform2D { OneToInf, InfToOne };

/// (x, y) -> (x - y, x + y) maps the 1-norm onto the inf-norm; the inverse halves it back.
inline Vec transform_2d(const Vec& v, Transform2D direction) {
    if (v.size() != 2) throw InvalidArgument("transform_2d needs dimension 2");
    if (direction == Transform2D::OneToInf) return {v[0] - v[1], v[0] + v[1]};
    return {0.5 * (v[0] + v[1]), 0.5 * (v[1] - v[0])};
}

inline VectorFlow transform_2d(const VectorFlow& f, Transform2D direction) {
    if (f.dim != 2) throw InvalidArgument("transform_2d needs dimension 2");
    VectorFlow out = f;
    for (auto& v : out.values) v = transform_2d(v, direction);
    return out;
}

// ---------------------------------------------------------------------------
// Norm transfer

struct BoundInterval {
    double lower = 0.0;
    double upper = 0.0;
    int d = 0;
    PNorm p1{1.0};
    PNorm p2{1.0};
};

namespace detail {

inline double transfer_factor(int d, const PNorm& p1, const PNorm& p2) {
    if (d < 1) throw InvalidArgument("dimension must be positive");
    if (!(p1.reciprocal() > p2.reciprocal())) throw InvalidArgument("transfer needs p1 < p2");
    return std::pow(static_cast<double>(d), p1.reciprocal() - p2.reciprocal());
}

}  // namespace detail

/// Range for the p1 index given the p2 index:
/// [1 + (phi - 1) / d^(1/p1 - 1/p2), 1 + d^(1/p1 - 1/p2) (phi - 1)].
inline BoundInterval transfer_bound(int d, const PNorm& p1, const PNorm& p2, double phi_p2) {
    const double factor = detail::transfer_factor(d, p1, p2);
    if (!(phi_p2 >= 2.0)) throw InvalidArgument("flow index is at least 2");
    return {1.0 + (phi_p2 - 1.0) / factor, 1.0 + factor * (phi_p2 - 1.0), d, p1, p2};
}

/// Range for the p2 index given the p1 index (same factor, roles swapped).
inline BoundInterval transfer_bound_reverse(int d, const PNorm& p1, const PNorm& p2, double phi_p1) {
    const double factor = detail::transfer_factor(d, p1, p2);
    if (!(phi_p1 >= 2.0)) throw InvalidArgument("flow index is at least 2");
    return {1.0 + (phi_p1 - 1.0) / factor, 1.0 + factor * (phi_p1 - 1.0), d, p1, p2};
}

}  // namespace flowdex

#pragma once

// Explicit vector assignments for the symbolic sets in vector_flows.hpp.

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "flowdex/analysis.hpp"
#include "flowdex/errors.hpp"
#include "flowdex/pnorm.hpp"
#include "flowdex/vector_flows.hpp"

namespace flowdex {

enum class Table1Column { D2AnyP, D3AnyP, D3Inf, D3One };

inline Table1Column parse_table1_column(std::string_view s) {
    if (s == "d2-anyp") return Table1Column::D2AnyP;
    if (s == "d3-anyp") return Table1Column::D3AnyP;
    if (s == "d3-inf") return Table1Column::D3Inf;
    if (s == "d3-one") return Table1Column::D3One;
    throw InvalidArgument("unknown vector table column \"" + std::string(s) + "\"");
}

inline std::string to_string(Table1Column c) {
    switch (c) {
        case Table1Column::D2AnyP: return "d2-anyp";
        case Table1Column::D3AnyP: return "d3-anyp";
        case Table1Column::D3Inf: return "d3-inf";
        case Table1Column::D3One: return "d3-one";
    }
    return "?";
}

/// Three generators plus the ten instantiated six-flow vectors (OmegaSet::six_flow() row order).
struct SixFlowAssignment {
    std::array<Vec, 3> P;
    std::vector<Vec> omega;
};

inline SixFlowAssignment make_six_flow_assignment(Vec p1, Vec p2, Vec p3) {
    SixFlowAssignment out{{std::move(p1), std::move(p2), std::move(p3)}, {}};
    out.omega = instantiate_omega(OmegaSet::six_flow(), {out.P[0], out.P[1], out.P[2]});
    return out;
}

/// The table's generators; p only matters for the two generic columns (a = a(p)).
inline SixFlowAssignment table1_vectors(Table1Column column, const PNorm& p) {
    const double a = analysis::a_of_p(p);
    switch (column) {
        case Table1Column::D2AnyP: return make_six_flow_assignment({0.0, -a}, {-0.5, 0.5 * a}, {1.0, 0.0});
        case Table1Column::D3AnyP: return make_six_flow_assignment({0.0, 0.0, 1.0}, {0.0, 0.5 * a, -0.5}, {1.0, 0.0, 0.0});
        case Table1Column::D3Inf: return make_six_flow_assignment({1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0});
        case Table1Column::D3One:
            return make_six_flow_assignment({-0.5, 0.0, 0.5}, {0.125, -0.5, -0.375}, {0.375, -0.25, 0.375});
    }
    throw InvalidArgument("invalid vector table column");
}

/// P1 = (a,a,0), P2 = (-a,0,-a), P3 = (b,-b,-b) with a = 2^-1/p, b = 3^-1/p, for p in [1, 2].
/// Four set vectors have norm 1, the other six norm g2(p).
inline SixFlowAssignment thm31_vectors(const PNorm& p) {
    if (p.is_infinite() || p.p() > 2.0) throw InvalidArgument("this construction needs p in [1, 2]");
    const double a = std::pow(2.0, -p.reciprocal());
    const double b = std::pow(3.0, -p.reciprocal());
    return make_six_flow_assignment({a, a, 0.0}, {-a, 0.0, -a}, {b, -b, -b});
}

/// Two generators for the {P1, P2, P1+P2, P1-P2} set in the plane.
/// Diagonal pair (a,a), (a,-a) with a = 2^-1/p for p <= 2, unit axes for p >= 2.
enum class Planar4Case { Diagonal, Axes };

inline std::array<Vec, 2> planar_4flow_vectors(const PNorm& p, std::optional<Planar4Case> which = std::nullopt) {
    const Planar4Case c = which.value_or(!p.is_infinite() && p.p() <= 2.0 ? Planar4Case::Diagonal : Planar4Case::Axes);
    if (c == Planar4Case::Diagonal) {
        const double a = std::pow(2.0, -p.reciprocal());
        return {Vec{a, a}, Vec{a, -a}};
    }
    return {Vec{1.0, 0.0}, Vec{0.0, 1.0}};
}

/// Exact ratio achieved by planar_4flow_vectors: 2^(1-1/p) for p <= 2, 2^(1/p) beyond.
inline double planar_4flow_ratio(const PNorm& p) {
    if (!p.is_infinite() && p.p() <= 2.0) return std::pow(2.0, 1.0 - p.reciprocal());
    return std::pow(2.0, p.reciprocal());
}

/// s_i = (e_i - (1/k) 1) / (2l)^(1/p) in R^k. Every l-vs-l signed sum has p-norm 1.
inline std::vector<Vec> simplex_vectors(int k, int l, const PNorm& p) {
    if (k < 2 || l < 1) throw InvalidArgument("simplex_vectors needs k >= 2 and l >= 1");
    const double alpha = p.is_infinite() ? 1.0 : std::pow(2.0 * l, p.reciprocal());
    std::vector<Vec> out;
    for (int i = 0; i < k; ++i) {
        Vec v(static_cast<std::size_t>(k), -1.0 / k);
        v[i] += 1.0;
        out.push_back((1.0 / alpha) * std::move(v));
    }
    return out;
}

/// P_i = (1/2) (-1)^i e_{ceil(i/2)} (1-based i) in R^{ceil(k/2)}. Pairwise differences have 1-norm 1.
inline std::vector<Vec> halfunit_vectors(int k) {
    if (k < 2) throw InvalidArgument("halfunit_vectors needs k >= 2");
    const int d = (k + 1) / 2;
    std::vector<Vec> out;
    for (int i = 1; i <= k; ++i) {
        Vec v(static_cast<std::size_t>(d), 0.0);
        v[(i + 1) / 2 - 1] = (i % 2 == 0) ? 0.5 : -0.5;
        out.push_back(std::move(v));
    }
    return out;
}

/// Coordinates in an orthonormal basis of the zero-sum hyperplane of R^k (Helmert basis).
/// Preserves 2-norms; other p-norms generally change.
inline Vec hyperplane_coordinates(const Vec& x) {
    const std::size_t k = x.size();
    if (k < 2) throw InvalidArgument("need at least two coordinates");
    Vec y(k - 1, 0.0);
    double prefix = 0.0;
    for (std::size_t j = 1; j < k; ++j) {
        prefix += x[j - 1];
        const double jj = static_cast<double>(j);
        y[j - 1] = (prefix - jj * x[j]) / std::sqrt(jj * (jj + 1.0));
    }
    return y;
}

inline VectorFlow project_to_hyperplane(const VectorFlow& f) {
    VectorFlow out = f;
    for (auto& v : out.values) v = hyperplane_coordinates(v);
    out.dim = f.dim - 1;
    return out;
}

}  // namespace flowdex

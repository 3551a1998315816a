#pragma once

// Spanning-tree parametrization of the flow space and derivative-free
// minimization of max_e |f(e)|_p / min_e |f(e)|_p.
//
// Every flow is fixed by free d-vectors X_c on the cotree edges; a tree edge
// carries the signed sum of the X_c whose fundamental cycle passes through it,
// so each assignment is conservative by construction.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "flowdex/certificate.hpp"
#include "flowdex/errors.hpp"
#include "flowdex/graph.hpp"
#include "flowdex/integer_flows.hpp"
#include "flowdex/pnorm.hpp"
#include "flowdex/vector_flows.hpp"
#include "flowdex/vector_tables.hpp"

namespace flowdex {

struct FlowParametrization {
    MultiGraph graph;
    int d = 0;
    std::vector<int> cotree_edges;
    /// terms[e] = (variable index, sign) pairs; edge value = sum sign * X_var (reference orientation).
    std::vector<std::vector<std::pair<int, int>>> terms;

    int variable_count() const noexcept { return static_cast<int>(cotree_edges.size()); }
    /// Length of a flat assignment: variable-major, d coordinates each.
    std::size_t coordinate_count() const noexcept { return cotree_edges.size() * static_cast<std::size_t>(d); }
};

inline FlowParametrization parametrize(const MultiGraph& g, int d) {
    if (d < 1) throw InvalidArgument("dimension must be positive");
    int comps = 0;
    components(g, &comps);
    if (comps > 1) throw InvalidArgument("graph must be connected");
    if (auto b = bridges(g); !b.empty()) throw InvalidArgument("bridge at edge " + std::to_string(b.front()));
    auto basis = spanning_structure(g);
    FlowParametrization param{g, d, basis.cotree_edges, std::vector<std::vector<std::pair<int, int>>>(static_cast<std::size_t>(g.edge_count()))};
    for (std::size_t c = 0; c < basis.rows.size(); ++c)
        for (int e = 0; e < g.edge_count(); ++e)
            if (int s = basis.rows[c][e]; s != 0) param.terms[e].emplace_back(static_cast<int>(c), s);
    return param;
}

/// Edge vectors in reference orientation for a flat assignment.
inline std::vector<Vec> edge_values(const FlowParametrization& param, std::span<const double> X) {
    if (X.size() != param.coordinate_count()) throw InvalidArgument("assignment has the wrong length");
    const auto d = static_cast<std::size_t>(param.d);
    std::vector<Vec> out(param.terms.size(), Vec(d, 0.0));
    for (std::size_t e = 0; e < param.terms.size(); ++e)
        for (auto [var, sign] : param.terms[e])
            for (std::size_t c = 0; c < d; ++c) out[e][c] += sign * X[static_cast<std::size_t>(var) * d + c];
    return out;
}

inline VectorFlow assignment_flow(const FlowParametrization& param, std::span<const double> X) {
    return VectorFlow{Orientation::reference(param.graph), edge_values(param, X), param.d};
}

/// Cotree values of an existing flow, i.e. the assignment that reproduces it.
inline std::vector<double> assignment_from_flow(const FlowParametrization& param, const VectorFlow& flow) {
    if (flow.dim != param.d) throw InvalidArgument("dimension mismatch");
    auto ref = reference_values(param.graph, flow);
    std::vector<double> X;
    for (int e : param.cotree_edges) X.insert(X.end(), ref[e].begin(), ref[e].end());
    return X;
}

/// Embeds a d-dimensional assignment into new_d >= d dimensions with zero extra coordinates.
inline std::vector<double> lift_assignment(std::span<const double> X, int d, int new_d) {
    if (new_d < d || d < 1 || X.size() % static_cast<std::size_t>(d) != 0) throw InvalidArgument("bad lift");
    std::vector<double> out;
    for (std::size_t v = 0; v < X.size() / static_cast<std::size_t>(d); ++v) {
        for (int c = 0; c < new_d; ++c) out.push_back(c < d ? X[v * static_cast<std::size_t>(d) + static_cast<std::size_t>(c)] : 0.0);
    }
    return out;
}

inline constexpr double kDegenerateRatio = 1e300;

/// Allocation-free evaluator of the scale-invariant ratio.
class RatioEvaluator {
public:
    RatioEvaluator(const FlowParametrization& param, PNorm p, double degeneracy_floor)
        : param_(param), p_(p), floor_(degeneracy_floor), value_(static_cast<std::size_t>(param.d)) {}

    double operator()(std::span<const double> X) {
        const auto d = static_cast<std::size_t>(param_.d);
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        for (const auto& terms : param_.terms) {
            std::fill(value_.begin(), value_.end(), 0.0);
            for (auto [var, sign] : terms) {
                const double* x = X.data() + static_cast<std::size_t>(var) * d;
                for (std::size_t c = 0; c < d; ++c) value_[c] += sign * x[c];
            }
            const double n = p_(value_);
            lo = std::min(lo, n);
            hi = std::max(hi, n);
        }
        if (!(hi > 0.0) || lo < floor_ * hi) return kDegenerateRatio;
        return hi / lo;
    }

private:
    const FlowParametrization& param_;
    PNorm p_;
    double floor_;
    Vec value_;
};

/// max/min edge norm; kDegenerateRatio when some edge norm is below floor * max.
inline double ratio(const FlowParametrization& param, std::span<const double> X, const PNorm& p,
                    double degeneracy_floor = 1e-6) {
    if (X.size() != param.coordinate_count()) throw InvalidArgument("assignment has the wrong length");
    RatioEvaluator eval(param, p, degeneracy_floor);
    return eval(X);
}

struct OptimizerConfig {
    int restarts = 16;
    std::uint64_t seed = 0;
    std::uint64_t evaluations_per_restart = 400'000;
    double initial_step = 0.25;
    double step_decay = 0.5;
    double min_step = 1e-7;
    double min_improvement = 1e-12;
    double degeneracy_floor = 1e-6;
    /// Random perturbations of the incumbent per restart, each followed by a fresh descent.
    int kicks = 24;
    double kick_size = 0.15;
    bool construction_warm_start = true;
    /// Extra starting points tried before the random restarts.
    std::vector<std::vector<double>> warm_starts;
    unsigned threads = 1;
    SearchConfig search;
};

struct OptimizeResult {
    double best_r = 0.0;
    FlowCertificate certificate;
    std::vector<double> assignment;  // empty for d = 1
    int best_start = -1;             // index among warm starts then random restarts
    std::vector<double> start_ratios;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Uniform [0, 1) from 53 random bits; platform-independent unlike std distributions.
inline double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline void normalize_scale(std::vector<double>& X) {
    double mx = 0.0;
    for (double x : X) mx = std::max(mx, std::abs(x));
    if (mx > 0.0)
        for (double& x : X) x /= mx;
}

struct LocalResult {
    double ratio;
    std::vector<double> X;
};

/// Pattern search: coordinate moves plus the same number of random unit directions
/// per sweep; accept strict improvements, shrink the step after an unproductive sweep.
inline LocalResult local_descent(const FlowParametrization& param, const PNorm& p, const OptimizerConfig& cfg,
                                 std::vector<double> X, std::mt19937_64& rng) {
    RatioEvaluator eval(param, p, cfg.degeneracy_floor);
    normalize_scale(X);
    double best = eval(X);
    const std::size_t n = X.size();
    std::uint64_t evals = 1;
    double step = cfg.initial_step;
    std::vector<double> dir(n), trial(n);
    while (step >= cfg.min_step && evals < cfg.evaluations_per_restart) {
        bool improved = false;
        for (std::size_t i = 0; i < n && evals < cfg.evaluations_per_restart; ++i) {
            for (double s : {step, -step}) {
                X[i] += s;
                double r = eval(X);
                ++evals;
                if (r < best - cfg.min_improvement) {
                    best = r;
                    improved = true;
                    break;
                }
                X[i] -= s;
            }
        }
        for (std::size_t j = 0; j < n && evals < cfg.evaluations_per_restart; ++j) {
            double len = 0.0;
            for (auto& u : dir) {
                u = 2.0 * unit_uniform(rng) - 1.0;
                len += u * u;
            }
            len = std::sqrt(len);
            if (len == 0.0) continue;
            for (double s : {step, -step}) {
                for (std::size_t i = 0; i < n; ++i) trial[i] = X[i] + s * dir[i] / len;
                double r = eval(trial);
                ++evals;
                if (r < best - cfg.min_improvement) {
                    best = r;
                    X = trial;
                    improved = true;
                    break;
                }
            }
        }
        if (!improved) {
            step *= cfg.step_decay;
            normalize_scale(X);
        }
    }
    return {best, std::move(X)};
}

inline std::optional<std::vector<double>> construction_start(const FlowParametrization& param, const PNorm& p,
                                                             const SearchConfig& search) {
    const int d = param.d;
    if (d < 2) return std::nullopt;
    SixFlowAssignment vecs = d == 2 ? table1_vectors(Table1Column::D2AnyP, p)
                             : (!p.is_infinite() && p.p() <= 2.0) ? thm31_vectors(p)
                                                                  : table1_vectors(Table1Column::D3AnyP, p);
    try {
        VectorFlow f = six_flow_omega(param.graph, vecs.P[0], vecs.P[1], vecs.P[2], search);
        auto X = assignment_from_flow(param, f);
        const int base = f.dim;
        if (d > base) X = lift_assignment(X, base, d);
        return X;
    } catch (const Error&) {
        return std::nullopt;
    }
}

}  // namespace detail

/// Upper bound on phi_{d,p}(g) with a verified certificate. d = 1 uses the
/// integer search (smallest k with a k-NZF) instead of continuous descent.
inline OptimizeResult optimize(const MultiGraph& g, int d, const PNorm& p, const OptimizerConfig& cfg = {}) {
    if (cfg.restarts < 0) throw InvalidArgument("restarts must be nonnegative");
    OptimizeResult result;
    if (d == 1) {
        for (int k = 2; k <= 6; ++k) {
            if (auto f = find_int_nzf(g, k, cfg.search)) {
                result.certificate = certify_int_flow(g, *f, "optimize d=1: smallest k with a " + std::to_string(k) + "-NZF");
                result.best_r = result.certificate.r;
                result.best_start = 0;
                return result;
            }
        }
        throw NotFound("no nowhere-zero 6-flow (graph has a bridge)");
    }

    const FlowParametrization param = parametrize(g, d);
    const std::size_t n = param.coordinate_count();
    if (n == 0) throw InvalidArgument("graph has no cycles");

    std::vector<std::vector<double>> warm = cfg.warm_starts;
    for (const auto& w : warm)
        if (w.size() != n) throw InvalidArgument("warm start has the wrong length");
    if (cfg.construction_warm_start)
        if (auto X = detail::construction_start(param, p, cfg.search)) warm.push_back(std::move(*X));

    const int total = static_cast<int>(warm.size()) + cfg.restarts;
    std::vector<detail::LocalResult> runs(static_cast<std::size_t>(total), {kDegenerateRatio, {}});

    auto run_one = [&](int idx) {
        std::mt19937_64 rng(detail::splitmix64(cfg.seed ^ detail::splitmix64(static_cast<std::uint64_t>(idx))));
        std::vector<double> X;
        if (idx < static_cast<int>(warm.size())) {
            X = warm[static_cast<std::size_t>(idx)];
        } else {
            RatioEvaluator eval(param, p, cfg.degeneracy_floor);
            X.assign(n, 0.0);
            bool ok = false;
            for (int attempt = 0; attempt < 100 && !ok; ++attempt) {
                for (double& x : X) x = 2.0 * detail::unit_uniform(rng) - 1.0;
                ok = eval(X) < kDegenerateRatio;
            }
            if (!ok) return;
        }
        auto best = detail::local_descent(param, p, cfg, std::move(X), rng);
        for (int k = 0; k < cfg.kicks && best.ratio < kDegenerateRatio; ++k) {
            std::vector<double> Y = best.X;
            for (double& y : Y) y += cfg.kick_size * (2.0 * detail::unit_uniform(rng) - 1.0);
            auto cand = detail::local_descent(param, p, cfg, std::move(Y), rng);
            if (cand.ratio < best.ratio - cfg.min_improvement) best = std::move(cand);
        }
        runs[static_cast<std::size_t>(idx)] = std::move(best);
    };

    const unsigned threads = std::max(1u, cfg.threads);
    if (threads == 1) {
        for (int i = 0; i < total; ++i) run_one(i);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back([&, t] {
                for (int i = static_cast<int>(t); i < total; i += static_cast<int>(threads)) run_one(i);
            });
    }

    int best = -1;
    for (int i = 0; i < total; ++i) {
        result.start_ratios.push_back(runs[i].ratio);
        if (runs[i].ratio < kDegenerateRatio && (best < 0 || runs[i].ratio < runs[best].ratio)) best = i;
    }
    if (best < 0) throw NotFound("all restarts degenerate");

    result.assignment = runs[best].X;
    result.best_start = best;
    const VectorFlow flow = assignment_flow(param, result.assignment);
    result.certificate = certify(g, flow, p,
                                 "optimize d=" + std::to_string(d) + " p=" + p.to_string() + " seed=" +
                                     std::to_string(cfg.seed) + " restarts=" + std::to_string(cfg.restarts) +
                                     " best_start=" + std::to_string(best));
    if (auto report = verify_certificate(result.certificate); !report)
        throw InternalConsistency("optimizer certificate failed verification: " + report.violations.front());
    result.best_r = result.certificate.r;
    return result;
}

}  // namespace flowdex

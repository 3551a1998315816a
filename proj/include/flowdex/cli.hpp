#pragma once

// Command-line front end. run() never calls exit(); it returns
//   0 success / verified, 1 verification failed or nothing found,
//   2 usage or input error, 3 search budget exceeded.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "flowdex/analysis.hpp"
#include "flowdex/certificate.hpp"
#include "flowdex/cycles.hpp"
#include "flowdex/errors.hpp"
#include "flowdex/graph.hpp"
#include "flowdex/integer_flows.hpp"
#include "flowdex/optimize.hpp"
#include "flowdex/pnorm.hpp"
#include "flowdex/vector_flows.hpp"
#include "flowdex/vector_tables.hpp"

namespace flowdex::cli {

inline constexpr int kOk = 0;
inline constexpr int kFailed = 1;
inline constexpr int kUsage = 2;
inline constexpr int kBudget = 3;

/// Default node budget, overridable through FLOWDEX_BUDGET.
inline std::uint64_t default_budget() {
    if (const char* env = std::getenv("FLOWDEX_BUDGET"); env && *env) {
        auto v = detail::to_int(env);
        if (!v || *v <= 0) throw InvalidArgument("FLOWDEX_BUDGET must be a positive integer");
        return static_cast<std::uint64_t>(*v);
    }
    return SearchConfig{}.node_budget;
}

inline std::string rounded(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

/// "x,y;x,y;..." -> vectors.
inline std::vector<Vec> parse_vectors(const std::string& spec) {
    std::vector<Vec> out;
    std::stringstream vs(spec);
    std::string item;
    while (std::getline(vs, item, ';')) {
        Vec v;
        std::stringstream cs(item);
        std::string coord;
        while (std::getline(cs, coord, ',')) {
            auto t = std::string(detail::trim(coord));
            char* end = nullptr;
            double x = std::strtod(t.c_str(), &end);
            if (t.empty() || end != t.c_str() + t.size()) throw InvalidArgument("bad coordinate \"" + t + "\"");
            v.push_back(x);
        }
        out.push_back(std::move(v));
    }
    if (out.empty()) throw InvalidArgument("no vectors given");
    return out;
}

inline std::string join(const std::vector<int>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? " " : "") + std::to_string(xs[i]);
    return s;
}

struct Options {
    std::string graph_path;
    std::string cert_path;
    std::string out_path;
    int k = 0;
    int l = 1;
    int d = 2;
    std::string p;  // empty: per-command default
    int restarts = 16;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::string construction;
    std::string table1;
    std::string vectors;
    std::string planar_case;
    std::string direction;
    int transfer_d = 2;
    std::string p1, p2;
    double phi = 0.0;
    bool reverse = false;
    std::string csv_path;
    std::string range = "1:4";
    int steps = 3000;
    std::vector<std::string> table_ps;
    std::optional<std::uint64_t> budget;
};

class Runner {
public:
    Runner(const Options& o, std::ostream& out, std::ostream& err) : o_(o), out_(out), err_(err) {
        search_.node_budget = o.budget.value_or(default_budget());
    }

    int find_nzf() {
        auto g = load_graph();
        if (o_.k < 2) throw InvalidArgument("--k must be at least 2");
        auto f = find_int_nzf(g, o_.k, search_);
        if (!f) {
            out_ << "none\n";
            return kFailed;
        }
        return emit(certify_int_flow(g, *f, "nowhere-zero " + std::to_string(o_.k) + "-flow by cotree search"));
    }

    int decompose6() {
        auto g = load_graph();
        auto dec = six_flow_decomposition(g, search_);
        auto f = integer_six_flow(g, dec, search_);
        return emit(certify_int_flow(g, f,
                                     "integer 6-flow f1 + 3 f2\nG1 edges: " + join(dec.g1_edges) +
                                         "\nG2 edges: " + join(dec.g2_edges)));
    }

    int occ() {
        auto g = load_graph();
        auto cover = find_occ(g, o_.k, o_.l, search_);
        if (!cover) {
            out_ << "none\n";
            return kFailed;
        }
        return write(to_text(*cover));
    }

    int build_flow() {
        auto g = load_graph();
        const std::string& c = o_.construction;
        // d3-one and d3-inf default to their own exponent.
        std::string p_str = o_.p;
        if (p_str.empty()) p_str = o_.table1 == "d3-one" ? "1" : o_.table1 == "d3-inf" ? "inf" : "2";
        const PNorm p = PNorm::parse(p_str);
        std::string prov = "construction " + c + " p=" + p.to_string();
        FlowCertificate cert;
        if (c == "from-3nzf") {
            auto v = vectors_or({{1.0, 0.0}, {-0.5, std::sqrt(3.0) / 2.0}}, 2);
            auto f = omega_flow_from_3nzf(g, v[0], v[1], search_);
            cert = certify(g, OmegaSet::from_3nzf(), v, f, p, prov);
        } else if (c == "from-4nzf" || c == "thm15") {
            std::vector<Vec> v;
            if (c == "thm15" || o_.vectors.empty()) {
                std::optional<Planar4Case> which;
                if (o_.planar_case == "diagonal") which = Planar4Case::Diagonal;
                else if (o_.planar_case == "axes") which = Planar4Case::Axes;
                else if (!o_.planar_case.empty()) throw InvalidArgument("--case must be diagonal or axes");
                auto pair = planar_4flow_vectors(p, which);
                v = {pair[0], pair[1]};
            } else {
                v = vectors_or({}, 2);
            }
            auto f = omega_flow_from_4nzf(g, v[0], v[1], search_);
            cert = certify(g, OmegaSet::from_4nzf(), v, f, p, prov);
        } else if (c == "six-flow" || c == "table1" || c == "thm31") {
            SixFlowAssignment a;
            if (c == "thm31") {
                a = thm31_vectors(p);
            } else if (!o_.vectors.empty()) {
                auto v = vectors_or({}, 3);
                a = make_six_flow_assignment(v[0], v[1], v[2]);
            } else {
                if (c == "table1" && o_.table1.empty()) throw InvalidArgument("--table1 is required");
                auto col = parse_table1_column(o_.table1.empty() ? "d2-anyp" : o_.table1);
                a = table1_vectors(col, p);
                prov += " column " + to_string(col);
            }
            auto f = six_flow_omega(g, a.P[0], a.P[1], a.P[2], search_);
            cert = certify(g, OmegaSet::six_flow(), {a.P[0], a.P[1], a.P[2]}, f, p, prov);
        } else if (c == "occ-simplex" || c == "occ-halfunit") {
            if (o_.k < 2) throw InvalidArgument("--k must be at least 2");
            auto cover = find_occ(g, o_.k, o_.l, search_);
            if (!cover) {
                out_ << "none\n";
                return kFailed;
            }
            auto v = c == "occ-simplex" ? simplex_vectors(o_.k, o_.l, p) : halfunit_vectors(o_.k);
            auto f = occ_flow(g, *cover, v);
            cert = certify(g, OmegaSet::occ(o_.k, o_.l), v, f, p, prov);
        } else {
            throw InvalidArgument("unknown construction \"" + c + "\"");
        }
        if (auto report = verify_certificate(cert); !report)
            throw InternalConsistency("constructed certificate failed verification: " + report.violations.front());
        return emit(cert);
    }

    int optimize_cmd() {
        auto g = load_graph();
        OptimizerConfig cfg;
        cfg.restarts = o_.restarts;
        cfg.seed = o_.seed;
        cfg.threads = o_.threads;
        cfg.search = search_;
        auto res = optimize(g, o_.d, PNorm::parse(o_.p), cfg);
        if (!o_.out_path.empty()) emit_certificate(res.certificate, o_.out_path);
        else out_ << to_text(res.certificate);
        out_ << "best_r=" << format_double(res.best_r) << " seed=" << o_.seed << " restarts=" << o_.restarts << '\n';
        return kOk;
    }

    int verify() {
        auto cert = load_certificate(o_.cert_path);
        auto report = verify_certificate(cert);
        if (report) {
            out_ << "ok r=" << format_double(cert.r) << '\n';
            return kOk;
        }
        out_ << "FAILED (" << report.violations.size() << " violations)\n";
        for (const auto& v : report.violations) out_ << "  " << v << '\n';
        return kFailed;
    }

    int transform2d() {
        auto cert = load_certificate(o_.cert_path);
        if (cert.d != 2) throw InvalidArgument("transform2d needs a two-dimensional certificate");
        Transform2D dir;
        if (o_.direction == "one-to-inf") dir = Transform2D::OneToInf;
        else if (o_.direction == "inf-to-one") dir = Transform2D::InfToOne;
        else if (o_.direction.empty() && cert.p == PNorm(1.0)) dir = Transform2D::OneToInf;
        else if (o_.direction.empty() && cert.p.is_infinite()) dir = Transform2D::InfToOne;
        else throw InvalidArgument("certificate p must be 1 or inf, or give --direction");
        const PNorm target = dir == Transform2D::OneToInf ? PNorm::infinity() : PNorm(1.0);
        auto f = transform_2d(cert.flow, dir);
        auto out = certify(cert.graph, f, target, cert.provenance + "\ntransform2d " +
                                                      (dir == Transform2D::OneToInf ? "one-to-inf" : "inf-to-one"));
        return emit(out);
    }

    int transfer() {
        const PNorm p1 = PNorm::parse(o_.p1), p2 = PNorm::parse(o_.p2);
        auto b = o_.reverse ? transfer_bound_reverse(o_.transfer_d, p1, p2, o_.phi)
                            : transfer_bound(o_.transfer_d, p1, p2, o_.phi);
        out_ << "lower=" << format_double(b.lower) << " upper=" << format_double(b.upper) << '\n';
        return kOk;
    }

    int gfuncs() {
        auto colon = o_.range.find(':');
        if (colon == std::string::npos) throw InvalidArgument("--range must look like 1:4");
        auto lo = PNorm::parse(o_.range.substr(0, colon)).p();
        auto hi = PNorm::parse(o_.range.substr(colon + 1)).p();
        auto csv = analysis::emit_curves_csv(lo, hi, o_.steps);
        if (o_.csv_path.empty()) {
            out_ << csv;
        } else {
            write_file(o_.csv_path, csv);
            out_ << "p0=" << format_double(analysis::crossover_p0()) << '\n';
        }
        return kOk;
    }

    int verify_thm32() {
        auto r = analysis::verify_g2_bound();
        for (const auto& e : r.phi_table)
            out_ << "Phi(" << rounded(e.p1) << ", " << rounded(e.p2) << ") = " << format_double(e.phi) << '\n';
        out_ << "min I on [1.6, 2] = " << format_double(r.I_min_on_grid) << '\n';
        out_ << "max g2 on [1, 2] = " << format_double(r.g2_max_on_grid) << '\n';
        out_ << "h(-1) = " << format_double(r.h_at_minus_one) << '\n';
        out_ << "h(-5/4) = " << format_double(r.h_at_minus_five_quarters) << '\n';
        out_ << "m0 = " << format_double(r.m0) << '\n';
        out_ << "x(1.6)^1.6 ln x(1.6) + y(1.6)^1.6 ln y(2) = " << format_double(r.eighty_milli_quantity) << '\n';
        out_ << "p0 = " << format_double(analysis::crossover_p0()) << '\n';
        if (r.passed()) {
            out_ << "ok\n";
            return kOk;
        }
        for (const auto& v : r.checks.violations) out_ << "FAILED " << v << '\n';
        return kFailed;
    }

    int tables() {
        std::vector<std::string> ps = o_.table_ps;
        if (ps.empty()) ps = {"1", "1.5", "2", "3", "10", "inf"};
        bool ok = true;
        for (auto col : {Table1Column::D2AnyP, Table1Column::D3AnyP, Table1Column::D3Inf, Table1Column::D3One}) {
            for (const auto& ps_str : ps) {
                const PNorm p = PNorm::parse(ps_str);
                if (col == Table1Column::D3Inf && !p.is_infinite()) continue;
                if (col == Table1Column::D3One && p != PNorm(1.0)) continue;
                auto a = table1_vectors(col, p);
                auto [lo, hi] = table1_window(col, p);
                out_ << to_string(col) << " p=" << p.to_string() << ":";
                for (const auto& v : a.omega) {
                    double n = p(v);
                    bool inside = n >= lo - 1e-12 && n <= hi + 1e-12;
                    ok = ok && inside;
                    out_ << ' ' << rounded(n) << (inside ? "" : "!");
                }
                out_ << "  window [" << rounded(lo) << ", " << rounded(hi) << "]\n";
            }
        }
        out_ << (ok ? "ok\n" : "FAILED\n");
        return ok ? kOk : kFailed;
    }

    /// Norm window claimed for each column: [1, 2], [1, 2^(1/p)], {1}, [1, 5/4].
    static std::pair<double, double> table1_window(Table1Column col, const PNorm& p) {
        switch (col) {
            case Table1Column::D2AnyP: return {1.0, 2.0};
            case Table1Column::D3AnyP: return {1.0, std::pow(2.0, p.reciprocal())};
            case Table1Column::D3Inf: return {1.0, 1.0};
            case Table1Column::D3One: return {1.0, 1.25};
        }
        return {1.0, 1.0};
    }

private:
    MultiGraph load_graph() const { return parse_graph(read_file(o_.graph_path)); }

    std::vector<Vec> vectors_or(std::vector<Vec> fallback, std::size_t count) const {
        auto v = o_.vectors.empty() ? std::move(fallback) : parse_vectors(o_.vectors);
        if (v.size() != count) throw InvalidArgument("expected " + std::to_string(count) + " vectors");
        return v;
    }

    int write(const std::string& text) {
        if (o_.out_path.empty()) {
            out_ << text;
        } else {
            write_file(o_.out_path, text);
            out_ << "wrote " << o_.out_path << '\n';
        }
        return kOk;
    }

    int emit(const FlowCertificate& cert) {
        if (o_.out_path.empty()) {
            out_ << to_text(cert);
        } else {
            emit_certificate(cert, o_.out_path);
            out_ << "r=" << rounded(cert.r) << '\n';
        }
        return kOk;
    }

    const Options& o_;
    std::ostream& out_;
    std::ostream& err_;
    SearchConfig search_;
};

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"flowdex: nowhere-zero and vector flow toolkit"};
    app.name("flowdex");
    app.require_subcommand(1);
    Options o;

    auto add_graph = [&](CLI::App* sub) { sub->add_option("graph", o.graph_path, "graph file")->required(); };
    auto add_out = [&](CLI::App* sub) { sub->add_option("--out", o.out_path, "write result to this file"); };
    auto add_budget = [&](CLI::App* sub) {
        sub->add_option("--budget", o.budget, "search node budget (default 1e8 or FLOWDEX_BUDGET)");
    };

    auto* find = app.add_subcommand("find-nzf", "search for a nowhere-zero k-flow");
    find->add_option("--k", o.k, "flow order")->required();
    add_graph(find), add_out(find), add_budget(find);

    auto* dec = app.add_subcommand("decompose6", "integer 6-flow from a 3-flow / 2-flow pair");
    add_graph(dec), add_out(dec), add_budget(dec);

    auto* occ = app.add_subcommand("occ", "search for an oriented k-cycle 2l-cover");
    occ->add_option("--k", o.k, "number of directed even subgraphs")->required();
    occ->add_option("--l", o.l, "covers per direction")->required();
    add_graph(occ), add_out(occ), add_budget(occ);

    auto* build = app.add_subcommand("build-flow", "build and certify a vector flow");
    build->add_option("--construction", o.construction, "construction")
        ->required()
        ->check(CLI::IsMember({"from-3nzf", "from-4nzf", "six-flow", "occ-simplex", "occ-halfunit", "table1", "thm31", "thm15"}));
    build->add_option("--table1", o.table1, "vector column")->check(CLI::IsMember({"d2-anyp", "d3-anyp", "d3-inf", "d3-one"}));
    build->add_option("--p", o.p, "norm exponent, decimal or inf (default 2; 1 for d3-one, inf for d3-inf)");
    build->add_option("--vectors", o.vectors, "generators as x,y;x,y;...");
    build->add_option("--case", o.planar_case, "planar four-vector case")->check(CLI::IsMember({"diagonal", "axes"}));
    build->add_option("--k", o.k, "cover size for occ constructions");
    build->add_option("--l", o.l, "covers per direction for occ constructions");
    add_graph(build), add_out(build), add_budget(build);

    auto* opt = app.add_subcommand("optimize", "minimize the max/min edge norm ratio");
    opt->add_option("--d", o.d, "dimension")->required();
    opt->add_option("--p", o.p, "norm exponent (decimal or inf)")->required();
    opt->add_option("--restarts", o.restarts, "random restarts");
    opt->add_option("--seed", o.seed, "random seed");
    opt->add_option("--threads", o.threads, "worker threads");
    add_graph(opt), add_out(opt), add_budget(opt);

    auto* ver = app.add_subcommand("verify", "check a certificate");
    ver->add_option("certificate", o.cert_path, "certificate file")->required();

    auto* tr = app.add_subcommand("transform2d", "map a 2-dimensional certificate between the 1- and inf-norms");
    tr->add_option("certificate", o.cert_path, "certificate file")->required();
    tr->add_option("--direction", o.direction, "one-to-inf or inf-to-one")->check(CLI::IsMember({"one-to-inf", "inf-to-one"}));
    add_out(tr);

    auto* tf = app.add_subcommand("transfer", "bound the flow index for one norm from another");
    tf->add_option("--d", o.transfer_d, "dimension")->required();
    tf->add_option("--p1", o.p1, "smaller exponent")->required();
    tf->add_option("--p2", o.p2, "larger exponent")->required();
    tf->add_option("--phi", o.phi, "known index (for p2, or p1 with --reverse)")->required();
    tf->add_flag("--reverse", o.reverse, "the known index is for p1");

    auto* gf = app.add_subcommand("gfuncs", "sample g1, g2, g3 on a grid");
    gf->add_option("--emit-csv", o.csv_path, "CSV output path (stdout if omitted)");
    gf->add_option("--range", o.range, "p range as lo:hi");
    gf->add_option("--steps", o.steps, "grid steps");

    app.add_subcommand("verify-thm32", "numerical checks behind g2(p) <= sqrt 2 on [1, 2]");

    auto* tb = app.add_subcommand("tables", "print vector-table norms and check their windows");
    tb->add_option("--p", o.table_ps, "exponents to tabulate (default 1 1.5 2 3 10 inf)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        Runner r(o, out, err);
        if (*find) return r.find_nzf();
        if (*dec) return r.decompose6();
        if (*occ) return r.occ();
        if (*build) return r.build_flow();
        if (*opt) return r.optimize_cmd();
        if (*ver) return r.verify();
        if (*tr) return r.transform2d();
        if (*tf) return r.transfer();
        if (*gf) return r.gfuncs();
        if (app.got_subcommand("verify-thm32")) return r.verify_thm32();
        if (*tb) return r.tables();
    } catch (const BudgetExceeded& e) {
        err << "flowdex: " << e.what() << '\n';
        return kBudget;
    } catch (const NotFound& e) {
        err << "flowdex: " << e.what() << '\n';
        return kFailed;
    } catch (const InternalConsistency& e) {
        err << "flowdex: internal error: " << e.what() << '\n';
        return kFailed;
    } catch (const ParseError& e) {
        err << "flowdex: " << e.what() << '\n';
        return kUsage;
    } catch (const Error& e) {
        err << "flowdex: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}

}  // namespace flowdex::cli

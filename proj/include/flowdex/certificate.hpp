#pragma once

// Self-contained upper-bound witnesses for phi_{d,p}(G) and their text format.
//
//   flowdex-cert v1
//   graph:
//   <n> <m>
//   <u> <v>            (m lines)
//   d: <int>
//   p: <decimal|inf>
//   r: <decimal>
//   orientation:
//   <tail> <head>      (m lines)
//   values:
//   <x_1> ... <x_d>    (m lines, 17 significant digits)
//   provenance:
//   <free text to end of file>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "flowdex/errors.hpp"
#include "flowdex/graph.hpp"
#include "flowdex/integer_flows.hpp"
#include "flowdex/pnorm.hpp"
#include "flowdex/report.hpp"
#include "flowdex/vector_flows.hpp"

namespace flowdex {

inline constexpr double kDefaultTolerance = 1e-9;

struct FlowCertificate {
    MultiGraph graph;
    int d = 0;
    PNorm p{2.0};
    double r = 0.0;
    VectorFlow flow;
    std::string provenance;
};

/// Rescales the flow so its smallest p-norm is 1 and claims r = 1 + max / min.
/// Throws on zero values or conservation residual above tolerance * scale.
inline FlowCertificate certify(const MultiGraph& g, const VectorFlow& flow, const PNorm& p, std::string provenance,
                               double tolerance = kDefaultTolerance) {
    check_flow_shape(g, flow);
    if (g.edge_count() == 0) throw InvalidArgument("graph has no edges");
    double lo = 1e300, hi = 0.0;
    for (int e = 0; e < g.edge_count(); ++e) {
        double n = p(flow.values[e]);
        if (n == 0.0) throw InvalidArgument("zero vector at edge " + std::to_string(e));
        lo = std::min(lo, n);
        hi = std::max(hi, n);
    }
    const double scale = std::max(1.0, max_abs_coordinate(flow));
    if (double res = conservation_residual(g, flow); res > tolerance * scale)
        throw InvalidArgument("conservation residual " + format_double(res) + " exceeds tolerance");

    FlowCertificate cert{g, flow.dim, p, 1.0 + hi / lo, flow, std::move(provenance)};
    for (auto& v : cert.flow.values) v = (1.0 / lo) * std::move(v);
    return cert;
}

/// As above, additionally requiring every value to be (within tolerance) one of the
/// instantiated vectors of omega.
inline FlowCertificate certify(const MultiGraph& g, const OmegaSet& omega, const std::vector<Vec>& assignment,
                               const VectorFlow& flow, const PNorm& p, std::string provenance,
                               double tolerance = kDefaultTolerance) {
    const auto members = instantiate_omega(omega, assignment);
    const double scale = std::max(1.0, max_abs_coordinate(flow));
    for (int e = 0; e < static_cast<int>(flow.values.size()); ++e) {
        bool found = std::any_of(members.begin(), members.end(), [&](const Vec& w) {
            if (w.size() != flow.values[e].size()) return false;
            for (std::size_t c = 0; c < w.size(); ++c)
                if (std::abs(w[c] - flow.values[e][c]) > tolerance * scale) return false;
            return true;
        });
        if (!found) throw InvalidArgument("value at edge " + std::to_string(e) + " is not in the vector set");
    }
    return certify(g, flow, p, std::move(provenance), tolerance);
}

/// Scalar certificate for an integer flow (d = 1).
inline FlowCertificate certify_int_flow(const MultiGraph& g, const IntFlow& flow, std::string provenance) {
    VectorFlow vf{flow.orientation, {}, 1};
    for (long long v : flow.values) vf.values.push_back({static_cast<double>(v)});
    return certify(g, vf, PNorm(1.0), std::move(provenance));
}

/// Independent recomputation of every claim in the certificate.
inline Report verify_certificate(const FlowCertificate& cert, double tolerance = kDefaultTolerance) {
    Report report;
    const MultiGraph& g = cert.graph;
    if (!(cert.r >= 2.0)) report.fail("claimed r " + format_double(cert.r) + " is below 2");
    if (cert.d < 1 || cert.flow.dim != cert.d) report.fail("dimension mismatch");
    if (!cert.flow.orientation.valid_for(g)) {
        report.fail("orientation does not match the graph");
        return report;
    }
    if (static_cast<int>(cert.flow.values.size()) != g.edge_count()) {
        report.fail("expected " + std::to_string(g.edge_count()) + " values");
        return report;
    }
    for (int e = 0; e < g.edge_count(); ++e) {
        if (static_cast<int>(cert.flow.values[e].size()) != cert.d) {
            report.fail("value at edge " + std::to_string(e) + " has the wrong dimension");
            return report;
        }
    }
    const double upper = cert.r - 1.0;
    for (int e = 0; e < g.edge_count(); ++e) {
        const double n = cert.p(cert.flow.values[e]);
        if (n < 1.0 - tolerance)
            report.fail("norm below 1 at edge " + std::to_string(e) + " (" + format_double(n) + ")");
        else if (n > upper + tolerance * std::max(1.0, upper))
            report.fail("norm above r-1 at edge " + std::to_string(e) + " (" + format_double(n) + ")");
    }
    const double scale = std::max(1.0, max_abs_coordinate(cert.flow));
    if (double res = conservation_residual(g, cert.flow); res > tolerance * scale)
        report.fail("conservation residual " + format_double(res) + " exceeds tolerance");
    return report;
}

inline std::string to_text(const FlowCertificate& cert) {
    std::ostringstream os;
    os << "flowdex-cert v1\n";
    os << "graph:\n" << to_text(cert.graph);
    os << "d: " << cert.d << '\n';
    os << "p: " << cert.p.to_string() << '\n';
    os << "r: " << format_double(cert.r) << '\n';
    os << "orientation:\n";
    for (const Arc& a : cert.flow.orientation.arcs()) os << a.tail << ' ' << a.head << '\n';
    os << "values:\n";
    for (const auto& v : cert.flow.values) {
        for (std::size_t c = 0; c < v.size(); ++c) os << (c ? " " : "") << format_double(v[c]);
        os << '\n';
    }
    os << "provenance:\n" << cert.provenance << '\n';
    return os.str();
}

inline FlowCertificate parse_certificate(std::string_view text) {
    using K = ParseError::Kind;
    detail::LineReader reader(text);
    std::string_view line;
    auto need = [&](std::string_view section) {
        if (!reader.next(line))
            throw ParseError(K::MissingSection, reader.line_number(), "missing section \"" + std::string(section) + "\"");
    };
    auto expect_exact = [&](std::string_view want) {
        need(want);
        if (detail::trim(line) != want)
            throw ParseError(K::Malformed, reader.line_number(), "expected \"" + std::string(want) + "\"");
    };
    auto keyed = [&](std::string_view key) -> std::string_view {
        need(key);
        auto t = detail::trim(line);
        std::string prefix = std::string(key) + ": ";
        if (!t.starts_with(prefix)) throw ParseError(K::MissingSection, reader.line_number(), "expected \"" + prefix + "...\"");
        return detail::trim(t.substr(prefix.size()));
    };
    auto to_double = [&](std::string_view s) {
        std::string str(s);
        char* end = nullptr;
        double v = std::strtod(str.c_str(), &end);
        if (str.empty() || end != str.c_str() + str.size())
            throw ParseError(K::Malformed, reader.line_number(), "bad number \"" + str + "\"");
        return v;
    };

    expect_exact("flowdex-cert v1");
    expect_exact("graph:");
    FlowCertificate cert;
    cert.graph = detail::read_graph(reader);
    const int m = cert.graph.edge_count();

    auto d = detail::to_int(keyed("d"));
    if (!d || *d < 1) throw ParseError(K::Malformed, reader.line_number(), "d must be a positive integer");
    cert.d = static_cast<int>(*d);
    try {
        cert.p = PNorm::parse(keyed("p"));
    } catch (const InvalidArgument& e) {
        throw ParseError(K::Malformed, reader.line_number(), e.what());
    }
    cert.r = to_double(keyed("r"));

    expect_exact("orientation:");
    std::vector<Arc> arcs;
    for (int e = 0; e < m; ++e) {
        need("orientation");
        auto tok = detail::split_ws(line);
        auto t = tok.size() == 2 ? detail::to_int(tok[0]) : std::nullopt;
        auto h = tok.size() == 2 ? detail::to_int(tok[1]) : std::nullopt;
        if (!t || !h) throw ParseError(K::Malformed, reader.line_number(), "expected \"tail head\"");
        arcs.push_back({static_cast<int>(*t), static_cast<int>(*h)});
    }
    cert.flow.orientation = Orientation(std::move(arcs));
    if (!cert.flow.orientation.valid_for(cert.graph))
        throw ParseError(K::Malformed, reader.line_number(), "orientation does not match the graph edges");

    expect_exact("values:");
    cert.flow.dim = cert.d;
    for (int e = 0; e < m; ++e) {
        need("values");
        auto tok = detail::split_ws(line);
        if (static_cast<int>(tok.size()) != cert.d)
            throw ParseError(K::Malformed, reader.line_number(), "expected " + std::to_string(cert.d) + " coordinates");
        Vec v;
        for (auto s : tok) v.push_back(to_double(s));
        cert.flow.values.push_back(std::move(v));
    }
    expect_exact("provenance:");
    std::string rest(reader.rest());
    if (!rest.empty() && rest.back() == '\n') rest.pop_back();
    cert.provenance = std::move(rest);
    return cert;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path);
    out << content;
    if (!out) throw Error("write failed for " + path);
}

inline void emit_certificate(const FlowCertificate& cert, const std::string& path) { write_file(path, to_text(cert)); }

inline FlowCertificate load_certificate(const std::string& path) { return parse_certificate(read_file(path)); }

}  // namespace flowdex

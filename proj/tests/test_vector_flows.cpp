#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "flowdex/certificate.hpp"
#include "flowdex/named_graphs.hpp"
#include "flowdex/vector_flows.hpp"
#include "flowdex/vector_tables.hpp"

using namespace flowdex;

namespace {

constexpr double kTol = 1e-12;

std::pair<double, double> norm_range(const VectorFlow& f, const PNorm& p) {
    double lo = 1e300, hi = 0;
    for (const auto& v : f.values) lo = std::min(lo, p(v)), hi = std::max(hi, p(v));
    return {lo, hi};
}

void expect_conservative(const MultiGraph& g, const VectorFlow& f) {
    EXPECT_LE(conservation_residual(g, f), 1e-9 * std::max(1.0, max_abs_coordinate(f)));
}

bool near(const Vec& x, const Vec& y, double tol = kTol) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (std::abs(x[i] - y[i]) > tol) return false;
    return true;
}

bool in_set(const Vec& v, const std::vector<Vec>& set) {
    return std::any_of(set.begin(), set.end(), [&](const Vec& w) { return near(v, w, 1e-9); });
}

VectorFlow constant_triangle(const Vec& value) {
    auto g = graphs::triangle();
    return VectorFlow{Orientation::reference(g), std::vector<Vec>(3, value), static_cast<int>(value.size())};
}

const std::vector<PNorm>& sample_ps() {
    static const std::vector<PNorm> ps{PNorm(1), PNorm(1.5), PNorm(2), PNorm(3), PNorm(10), PNorm::infinity()};
    return ps;
}

}  // namespace

TEST(InstantiateOmega, Examples) {
    auto three = instantiate_omega(OmegaSet::from_3nzf(), {{1, 0}, {0, 1}});
    EXPECT_EQ(three, (std::vector<Vec>{{1, 0}, {0, 1}, {1, 1}}));

    for (const auto& p : sample_ps()) {
        auto four = instantiate_omega(OmegaSet::from_4nzf(), {{1, 0}, {0, 1}});
        const double s = std::pow(2.0, p.reciprocal());
        EXPECT_NEAR(p(four[0]), 1, kTol);
        EXPECT_NEAR(p(four[1]), 1, kTol);
        EXPECT_NEAR(p(four[2]), s, kTol);
        EXPECT_NEAR(p(four[3]), s, kTol);
    }

    auto zeros = instantiate_omega(OmegaSet::six_flow(), {{0, 0}, {0, 0}, {0, 0}});
    ASSERT_EQ(zeros.size(), 10u);
    for (const auto& z : zeros) EXPECT_EQ(z, (Vec{0, 0}));

    EXPECT_THROW(instantiate_omega(OmegaSet::from_3nzf(), {{1, 0}}), InvalidArgument);
}

TEST(OmegaSet, OccRowsHaveLPlusAndLMinus) {
    auto omega = OmegaSet::occ(5, 2);
    EXPECT_EQ(omega.rows.size(), 30u);  // C(5,2) * C(3,2)
    for (const auto& row : omega.rows) {
        EXPECT_EQ(std::count(row.begin(), row.end(), 1), 2);
        EXPECT_EQ(std::count(row.begin(), row.end(), -1), 2);
    }
}

TEST(Certify, TriangleConstantFlow) {
    auto f = constant_triangle({1, 0});
    auto cert = certify(graphs::triangle(), f, PNorm(2), "constant");
    EXPECT_DOUBLE_EQ(cert.r, 2.0);
    EXPECT_TRUE(verify_certificate(cert));
}

TEST(Certify, RejectsZeroAndNonConservative) {
    auto g = graphs::triangle();
    auto f = constant_triangle({1, 0});
    f.values[0] = {0, 0};
    EXPECT_THROW(certify(g, f, PNorm(2), ""), InvalidArgument);
    f = constant_triangle({1, 0});
    f.values[0] = {2, 0};
    EXPECT_THROW(certify(g, f, PNorm(2), ""), InvalidArgument);
}

TEST(Certify, OmegaMembershipChecked) {
    auto g = graphs::triangle();
    auto f = constant_triangle({1, 0});
    EXPECT_NO_THROW(certify(g, OmegaSet::single(), {{1, 0}}, f, PNorm(1), ""));
    EXPECT_THROW(certify(g, OmegaSet::single(), {{0, 1}}, f, PNorm(1), ""), InvalidArgument);
}

TEST(ComposeFlows, CaseTable) {
    auto g = graphs::triangle();
    auto o = Orientation::reference(g);
    SupportedFlow a{{o, {{1, 0}, {1, 0}, {0, 0}}, 2}, {true, true, false}};
    SupportedFlow b{{o, {{0, 0}, {0, 0}, {0, 2}}, 2}, {false, false, true}};
    auto disjoint = compose_flows(g, a, b);
    EXPECT_EQ(disjoint.flow.values, (std::vector<Vec>{{1, 0}, {1, 0}, {0, 2}}));
    EXPECT_EQ(disjoint.support, (std::vector<bool>{true, true, true}));

    SupportedFlow c{{o, {{0, 3}, {0, 0}, {0, 0}}, 2}, {true, false, false}};
    auto same = compose_flows(g, a, c);
    EXPECT_EQ(same.flow.values[0], (Vec{1, 3}));

    // reversal-negation of a on the same support: orientation flipped, value negated
    auto rev = o;
    rev.reverse(0), rev.reverse(1);
    SupportedFlow neg{{rev, {{-1, 0}, {-1, 0}, {0, 0}}, 2}, {true, true, false}};
    auto doubled = compose_flows(g, a, neg);
    EXPECT_EQ(doubled.flow.values[0], (Vec{2, 0}));
    EXPECT_EQ(doubled.flow.values[1], (Vec{2, 0}));
    EXPECT_TRUE(doubled.flow.orientation.agrees_with_reference(g, 0));
}

TEST(OmegaFrom3nzf, K33AndEvenCircuit) {
    auto g = graphs::k33();
    auto f = omega_flow_from_3nzf(g, {1, 0}, {0, 1});
    expect_conservative(g, f);
    std::vector<Vec> allowed{{1, 0}, {0, 1}, {1, 1}};
    for (const auto& v : f.values) EXPECT_TRUE(in_set(v, allowed));

    auto c = graphs::cycle(4);
    auto fc = omega_flow_from_3nzf(c, {2, 5}, {0, 1});
    expect_conservative(c, fc);
    for (const auto& v : fc.values) EXPECT_TRUE(near(v, {2, 5}));

    EXPECT_THROW(omega_flow_from_3nzf(graphs::k4(), {1, 0}, {0, 1}), NotFound);
}

TEST(OmegaFrom4nzf, K4DiagonalAndAxesCases) {
    auto g = graphs::k4();
    for (const auto& p : sample_ps()) {
        if (!p.is_infinite() && p.p() <= 2) {
            auto [P1, P2] = planar_4flow_vectors(p, Planar4Case::Diagonal);
            auto f = omega_flow_from_4nzf(g, P1, P2);
            expect_conservative(g, f);
            auto [lo, hi] = norm_range(f, p);
            EXPECT_GE(lo, 1 - kTol);
            EXPECT_LE(hi, std::pow(2.0, 1 - p.reciprocal()) + kTol);
        }
        if (p.is_infinite() || p.p() >= 2) {
            auto f = omega_flow_from_4nzf(g, {1, 0}, {0, 1});
            auto [lo, hi] = norm_range(f, p);
            EXPECT_GE(lo, 1 - kTol);
            EXPECT_LE(hi, std::pow(2.0, p.reciprocal()) + kTol);
        }
    }
    auto [P1, P2] = planar_4flow_vectors(PNorm(1));
    auto cert = certify(g, omega_flow_from_4nzf(g, P1, P2), PNorm(1), "planar p=1");
    EXPECT_NEAR(cert.r, 2.0, 1e-12);
    EXPECT_THROW(omega_flow_from_4nzf(graphs::petersen(), {1, 0}, {0, 1}), NotFound);
}

TEST(SixFlowOmega, PetersenColumns) {
    auto g = graphs::petersen();
    auto a = table1_vectors(Table1Column::D2AnyP, PNorm(2));
    auto f = six_flow_omega(g, a.P[0], a.P[1], a.P[2]);
    expect_conservative(g, f);
    for (const auto& v : f.values) EXPECT_TRUE(in_set(v, a.omega));
    auto cert = certify(g, OmegaSet::six_flow(), {a.P[0], a.P[1], a.P[2]}, f, PNorm(2), "");
    EXPECT_LE(cert.r, 3 + 1e-9);

    auto one = table1_vectors(Table1Column::D3One, PNorm(1));
    auto f1 = six_flow_omega(g, one.P[0], one.P[1], one.P[2]);
    auto c1 = certify(g, f1, PNorm(1), "");
    EXPECT_LE(c1.r, 2.25 + 1e-9);
    EXPECT_TRUE(verify_certificate(c1));
}

TEST(SixFlowOmega, TriangleIsConstantP3) {
    auto g = graphs::triangle();
    auto f = six_flow_omega(g, {1, 0}, {0, 1}, {0.25, 0.5});
    for (const auto& v : f.values) EXPECT_TRUE(near(v, {0.25, 0.5}));
    EXPECT_THROW(six_flow_omega(graphs::path(3), {1, 0}, {0, 1}, {1, 1}), NotFound);
}

TEST(OccFlow, TriangleIsP1MinusP2) {
    auto g = graphs::triangle();
    auto occ = *find_occ(g, 2, 1);
    auto f = occ_flow(g, occ, {{3, 1}, {1, 1}});
    auto ref = reference_values(g, f);
    // every edge carries +-(P1 - P2) and the flow is conservative
    for (const auto& v : ref) EXPECT_TRUE(near(v, {2, 0}) || near(v, {-2, 0}));
    expect_conservative(g, f);
}

TEST(OccFlow, K4SimplexEqualNorms) {
    auto g = graphs::k4();
    auto occ = *find_occ(g, 4, 1);
    for (const auto& p : {PNorm(1), PNorm(2), PNorm::infinity()}) {
        auto f = occ_flow(g, occ, simplex_vectors(4, 1, p));
        expect_conservative(g, f);
        for (const auto& v : f.values) EXPECT_NEAR(p(v), 1.0, kTol);
        auto cert = certify(g, f, p, "");
        EXPECT_NEAR(cert.r, 2.0, 1e-12);
    }
}

TEST(OccFlow, K33HalfUnitOneNorm) {
    auto g = graphs::k33();
    auto occ = *find_occ(g, 3, 1);
    auto f = occ_flow(g, occ, halfunit_vectors(3));
    expect_conservative(g, f);
    for (const auto& v : f.values) EXPECT_NEAR(PNorm(1)(v), 1.0, kTol);
}

TEST(SimplexVectors, Examples) {
    for (const auto& p : sample_ps()) {
        auto s = simplex_vectors(2, 1, p);
        const double alpha = std::pow(2.0, p.reciprocal());
        EXPECT_TRUE(near(s[0], {0.5 / alpha, -0.5 / alpha}));
        EXPECT_NEAR(p(s[0] - s[1]), 1.0, kTol);
    }
    // unscaled v_I - v_J for k=5, l=1: one +1, one -1, norm 2^(1/p)
    auto unscaled = simplex_vectors(5, 1, PNorm::infinity());
    Vec diff = unscaled[0] - unscaled[3];
    EXPECT_EQ(std::count(diff.begin(), diff.end(), 1.0), 1);
    EXPECT_EQ(std::count(diff.begin(), diff.end(), -1.0), 1);
    EXPECT_NEAR(PNorm::infinity()(diff), 1.0, kTol);
}

TEST(SimplexVectors, AllSignedCombinationsHaveNormOne) {
    for (int k = 2; k <= 6; ++k)
        for (int l = 1; 2 * l <= k && l <= 2; ++l)
            for (const auto& p : sample_ps()) {
                if (!p.is_infinite() && p.p() == 10) continue;
                auto s = simplex_vectors(k, l, p);
                for (const auto& v : instantiate_omega(OmegaSet::occ(k, l), s))
                    EXPECT_NEAR(p(v), 1.0, kTol) << "k=" << k << " l=" << l << " p=" << p.to_string();
            }
}

TEST(HalfunitVectors, Examples) {
    auto h = halfunit_vectors(5);
    std::vector<Vec> want{{-0.5, 0, 0}, {0.5, 0, 0}, {0, -0.5, 0}, {0, 0.5, 0}, {0, 0, -0.5}};
    EXPECT_EQ(h, want);
    EXPECT_EQ(h[1] - h[0], (Vec{1, 0, 0}));
    EXPECT_EQ(h[2] - h[1], (Vec{-0.5, -0.5, 0}));
    for (std::size_t i = 0; i < h.size(); ++i)
        for (std::size_t j = 0; j < h.size(); ++j)
            if (i != j) {
                EXPECT_DOUBLE_EQ(PNorm(1)(h[i] - h[j]), 1.0);
            }
}

TEST(Table1, Examples) {
    auto one = table1_vectors(Table1Column::D3One, PNorm(1));
    // row order P1, P2, P1+P2, P3, P1+P3, P1-P3, P2+P3, ...
    EXPECT_TRUE(near(one.omega[6], {0.5, -0.75, 0}));

    auto two = table1_vectors(Table1Column::D2AnyP, PNorm(2));
    EXPECT_NEAR(analysis::a_of_p(PNorm(2)), std::sqrt(3.0), kTol);
    EXPECT_NEAR(PNorm(2)(two.P[1]), 1.0, kTol);

    auto inf = table1_vectors(Table1Column::D3Inf, PNorm::infinity());
    for (const auto& v : inf.omega) EXPECT_DOUBLE_EQ(PNorm::infinity()(v), 1.0);
}

TEST(Table1, ColumnWindows) {
    for (const auto& p : sample_ps()) {
        for (const auto& v : table1_vectors(Table1Column::D2AnyP, p).omega) {
            EXPECT_GE(p(v), 1 - kTol);
            EXPECT_LE(p(v), 2 + kTol);
        }
        const double cap = std::pow(2.0, p.reciprocal());
        for (const auto& v : table1_vectors(Table1Column::D3AnyP, p).omega) {
            EXPECT_GE(p(v), 1 - kTol);
            EXPECT_LE(p(v), cap + kTol);
        }
    }
    int ones = 0, five_quarters = 0;
    for (const auto& v : table1_vectors(Table1Column::D3One, PNorm(1)).omega) {
        double n = PNorm(1)(v);
        ones += std::abs(n - 1) < kTol;
        five_quarters += std::abs(n - 1.25) < kTol;
    }
    EXPECT_EQ(ones, 4);
    EXPECT_EQ(five_quarters, 6);
}

TEST(Table1, InequalitiesAtSampledP) {
    for (double p = 1.0; p <= 12.0; p += 0.25) EXPECT_TRUE(analysis::check_table_inequalities(p).all()) << p;
}

TEST(LowPVectors, Examples) {
    auto two = thm31_vectors(PNorm(2));
    double mx = 0;
    for (const auto& v : two.omega) mx = std::max(mx, PNorm(2)(v));
    EXPECT_NEAR(mx, std::sqrt(2.0), kTol);

    auto one = thm31_vectors(PNorm(1));
    double lo = 1e9, hi = 0;
    for (const auto& v : one.omega) lo = std::min(lo, PNorm(1)(v)), hi = std::max(hi, PNorm(1)(v));
    EXPECT_NEAR(lo, 1.0, kTol);
    EXPECT_NEAR(hi, 4.0 / 3.0, kTol);
    EXPECT_THROW(thm31_vectors(PNorm(2.5)), InvalidArgument);
}

TEST(LowPVectors, FourUnitNormsSixAtG2) {
    for (int i = 0; i < 20; ++i) {
        const PNorm p(1.0 + i / 19.0);
        const double g2 = analysis::g2(p);
        int unit = 0, at_g2 = 0;
        for (const auto& v : thm31_vectors(p).omega) {
            double n = p(v);
            unit += std::abs(n - 1) < kTol;
            at_g2 += std::abs(n - g2) < kTol;
        }
        if (p.p() == 2.0) {
            EXPECT_EQ(unit + at_g2, 10);
        } else {
            EXPECT_EQ(unit, 4) << p.p();
            EXPECT_EQ(at_g2, 6) << p.p();
        }
    }
}

TEST(Transform2d, Examples) {
    EXPECT_EQ(transform_2d(Vec{1, 0}, Transform2D::OneToInf), (Vec{1, 1}));
    EXPECT_EQ(transform_2d(Vec{0, 0}, Transform2D::OneToInf), (Vec{0, 0}));
    EXPECT_THROW(transform_2d(Vec{1, 0, 0}, Transform2D::OneToInf), InvalidArgument);
}

TEST(Transform2d, NormIdentityOnRandomVectors) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-10, 10);
    for (int i = 0; i < 1000; ++i) {
        Vec v{u(rng), u(rng)};
        Vec t = transform_2d(v, Transform2D::OneToInf);
        EXPECT_NEAR(PNorm::infinity()(t), PNorm(1)(v), 1e-12 * PNorm(1)(v));
        EXPECT_NEAR(PNorm(1)(transform_2d(v, Transform2D::InfToOne)), PNorm::infinity()(v), 1e-12 * PNorm(1)(v));
        EXPECT_TRUE(near(transform_2d(t, Transform2D::InfToOne), v, 1e-14 * 20));
    }
}

TEST(Transform2d, CertificateCarriesOver) {
    auto g = graphs::k4();
    auto [P1, P2] = planar_4flow_vectors(PNorm(1));
    auto f = omega_flow_from_4nzf(g, P1, P2);
    auto t = transform_2d(f, Transform2D::OneToInf);
    auto c1 = certify(g, f, PNorm(1), "");
    auto c2 = certify(g, t, PNorm::infinity(), "");
    EXPECT_NEAR(c1.r, c2.r, 1e-12);
    EXPECT_TRUE(verify_certificate(c2));
}

TEST(TransferBound, Examples) {
    auto b = transfer_bound(2, PNorm(1), PNorm(2), 1 + std::sqrt(2.0));
    EXPECT_NEAR(b.lower, 2.0, kTol);
    EXPECT_NEAR(b.upper, 3.0, kTol);

    for (double p : {1.5, 2.0, 3.0}) {
        auto r = transfer_bound_reverse(3, PNorm(1), PNorm(p), 2.25);
        EXPECT_NEAR(r.upper, 1 + 1.25 * std::pow(3.0, 1 - 1 / p), kTol);
    }
    EXPECT_THROW(transfer_bound(2, PNorm(2), PNorm(2), 3.0), InvalidArgument);
    EXPECT_THROW(transfer_bound(2, PNorm(3), PNorm(2), 3.0), InvalidArgument);
}

TEST(TransferBound, ContainsCertifiedValuesOnK4Family) {
    const std::vector<PNorm> ps{PNorm(1), PNorm(1.25), PNorm(1.5), PNorm(2), PNorm(3), PNorm(6), PNorm::infinity()};
    for (const auto& g : {graphs::k4(), graphs::subdivide(graphs::k4())}) {
        std::vector<double> r;
        for (const auto& p : ps) {
            auto [P1, P2] = planar_4flow_vectors(p);
            r.push_back(certify(g, omega_flow_from_4nzf(g, P1, P2), p, "").r);
            EXPECT_NEAR(r.back(), 1 + planar_4flow_ratio(p), 1e-9);
        }
        for (std::size_t i = 0; i < ps.size(); ++i)
            for (std::size_t j = i + 1; j < ps.size(); ++j) {
                auto b = transfer_bound(2, ps[i], ps[j], r[j]);
                EXPECT_LE(b.lower, r[i] + 1e-9);
                EXPECT_GE(b.upper, r[i] - 1e-9);
                auto br = transfer_bound_reverse(2, ps[i], ps[j], r[i]);
                EXPECT_LE(br.lower, r[j] + 1e-9);
                EXPECT_GE(br.upper, r[j] - 1e-9);
            }
    }
}

TEST(VerifyCertificate, ZeroedValueAndFalseClaim) {
    auto cert = certify(graphs::triangle(), constant_triangle({1, 0}), PNorm(2), "");
    cert.flow.values[1] = {0, 0};
    auto r = verify_certificate(cert);
    EXPECT_FALSE(r);
    EXPECT_NE(std::find(r.violations.begin(), r.violations.end(), "norm below 1 at edge 1 (0)"), r.violations.end());

    auto g = graphs::petersen();
    auto a = thm31_vectors(PNorm(2));
    auto f = six_flow_omega(g, a.P[0], a.P[1], a.P[2]);
    FlowCertificate fake{g, 3, PNorm(2), 2.0, f, "claims r = 2"};
    EXPECT_FALSE(verify_certificate(fake));
    EXPECT_TRUE(verify_certificate(certify(g, f, PNorm(2), "")));
}

TEST(Hyperplane, IsometryForTwoNorm) {
    auto g = graphs::k4();
    auto occ = *find_occ(g, 4, 1);
    auto f = occ_flow(g, occ, simplex_vectors(4, 1, PNorm(2)));
    auto h = project_to_hyperplane(f);
    EXPECT_EQ(h.dim, 3);
    for (std::size_t e = 0; e < f.values.size(); ++e) EXPECT_NEAR(PNorm(2)(h.values[e]), PNorm(2)(f.values[e]), kTol);
    expect_conservative(g, h);
}

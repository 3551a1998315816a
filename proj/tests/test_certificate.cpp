#include <gtest/gtest.h>

#include <filesystem>

#include "flowdex/certificate.hpp"
#include "flowdex/named_graphs.hpp"
#include "flowdex/vector_tables.hpp"

using namespace flowdex;

namespace {

FlowCertificate triangle_cert() {
    auto g = graphs::triangle();
    VectorFlow f{Orientation::reference(g), std::vector<Vec>(3, Vec{0.1, 1.0 / 3.0}), 2};
    return certify(g, f, PNorm(2), "constant value on the triangle\nsecond line");
}

FlowCertificate petersen_cert(const PNorm& p) {
    auto g = graphs::petersen();
    auto a = table1_vectors(Table1Column::D3One, p);
    return certify(g, six_flow_omega(g, a.P[0], a.P[1], a.P[2]), p, "six-flow");
}

}  // namespace

TEST(CertificateText, EmitLoadEmitIsByteIdentical) {
    for (const auto& cert : {triangle_cert(), petersen_cert(PNorm(1)), petersen_cert(PNorm::infinity()),
                             petersen_cert(PNorm(1.1))}) {
        auto text = to_text(cert);
        auto loaded = parse_certificate(text);
        EXPECT_EQ(to_text(loaded), text);
        EXPECT_TRUE(verify_certificate(loaded));
        EXPECT_EQ(loaded.r, cert.r);
        EXPECT_EQ(loaded.flow.values, cert.flow.values);
    }
}

TEST(CertificateText, FileRoundTrip) {
    auto dir = std::filesystem::temp_directory_path() / "flowdex_cert_test";
    std::filesystem::create_directories(dir);
    auto path = (dir / "tri.cert").string();
    auto cert = triangle_cert();
    emit_certificate(cert, path);
    auto loaded = load_certificate(path);
    emit_certificate(loaded, path);
    EXPECT_EQ(read_file(path), to_text(cert));
    std::filesystem::remove_all(dir);
}

TEST(CertificateText, InfinityParses) {
    auto text = to_text(petersen_cert(PNorm::infinity()));
    EXPECT_NE(text.find("\np: inf\n"), std::string::npos);
    EXPECT_TRUE(parse_certificate(text).p.is_infinite());
}

TEST(CertificateText, TruncationNamesMissingSection) {
    auto text = to_text(triangle_cert());
    auto cut = text.substr(0, text.find("values:"));
    try {
        parse_certificate(cut);
        FAIL() << "truncated certificate accepted";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.kind(), ParseError::Kind::MissingSection);
        EXPECT_NE(std::string(e.what()).find("values:"), std::string::npos) << e.what();
    }
    try {
        parse_certificate(text.substr(0, text.find("r:")));
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("\"r"), std::string::npos) << e.what();
    }
}

TEST(CertificateText, MalformedInputsReportLines) {
    auto text = to_text(triangle_cert());
    auto bad = text;
    bad.replace(bad.find("d: 2"), 4, "d: x");
    try {
        parse_certificate(bad);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 7u);
    }
    EXPECT_THROW(parse_certificate("flowdex-cert v2\n"), ParseError);
    auto wrong_dim = text;
    wrong_dim.replace(wrong_dim.find("values:\n") + 8, 0, "1 2 3\n");
    EXPECT_THROW(parse_certificate(wrong_dim), ParseError);
}

TEST(VerifyCertificate, TamperingDetected) {
    auto cert = petersen_cert(PNorm(1));
    EXPECT_NEAR(cert.r, 2.25, 1e-9);
    auto tampered = cert;
    tampered.r = 2.1;
    EXPECT_FALSE(verify_certificate(tampered));
    tampered = cert;
    tampered.flow.values[4][0] += 0.01;
    auto report = verify_certificate(tampered);
    EXPECT_FALSE(report);
    bool residual = false;
    for (const auto& v : report.violations) residual = residual || v.find("conservation") != std::string::npos;
    EXPECT_TRUE(residual);
    tampered = cert;
    tampered.flow.orientation.reverse(0);
    EXPECT_FALSE(verify_certificate(tampered));
}

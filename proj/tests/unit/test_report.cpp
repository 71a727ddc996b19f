#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "entlab/distribution.hpp"
#include "entlab/report.hpp"

using namespace entlab;

TEST(Report, LeqMarginAndPass) {
    const InequalityReport r = make_leq("a", 1.0, 2.0, 0.0, "d");
    EXPECT_EQ(r.relation, "<=");
    EXPECT_DOUBLE_EQ(r.margin, 1.0);
    EXPECT_TRUE(r.pass);
    EXPECT_FALSE(make_leq("a", 2.0, 1.0, 0.5, "d").pass);
    EXPECT_TRUE(make_leq("a", 2.0, 1.0, 1.0, "d").pass);
}

TEST(Report, GeqMarginAndPass) {
    const InequalityReport r = make_geq("b", 1.0, 2.0, 0.5, "d");
    EXPECT_EQ(r.relation, ">=");
    EXPECT_DOUBLE_EQ(r.margin, -1.0);
    EXPECT_FALSE(r.pass);
    EXPECT_TRUE(r.counts_as_failure());
}

TEST(Report, EqMarginIsNegativeDistance) {
    const InequalityReport r = make_eq("c", 1.0, 1.25, 0.5, "d");
    EXPECT_EQ(r.relation, "==");
    EXPECT_DOUBLE_EQ(r.margin, -0.25);
    EXPECT_TRUE(r.pass);
    EXPECT_FALSE(make_eq("c", 1.0, 1.25, 0.2, "d").pass);
}

TEST(Report, InformationalNeverCountsAsFailure) {
    InequalityReport r = make_leq("i", 2.0, 1.0, 0.0, "d");
    r.informational = true;
    EXPECT_FALSE(r.pass);
    EXPECT_FALSE(r.counts_as_failure());
}

TEST(Report, NanNeverPasses) {
    EXPECT_FALSE(make_leq("n", std::nan(""), 1.0, 1.0, "d").pass);
    EXPECT_FALSE(make_eq("n", 1.0, std::nan(""), 1.0, "d").pass);
}

TEST(Report, JsonRoundTrip) {
    InequalityReport r = make_geq("name[x]", 0.1, 0.3, 1e-6, "abcd");
    r.note = "label";
    r.informational = true;
    const InequalityReport back = report_from_json(to_json(r));
    EXPECT_EQ(back.name, r.name);
    EXPECT_EQ(back.lhs, r.lhs);
    EXPECT_EQ(back.rhs, r.rhs);
    EXPECT_EQ(back.margin, r.margin);
    EXPECT_EQ(back.tolerance, r.tolerance);
    EXPECT_EQ(back.pass, r.pass);
    EXPECT_EQ(back.inputs_digest, r.inputs_digest);
    EXPECT_EQ(back.relation, r.relation);
    EXPECT_EQ(back.informational, r.informational);
    EXPECT_EQ(back.note, r.note);
}

TEST(Report, JsonLinesOnePerReport) {
    std::ostringstream os;
    write_json_lines(os, {make_leq("a", 0, 1, 0, "d"), make_leq("b", 0, 1, 0, "d")});
    std::istringstream is(os.str());
    std::string line;
    int n = 0;
    while (std::getline(is, line)) {
        EXPECT_EQ(nlohmann::json::parse(line).at("name"), n == 0 ? "a" : "b");
        ++n;
    }
    EXPECT_EQ(n, 2);
}

TEST(Digest, FnvKnownVectors) {
    // Reference values of 64-bit FNV-1a.
    EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
    EXPECT_EQ(fnv1a_hex("a"), "af63dc4c8601ec8c");
    EXPECT_EQ(fnv1a_hex("foobar"), "85944171f73967e8");
}

TEST(Digest, DensityDigestIsDeterministicAndSensitive) {
    const GridDensity a = materialize(DistributionSpec::gaussian(0.0, 1.0));
    const GridDensity b = materialize(DistributionSpec::gaussian(0.0, 1.0));
    const GridDensity c = materialize(DistributionSpec::gaussian(0.0, 1.0 + 1e-12));
    EXPECT_EQ(density_digest(a), density_digest(b));
    EXPECT_NE(density_digest(a), density_digest(c));
    EXPECT_NE(inputs_digest({&a}, {0.5}), inputs_digest({&a}, {0.25}));
    EXPECT_NE(inputs_digest({&a, &c}), inputs_digest({&c, &a}));
}

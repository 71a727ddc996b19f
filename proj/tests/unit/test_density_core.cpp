#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>

#include "entlab/distribution.hpp"
#include "entlab/error.hpp"
#include "entlab/functionals.hpp"
#include "entlab/grid_density.hpp"

using namespace entlab;

namespace {

double value_at(const GridDensity& d, double x) {
    const auto i = static_cast<std::size_t>(std::llround((x - d.grid_start()) / d.grid_step()));
    return d[i];
}

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const LabError& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no LabError raised";
    return ErrorKind::IoFailure;
}

}  // namespace

TEST(Materialize, StandardNormalMassAndPeak) {
    const GridDensity d = materialize(DistributionSpec::gaussian(0.0, 1.0));
    EXPECT_NEAR(d.mass(), 1.0, 1e-6);
    EXPECT_NEAR(value_at(d, 0.0), 1.0 / std::sqrt(2.0 * std::numbers::pi), 1e-9);
    EXPECT_EQ(d.size(), 4096u);
}

TEST(Materialize, LaplaceMassAndPeak) {
    const GridDensity d = materialize(DistributionSpec::laplace(0.0, 1.0));
    EXPECT_NEAR(d.mass(), 1.0, 1e-6);
    EXPECT_NEAR(value_at(d, 0.0), 0.5, 1e-4);
}

TEST(Materialize, SmoothedUniformVarianceAdds) {
    const double a = std::sqrt(3.0);
    const GridDensity d = materialize(DistributionSpec::smoothed_uniform(-a, a, 0.01));
    EXPECT_NEAR(moments(d).variance, 1.01, 1e-6);
}

TEST(Materialize, MixtureMoments) {
    const GridDensity d = materialize(DistributionSpec::mixture({0.25, 0.75}, {-1.0, 2.0}, {0.5, 1.5}));
    const Moments mo = moments(d);
    const double mean = 0.25 * -1.0 + 0.75 * 2.0;
    const double second = 0.25 * (0.5 + 1.0) + 0.75 * (1.5 + 4.0);
    EXPECT_NEAR(mo.mean, mean, 1e-9);
    EXPECT_NEAR(mo.variance, second - mean * mean, 1e-8);
}

namespace {

double resolution_gap(const DistributionSpec& spec) {
    GridConfig fine;
    fine.num_points = 8192;
    return l1_distance(materialize(spec), materialize(spec, fine));
}

}  // namespace

TEST(Materialize, ResamplingStableAcrossResolutions) {
    const double a = std::sqrt(3.0);
    for (const auto& spec : {DistributionSpec::gaussian(0.3, 2.0), DistributionSpec::smoothed_uniform(-a, a, 0.01),
                             DistributionSpec::mixture({0.5, 0.5}, {-2.0, 2.0}, {1.0, 1.0})}) {
        EXPECT_LT(resolution_gap(spec), 1e-6) << describe(spec);
    }
}

TEST(Materialize, LaplaceResamplingStableAcrossResolutions) {
    EXPECT_LT(resolution_gap(DistributionSpec::laplace(0.0, 1.0)), 1e-6);
}

TEST(Materialize, GridFileRoundTrip) {
    const auto path = std::filesystem::temp_directory_path() / "entlab_grid_file.csv";
    {
        std::ofstream out(path);
        out << "x,f\n";
        const double h = 0.01;
        for (int i = 0; i <= 2000; ++i) {
            const double x = -10.0 + h * i;
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", x, std::exp(-0.5 * x * x) / std::sqrt(2 * std::numbers::pi));
            out << buf;
        }
    }
    const GridDensity d = materialize(DistributionSpec::grid_file(path.string()));
    EXPECT_NEAR(moments(d).variance, 1.0, 1e-6);
    EXPECT_LT(l1_distance(d, materialize(DistributionSpec::gaussian(0.0, 1.0))), 1e-6);
    std::filesystem::remove(path);
}

TEST(Materialize, GridFileRejectsNonUniformSpacing) {
    const auto path = std::filesystem::temp_directory_path() / "entlab_grid_bad.csv";
    {
        std::ofstream out(path);
        out << "0,0\n1,0.5\n2,0.5\n3.5,0.5\n4,0\n5,0\n";
    }
    EXPECT_EQ(kind_of([&] { materialize(DistributionSpec::grid_file(path.string())); }), ErrorKind::InvalidSpec);
    std::filesystem::remove(path);
}

TEST(Spec, ValidationErrors) {
    EXPECT_EQ(kind_of([] { DistributionSpec::gaussian(0.0, 0.0).validate(); }), ErrorKind::InvalidSpec);
    EXPECT_EQ(kind_of([] { DistributionSpec::laplace(0.0, -1.0).validate(); }), ErrorKind::InvalidSpec);
    EXPECT_EQ(kind_of([] { DistributionSpec::smoothed_uniform(-1.0, 1.0, 0.0).validate(); }), ErrorKind::InvalidSpec);
    EXPECT_EQ(kind_of([] { DistributionSpec::mixture({0.5, 0.6}, {0, 1}, {1, 1}).validate(); }),
              ErrorKind::InvalidSpec);
    EXPECT_EQ(kind_of([] { DistributionSpec::mixture({-0.5, 1.5}, {0, 1}, {1, 1}).validate(); }),
              ErrorKind::InvalidSpec);
}

TEST(Spec, JsonRoundTrip) {
    const auto spec = DistributionSpec::mixture({0.5, 0.5}, {-1.0, 1.0}, {0.2, 0.3}, "bimodal");
    const auto back = spec_from_json(spec_to_json(spec));
    EXPECT_EQ(describe(back), describe(spec));
    EXPECT_EQ(back.label, "bimodal");
    EXPECT_EQ(kind_of([] { spec_from_json(nlohmann::json{{"family", "cauchy"}, {"params", {}}}); }),
              ErrorKind::InvalidSpec);
    EXPECT_EQ(kind_of([] { load_spec("/nonexistent/spec.json"); }), ErrorKind::IoFailure);
}

TEST(GridConfig, Invariants) {
    GridConfig c;
    c.num_points = 1000;
    EXPECT_EQ(kind_of([&] { c.validate(); }), ErrorKind::InvalidSpec);
    c.num_points = 8;
    EXPECT_EQ(kind_of([&] { c.validate(); }), ErrorKind::InvalidSpec);
    c.num_points = 1024;
    c.half_width_sigmas = 5.0;
    EXPECT_EQ(kind_of([&] { c.validate(); }), ErrorKind::InvalidSpec);
}

TEST(GridDensity, ConstructorInvariants) {
    std::vector<double> v(16, 0.0);
    v[8] = 1.0;
    EXPECT_NO_THROW(GridDensity(0.0, 1.0, v, "spike"));
    EXPECT_EQ(kind_of([&] { GridDensity(0.0, 1.0, std::vector<double>(15, 0.0), "short"); }),
              ErrorKind::InvalidDensity);
    auto neg = v;
    neg[3] = -1e-3;
    EXPECT_EQ(kind_of([&] { GridDensity(0.0, 1.0, neg, "negative"); }), ErrorKind::InvalidDensity);
    auto heavy = v;
    heavy[8] = 2.0;
    EXPECT_EQ(kind_of([&] { GridDensity(0.0, 1.0, heavy, "mass"); }), ErrorKind::InvalidDensity);
    auto edge = v;
    edge[0] = 1e-6;
    EXPECT_EQ(kind_of([&] { GridDensity::normalized(0.0, 1.0, edge, "edge"); }), ErrorKind::TailTruncation);
}

TEST(Moments, Examples) {
    const Moments g = moments(materialize(DistributionSpec::gaussian(0.0, 1.0)));
    EXPECT_NEAR(g.mean, 0.0, 1e-8);
    EXPECT_NEAR(g.variance, 1.0, 1e-6);
    const Moments l = moments(materialize(DistributionSpec::laplace(0.0, 1.0)));
    EXPECT_NEAR(l.mean, 0.0, 1e-8);
    EXPECT_NEAR(l.variance, 2.0, 1e-4);
    const Moments t = moments(affine_transform(materialize(DistributionSpec::gaussian(0.0, 1.0)), 3.0, 1.0));
    EXPECT_NEAR(t.mean, 1.0, 1e-5);
    EXPECT_NEAR(t.variance, 9.0, 1e-5);
}

TEST(Affine, Examples) {
    const GridDensity g = materialize(DistributionSpec::gaussian(0.0, 1.0));
    EXPECT_NEAR(moments(affine_transform(g, 2.0, 0.0)).variance, 4.0, 1e-5);
    const GridDensity l = materialize(DistributionSpec::laplace(0.0, 1.0));
    EXPECT_LT(l1_distance(affine_transform(l, 1.0, 0.0), l), 1e-10);
    EXPECT_LT(l1_distance(affine_transform(l, -1.0, 0.0), l), 1e-10);
    EXPECT_EQ(kind_of([&] { affine_transform(g, 0.0, 1.0); }), ErrorKind::InvalidSpec);
}

TEST(Affine, MomentLawAndMass) {
    const double s = std::sqrt(3.0);
    for (const auto& spec : {DistributionSpec::laplace(0.5, 1.0), DistributionSpec::smoothed_uniform(-s, s, 0.01),
                             DistributionSpec::mixture({0.3, 0.7}, {-1.0, 1.0}, {0.4, 0.6})}) {
        const GridDensity d = materialize(spec);
        const Moments mo = moments(d);
        for (double a : {-2.0, 0.5, 3.0}) {
            for (double b : {-1.0, 0.0, 2.5}) {
                const GridDensity t = affine_transform(d, a, b);
                const Moments mt = moments(t);
                EXPECT_NEAR(t.mass(), 1.0, 1e-6);
                EXPECT_NEAR(mt.mean, a * mo.mean + b, 1e-5 * std::max(1.0, std::abs(a * mo.mean + b)));
                EXPECT_NEAR(mt.variance, a * a * mo.variance, 1e-5 * a * a * mo.variance) << describe(spec);
            }
        }
    }
}

TEST(Affine, CenterRemovesMean) {
    const GridDensity d = center(materialize(DistributionSpec::laplace(1.7, 0.5)));
    EXPECT_NEAR(moments(d).mean, 0.0, 1e-12);
}

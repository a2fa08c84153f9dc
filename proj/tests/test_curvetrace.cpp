#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "branchpt/curvetrace.hpp"
#include "test_support.hpp"

using namespace branchpt;
using testsupport::expect_code;

namespace {

constexpr double pi = std::numbers::pi;

struct Fixture {
    WeierstrassData data;
    SurfaceMap surface;
    NormalForm nf;

    explicit Fixture(const WeierstrassData &d)
        : data(d), surface(build_surface(d)), nf(normal_form(surface, detect_branch_points(d, 1.0).at(0)))
    {
    }
};

} // namespace

TEST(LocalChart, NewtonInvertsExactMap)
{
    const Fixture fx(example_surface({0.8, -0.3}, {0.5, 0.9}));
    const LocalChart chart(fx.surface, fx.nf);
    EXPECT_EQ(chart.z_of_w(0.0), fx.nf.z0);
    for (double r : {1e-3, 0.05, 0.3}) {
        for (int j = 0; j < 8; ++j) {
            const Complex w = std::polar(r, 0.3 + j * pi / 4.0);
            const Complex z = chart.z_of_w(w);
            EXPECT_LT(std::abs(chart.P(z) - std::pow(w, 4)), 1e-15 + 1e-13 * std::pow(r, 4));
            // the series seed is already close for small |w|
            const Complex seed = fx.nf.z0 + evaluate(fx.nf.z_of_w, w);
            EXPECT_LT(std::abs(z - seed), 1e-6 * r + std::pow(r, fx.nf.trunc));
        }
    }
}

TEST(LocalChart, FlatExampleIsTheFourthRoot)
{
    // a = b = 0: P(z) = z^4 exactly, so z(w) = w on the principal sheet
    const Fixture fx(example_surface(0.0, 0.0));
    const LocalChart chart(fx.surface, fx.nf);
    const Complex w(0.1, 0.05);
    EXPECT_NEAR(std::abs(chart.z_of_w(w) - w), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(z_of_w_numeric(fx.surface, fx.nf, w, w * 1.01) - w), 0.0, 1e-15);
}

TEST(LocalChart, DerivativesMatchFiniteDifferences)
{
    const Fixture fx(example_surface({0.8, -0.3}, {0.5, 0.9}));
    const LocalChart chart(fx.surface, fx.nf);
    const Complex w = std::polar(0.2, 0.7);
    const Complex z = chart.z_of_w(w);
    const auto [X, Y] = chart.dz_dw(w, z);
    const double h = 1e-7;
    const Complex zx = (chart.z_of_w(w + h) - chart.z_of_w(w - h)) / (2 * h);
    const Complex zy = (chart.z_of_w(w + Complex(0, h)) - chart.z_of_w(w - Complex(0, h))) / (2 * h);
    // d/dw = (d/dx - i d/dy) / 2, d/dconj(w) = (d/dx + i d/dy) / 2
    EXPECT_NEAR(std::abs(X - 0.5 * (zx - Complex(0, 1) * zy)), 0.0, 1e-6);
    EXPECT_NEAR(std::abs(Y - 0.5 * (zx + Complex(0, 1) * zy)), 0.0, 1e-6);

    const PhiEval e = big_phi_eval(chart, 1, w);
    const double px = (big_phi_eval(chart, 1, w + h).value - big_phi_eval(chart, 1, w - h).value) / (2 * h);
    const double py =
        (big_phi_eval(chart, 1, w + Complex(0, h)).value - big_phi_eval(chart, 1, w - Complex(0, h)).value) / (2 * h);
    EXPECT_NEAR(std::abs(e.gradient() - Complex(px, py)), 0.0, 1e-7 * std::max(1.0, std::abs(e.gradient())));
}

TEST(BigPhi, MatchesSeriesNearOrigin)
{
    const Fixture fx(example_surface(1.0, 1.0));
    for (int k = 1; k < 4; ++k) {
        const BiSeries series = sheet_difference(fx.nf, k).series;
        for (int j = 0; j < 6; ++j) {
            const Complex w = std::polar(0.05, 0.2 + j);
            const double exact = big_phi_exact(fx.surface, fx.nf, k, w);
            // the series stops at grade T, so the gap is the O(r^{T+1}) remainder
            EXPECT_NEAR(exact, evaluate(series, w).real(), 100.0 * std::pow(0.05, fx.nf.trunc + 1));
            EXPECT_NEAR(evaluate(series, w).imag(), 0.0, 1e-15);
        }
    }
    EXPECT_EQ(big_phi_exact(fx.surface, fx.nf, 1, 0.0), 0.0);
}

TEST(BigPhi, VanishesAlongSymmetricSheets)
{
    const Fixture fx({Polynomial::monomial(4.0, 3), Polynomial::monomial(0.125, 4)});
    for (int k = 1; k < 4; ++k) EXPECT_NEAR(big_phi_exact(fx.surface, fx.nf, k, {0.1, 0.2}), 0.0, 1e-16);
}

TEST(Trace, ExampleFamilies)
{
    const Fixture fx(example_surface(1.0, 1.0));
    const TraceConfig cfg;
    const std::size_t expected[] = {12, 14, 12};
    for (int k = 1; k < 4; ++k) {
        const auto curves = trace_family(fx.surface, fx.nf, k, cfg);
        ASSERT_EQ(curves.size(), expected[k - 1]);
        for (const auto &c : curves) {
            ASSERT_GE(c.samples.size(), 50u);
            EXPECT_NEAR(std::abs(c.samples.back().w), cfg.r_max, 1e-12);
            for (const auto &s : c.samples) {
                EXPECT_LT(s.residual, 1e-9);
                EXPECT_LT(std::abs(big_phi_exact(fx.surface, fx.nf, k, s.w)), 1e-12);
                // the two preimages lie on different sheets
                EXPECT_GT(std::abs(s.z1 - s.z2), 0.1 * std::abs(s.w));
            }
            // radius increases monotonically
            for (std::size_t i = 1; i < c.samples.size(); ++i)
                EXPECT_GT(std::abs(c.samples[i].w), std::abs(c.samples[i - 1].w) * (1.0 - 1e-12));
            EXPECT_NEAR(tangent_angle_at_origin(c), c.theta_start, 1e-5);
        }
    }
}

TEST(Trace, StepHalvingStability)
{
    const Fixture fx(example_surface({0.6, 0.3}, {-0.4, 0.8}));
    const LocalChart chart(fx.surface, fx.nf);
    TraceConfig coarse, fine;
    fine.step = coarse.step / 2.0;
    for (int k : {1, 2}) {
        const SheetDifference sd = sheet_difference(fx.nf, k);
        for (double theta : sd.directions_param) {
            const double t1 = tangent_angle_at_origin(trace_zero_curve(chart, k, theta, coarse));
            const double t2 = tangent_angle_at_origin(trace_zero_curve(chart, k, theta, fine));
            EXPECT_LT(std::abs(t1 - t2), 5e-4);
        }
    }
}

TEST(Trace, PartnerLiesOnMirrorFamily)
{
    const Fixture fx(example_surface(1.0, 1.0));
    const LocalChart chart(fx.surface, fx.nf);
    const ZeroCurve c = trace_zero_curve(chart, 1, sheet_difference(fx.nf, 1).directions_param[0]);
    const ZeroCurve p = partner_curve(c, 4);
    EXPECT_EQ(p.k, 3);
    ASSERT_EQ(p.samples.size(), c.samples.size());
    for (const auto &s : p.samples) {
        EXPECT_LT(std::abs(big_phi_exact(fx.surface, fx.nf, 3, s.w)), 1e-12);
        EXPECT_NEAR((fx.surface.position(s.z1) - fx.surface.position(s.z2)).norm(), 0.0, 1e-9);
    }
}

TEST(Trace, FlatSurfaceHasNoCurves)
{
    const Fixture fx(example_surface(0.0, 0.0));
    for (int k = 1; k < 4; ++k) EXPECT_TRUE(trace_family(fx.surface, fx.nf, k).empty());
}

TEST(Trace, Errors)
{
    const Fixture fx(example_surface(1.0, 1.0));
    const LocalChart chart(fx.surface, fx.nf);
    TraceConfig bad;
    bad.r_start = 0.5;
    expect_code([&] { (void)trace_zero_curve(chart, 1, 0.0, bad); }, "trace-config");
    expect_code([&] { (void)trace_zero_curve(chart, 4, 0.0); }, "sheet-index");

    ZeroCurve sparse;
    sparse.r_max = 0.3;
    for (double r : {0.01, 0.02, 0.2}) sparse.samples.push_back({std::polar(r, 0.1), 0.0, 0.0, Vec3::Zero(), 0.0});
    expect_code([&] { (void)tangent_angle_at_origin(sparse); }, "insufficient-samples");

    // midway between zero directions Phi is extremal on the circle, so the start solve finds nothing
    try {
        (void)trace_zero_curve(chart, 1, pi / 6.0);
        ADD_FAILURE() << "expected trace-lost";
    } catch (const TraceLost &lost) {
        EXPECT_EQ(lost.code(), "trace-lost");
        EXPECT_TRUE(lost.partial().samples.empty());
    }
}

TEST(Trace, CsvExport)
{
    ZeroCurve c;
    c.k = 2;
    c.samples.push_back({Complex(0.1, 0.2), Complex(0.3, 0.4), Complex(0.5, 0.6), Vec3(1, 2, 3), 1e-17});
    std::ostringstream os;
    write_curves_csv(os, {c});
    EXPECT_EQ(os.str(), "k,theta_start,w_re,w_im,z1_re,z1_im,z2_re,z2_im,f1,f2,f3,residual\n"
                        "2,0,0.10000000000000001,0.20000000000000001,0.29999999999999999,0.40000000000000002,"
                        "0.5,0.59999999999999998,1,2,3,1.000000e-17\n");
}

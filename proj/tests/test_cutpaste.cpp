#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "branchpt/cutpaste.hpp"
#include "test_support.hpp"

using namespace branchpt;
using testsupport::expect_code;

namespace {

constexpr double pi = std::numbers::pi;

// One traced family-1 curve of the a = b = 1 example, shared by all tests.
struct Example {
    WeierstrassData data = example_surface(1.0, 1.0);
    SurfaceMap surface = build_surface(data);
    NormalForm nf = normal_form(surface, detect_branch_points(data, 1.0).at(0));
    LocalChart chart{surface, nf};
    ZeroCurve gamma1 = trace_zero_curve(chart, 1, sheet_difference(nf, 1).directions_param[0]);

    static const Example &get()
    {
        static const Example s;
        return s;
    }
};

} // namespace

TEST(Decomposition, ArcAndVertices)
{
    const Example &S = Example::get();
    const PentagonDecomposition d = build_decomposition(S.chart, S.gamma1);
    EXPECT_NEAR(std::abs(d.end1), 0.25, 1e-12);
    EXPECT_NEAR(std::abs(d.end2 - d.zeta * d.end1), 0.0, 1e-15);
    EXPECT_NEAR(d.theta2 - d.theta1, pi / 2.0, 1e-15);
    EXPECT_LT(d.max_pair_gap, 1e-9);
    EXPECT_EQ(d.vertices[2], Complex(0.0));
    // the arc sits on the zero set and is parameterized by arc length
    for (double f : {0.1, 0.5, 0.9}) {
        const Complex w = d.gamma(1, f * d.eps);
        EXPECT_LT(std::abs(big_phi_exact(S.surface, S.nf, 1, w)), 1e-14);
        EXPECT_NEAR(std::abs(w), std::abs(d.arc.polyline(f * d.eps)), 1e-15);
    }
    EXPECT_GE(d.eps, 0.25);
    EXPECT_LT(d.eps, 0.25 * 1.01);
}

TEST(Decomposition, ExplicitEps)
{
    const Example &S = Example::get();
    CutPasteConfig cfg;
    cfg.eps = 0.1;
    const PentagonDecomposition d = build_decomposition(S.chart, S.gamma1, cfg);
    EXPECT_EQ(d.eps, 0.1);
    EXPECT_NEAR(d.D_radius, std::abs(d.end1), 0.0);
}

TEST(Decomposition, Errors)
{
    const Example &S = Example::get();
    CutPasteConfig far;
    far.D_radius = 0.5;
    expect_code([&] { (void)build_decomposition(S.chart, S.gamma1, far); }, "arc-short");
    CutPasteConfig long_eps;
    long_eps.eps = 10.0;
    expect_code([&] { (void)build_decomposition(S.chart, S.gamma1, long_eps); }, "arc-short");
    expect_code([&] { (void)build_decomposition(S.chart, ZeroCurve{}); }, "arc-short");

    // gamma1 is not its own partner, and a family-3 curve from another direction is not either
    expect_code([&] { (void)build_decomposition(S.chart, S.gamma1, S.gamma1); }, "pair-mismatch");
    const ZeroCurve partner = partner_curve(S.gamma1, 4);
    EXPECT_NO_THROW((void)build_decomposition(S.chart, S.gamma1, partner));
    double theta_other = 0.0;
    for (double th : sheet_difference(S.nf, 3).directions_param)
        if (std::abs(std::remainder(th - partner.theta_start, two_pi)) > 0.1) theta_other = th;
    const ZeroCurve other = trace_zero_curve(S.chart, 3, theta_other);
    expect_code([&] { (void)build_decomposition(S.chart, S.gamma1, other); }, "pair-mismatch");
}

class QMap : public ::testing::Test {
protected:
    static void SetUpTestSuite()
    {
        d_ = new PentagonDecomposition(build_decomposition(Example::get().chart, Example::get().gamma1));
        built_ = new BuiltQ(build_Q(*d_, 24));
    }
    static void TearDownTestSuite()
    {
        delete built_;
        delete d_;
    }
    static PentagonDecomposition *d_;
    static BuiltQ *built_;
};

PentagonDecomposition *QMap::d_ = nullptr;
BuiltQ *QMap::built_ = nullptr;

TEST_F(QMap, NamedPoints)
{
    const auto checks = boundary_checks(built_->Q);
    EXPECT_EQ(checks.size(), 12u);
    for (const auto &c : checks) EXPECT_LT(c.error, 1e-12) << c.name;
}

TEST_F(QMap, TearsOnTheSeamButNotInImage)
{
    const PiecewiseMapQ &Q = built_->Q;
    const Complex p(0.0, 0.3);
    const Complex left = Q(2, p), right = Q(1, p);
    EXPECT_NEAR(std::abs(right - d_->gamma(1, 0.2 * d_->eps)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(left - d_->gamma(2, 0.2 * d_->eps)), 0.0, 1e-12);
    EXPECT_GT(std::abs(left - right), 0.1 * d_->eps);
    EXPECT_LT((d_->image(left) - d_->image(right)).norm(), 1e-12);

    // on the x-axis the two sides agree in the w-plane
    for (double x : {0.2, 0.7}) {
        EXPECT_NEAR(std::abs(Q(1, {x, 0.0}) - Q(4, {x, 0.0})), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(Q(1, {x, 0.0}) - d_->gamma(1, d_->eps * (1.0 + x) / 2.0)), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(Q(2, {-x, 0.0}) - Q(3, {-x, 0.0})), 0.0, 1e-12);
    }
    // outer circle maps to the outer circle
    for (double a : {0.3, 1.2, 2.0, 4.0, 5.5}) {
        const Complex p2 = std::polar(1.0, a);
        const int q = p2.real() > 0 ? (p2.imag() > 0 ? 1 : 4) : (p2.imag() > 0 ? 2 : 3);
        EXPECT_NEAR(std::abs(Q(q, p2)), d_->D_radius, 1e-12);
    }
}

TEST_F(QMap, BInverseRoundTrip)
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.01, 0.99);
    for (int q = 1; q <= 4; ++q) {
        for (int i = 0; i < 25; ++i) {
            const double s = u(rng), t = u(rng);
            const auto [s2, t2] = built_->Q.B_inverse(q, built_->Q.B(q, s, t));
            EXPECT_NEAR(s2, s, 1e-10);
            EXPECT_NEAR(t2, t, 1e-10);
            // B mirrors the first quadrant, so it reverses orientation in quadrants 2 and 4
            EXPECT_GT(built_->Q.det_B(q, s, t) * (q % 2 == 1 ? 1.0 : -1.0), 0.0);
        }
        // corners and the two straight edges of the patch
        for (auto [s, t] : {std::pair{0.0, 0.0}, {0.0, 0.6}, {0.4, 1.0}, {1.0, 0.0}, {1.0, 1.0}}) {
            const auto [s2, t2] = built_->Q.B_inverse(q, built_->Q.B(q, s, t));
            EXPECT_NEAR(s2, s, 1e-12);
            EXPECT_NEAR(t2, t, 1e-12);
        }
    }
    expect_code([&] { (void)built_->Q.B_inverse(1, {-0.5, 0.2}); }, "outside-quadrant");
}

TEST_F(QMap, MeshIsInjectiveOntoTheDisk)
{
    const QMesh &qm = built_->mesh;
    EXPECT_EQ(qm.foldover_fraction, 0.0);
    // every triangle keeps its orientation under W and the images tile D once
    double covered = 0.0;
    const double cell = std::pow(d_->D_radius / qm.resolution, 2);
    for (const auto &t : qm.mesh.triangles) {
        const double a = ParamMesh::signed_area(qm.w[t[0]], qm.w[t[1]], qm.w[t[2]]);
        const bool at_a = std::any_of(t.begin(), t.end(), [&](int v) { return qm.mesh.vertices[v] == Complex(0.0); });
        // both edges at a run along the arc, so the corner sliver only has area O(h^3)
        if (at_a) EXPECT_GT(a, -1e-3 * cell);
        else EXPECT_GT(a, 0.0);
        covered += a;
    }
    for (const Complex &w : qm.w) EXPECT_LE(std::abs(w), d_->D_radius * (1.0 + 1e-12));
    const double disk = pi * d_->D_radius * d_->D_radius;
    EXPECT_LT(covered, disk);
    EXPECT_GT(covered, 0.99 * disk);
}

TEST_F(QMap, SeamChecks)
{
    const SeamReport rep = seam_checks(*built_);
    EXPECT_LT(rep.continuity_jump, 1e-8 * rep.scale);
    // second order in the mesh width: about 0.02 at 24 cells per side
    EXPECT_LT(rep.rel_area_diff, 3e-2);
    EXPECT_GT(rep.min_seam_angle, 0.0);
    // the cut is a genuine crossing: the tangent planes differ on the seam
    EXPECT_GT(seam_angle(*d_, 0.3 * d_->eps), 1e-4);
}

TEST_F(QMap, CsvHeaders)
{
    std::ostringstream v, t;
    write_qmesh_vertices_csv(v, built_->mesh);
    write_qmesh_triangles_csv(t, built_->mesh);
    const std::string vs = v.str(), ts = t.str();
    EXPECT_EQ(vs.substr(0, vs.find('\n')), "quadrant,x,y,w_re,w_im,f1,f2,f3");
    EXPECT_EQ(ts.substr(0, ts.find('\n')), "i0,i1,i2");
    EXPECT_EQ(std::count(vs.begin(), vs.end(), '\n'), 1 + 4 * 25 * 25);
    EXPECT_EQ(std::count(ts.begin(), ts.end(), '\n'), 1 + 4 * 2 * 24 * 24);
}

TEST(QMesh, ResolutionValidation)
{
    const Example &S = Example::get();
    const PentagonDecomposition d = build_decomposition(S.chart, S.gamma1);
    expect_code([&] { (void)build_Q(d, 1); }, "resolution-invalid");
}

TEST(DiskArea, FlatExampleIsExact)
{
    // a = b = 0: f = (Re w^4, Im w^4, 0), the disk of radius R^4 covered four times
    const WeierstrassData data = example_surface(0.0, 0.0);
    const SurfaceMap s = build_surface(data);
    const NormalForm nf = normal_form(s, detect_branch_points(data, 1.0).at(0));
    const LocalChart chart(s, nf);
    const double R = 0.5;
    EXPECT_NEAR(disk_area_in_w(chart, R), 4.0 * pi * std::pow(R, 8), 1e-13);
}

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "branchpt/weierstrass.hpp"
#include "test_support.hpp"

using namespace branchpt;
using testsupport::expect_code;

namespace {

double poly_diff(const Polynomial &p, const Polynomial &q) { return (p - q).max_abs_coeff(); }

Polynomial random_poly(std::mt19937_64 &rng, int degree)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Complex> c;
    for (int i = 0; i <= degree; ++i) c.emplace_back(u(rng), u(rng));
    return Polynomial(std::move(c));
}

} // namespace

TEST(Weierstrass, DisplayedDerivatives)
{
    const Complex a(0.6, -0.2), b(1.3, 0.4);
    const FzTriple fz = derive_fz(example_surface(a, b));
    const Polynomial g{0.0, 0.0, a, b};
    const Polynomial z3 = Polynomial::monomial(2.0, 3);
    // f1_z = [1 - g^2] 2 z^3, f2_z = -i [1 + g^2] 2 z^3, f3_z = 4 z^3 g
    EXPECT_LT(poly_diff(fz[0], (Polynomial{1.0} - g * g) * z3), 1e-14);
    EXPECT_LT(poly_diff(fz[1], Complex(0.0, -1.0) * ((Polynomial{1.0} + g * g) * z3)), 1e-14);
    EXPECT_LT(poly_diff(fz[2], Polynomial::monomial(4.0, 3) * g), 1e-14);
}

TEST(Weierstrass, PlaneTriples)
{
    const FzTriple fz = derive_fz(plane_surface(2.0));
    EXPECT_LT(poly_diff(fz[0], Polynomial{1.0}), 1e-15);
    EXPECT_LT(poly_diff(fz[1], Polynomial{Complex(0.0, -1.0)}), 1e-15);
    EXPECT_TRUE(fz[2].is_zero());
    const FzTriple fz3 = derive_fz(example_surface(1.0, 0.0));
    EXPECT_LT(poly_diff(fz3[2], Polynomial::monomial(4.0, 5)), 1e-15);
}

TEST(Weierstrass, Validation)
{
    expect_code([] { (void)build_surface({Polynomial{}, Polynomial{1.0}}); }, "h-zero");
    expect_code([] { (void)build_surface({Polynomial::monomial(1.0, 33), Polynomial{}}); }, "degree-cap");
    expect_code([] { (void)detect_branch_points(example_surface(1.0, 1.0), 0.0); }, "radius-invalid");
}

TEST(Weierstrass, SurfaceExamples)
{
    const SurfaceMap flat = build_surface(example_surface(0.0, 0.0));
    const Complex z(0.3, 0.2);
    const Complex z4 = std::pow(z, 4);
    EXPECT_NEAR((flat.position(z) - Vec3(z4.real(), z4.imag(), 0.0)).norm(), 0.0, 1e-15);

    const Complex a(0.7, 0.4), b(-0.3, 1.1);
    const SurfaceMap s = build_surface(example_surface(a, b));
    const Complex ac = std::conj(a), bc = std::conj(b), zc = std::conj(z);
    const Complex w4 = z4 - ac * ac * std::pow(zc, 8) / 2.0 - 8.0 * ac * bc * std::pow(zc, 9) / 9.0 -
                       2.0 * bc * bc * std::pow(zc, 10) / 5.0;
    const Vec3 f = s.position(z);
    EXPECT_NEAR(std::abs(Complex(f[0], f[1]) - w4), 0.0, 1e-15);
    EXPECT_NEAR(f[2], 8.0 * (a / 6.0 * std::pow(z, 6) + b / 7.0 * std::pow(z, 7)).real(), 1e-15);
    EXPECT_NEAR(s.position(0.0).norm(), 0.0, 0.0);
}

TEST(Weierstrass, Conformality)
{
    EXPECT_TRUE(conformality_check(example_surface({2.0, 1.0}, -1.0)).conformal);
    const auto bad = conformality_check(FzTriple{Polynomial{0.0, 1.0}, Polynomial{0.0, 1.0}, Polynomial{}});
    EXPECT_FALSE(bad.conformal);
    EXPECT_LT(poly_diff(bad.residual, Polynomial::monomial(2.0, 2)), 1e-15);

    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const WeierstrassData data{random_poly(rng, 1 + trial % 5), random_poly(rng, trial % 4)};
        EXPECT_TRUE(conformality_check(data).conformal);
    }
}

TEST(Weierstrass, Harmonicity)
{
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(-0.8, 0.8);
    const SurfaceMap s = build_surface({random_poly(rng, 4), random_poly(rng, 3)});
    const double h = 1e-3;
    for (int i = 0; i < 100; ++i) {
        const Complex z(u(rng), u(rng));
        const Vec3 lap = (s.position(z + h) + s.position(z - h) + s.position(z + Complex(0.0, h)) +
                          s.position(z - Complex(0.0, h)) - 4.0 * s.position(z)) / (h * h);
        const double scale = std::max(1.0, s.position(z).norm());
        // O(h^2) truncation plus O(eps / h^2) rounding, both far below 1e-3.
        EXPECT_LT(lap.norm(), 1e-3 * scale) << "at " << z;
    }
}

TEST(Weierstrass, PartialsMatchFiniteDifferences)
{
    const SurfaceMap s = build_surface(example_surface({0.7, 0.4}, {-0.3, 1.1}));
    const Complex z(0.4, -0.3);
    const double h = 1e-6;
    const auto [fx, fy] = s.partials(z);
    EXPECT_NEAR((fx - (s.position(z + h) - s.position(z - h)) / (2 * h)).norm(), 0.0, 1e-8);
    EXPECT_NEAR((fy - (s.position(z + Complex(0, h)) - s.position(z - Complex(0, h))) / (2 * h)).norm(), 0.0, 1e-8);
}

TEST(BranchPoints, ExampleSurface)
{
    const auto bps = detect_branch_points(example_surface(1.0, 1.0), 1.0);
    ASSERT_EQ(bps.size(), 1u);
    EXPECT_EQ(bps[0].order, 3);
    EXPECT_EQ(bps[0].m, 4);
    EXPECT_NEAR(std::abs(bps[0].z0), 0.0, 1e-12);
    EXPECT_NEAR((bps[0].c - CVec3(1.0, Complex(0.0, -1.0), 0.0)).norm(), 0.0, 1e-12);
    EXPECT_LT(std::abs(bps[0].bilinear_cc()), 1e-10);
}

TEST(BranchPoints, LocalFormHolds)
{
    const SurfaceMap s = build_surface(example_surface({0.7, 0.4}, {-0.3, 1.1}));
    const auto bp = detect_branch_points(s.data(), 1.0).at(0);
    for (double r : {1e-2, 5e-3}) {
        const Complex t = std::polar(r, 0.4);
        const CVec3 lead = bp.c * std::pow(t, bp.m);
        const Vec3 predicted = lead.real();
        EXPECT_LT((s.position(bp.z0 + t) - s.position(bp.z0) - predicted).norm(), 10.0 * std::pow(r, bp.m + 1));
    }
}

TEST(BranchPoints, ImmersionAndMultipleRoots)
{
    EXPECT_TRUE(detect_branch_points(plane_surface(2.0), 5.0).empty());
    const WeierstrassData two{Polynomial::monomial(4.0, 3) * Polynomial{-0.5, 1.0}, Polynomial{0.0, 1.0}};
    const auto bps = detect_branch_points(two, 1.0);
    ASSERT_EQ(bps.size(), 2u);
    EXPECT_EQ(bps[0].m, 4);
    EXPECT_NEAR(std::abs(bps[1].z0 - 0.5), 0.0, 1e-10);
    EXPECT_EQ(bps[1].m, 2);
    for (const auto &bp : bps) EXPECT_LT(std::abs(bp.bilinear_cc()), 1e-10);
}

TEST(BranchPoints, StableUnderRadiusEnlargement)
{
    const WeierstrassData data{Polynomial{0.3, 0.0, 1.0} * Polynomial::monomial(1.0, 2) * Polynomial{-0.7, 1.0},
                               Polynomial{0.0, 0.5, 0.2}};
    const auto small = detect_branch_points(data, 0.65);
    const auto large = detect_branch_points(data, 2.0);
    ASSERT_LE(small.size(), large.size());
    for (std::size_t i = 0; i < small.size(); ++i) {
        EXPECT_EQ(small[i].z0, large[i].z0);
        EXPECT_EQ(small[i].m, large[i].m);
        EXPECT_EQ(small[i].c, large[i].c);
    }
}

TEST(Mesh, Validation)
{
    ParamMesh bad;
    bad.vertices = {0.0, 1.0, 2.0};
    bad.triangles = {{0, 1, 2}};
    expect_code([&] { bad.validate(); }, "mesh-degenerate");
    bad.triangles = {{0, 1, 3}};
    expect_code([&] { bad.validate(); }, "mesh-index");
}

TEST(EnergyArea, PlaneDisk)
{
    const ParamMesh mesh = disk_mesh(1.0, 41);
    EXPECT_GE(mesh.triangles.size(), 10000u);
    const EnergyArea unit = mesh_energy_area(build_surface(plane_surface(1.0)), mesh);
    EXPECT_NEAR(unit.energy / std::numbers::pi, 1.0, 0.02);
    EXPECT_NEAR(unit.area / std::numbers::pi, 1.0, 0.02);
    const EnergyArea doubled = mesh_energy_area(build_surface(plane_surface(2.0)), mesh);
    EXPECT_NEAR(doubled.area / (4.0 * std::numbers::pi), 1.0, 0.02);
}

TEST(EnergyArea, ConformalAnnulusEquality)
{
    const SurfaceMap s = build_surface(example_surface(1.0, 1.0));
    const EnergyArea ea = mesh_energy_area(s, annulus_mesh(0.1, 0.5, 40, 160));
    EXPECT_NEAR(ea.energy, ea.area, 1e-8 * ea.area);
}

TEST(EnergyArea, PerturbedImagesStrictGap)
{
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n(0.0, 0.05);
    const SurfaceMap s = build_surface(example_surface(1.0, 1.0));
    ParamMesh mesh = disk_mesh(0.8, 12);
    evaluate_images(s, mesh);
    for (auto &p : mesh.images) p += Vec3(n(rng), n(rng), n(rng));
    const EnergyArea ea = piecewise_linear_energy_area(mesh);
    EXPECT_GT(ea.energy, ea.area);
}

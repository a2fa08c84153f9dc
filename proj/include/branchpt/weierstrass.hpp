#pragma once

// Polynomial Weierstrass data (h, g) and the minimal immersion it generates:
//
//   f_z = ( h (1 - g^2) / 2,  -i h (1 + g^2) / 2,  h g ),   f = 2 Re F,  F' = f_z, F(0) = 0.
//
// With h = 4 z^3 and g = a z^2 + b z^3 this reproduces the explicit example
// surface whose branch point at the origin has order 3.

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "branchpt/error.hpp"
#include "branchpt/polynomial.hpp"

namespace branchpt {

using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;
using FzTriple = std::array<Polynomial, 3>;

inline constexpr int max_weierstrass_degree = 32;

struct WeierstrassData {
    Polynomial h;
    Polynomial g;

    void validate() const
    {
        if (h.is_zero()) fail("h-zero", "h must not vanish identically");
        if (h.degree() > max_weierstrass_degree || g.degree() > max_weierstrass_degree)
            fail("degree-cap", "Weierstrass polynomials are capped at degree 32");
    }
};

/// h = 4 z^3, g = a z^2 + b z^3: branch point of order 3 at the origin.
inline WeierstrassData example_surface(Complex a, Complex b)
{
    return {Polynomial::monomial(4.0, 3), Polynomial{0.0, 0.0, a, b}};
}

/// h = 1, g = 0 gives the identity map (x, y, 0).
inline WeierstrassData plane_surface(Complex h0 = 1.0) { return {Polynomial{h0}, Polynomial{}}; }

inline FzTriple derive_fz(const WeierstrassData &data)
{
    const Polynomial g2 = data.g * data.g;
    const Polynomial one{1.0};
    return {Complex(0.5) * (data.h * (one - g2)), Complex(0.0, -0.5) * (data.h * (one + g2)), data.h * data.g};
}

/// sum_k (f^k_z)^2; identically zero for a conformal triple.
inline Polynomial conformality_residual(const FzTriple &fz)
{
    return fz[0] * fz[0] + fz[1] * fz[1] + fz[2] * fz[2];
}

struct ConformalityCheck {
    bool conformal = false;
    Polynomial residual;
};

inline ConformalityCheck conformality_check(const FzTriple &fz, double tol = 1e-12)
{
    Polynomial r = conformality_residual(fz);
    return {r.max_abs_coeff() < tol, std::move(r)};
}

inline ConformalityCheck conformality_check(const WeierstrassData &data, double tol = 1e-12)
{
    return conformality_check(derive_fz(data), tol);
}

/// The immersion f = 2 Re F with F the exact antiderivatives of f_z.
class SurfaceMap {
public:
    explicit SurfaceMap(WeierstrassData data) : data_(std::move(data))
    {
        data_.validate();
        dF_ = derive_fz(data_);
        for (int k = 0; k < 3; ++k) F_[k] = dF_[k].antiderivative();
    }

    const WeierstrassData &data() const { return data_; }
    const FzTriple &F() const { return F_; }
    const FzTriple &fz() const { return dF_; }

    Vec3 position(Complex z) const
    {
        return {2.0 * F_[0](z).real(), 2.0 * F_[1](z).real(), 2.0 * F_[2](z).real()};
    }

    CVec3 fz_at(Complex z) const { return {dF_[0](z), dF_[1](z), dF_[2](z)}; }

    /// f_x = 2 Re F', f_y = -2 Im F'.
    std::pair<Vec3, Vec3> partials(Complex z) const
    {
        const CVec3 d = fz_at(z);
        return {2.0 * d.real(), -2.0 * d.imag()};
    }

    /// Unit normal; zero at branch points.
    Vec3 normal(Complex z) const
    {
        const auto [fx, fy] = partials(z);
        const Vec3 n = fx.cross(fy);
        const double len = n.norm();
        return len > 0.0 ? Vec3(n / len) : Vec3::Zero();
    }

private:
    WeierstrassData data_;
    FzTriple dF_;
    FzTriple F_;
};

inline SurfaceMap build_surface(const WeierstrassData &data) { return SurfaceMap(data); }

/// Branch point of order m - 1 with f(z0 + t) = f(z0) + Re{c t^m} + O(|t|^{m+1}).
struct BranchPointRecord {
    Complex z0;
    int order = 0;
    int m = 1;
    CVec3 c;

    /// Complex-bilinear <c, c>; vanishes for a conformal map.
    Complex bilinear_cc() const { return c.transpose() * c; }
};

inline std::vector<BranchPointRecord> detect_branch_points(const WeierstrassData &data, double radius)
{
    if (!(radius > 0.0)) fail("radius-invalid", "radius must be positive");
    data.validate();
    const FzTriple fz = derive_fz(data);
    std::vector<BranchPointRecord> out;
    for (const auto &root : polynomial_roots(data.h)) {
        if (std::abs(root.z) >= radius) continue;
        BranchPointRecord bp;
        bp.z0 = root.z;
        bp.order = root.multiplicity;
        bp.m = root.multiplicity + 1;
        for (int k = 0; k < 3; ++k) bp.c[k] = 2.0 * fz[k].shifted(root.z).coeff(bp.m - 1) / static_cast<double>(bp.m);
        out.push_back(bp);
    }
    return out;
}

/// Parameter-plane triangle mesh with optional per-vertex images in R^3.
struct ParamMesh {
    std::vector<Complex> vertices;
    std::vector<std::array<int, 3>> triangles;
    std::vector<Vec3> images;

    static double signed_area(Complex p0, Complex p1, Complex p2)
    {
        const Complex e1 = p1 - p0, e2 = p2 - p0;
        return 0.5 * (e1.real() * e2.imag() - e1.imag() * e2.real());
    }

    void validate() const
    {
        const int nv = static_cast<int>(vertices.size());
        for (const auto &t : triangles) {
            for (int idx : t)
                if (idx < 0 || idx >= nv) fail("mesh-index", "triangle index out of range");
            if (std::abs(signed_area(vertices[t[0]], vertices[t[1]], vertices[t[2]])) < 1e-14)
                fail("mesh-degenerate", "triangle with parameter area below 1e-14");
        }
        if (!images.empty() && images.size() != vertices.size())
            fail("mesh-images", "image count differs from vertex count");
    }
};

/// Concentric-ring disk mesh: ring k has 6k vertices, 6 rings^2 triangles.
inline ParamMesh disk_mesh(double radius, int rings)
{
    ParamMesh mesh;
    mesh.vertices.push_back(0.0);
    std::vector<int> prev{0};
    for (int k = 1; k <= rings; ++k) {
        std::vector<int> ring;
        const int count = 6 * k;
        for (int j = 0; j < count; ++j) {
            ring.push_back(static_cast<int>(mesh.vertices.size()));
            mesh.vertices.push_back(std::polar(radius * k / rings, 2.0 * std::numbers::pi * j / count));
        }
        // merge-walk both rings by angle, emitting one triangle per advance
        const int inner = static_cast<int>(prev.size());
        int i = 0, o = 0;
        while (o < count || (k > 1 && i < inner)) {
            const bool advance_outer =
                o < count && (k == 1 || i == inner || (o + 1.0) / count <= (i + 1.0) / inner);
            if (advance_outer) {
                mesh.triangles.push_back({prev[i % inner], ring[o], ring[(o + 1) % count]});
                ++o;
            } else {
                mesh.triangles.push_back({prev[i % inner], ring[o % count], prev[(i + 1) % inner]});
                ++i;
            }
        }
        prev = std::move(ring);
    }
    return mesh;
}

/// Structured annulus mesh r0 < |z| < r1.
inline ParamMesh annulus_mesh(double r0, double r1, int n_radial, int n_angular)
{
    ParamMesh mesh;
    for (int i = 0; i <= n_radial; ++i)
        for (int j = 0; j < n_angular; ++j)
            mesh.vertices.push_back(std::polar(r0 + (r1 - r0) * i / n_radial, 2.0 * std::numbers::pi * j / n_angular));
    auto id = [&](int i, int j) { return i * n_angular + (j % n_angular); };
    for (int i = 0; i < n_radial; ++i)
        for (int j = 0; j < n_angular; ++j) {
            mesh.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            mesh.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    return mesh;
}

inline void evaluate_images(const SurfaceMap &surface, ParamMesh &mesh)
{
    mesh.images.clear();
    for (Complex v : mesh.vertices) mesh.images.push_back(surface.position(v));
}

struct EnergyArea {
    double energy = 0.0;
    double area = 0.0;
};

/// Dirichlet energy and area by one-point (barycenter) quadrature with the
/// exact derivatives of the surface.
inline EnergyArea mesh_energy_area(const SurfaceMap &surface, const ParamMesh &mesh)
{
    mesh.validate();
    EnergyArea out;
    for (const auto &t : mesh.triangles) {
        const Complex p0 = mesh.vertices[t[0]], p1 = mesh.vertices[t[1]], p2 = mesh.vertices[t[2]];
        const double area = std::abs(ParamMesh::signed_area(p0, p1, p2));
        const auto [fx, fy] = surface.partials((p0 + p1 + p2) / 3.0);
        const double e = 0.5 * (fx.squaredNorm() + fy.squaredNorm());
        // |fx ^ fy| <= |fx||fy| <= e; clamp so rounding cannot invert the inequality
        const double a = std::min(fx.cross(fy).norm(), e);
        out.energy += e * area;
        out.area += a * area;
    }
    return out;
}

/// Energy and area of the piecewise-linear map defined by the mesh images.
inline EnergyArea piecewise_linear_energy_area(const ParamMesh &mesh)
{
    mesh.validate();
    if (mesh.images.size() != mesh.vertices.size()) fail("mesh-images", "mesh has no vertex images");
    EnergyArea out;
    for (const auto &t : mesh.triangles) {
        const Complex d1 = mesh.vertices[t[1]] - mesh.vertices[t[0]];
        const Complex d2 = mesh.vertices[t[2]] - mesh.vertices[t[0]];
        const Vec3 e1 = mesh.images[t[1]] - mesh.images[t[0]];
        const Vec3 e2 = mesh.images[t[2]] - mesh.images[t[0]];
        // [fx fy] * [d1 d2] = [e1 e2]
        const double det = d1.real() * d2.imag() - d1.imag() * d2.real();
        const Vec3 fx = (e1 * d2.imag() - e2 * d1.imag()) / det;
        const Vec3 fy = (e2 * d1.real() - e1 * d2.real()) / det;
        const double area = 0.5 * std::abs(det);
        const double e = 0.5 * (fx.squaredNorm() + fy.squaredNorm());
        out.energy += e * area;
        out.area += std::min(fx.cross(fy).norm(), e) * area;
    }
    return out;
}

} // namespace branchpt

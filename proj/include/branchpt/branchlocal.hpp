#pragma once

// Local analysis at a branch point of a surface in R^3.
//
// In a rotated frame (p1, p2, p3) aligned with the leading vector c, the
// surface near the branch point reads p1 + i p2 = w^m, p3 = phi(w) for a
// non-conformal coordinate w.  Sheets are related by w -> zeta^k w with
// zeta = exp(2 pi i / m), and zeros of the sheet difference
// Phi_k(w) = phi(w) - phi(zeta^k w) are self-intersection curves.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "branchpt/biseries.hpp"
#include "branchpt/weierstrass.hpp"

namespace branchpt {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// exp(2 pi i r / m), exact at quarter turns.
inline Complex unit_root(long r, int m)
{
    r %= m;
    if (r < 0) r += m;
    if ((4 * r) % m == 0) {
        static constexpr Complex quarter[4] = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
        return quarter[(4 * r) / m];
    }
    return std::polar(1.0, two_pi * static_cast<double>(r) / m);
}

/// Angle reduced to [0, 2 pi).
inline double wrap_angle(double theta)
{
    double t = std::fmod(theta, two_pi);
    if (t < 0.0) t += two_pi;
    if (t >= two_pi) t -= two_pi;
    return t;
}

struct NormalForm {
    int m = 1;
    int trunc = BiSeries::default_trunc;
    Complex z0;
    Vec3 origin = Vec3::Zero();
    /// Rows are the orthonormal axes e1, e2, e3 of the adapted frame.
    Eigen::Matrix3d frame = Eigen::Matrix3d::Identity();
    /// p1 + i p2 and p3 as series in (t, conj t), t = z - z0.
    BiSeries p12;
    BiSeries p3;
    BiSeries w_of_z;
    BiSeries z_of_w;
    /// p3 in terms of w.
    BiSeries phi;
};

namespace detail {

// 2 Re G for the polynomial G(t) = sum_l e_l (F_l(z0 + t) - F_l(z0)).
inline Polynomial frame_component(const SurfaceMap &surface, Complex z0, const Vec3 &e)
{
    Polynomial G;
    for (int l = 0; l < 3; ++l) G = G + Complex(e[l]) * surface.F()[l].shifted(z0);
    std::vector<Complex> c = G.coeffs();
    if (!c.empty()) c[0] = 0.0;
    return Polynomial(std::move(c));
}

// Series of 2 Re G (real) or G1-part + i G2-part in (t, conj t).
inline BiSeries real_series(const Polynomial &G, int trunc)
{
    BiSeries s(trunc);
    for (int n = 1; n <= std::min(G.degree(), trunc); ++n) {
        s.add_term({n, 0}, G.coeff(n));
        s.add_term({0, n}, std::conj(G.coeff(n)));
    }
    return s;
}

// Removes terms of order < `below` and the listed stray keys when they are
// negligible next to `scale`; anything larger is a genuine violation.
inline BiSeries clean_low_orders(const BiSeries &s, int below, std::vector<Key> stray, double scale,
                                 const char *code)
{
    BiSeries out(s.trunc());
    for (const auto &[k, c] : s.terms()) {
        const bool low = k.grade() < below;
        const bool is_stray = std::find(stray.begin(), stray.end(), k) != stray.end();
        if (low || is_stray) {
            if (std::abs(c) > 1e-9 * scale) fail(code, "unexpected low-order term in local expansion");
            continue;
        }
        out.add_term(k, c);
    }
    return out;
}

} // namespace detail

/// Adapted frame and coordinate series at a branch point.
inline NormalForm normal_form(const SurfaceMap &surface, const BranchPointRecord &bp,
                              int trunc = BiSeries::default_trunc)
{
    const int m = bp.m;
    if (trunc < m + 4) fail("trunc-too-small", "truncation must be at least m + 4");
    const Vec3 a = bp.c.real();
    const Vec3 b = bp.c.imag();
    if (a.norm() == 0.0 || a.norm() < 1e-12 * std::max(1.0, bp.c.norm()))
        fail("degenerate-leading-vector", "leading vector has zero real part");

    // f ~ a Re t^m - b Im t^m, so e2 = -b/|b| makes p1 + i p2 = |a| t^m.
    NormalForm nf;
    nf.m = m;
    nf.trunc = trunc;
    nf.z0 = bp.z0;
    nf.origin = surface.position(bp.z0);
    Vec3 e1 = a.normalized();
    Vec3 e2 = -b;
    e2 -= e1.dot(e2) * e1;
    if (e2.norm() == 0.0) fail("degenerate-leading-vector", "leading vector is not isotropic");
    e2.normalize();
    const Vec3 e3 = e1.cross(e2);
    nf.frame.row(0) = e1;
    nf.frame.row(1) = e2;
    nf.frame.row(2) = e3;

    // the root of a series known to order T is determined only to T - m + 1
    const int work = trunc + m - 1;
    const Polynomial G1 = detail::frame_component(surface, bp.z0, e1);
    const Polynomial G2 = detail::frame_component(surface, bp.z0, e2);
    const Polynomial G3 = detail::frame_component(surface, bp.z0, e3);
    const double scale = std::max(a.norm(), 1e-300);

    BiSeries p12 = detail::real_series(G1, work) + Complex(0.0, 1.0) * detail::real_series(G2, work);
    p12 = detail::clean_low_orders(p12, m, {Key{0, m}}, scale, "root-leading-form");
    BiSeries p3 = detail::real_series(G3, work);
    p3 = detail::clean_low_orders(p3, m + 1, {}, scale, "nonstandard-height");

    const BiSeries w_full = mth_root(p12, m);
    nf.p12 = p12.with_trunc(trunc);
    nf.p3 = p3.with_trunc(trunc);
    nf.w_of_z = BiSeries(trunc);
    for (const auto &[k, c] : w_full.terms()) nf.w_of_z.add_term(k, c);
    nf.z_of_w = detail::revert_scaled(nf.w_of_z);
    nf.phi = compose(nf.p3, nf.z_of_w);
    return nf;
}

/// Leading data of a sheet difference: Phi = Re{A w^N} + higher order.
struct ProperIndex {
    /// 0 when the series vanishes to truncation order.
    int N = 0;
    Complex A;

    bool vanishes() const { return N == 0; }
    /// N - 1, or -1 for the vanishing sentinel.
    int proper_index() const { return N - 1; }
};

/// Smallest order carrying a coefficient above tol (default: 1e-9 of the
/// largest coefficient).  That block must be the conjugate pair (N,0), (0,N).
inline ProperIndex proper_index(const BiSeries &series, double tol = -1.0)
{
    if (tol < 0.0) tol = 1e-9 * series.max_abs();
    for (const auto &[k, c] : series.terms()) {
        if (std::abs(c) <= tol) continue;
        const int N = k.grade();
        for (const auto &[bk, bc] : series.block(N)) {
            if (std::abs(bc) <= tol) continue;
            if (!(bk == Key{N, 0} || bk == Key{0, N}))
                fail_numeric("nonstandard-leading-form",
                             fmt::format("leading block of order {} has key ({},{})", N, bk.i, bk.j));
        }
        const Complex lead = series.coeff(N, 0);
        if (std::abs(series.coeff(0, N) - std::conj(lead)) > std::max(tol, 1e-9 * std::abs(lead)))
            fail_numeric("nonstandard-leading-form", "leading pair is not conjugate");
        return {N, 2.0 * lead};
    }
    return {};
}

/// The 2N angles where Re{A exp(i N theta)} = 0, spaced pi/N.
inline std::vector<double> zero_directions(int N, Complex A)
{
    if (N < 1 || std::abs(A) == 0.0) fail("no-leading-term", "zero directions need N >= 1 and A != 0");
    std::vector<double> out;
    const double base = (std::numbers::pi / 2.0 - std::arg(A)) / N;
    for (int j = 0; j < 2 * N; ++j) out.push_back(base + j * std::numbers::pi / N);
    return out;
}

/// theta -> m theta mod 2 pi, multiplicities kept.
inline std::vector<double> image_directions(int m, const std::vector<double> &params)
{
    std::vector<double> out;
    out.reserve(params.size());
    for (double t : params) out.push_back(wrap_angle(m * t));
    return out;
}

struct Ray {
    double angle = 0.0;
    int count = 0;
};

/// Distinct rays (angles within tol on the circle are merged), sorted.
inline std::vector<Ray> distinct_rays(const std::vector<double> &angles, double tol = 1e-9)
{
    std::vector<double> sorted;
    for (double a : angles) sorted.push_back(wrap_angle(a));
    std::sort(sorted.begin(), sorted.end());
    std::vector<Ray> out;
    for (double a : sorted) {
        if (!out.empty() && a - out.back().angle <= tol) ++out.back().count;
        else out.push_back({a, 1});
    }
    if (out.size() > 1 && out.front().angle + two_pi - out.back().angle <= tol) {
        out.front().count += out.back().count;
        out.pop_back();
    }
    return out;
}

/// Largest over smallest consecutive circular gap; 1 for fewer than two rays.
inline double gap_ratio(const std::vector<Ray> &rays)
{
    if (rays.size() < 2) return 1.0;
    double lo = two_pi, hi = 0.0;
    for (std::size_t i = 0; i < rays.size(); ++i) {
        const double next = i + 1 < rays.size() ? rays[i + 1].angle : rays[0].angle + two_pi;
        const double gap = next - rays[i].angle;
        lo = std::min(lo, gap);
        hi = std::max(hi, gap);
    }
    return hi / lo;
}

struct SheetDifference {
    int k = 1;
    BiSeries series;
    int N = 0;
    Complex A;
    std::vector<double> directions_param;
    std::vector<double> directions_image;
};

/// phi(w) - phi(zeta^k w) via c_ij -> c_ij (1 - zeta^{k (i - j)}).
inline BiSeries sheet_difference_series(const BiSeries &phi, int m, int k)
{
    BiSeries out(phi.trunc());
    for (const auto &[key, c] : phi.terms()) {
        const Complex mult = 1.0 - unit_root(static_cast<long>(k) * (key.i - key.j), m);
        if (mult != Complex(0.0)) out.add_term(key, c * mult);
    }
    return out;
}

inline SheetDifference sheet_difference(const NormalForm &nf, int k, double tol = -1.0)
{
    if (k < 1 || k > nf.m - 1) fail("sheet-index", fmt::format("k = {} outside 1..{}", k, nf.m - 1));
    SheetDifference sd;
    sd.k = k;
    sd.series = sheet_difference_series(nf.phi, nf.m, k);
    // relative threshold against phi, so a cancelled family is not promoted by its own noise
    const double t = tol >= 0.0 ? tol : 1e-9 * std::max(nf.phi.max_abs(), sd.series.max_abs());
    const ProperIndex pi = proper_index(sd.series, t);
    sd.N = pi.N;
    sd.A = pi.A;
    if (!pi.vanishes()) {
        sd.directions_param = zero_directions(sd.N, sd.A);
        sd.directions_image = image_directions(nf.m, sd.directions_param);
    }
    return sd;
}

/// Largest coefficient gap between Phi_{m-k}(w) and -Phi_k(zeta^{-k} w).
inline double mirror_deviation(const NormalForm &nf, int k)
{
    const BiSeries direct = sheet_difference_series(nf.phi, nf.m, nf.m - k);
    const BiSeries forward = sheet_difference_series(nf.phi, nf.m, k);
    BiSeries mirrored(nf.phi.trunc());
    for (const auto &[key, c] : forward.terms())
        mirrored.add_term(key, -c * unit_root(-static_cast<long>(k) * (key.i - key.j), nf.m));
    return (direct - mirrored).max_abs();
}

enum class BranchKind { true_branch, false_candidate };

struct BranchClass {
    BranchKind kind = BranchKind::false_candidate;
    /// Family witnessing a true branch point (0 for a false candidate).
    int witness_k = 0;
    /// Sheet differences vanish only through this order for a false candidate.
    int checked_to_order = 0;
};

inline BranchClass classify_branch(const NormalForm &nf, double tol = -1.0)
{
    BranchClass out;
    out.checked_to_order = nf.trunc;
    for (int k = 1; k < nf.m; ++k) {
        if (sheet_difference(nf, k, tol).N > 0) {
            out.kind = BranchKind::true_branch;
            out.witness_k = k;
            return out;
        }
    }
    return out;
}

struct FamilyReport {
    int k = 1;
    int N = 0;
    Complex A;
    std::vector<double> directions_param;
    std::vector<double> directions_image;
    std::vector<Ray> rays;
    double gap_ratio = 1.0;
};

struct CourantReport {
    int m = 1;
    std::vector<FamilyReport> families;
    std::vector<Ray> combined_rays;
    double gap_ratio = 1.0;
    bool equal_angles = true;
};

/// Intersection directions of every sheet pair and the combined equal-angle verdict.
inline CourantReport courant_report(const NormalForm &nf, double tol = 1e-9, double series_tol = -1.0)
{
    if (classify_branch(nf, series_tol).kind != BranchKind::true_branch)
        fail("not-true-branch", "all sheet differences vanish to truncation order");
    CourantReport report;
    report.m = nf.m;
    std::vector<double> all;
    for (int k = 1; k < nf.m; ++k) {
        const SheetDifference sd = sheet_difference(nf, k, series_tol);
        FamilyReport fam;
        fam.k = k;
        fam.N = sd.N;
        fam.A = sd.A;
        fam.directions_param = sd.directions_param;
        fam.directions_image = sd.directions_image;
        fam.rays = distinct_rays(sd.directions_image);
        fam.gap_ratio = gap_ratio(fam.rays);
        all.insert(all.end(), sd.directions_image.begin(), sd.directions_image.end());
        report.families.push_back(std::move(fam));
    }
    report.combined_rays = distinct_rays(all);
    report.gap_ratio = gap_ratio(report.combined_rays);
    report.equal_angles = report.gap_ratio < 1.0 + tol;
    return report;
}

} // namespace branchpt

#pragma once

// Cut-and-paste reparameterization of a branch-point neighbourhood.
//
// D = {|w| < R} is cut along an intersection arc gamma1 and its partner
// gamma2 = zeta^k gamma1 into two curvilinear pentagons.  The unit disk B1 is
// cut along the x-axis and the segment [-1/2, 1/2] of the y-axis.  The map
// Q : B1 -> D sends the upper half disk onto the sector from gamma1 to gamma2
// and the lower half onto the rest, so that f o Q is continuous although Q
// tears along the y-axis segment.
//
// Named correspondences: Q(c1) = gamma1(eps), Q(b1) = A1 = gamma1(eps/2),
// Q(a) = Q(e) = 0, Q(b2) = A2, Q(c2) = gamma2(eps).  On the seams
// Q(0, y) = gamma_i(eps (1/2 - |y|)), on the x-axis Q(+-x, 0) = gamma_i(eps (1 + x) / 2).
//
// Each pentagon is split by a straight ray at its bisecting angle into two
// quadrilaterals, one per quadrant of B1.  Both sides of each quadrant carry a
// boundary-blended patch on the unit square, B on the B1 side and W on the D
// side, and Q = W o B^{-1}.

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <ostream>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "branchpt/curvetrace.hpp"

namespace branchpt {

/// Intersection arc gamma(tau), tau in [0, eps], parameterized by arc length of
/// the traced polyline and projected back onto the zero set at fixed |w|.
class IntersectionArc {
public:
    IntersectionArc() = default;
    IntersectionArc(const LocalChart &chart, const ZeroCurve &curve) : chart_(&chart), k_(curve.k)
    {
        pts_.push_back(0.0);
        len_.push_back(0.0);
        for (const auto &s : curve.samples) {
            if (std::abs(s.w - pts_.back()) == 0.0) continue;
            len_.push_back(len_.back() + std::abs(s.w - pts_.back()));
            pts_.push_back(s.w);
        }
    }

    double length() const { return len_.back(); }
    int k() const { return k_; }

    /// Arc length at which the polyline first reaches |w| = R.
    std::optional<double> reach(double R) const
    {
        for (std::size_t i = 0; i + 1 < pts_.size(); ++i) {
            const Complex p = pts_[i], d = pts_[i + 1] - pts_[i];
            if (std::abs(pts_[i + 1]) < R) continue;
            // |p + lambda d| = R, smallest root in [0, 1]
            const double A = std::norm(d), Bh = (std::conj(p) * d).real(), C = std::norm(p) - R * R;
            const double lambda = (-Bh + std::sqrt(std::max(0.0, Bh * Bh - A * C))) / A;
            return len_[i] + std::clamp(lambda, 0.0, 1.0) * (len_[i + 1] - len_[i]);
        }
        return std::nullopt;
    }

    /// Point of the polyline at arc length tau.
    Complex polyline(double tau) const
    {
        if (tau <= 0.0) return pts_.front();
        const auto it = std::upper_bound(len_.begin(), len_.end(), tau);
        if (it == len_.end()) return pts_.back();
        const std::size_t i = static_cast<std::size_t>(it - len_.begin()) - 1;
        const double lambda = (tau - len_[i]) / (len_[i + 1] - len_[i]);
        return pts_[i] + lambda * (pts_[i + 1] - pts_[i]);
    }

    /// Exact zero of Phi_k on the circle through polyline(tau).
    Complex operator()(double tau) const
    {
        const Complex p = polyline(tau);
        const double r = std::abs(p);
        if (r == 0.0) return p;
        auto hit = detail::solve_on_circle(*chart_, k_, r, std::arg(p), 1e-15);
        if (!hit) fail_numeric("projection-failed", fmt::format("no zero of Phi near |w| = {}", r));
        return hit->first;
    }

private:
    const LocalChart *chart_ = nullptr;
    int k_ = 1;
    std::vector<Complex> pts_;
    std::vector<double> len_;
};

struct PentagonDecomposition {
    const LocalChart *chart = nullptr;
    int m = 1;
    int k = 1;
    Complex zeta;
    double D_radius = 0.0;
    double eps = 0.0;
    IntersectionArc arc;
    Complex A1, A2;
    Complex end1, end2;
    /// arg gamma1(eps) and the unwrapped arg of gamma2(eps).
    double theta1 = 0.0, theta2 = 0.0;
    /// Vertices gamma1(eps), A1, 0, A2, gamma2(eps) of each pentagon; they
    /// differ only in which arc of dD closes them.
    std::array<Complex, 5> vertices;
    /// max |f(gamma1(t)) - f(gamma2(t))| over a sample of t in [0, eps].
    double max_pair_gap = 0.0;

    /// gamma_i(tau) in the w-plane, i in {1, 2}.
    Complex gamma(int i, double tau) const { return i == 1 ? arc(tau) : zeta * arc(tau); }
    /// Point of the surface over w.
    Vec3 image(Complex w) const { return chart->surface().position(chart->z_of_w(w)); }
};

struct CutPasteConfig {
    double D_radius = 0.25;
    /// Derived from D_radius when absent; otherwise D_radius := |gamma1(eps)|.
    std::optional<double> eps;
    int pair_samples = 200;
};

/// Cuts D along gamma1 (a traced curve of family k) and gamma2 = zeta^k gamma1.
inline PentagonDecomposition build_decomposition(const LocalChart &chart, const ZeroCurve &gamma1,
                                                 const CutPasteConfig &cfg = {})
{
    if (gamma1.samples.empty()) fail("arc-short", "empty curve");
    PentagonDecomposition d;
    d.chart = &chart;
    d.m = chart.m();
    d.k = gamma1.k;
    d.zeta = unit_root(d.k, d.m);
    d.arc = IntersectionArc(chart, gamma1);
    if (cfg.eps) {
        if (!(*cfg.eps > 0.0) || *cfg.eps > d.arc.length()) fail("arc-short", "eps exceeds the traced arc length");
        d.eps = *cfg.eps;
        d.D_radius = std::abs(d.arc(d.eps));
    } else {
        if (!(cfg.D_radius > 0.0)) fail("radius-invalid", "D_radius must be positive");
        const auto eps = d.arc.reach(cfg.D_radius);
        if (!eps) fail("arc-short", fmt::format("curve ends before |w| = {}", cfg.D_radius));
        d.eps = *eps;
        d.D_radius = cfg.D_radius;
    }
    d.end1 = d.gamma(1, d.eps);
    d.end2 = d.gamma(2, d.eps);
    d.A1 = d.gamma(1, d.eps / 2.0);
    d.A2 = d.gamma(2, d.eps / 2.0);
    d.theta1 = std::arg(d.end1);
    d.theta2 = d.theta1 + two_pi * d.k / d.m;
    d.vertices = {d.end1, d.A1, Complex(0.0), d.A2, d.end2};
    for (int i = 1; i <= cfg.pair_samples; ++i) {
        const double tau = d.eps * i / cfg.pair_samples;
        d.max_pair_gap = std::max(d.max_pair_gap, (d.image(d.gamma(1, tau)) - d.image(d.gamma(2, tau))).norm());
    }
    return d;
}

/// As above, after checking that gamma2 is the zeta^k-partner of gamma1.
inline PentagonDecomposition build_decomposition(const LocalChart &chart, const ZeroCurve &gamma1,
                                                 const ZeroCurve &gamma2, const CutPasteConfig &cfg = {})
{
    const int m = chart.m();
    if (gamma2.k != m - gamma1.k) fail("pair-mismatch", "partner must belong to family m - k");
    const Complex back = unit_root(-gamma1.k, m);
    // arg of gamma1 at radius r, interpolated between samples (radius grows along the curve)
    auto angle_at = [&](double r) -> std::optional<double> {
        const auto &sm = gamma1.samples;
        for (std::size_t i = 0; i + 1 < sm.size(); ++i) {
            const double r0 = std::abs(sm[i].w), r1 = std::abs(sm[i + 1].w);
            if (r < r0 || r > r1) continue;
            const double lambda = r1 > r0 ? (r - r0) / (r1 - r0) : 0.0;
            return std::arg(sm[i].w) + lambda * std::remainder(std::arg(sm[i + 1].w) - std::arg(sm[i].w), two_pi);
        }
        return std::nullopt;
    };
    for (const auto &s : gamma2.samples) {
        // zeta^{-k} w2 must be a zero of Phi_k, and on gamma1 rather than another family-k curve
        const Complex back_w = back * s.w;
        const PhiEval e = big_phi_eval(chart, gamma1.k, back_w);
        if (std::abs(e.value) > 1e-8 * std::abs(e.gradient()) * std::abs(s.w))
            fail("pair-mismatch", fmt::format("partner sample at |w| = {} is off the rotated curve", std::abs(s.w)));
        const auto expected = angle_at(std::abs(back_w));
        if (expected && std::abs(std::remainder(std::arg(back_w) - *expected, two_pi)) > 1e-3)
            fail("pair-mismatch", fmt::format("partner sample at |w| = {} follows a different curve", std::abs(s.w)));
    }
    return build_decomposition(chart, gamma1, cfg);
}

/// Q : B1 -> D as four quadrant patches.
class PiecewiseMapQ {
public:
    PiecewiseMapQ() = default;
    explicit PiecewiseMapQ(const PentagonDecomposition &d) : d_(&d)
    {
        const double upper = (d.theta1 + d.theta2) / 2.0;
        const double lower = upper + std::numbers::pi;
        // quadrant q = 1..4 (counterclockwise from x > 0, y > 0)
        quads_[0] = {+1, +1, 1, d.theta1, upper};
        quads_[1] = {-1, +1, 2, d.theta2, upper};
        quads_[2] = {-1, -1, 2, d.theta2, lower};
        quads_[3] = {+1, -1, 1, d.theta1, lower - two_pi};
    }

    const PentagonDecomposition &decomposition() const { return *d_; }

    /// B1-side patch of quadrant q.
    Complex B(int q, double s, double t) const
    {
        const Quad &Qd = quads_.at(q - 1);
        const double c = std::cos(std::numbers::pi * t / 2.0), sn = std::sin(std::numbers::pi * t / 2.0);
        return {Qd.sx * s * c, Qd.sy * ((1.0 - s) * t / 2.0 + s * sn)};
    }

    /// Jacobian determinant of B(q, ., .).
    double det_B(int q, double s, double t) const
    {
        const Quad &Qd = quads_.at(q - 1);
        const double h = std::numbers::pi / 2.0;
        const double c = std::cos(h * t), sn = std::sin(h * t);
        const double xs = c, xt = -s * h * sn;
        const double ys = -t / 2.0 + sn, yt = (1.0 - s) / 2.0 + s * h * c;
        return Qd.sx * Qd.sy * (xs * yt - xt * ys);
    }

    /// Boundary curves of the D-side patch of quadrant q.
    Complex edge_C0(int q, double s) const { return d_->gamma(quads_.at(q - 1).arc, d_->eps * (0.5 + s / 2.0)); }
    Complex edge_C1(int q, double s) const { return std::polar(s * d_->D_radius, quads_.at(q - 1).theta_mid); }
    Complex edge_D0(int q, double t) const { return d_->gamma(quads_.at(q - 1).arc, d_->eps * (0.5 - t / 2.0)); }
    Complex edge_D1(int q, double t) const
    {
        const Quad &Qd = quads_.at(q - 1);
        return std::polar(d_->D_radius, Qd.theta_end + t * (Qd.theta_mid - Qd.theta_end));
    }

    /// Coons blend of precomputed edge values.
    Complex blend(int q, double s, double t, Complex c0, Complex c1, Complex d0, Complex d1) const
    {
        const Complex P00 = d_->gamma(quads_.at(q - 1).arc, d_->eps / 2.0);
        const Complex P10 = quads_.at(q - 1).arc == 1 ? d_->end1 : d_->end2;
        const Complex P01 = 0.0;
        const Complex P11 = edge_C1(q, 1.0);
        return (1.0 - t) * c0 + t * c1 + (1.0 - s) * d0 + s * d1 -
               ((1.0 - s) * (1.0 - t) * P00 + s * (1.0 - t) * P10 + (1.0 - s) * t * P01 + s * t * P11);
    }

    /// D-side patch of quadrant q.
    Complex W(int q, double s, double t) const
    {
        return blend(q, s, t, edge_C0(q, s), edge_C1(q, s), edge_D0(q, t), edge_D1(q, t));
    }

    /// (s, t) with B(q, s, t) = p.  x = s cos(pi t / 2) fixes s for each t and
    /// the remaining equation in t is strictly increasing, so bisection is safe.
    std::pair<double, double> B_inverse(int q, Complex p) const
    {
        const Quad &Qd = quads_.at(q - 1);
        const double x = Qd.sx * p.real(), y = Qd.sy * p.imag();
        if (x < -1e-14 || y < -1e-14 || std::norm(p) > 1.0 + 1e-12)
            fail("outside-quadrant", fmt::format("point {}{:+}i is not in quadrant {}", p.real(), p.imag(), q));
        if (x <= 0.0) {
            // the seam s = 0 up to y = 1/2, then the cut t = 1
            const double yy = std::max(y, 0.0);
            return yy <= 0.5 ? std::pair{0.0, 2.0 * yy} : std::pair{2.0 * yy - 1.0, 1.0};
        }
        const double h = std::numbers::pi / 2.0;
        auto excess = [&](double t) {
            const double s = x / std::cos(h * t);
            return (1.0 - s) * t / 2.0 + s * std::sin(h * t) - y;
        };
        double lo = 0.0, hi = 1.0;
        while (true) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            (excess(mid) < 0.0 ? lo : hi) = mid;
        }
        const double t = std::abs(excess(lo)) <= std::abs(excess(hi)) ? lo : hi;
        return {std::min(1.0, x / std::cos(h * t)), t};
    }

    /// Q(p) as approached from quadrant q.
    Complex operator()(int q, Complex p) const
    {
        const auto [s, t] = B_inverse(q, p);
        return W(q, s, t);
    }

private:
    struct Quad {
        int sx = 1, sy = 1;
        int arc = 1;
        double theta_end = 0.0;
        double theta_mid = 0.0;
    };
    const PentagonDecomposition *d_ = nullptr;
    std::array<Quad, 4> quads_;
};

/// B1 mesh with D-side coordinates and surface images of f o Q.
struct QMesh {
    int resolution = 0;
    /// vertices are B1 points, images are f(Q(.)).
    ParamMesh mesh;
    std::vector<Complex> w;
    std::vector<int> quadrant;
    double foldover_fraction = 0.0;

    /// Vertex index of grid node (i, j) of quadrant q.
    int index(int q, int i, int j) const { return (q - 1) * (resolution + 1) * (resolution + 1) + i * (resolution + 1) + j; }
};

/// Samples Q on an (n + 1)^2 grid per quadrant and evaluates f o Q.
inline QMesh build_Q_mesh(const PiecewiseMapQ &Q, int resolution)
{
    if (resolution < 2) fail("resolution-invalid", "resolution must be at least 2");
    const PentagonDecomposition &d = Q.decomposition();
    const int n = resolution;
    QMesh out;
    out.resolution = n;
    long bad = 0, total = 0;
    for (int q = 1; q <= 4; ++q) {
        std::vector<Complex> c0(n + 1), c1(n + 1), d0(n + 1), d1(n + 1);
        for (int i = 0; i <= n; ++i) {
            const double u = static_cast<double>(i) / n;
            c0[i] = Q.edge_C0(q, u);
            c1[i] = Q.edge_C1(q, u);
            d0[i] = Q.edge_D0(q, u);
            d1[i] = Q.edge_D1(q, u);
        }
        // i indexes s, j indexes t
        std::vector<Complex> grid((n + 1) * (n + 1));
        for (int i = 0; i <= n; ++i)
            for (int j = 0; j <= n; ++j) {
                const double s = static_cast<double>(i) / n, t = static_cast<double>(j) / n;
                const Complex wv = Q.blend(q, s, t, c0[i], c1[i], d0[j], d1[j]);
                grid[i * (n + 1) + j] = wv;
                out.mesh.vertices.push_back(Q.B(q, s, t));
                out.w.push_back(wv);
                out.quadrant.push_back(q);
                out.mesh.images.push_back(d.image(wv));
            }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const int v00 = out.index(q, i, j), v10 = out.index(q, i + 1, j);
                const int v01 = out.index(q, i, j + 1), v11 = out.index(q, i + 1, j + 1);
                // the corner at a is a straight angle, so pick the diagonal
                // whose smaller triangle is larger; orient counterclockwise
                const auto &V = out.mesh.vertices;
                auto tri = [&](int a, int b, int c) {
                    if (ParamMesh::signed_area(V[a], V[b], V[c]) > 0.0) out.mesh.triangles.push_back({a, b, c});
                    else out.mesh.triangles.push_back({a, c, b});
                };
                auto area = [&](int a, int b, int c) { return std::abs(ParamMesh::signed_area(V[a], V[b], V[c])); };
                if (std::min(area(v00, v10, v11), area(v00, v11, v01)) >= std::min(area(v00, v10, v01), area(v10, v11, v01))) {
                    tri(v00, v10, v11);
                    tri(v00, v11, v01);
                } else {
                    tri(v00, v10, v01);
                    tri(v10, v11, v01);
                }
                // orientation of W against B at the cell centre, from the grid
                const Complex ws = 0.5 * ((grid[(i + 1) * (n + 1) + j] - grid[i * (n + 1) + j]) +
                                          (grid[(i + 1) * (n + 1) + j + 1] - grid[i * (n + 1) + j + 1]));
                const Complex wt = 0.5 * ((grid[i * (n + 1) + j + 1] - grid[i * (n + 1) + j]) +
                                          (grid[(i + 1) * (n + 1) + j + 1] - grid[(i + 1) * (n + 1) + j]));
                const double detW = ws.real() * wt.imag() - ws.imag() * wt.real();
                const double detB = Q.det_B(q, (i + 0.5) / n, (j + 0.5) / n);
                ++total;
                if (!(detW * detB > 0.0)) ++bad;
            }
    }
    out.foldover_fraction = static_cast<double>(bad) / static_cast<double>(total);
    if (out.foldover_fraction > 1e-3)
        fail_numeric("q-foldover", fmt::format("W and B disagree in orientation on {:.3g}% of cells",
                                               100.0 * out.foldover_fraction));
    return out;
}

struct BuiltQ {
    PiecewiseMapQ Q;
    QMesh mesh;
};

inline BuiltQ build_Q(const PentagonDecomposition &d, int resolution)
{
    BuiltQ out{PiecewiseMapQ(d), {}};
    out.mesh = build_Q_mesh(out.Q, resolution);
    return out;
}

struct NamedPointCheck {
    std::string name;
    Complex expected;
    Complex actual;
    double error = 0.0;
};

/// The named correspondences a, e -> 0, b_i, d_i -> A_i, c_i -> gamma_i(eps),
/// each from every quadrant whose closure contains the point.
inline std::vector<NamedPointCheck> boundary_checks(const PiecewiseMapQ &Q)
{
    const PentagonDecomposition &d = Q.decomposition();
    std::vector<NamedPointCheck> out;
    auto add = [&](std::string name, int q, Complex p, Complex expected) {
        const Complex got = Q(q, p);
        out.push_back({std::move(name), expected, got, std::abs(got - expected)});
    };
    add("c1", 1, {1.0, 0.0}, d.end1);
    add("c1", 4, {1.0, 0.0}, d.end1);
    add("b1", 1, {0.0, 0.0}, d.A1);
    add("d1", 4, {0.0, 0.0}, d.A1);
    add("a", 1, {0.0, 0.5}, 0.0);
    add("a", 2, {0.0, 0.5}, 0.0);
    add("e", 3, {0.0, -0.5}, 0.0);
    add("e", 4, {0.0, -0.5}, 0.0);
    add("b2", 2, {0.0, 0.0}, d.A2);
    add("d2", 3, {0.0, 0.0}, d.A2);
    add("c2", 2, {-1.0, 0.0}, d.end2);
    add("c2", 3, {-1.0, 0.0}, d.end2);
    return out;
}

struct SeamReport {
    /// Largest |f o Q| difference between coincident vertices of adjacent quadrants.
    double continuity_jump = 0.0;
    /// max |f o Q - f(z0)| over the mesh.
    double scale = 0.0;
    double area_Q = 0.0;
    double area_D = 0.0;
    double rel_area_diff = 0.0;
    /// Smallest angle between the tangent planes on the two sides of the seam.
    double min_seam_angle = 0.0;
};

/// Area of f over |w| < R: Gauss-Legendre panels in the radius, trapezoid in the angle.
inline double disk_area_in_w(const LocalChart &chart, double R, int panels = 8, int n_theta = 720)
{
    const auto &nodes = boost::math::quadrature::gauss<double, 30>::abscissa();
    const auto &weights = boost::math::quadrature::gauss<double, 30>::weights();
    auto density = [&](Complex w) {
        const Complex z = chart.z_of_w(w);
        const auto [X, Y] = chart.dz_dw(w, z);
        const auto [fx, fy] = chart.surface().partials(z);
        auto along = [&](Complex dz) { return Vec3(fx * dz.real() + fy * dz.imag()); };
        return along(X + Y).cross(along(Complex(0.0, 1.0) * (X - Y))).norm();
    };
    auto radial = [&](double theta) {
        double sum = 0.0;
        for (int p = 0; p < panels; ++p) {
            const double lo = R * p / panels, hi = R * (p + 1) / panels;
            const double mid = (lo + hi) / 2.0, half = (hi - lo) / 2.0;
            auto term = [&](double x, double wt) {
                const double rho = mid + half * x;
                return wt * half * rho * density(std::polar(rho, theta));
            };
            // abscissae are stored for x >= 0 only
            for (std::size_t i = 0; i < nodes.size(); ++i) {
                if (nodes[i] == 0.0) sum += term(0.0, weights[i]);
                else sum += term(nodes[i], weights[i]) + term(-nodes[i], weights[i]);
            }
        }
        return sum;
    };
    double total = 0.0;
    for (int j = 0; j < n_theta; ++j) total += radial(two_pi * j / n_theta);
    return total * two_pi / n_theta;
}

/// Angle between the tangent planes of the surface at the two preimages of gamma(tau).
inline double seam_angle(const PentagonDecomposition &d, double tau)
{
    const Vec3 n1 = d.chart->surface().normal(d.chart->z_of_w(d.gamma(1, tau)));
    const Vec3 n2 = d.chart->surface().normal(d.chart->z_of_w(d.gamma(2, tau)));
    return std::atan2(n1.cross(n2).norm(), std::abs(n1.dot(n2)));
}

inline SeamReport seam_checks(const BuiltQ &built, int seam_samples = 64)
{
    const QMesh &qm = built.mesh;
    const PentagonDecomposition &d = built.Q.decomposition();
    const int n = qm.resolution;
    SeamReport rep;
    const Vec3 origin = d.chart->normal_form().origin;
    for (const auto &p : qm.mesh.images) rep.scale = std::max(rep.scale, (p - origin).norm());

    auto jump = [&](int qa, int qb, auto node) {
        for (int u = 0; u <= n; ++u) {
            const auto [ia, ja] = node(u);
            rep.continuity_jump = std::max(rep.continuity_jump, (qm.mesh.images[qm.index(qa, ia, ja)] -
                                                                 qm.mesh.images[qm.index(qb, ia, ja)]).norm());
        }
    };
    auto seam = [](int u) { return std::pair{0, u}; };
    auto xaxis = [](int u) { return std::pair{u, 0}; };
    auto cut = [n](int u) { return std::pair{u, n}; };
    jump(1, 2, seam);
    jump(4, 3, seam);
    jump(1, 4, xaxis);
    jump(2, 3, xaxis);
    jump(1, 2, cut);
    jump(4, 3, cut);

    rep.area_Q = piecewise_linear_energy_area(qm.mesh).area;
    rep.area_D = disk_area_in_w(*d.chart, d.D_radius);
    rep.rel_area_diff = std::abs(rep.area_Q - rep.area_D) / rep.area_D;

    // |y| in [0.1, 0.4] on the seam corresponds to tau in [0.1 eps, 0.4 eps]
    rep.min_seam_angle = std::numbers::pi;
    for (int i = 0; i <= seam_samples; ++i) {
        const double tau = d.eps * (0.1 + 0.3 * i / seam_samples);
        rep.min_seam_angle = std::min(rep.min_seam_angle, seam_angle(d, tau));
    }
    return rep;
}

/// Vertices: quadrant, B1 point, D point (w), image; then triangles.
inline void write_qmesh_vertices_csv(std::ostream &os, const QMesh &qm)
{
    os << "quadrant,x,y,w_re,w_im,f1,f2,f3\n";
    for (std::size_t i = 0; i < qm.mesh.vertices.size(); ++i) {
        const Complex p = qm.mesh.vertices[i];
        const Vec3 &f = qm.mesh.images[i];
        fmt::print(os, "{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", qm.quadrant[i], p.real(), p.imag(),
                   qm.w[i].real(), qm.w[i].imag(), f[0], f[1], f[2]);
    }
}

inline void write_qmesh_triangles_csv(std::ostream &os, const QMesh &qm)
{
    os << "i0,i1,i2\n";
    for (const auto &t : qm.mesh.triangles) fmt::print(os, "{},{},{}\n", t[0], t[1], t[2]);
}

} // namespace branchpt

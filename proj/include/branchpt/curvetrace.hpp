#pragma once

// Continuation of self-intersection curves on the exact surface.
//
// The curves are the zero set of Phi_k(w) = p3(z(w)) - p3(z(zeta^k w)) where
// z(w) inverts p1 + i p2 = w^m by Newton's method.  The truncated series only
// seed the Newton solves, so traced samples are genuine intersections.

#include <cmath>
#include <ostream>
#include <vector>

#include <Eigen/Dense>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "branchpt/branchlocal.hpp"

namespace branchpt {

struct TraceConfig {
    double r_start = 1e-3;
    double r_max = 0.3;
    double step = 4e-3;
    double newton_tol = 1e-13;
    double residual_tol = 1e-9;
    int max_steps = 20000;

    void validate() const
    {
        if (!(r_start > 0.0 && r_start < r_max)) fail("trace-config", "need 0 < r_start < r_max");
        if (!(step > 0.0 && newton_tol > 0.0 && residual_tol > 0.0)) fail("trace-config", "step and tolerances must be positive");
        if (max_steps < 1) fail("trace-config", "max_steps must be positive");
    }
};

struct CurveSample {
    Complex w;
    Complex z1;
    Complex z2;
    Vec3 point = Vec3::Zero();
    double residual = 0.0;
};

struct ZeroCurve {
    int k = 1;
    double theta_start = 0.0;
    double r_max = 0.0;
    std::vector<CurveSample> samples;
};

/// Raised when the corrector cannot follow a curve; carries what was traced.
class TraceLost : public Error {
public:
    TraceLost(ZeroCurve partial, const std::string &detail)
        : Error("trace-lost", ErrorKind::numerical, detail), partial_(std::move(partial))
    {
    }
    const ZeroCurve &partial() const { return partial_; }

private:
    ZeroCurve partial_;
};

/// The adapted coordinates (p1 + i p2, p3) of the exact surface near a branch point.
class LocalChart {
public:
    LocalChart(const SurfaceMap &surface, const NormalForm &nf) : surface_(&surface), nf_(&nf)
    {
        for (int j = 0; j < 3; ++j) {
            Polynomial G;
            for (int l = 0; l < 3; ++l) G = G + Complex(nf.frame(j, l)) * surface.F()[l];
            G = G - Polynomial{G(nf.z0)};
            G_[j] = G;
            dG_[j] = G.derivative();
        }
    }

    const SurfaceMap &surface() const { return *surface_; }
    const NormalForm &normal_form() const { return *nf_; }
    int m() const { return nf_->m; }

    Complex P(Complex z) const { return 2.0 * G_[0](z).real() + Complex(0.0, 2.0) * G_[1](z).real(); }
    double p3(Complex z) const { return 2.0 * G_[2](z).real(); }

    /// dP/dz and dP/dconj(z).
    std::pair<Complex, Complex> dP(Complex z) const
    {
        const Complex g1 = dG_[0](z), g2 = dG_[1](z);
        return {g1 + Complex(0.0, 1.0) * g2, std::conj(g1) + Complex(0.0, 1.0) * std::conj(g2)};
    }
    Complex dp3(Complex z) const { return dG_[2](z); }

    /// Solves P(z) = w^m by Newton on the real 2x2 system.
    Complex z_of_w(Complex w, Complex guess, double tol = 1e-13) const
    {
        if (w == Complex(0.0)) return nf_->z0;
        const Complex target = ipow(w, m());
        Complex z = guess;
        for (int it = 0; it < 50; ++it) {
            const Complex r = target - P(z);
            const auto [a, b] = dP(z);
            const double D = std::norm(a) - std::norm(b);
            if (D == 0.0 || !std::isfinite(D)) break;
            const Complex delta = (std::conj(a) * r - b * std::conj(r)) / D;
            z += delta;
            if (!is_finite(z)) break;
            if (std::abs(delta) <= tol * std::abs(z - nf_->z0)) return z;
        }
        fail_numeric("newton-diverged", fmt::format("no preimage of w = {}{:+}i", w.real(), w.imag()));
    }

    /// Newton solve seeded by the series z(w).
    Complex z_of_w(Complex w) const
    {
        if (w == Complex(0.0)) return nf_->z0;
        return z_of_w(w, nf_->z0 + evaluate(nf_->z_of_w, w));
    }

    /// dz/dw and dz/dconj(w) at z = z(w).
    std::pair<Complex, Complex> dz_dw(Complex w, Complex z) const
    {
        const auto [a, b] = dP(z);
        const double D = std::norm(a) - std::norm(b);
        const Complex M = static_cast<double>(m()) * ipow(w, m() - 1);
        return {std::conj(a) * M / D, -b * std::conj(M) / D};
    }

    /// d/dw of p3(z(w)).
    Complex dheight_dw(Complex w, Complex z) const
    {
        const auto [X, Y] = dz_dw(w, z);
        const Complex h = dp3(z);
        return h * X + std::conj(h) * std::conj(Y);
    }

private:
    const SurfaceMap *surface_;
    const NormalForm *nf_;
    std::array<Polynomial, 3> G_;
    std::array<Polynomial, 3> dG_;
};

inline Complex z_of_w_numeric(const SurfaceMap &surface, const NormalForm &nf, Complex w, Complex guess)
{
    return LocalChart(surface, nf).z_of_w(w, guess);
}

/// Value and w-derivative of Phi_k at w, with both preimages.
struct PhiEval {
    double value = 0.0;
    Complex dw;
    Complex z1;
    Complex z2;

    /// Real gradient in the w-plane, as a complex number.
    Complex gradient() const { return 2.0 * std::conj(dw); }
};

inline PhiEval big_phi_eval(const LocalChart &chart, int k, Complex w)
{
    const Complex zeta = unit_root(k, chart.m());
    PhiEval e;
    e.z1 = chart.z_of_w(w);
    e.z2 = chart.z_of_w(zeta * w);
    e.value = chart.p3(e.z1) - chart.p3(e.z2);
    if (w != Complex(0.0))
        e.dw = chart.dheight_dw(w, e.z1) - zeta * chart.dheight_dw(zeta * w, e.z2);
    return e;
}

inline double big_phi_exact(const SurfaceMap &surface, const NormalForm &nf, int k, Complex w)
{
    return big_phi_eval(LocalChart(surface, nf), k, w).value;
}

namespace detail {

inline CurveSample make_sample(const LocalChart &chart, Complex w, const PhiEval &e)
{
    CurveSample s;
    s.w = w;
    s.z1 = e.z1;
    s.z2 = e.z2;
    s.point = chart.surface().position(e.z1);
    s.residual = (s.point - chart.surface().position(e.z2)).norm();
    return s;
}

// Zero of Phi on the circle |w| = r near angle theta.
inline std::optional<std::pair<Complex, PhiEval>> solve_on_circle(const LocalChart &chart, int k, double r,
                                                                  double theta, double tol)
{
    for (int it = 0; it < 50; ++it) {
        const Complex w = std::polar(r, theta);
        const PhiEval e = big_phi_eval(chart, k, w);
        const double dtheta = 2.0 * (e.dw * Complex(0.0, 1.0) * w).real();
        if (dtheta == 0.0) return std::nullopt;
        const double step = e.value / dtheta;
        theta -= step;
        if (std::abs(step) > 0.5) return std::nullopt;
        if (std::abs(step) <= tol) {
            const Complex wf = std::polar(r, theta);
            return std::pair{wf, big_phi_eval(chart, k, wf)};
        }
    }
    return std::nullopt;
}

// Newton along the gradient from a predicted point.
inline std::optional<std::pair<Complex, PhiEval>> correct(const LocalChart &chart, int k, Complex w, double tol)
{
    for (int it = 0; it < 30; ++it) {
        const PhiEval e = big_phi_eval(chart, k, w);
        const Complex g = e.gradient();
        if (std::norm(g) == 0.0) return std::nullopt;
        const Complex delta = -e.value * g / std::norm(g);
        w += delta;
        if (std::abs(delta) <= tol * std::abs(w)) return std::pair{w, big_phi_eval(chart, k, w)};
    }
    return std::nullopt;
}

} // namespace detail

/// Traces the zero curve of Phi_k leaving the origin at angle theta_start.
inline ZeroCurve trace_zero_curve(const LocalChart &chart, int k, double theta_start, const TraceConfig &cfg = {})
{
    cfg.validate();
    if (k < 1 || k >= chart.m()) fail("sheet-index", "k outside 1..m-1");
    ZeroCurve curve;
    curve.k = k;
    curve.theta_start = theta_start;
    curve.r_max = cfg.r_max;

    auto accept = [&](Complex w, const PhiEval &e) {
        CurveSample s = detail::make_sample(chart, w, e);
        if (!(s.residual < cfg.residual_tol)) return false;
        curve.samples.push_back(s);
        return true;
    };
    auto lost = [&](const std::string &why) { throw TraceLost(curve, why); };

    auto start = detail::solve_on_circle(chart, k, cfg.r_start, theta_start, cfg.newton_tol);
    if (!start || !accept(start->first, start->second)) lost("no zero near the start direction");

    Complex w = start->first;
    Complex tangent = std::polar(1.0, std::arg(w));
    for (int steps = 0; steps < cfg.max_steps; ++steps) {
        const PhiEval e = big_phi_eval(chart, k, w);
        Complex t = Complex(0.0, 1.0) * e.gradient();
        if (std::abs(t) == 0.0) lost("vanishing gradient");
        t /= std::abs(t);
        if ((t * std::conj(tangent)).real() < 0.0) t = -t;
        tangent = t;

        double h = std::min(cfg.step, std::abs(w));
        bool done = false;
        for (;;) {
            if (h < 1e-6 * cfg.step) lost(fmt::format("step underflow at |w| = {}", std::abs(w)));
            const Complex predicted = w + h * t;
            if (std::abs(predicted) >= cfg.r_max) {
                // land the last sample exactly on the outer circle
                auto last = detail::solve_on_circle(chart, k, cfg.r_max, std::arg(predicted), cfg.newton_tol);
                if (last && std::abs(std::remainder(std::arg(last->first) - std::arg(w), two_pi)) < 0.5 &&
                    accept(last->first, last->second)) {
                    done = true;
                    break;
                }
                h *= 0.5;
                continue;
            }
            std::optional<std::pair<Complex, PhiEval>> next;
            try {
                next = detail::correct(chart, k, predicted, cfg.newton_tol);
            } catch (const Error &err) {
                if (err.kind() != ErrorKind::numerical) throw;
            }
            // reject corrections that jump to another branch or turn back
            if (next && std::abs(next->first - predicted) < 0.5 * h && std::abs(next->first) > std::abs(w) * (1.0 - 1e-12) &&
                accept(next->first, next->second)) {
                w = next->first;
                break;
            }
            h *= 0.5;
        }
        if (done) return curve;
    }
    lost("step budget exhausted");
    return curve;
}

inline ZeroCurve trace_zero_curve(const SurfaceMap &surface, const NormalForm &nf, int k, double theta_start,
                                  const TraceConfig &cfg = {})
{
    return trace_zero_curve(LocalChart(surface, nf), k, theta_start, cfg);
}

/// One curve per zero direction of Phi_k; empty when Phi_k vanishes to truncation order.
inline std::vector<ZeroCurve> trace_family(const SurfaceMap &surface, const NormalForm &nf, int k,
                                           const TraceConfig &cfg = {})
{
    const SheetDifference sd = sheet_difference(nf, k);
    std::vector<ZeroCurve> out;
    if (sd.N == 0) return out;
    const LocalChart chart(surface, nf);
    for (double theta : sd.directions_param) out.push_back(trace_zero_curve(chart, k, theta, cfg));
    return out;
}

/// The same intersection seen from the other sheet: w -> zeta^k w, z1 <-> z2.
/// It is a zero curve of the family m - k.
inline ZeroCurve partner_curve(const ZeroCurve &curve, int m)
{
    const Complex zeta = unit_root(curve.k, m);
    ZeroCurve out;
    out.k = m - curve.k;
    out.theta_start = curve.theta_start + two_pi * curve.k / m;
    out.r_max = curve.r_max;
    for (const auto &s : curve.samples) out.samples.push_back({zeta * s.w, s.z2, s.z1, s.point, s.residual});
    return out;
}

/// Limit of arg w as |w| -> 0, by least-squares polynomial extrapolation of
/// the unwrapped angle against radius over samples with |w| < r_max / 4.
inline double tangent_angle_at_origin(const ZeroCurve &curve, int degree = 2)
{
    std::vector<double> r, ang;
    const double limit = curve.r_max / 4.0;
    for (const auto &s : curve.samples) {
        const double rad = std::abs(s.w);
        if (rad >= limit || rad == 0.0) continue;
        if (!r.empty() && std::abs(rad - r.back()) <= 1e-12 * limit) continue;
        r.push_back(rad);
        ang.push_back(curve.theta_start + std::arg(s.w * std::polar(1.0, -curve.theta_start)));
    }
    if (r.size() < 4) fail("insufficient-samples", "need samples at 4 distinct radii below r_max / 4");
    const int deg = std::min<int>(degree, static_cast<int>(r.size()) - 2);
    Eigen::MatrixXd V(r.size(), deg + 1);
    Eigen::VectorXd y(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        double p = 1.0;
        for (int d = 0; d <= deg; ++d, p *= r[i] / limit) V(i, d) = p;
        y(i) = ang[i];
    }
    const Eigen::VectorXd coef = V.colPivHouseholderQr().solve(y);
    return coef(0);
}

inline void write_curves_csv(std::ostream &os, const std::vector<ZeroCurve> &curves)
{
    os << "k,theta_start,w_re,w_im,z1_re,z1_im,z2_re,z2_im,f1,f2,f3,residual\n";
    for (const auto &c : curves)
        for (const auto &s : c.samples)
            fmt::print(os, "{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.6e}\n", c.k,
                       c.theta_start, s.w.real(), s.w.imag(), s.z1.real(), s.z1.imag(), s.z2.real(), s.z2.imag(),
                       s.point[0], s.point[1], s.point[2], s.residual);
}

} // namespace branchpt

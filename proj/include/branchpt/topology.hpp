#pragma once

// Euler characteristic, demigenus and Riemann-Hurwitz bookkeeping for closed
// surfaces, and the unramified-minimizer argument for projective planes.

#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "branchpt/error.hpp"

namespace branchpt {

/// A compact surface up to homeomorphism: orientability, demigenus r, boundary count b.
struct SurfaceType {
    bool orientable = true;
    int r = 0;
    int b = 0;

    void validate() const
    {
        if (r < 0 || b < 0) fail("surface-invalid", "demigenus and boundary count must be nonnegative");
        if (orientable && r % 2 != 0) fail("surface-invalid", "orientable surfaces have even demigenus");
        if (!orientable && r < 1) fail("surface-invalid", "nonorientable surfaces have demigenus >= 1");
    }

    bool closed() const { return b == 0; }
    /// chi = 2 - r - b; b > 0 extends the closed-surface formula by convention.
    bool uses_boundary_convention() const { return b > 0; }

    std::string name() const
    {
        if (b == 0) {
            if (orientable && r == 0) return "sphere";
            if (orientable && r == 2) return "torus";
            if (orientable) return fmt::format("genus-{} surface", r / 2);
            if (r == 1) return "projective plane";
            if (r == 2) return "Klein bottle";
            return fmt::format("nonorientable surface of demigenus {}", r);
        }
        return fmt::format("{} surface of demigenus {} with {} boundary components",
                           orientable ? "orientable" : "nonorientable", r, b);
    }

    friend bool operator==(const SurfaceType &, const SurfaceType &) = default;

    static SurfaceType sphere() { return {true, 0, 0}; }
    static SurfaceType torus() { return {true, 2, 0}; }
    static SurfaceType genus(int g) { return {true, 2 * g, 0}; }
    static SurfaceType projective_plane() { return {false, 1, 0}; }
    static SurfaceType klein_bottle() { return {false, 2, 0}; }
};

struct CoveringSpec {
    int d = 1;
    int O = 0;
};

inline int euler_char(const SurfaceType &s)
{
    s.validate();
    return 2 - s.r - s.b;
}

/// Total branching order of a degree-d covering cover -> base:
/// chi(cover) = d chi(base) - O.
inline int rh_branching(const SurfaceType &base, const SurfaceType &cover, int d)
{
    if (d < 1) fail("degree-invalid", "covering degree must be at least 1");
    if (!base.closed() || !cover.closed()) fail("not-closed", "branching is only counted for closed surfaces");
    const int O = d * euler_char(base) - euler_char(cover);
    if (O < 0) fail("rh-infeasible", fmt::format("degree {} would need negative branching order {}", d, O));
    return O;
}

/// Quotient type with its feasible degrees d_min..d_max (no upper bound when absent).
struct QuotientOption {
    SurfaceType quotient;
    int d_min = 2;
    std::optional<int> d_max;
    /// Branching order at d_min.
    int O_at_min = 0;
};

namespace detail {

inline std::vector<QuotientOption> enumerate_quotients(const SurfaceType &sigma, int d_req, int O_req,
                                                       bool parity_rule, int cap)
{
    const int chi = euler_char(sigma);
    std::vector<QuotientOption> out;
    for (int rq = 0; rq <= cap; ++rq) {
        for (bool orient : {true, false}) {
            if (parity_rule && orient != sigma.orientable) continue;
            const SurfaceType q{orient, rq, 0};
            if ((orient && rq % 2 != 0) || (!orient && rq < 1)) continue;
            const int chq = euler_char(q);
            // O(d) = d chq - chi >= O_req
            QuotientOption opt{q, d_req, std::nullopt, 0};
            if (chq > 0) {
                const int need = O_req + chi;
                opt.d_min = std::max(d_req, need <= 0 ? 1 : (need + chq - 1) / chq);
            } else if (chq == 0) {
                if (-chi < O_req) continue;
            } else {
                const int bound = (-chi - O_req) >= 0 ? (-chi - O_req) / (-chq) : -1;
                if (bound < d_req) continue;
                opt.d_max = bound;
            }
            opt.O_at_min = opt.d_min * chq - chi;
            out.push_back(opt);
        }
    }
    return out;
}

} // namespace detail

struct QuotientEnumeration {
    std::vector<QuotientOption> options;
    int cap = 0;
    /// Same result with the demigenus cap raised by 2.
    bool stable = true;
};

/// Closed quotient types admitting a covering of degree >= d_min with branching >= O_min.
inline QuotientEnumeration admissible_quotients(const SurfaceType &sigma, int d_min = 2, int O_min = 1,
                                                bool parity_rule = true)
{
    if (!sigma.closed()) fail("not-closed", "quotients are enumerated for closed surfaces");
    if (d_min < 1 || O_min < 0) fail("quotient-query", "need d_min >= 1 and O_min >= 0");
    QuotientEnumeration e;
    e.cap = sigma.r + 2;
    e.options = detail::enumerate_quotients(sigma, d_min, O_min, parity_rule, e.cap);
    const auto wider = detail::enumerate_quotients(sigma, d_min, O_min, parity_rule, e.cap + 2);
    e.stable = wider.size() == e.options.size();
    return e;
}

struct MinimalityCertificate {
    bool applicable = false;
    SurfaceType sigma;
    bool ramified = true;
    std::vector<QuotientOption> quotients;
    int min_degree = 0;
    /// Area of the quotient map is at most area / area_factor.
    int area_factor = 1;
    std::vector<std::string> steps;
    std::string verdict;
};

/// For a projective plane: a ramified minimizer would factor through a
/// quotient of smaller area that is still homotopically nontrivial.
inline MinimalityCertificate minimality_certificate(const SurfaceType &sigma, int O_min = 1)
{
    MinimalityCertificate cert;
    cert.sigma = sigma;
    cert.ramified = O_min >= 1;
    if (!(sigma == SurfaceType::projective_plane())) {
        cert.verdict = "not-applicable";
        return cert;
    }
    cert.applicable = true;
    if (!cert.ramified) {
        // chi = d chi~ with chi = chi~ = 1 forces d = 1
        cert.quotients.push_back({SurfaceType::projective_plane(), 1, 1, 0});
        cert.min_degree = 1;
        cert.area_factor = 1;
        cert.steps.push_back("unbranched self-quotients of the projective plane need d * 1 = 1, so d = 1 only");
        cert.verdict = "no area reduction";
        return cert;
    }
    const auto e = admissible_quotients(sigma, 2, O_min);
    cert.quotients = e.options;
    if (cert.quotients.empty()) {
        cert.steps.push_back("no quotient admits a ramified covering");
        cert.verdict = "ramified minimizer impossible";
        return cert;
    }
    cert.min_degree = cert.quotients.front().d_min;
    for (const auto &q : cert.quotients) cert.min_degree = std::min(cert.min_degree, q.d_min);
    cert.area_factor = cert.min_degree;
    const SurfaceType &q = cert.quotients.front().quotient;
    cert.steps.push_back(fmt::format("ramification forces a branched covering of degree d >= {} onto a quotient", cert.min_degree));
    cert.steps.push_back(fmt::format("orientability parity and Riemann-Hurwitz leave only: {} (demigenus {})", q.name(), q.r));
    cert.steps.push_back(fmt::format("the quotient map has area at most 1/{} of the original", cert.area_factor));
    cert.steps.push_back("a quotient map homotopic to a constant would make the original null-homotopic, so it stays in the minimizing class");
    cert.steps.push_back("a competitor of strictly smaller area contradicts minimality");
    cert.verdict = "ramified minimizer impossible";
    return cert;
}

} // namespace branchpt

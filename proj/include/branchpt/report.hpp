#pragma once

// Structured (JSON) and plain-text renderings of analysis results.

#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <json.hpp>

#include "branchpt/branchlocal.hpp"
#include "branchpt/cutpaste.hpp"
#include "branchpt/io.hpp"
#include "branchpt/topology.hpp"

namespace branchpt {

/// Everything computed at one branch point.
struct BranchAnalysis {
    BranchPointRecord bp;
    NormalForm nf;
    BranchClass cls;
    std::vector<SheetDifference> families;
};

inline std::vector<BranchAnalysis> analyze_surface(const SurfaceMap &surface, double radius, int trunc,
                                                   double series_tol = -1.0)
{
    std::vector<BranchAnalysis> out;
    for (const auto &bp : detect_branch_points(surface.data(), radius)) {
        BranchAnalysis a;
        a.bp = bp;
        a.nf = normal_form(surface, bp, std::max(trunc, bp.m + 4));
        a.cls = classify_branch(a.nf, series_tol);
        for (int k = 1; k < bp.m; ++k) a.families.push_back(sheet_difference(a.nf, k, series_tol));
        out.push_back(std::move(a));
    }
    return out;
}

/// A coefficient quoted from elsewhere, compared against the computed one.
struct ReferenceValue {
    int k = 0;
    Complex value;
    std::string label;
};

inline nlohmann::json to_json(const SheetDifference &sd, const std::optional<ReferenceValue> &ref = {})
{
    nlohmann::json j;
    j["k"] = sd.k;
    j["N"] = sd.N;
    j["proper_index"] = sd.N - 1;
    j["A"] = complex_to_json(sd.A);
    j["directions_param"] = sd.directions_param;
    j["directions_image"] = sd.directions_image;
    if (ref) {
        j["A_reference"] = complex_to_json(ref->value);
        j["A_reference_label"] = ref->label;
        j["A_matches_reference"] = std::abs(ref->value - sd.A) <= 1e-10 * std::max(1.0, std::abs(sd.A));
    }
    return j;
}

inline nlohmann::json to_json(const BranchAnalysis &a, const std::vector<ReferenceValue> &refs = {})
{
    nlohmann::json j;
    j["z0"] = complex_to_json(a.bp.z0);
    j["order"] = a.bp.order;
    j["m"] = a.bp.m;
    j["c"] = {complex_to_json(a.bp.c[0]), complex_to_json(a.bp.c[1]), complex_to_json(a.bp.c[2])};
    j["trunc"] = a.nf.trunc;
    j["classification"] = a.cls.kind == BranchKind::true_branch ? "true-branch" : "false-candidate";
    if (a.cls.kind == BranchKind::true_branch) j["witness_k"] = a.cls.witness_k;
    else j["vanishes_to_order"] = a.cls.checked_to_order;
    j["families"] = nlohmann::json::array();
    for (const auto &sd : a.families) {
        std::optional<ReferenceValue> ref;
        for (const auto &r : refs)
            if (r.k == sd.k) ref = r;
        j["families"].push_back(to_json(sd, ref));
    }
    return j;
}

inline std::string render_text(const std::vector<BranchAnalysis> &all, const std::vector<ReferenceValue> &refs = {})
{
    if (all.empty()) return "no branch points\n";
    std::string out;
    for (std::size_t i = 0; i < all.size(); ++i) {
        const auto &a = all[i];
        out += fmt::format("branch point {}\n", i + 1);
        out += fmt::format("  z0: {:.12g} {:.12g}\n  m: {}\n  order: {}\n", a.bp.z0.real(), a.bp.z0.imag(), a.bp.m, a.bp.order);
        out += fmt::format("  class: {}\n", a.cls.kind == BranchKind::true_branch
                                                 ? fmt::format("true-branch (k = {})", a.cls.witness_k)
                                                 : fmt::format("false-candidate to order {}", a.cls.checked_to_order));
        for (const auto &sd : a.families) {
            out += fmt::format("  family {}\n", sd.k);
            if (sd.N == 0) {
                out += fmt::format("    vanishes to order {}\n", a.nf.trunc);
                continue;
            }
            out += fmt::format("    N: {}\n    proper_index: {}\n    A_re: {:.12g}\n    A_im: {:.12g}\n", sd.N, sd.N - 1,
                               sd.A.real(), sd.A.imag());
            for (const auto &r : refs)
                if (r.k == sd.k) {
                    const bool same = std::abs(r.value - sd.A) <= 1e-10 * std::max(1.0, std::abs(sd.A));
                    out += fmt::format("    A_reference ({}): {:.12g} {:.12g} [{}]\n", r.label, r.value.real(), r.value.imag(),
                                       same ? "agrees" : "MISMATCH");
                }
            out += "    directions:";
            for (double t : sd.directions_param) out += fmt::format(" {:.9f}", t);
            out += "\n";
        }
    }
    return out;
}

inline nlohmann::json to_json(const CourantReport &rep)
{
    nlohmann::json j;
    j["m"] = rep.m;
    j["families"] = nlohmann::json::array();
    for (const auto &f : rep.families) {
        nlohmann::json fj;
        fj["k"] = f.k;
        fj["N"] = f.N;
        fj["A"] = complex_to_json(f.A);
        fj["directions_param"] = f.directions_param;
        fj["gap_ratio"] = f.gap_ratio;
        fj["rays"] = nlohmann::json::array();
        for (const auto &r : f.rays) fj["rays"].push_back({{"angle", r.angle}, {"count", r.count}});
        j["families"].push_back(fj);
    }
    j["combined_rays"] = nlohmann::json::array();
    for (const auto &r : rep.combined_rays) j["combined_rays"].push_back({{"angle", r.angle}, {"count", r.count}});
    j["gap_ratio"] = rep.gap_ratio;
    j["equal_angles"] = rep.equal_angles;
    return j;
}

inline std::string render_text(const CourantReport &rep)
{
    std::string out = fmt::format("m: {}\n", rep.m);
    for (const auto &f : rep.families) {
        out += fmt::format("family {}\n  N: {}\n  A_re: {:.12g}\n  A_im: {:.12g}\n  gap_ratio: {:.12g}\n  rays:", f.k, f.N,
                           f.A.real(), f.A.imag(), f.gap_ratio);
        for (const auto &r : f.rays) out += fmt::format(" {:.9f}x{}", r.angle, r.count);
        out += "\n";
    }
    out += fmt::format("combined_rays: {}\n", rep.combined_rays.size());
    out += fmt::format("gap_ratio: {:.12g}\n", rep.gap_ratio);
    out += fmt::format("verdict: {}\n", rep.equal_angles ? "equal angles" : "not equal angles");
    return out;
}

inline nlohmann::json to_json(const SurfaceType &s)
{
    return {{"orientable", s.orientable}, {"demigenus", s.r}, {"boundary", s.b}, {"name", s.name()}};
}

inline nlohmann::json to_json(const MinimalityCertificate &cert)
{
    nlohmann::json j;
    j["sigma"] = to_json(cert.sigma);
    j["applicable"] = cert.applicable;
    j["ramified"] = cert.ramified;
    j["quotients"] = nlohmann::json::array();
    for (const auto &q : cert.quotients) {
        nlohmann::json qj;
        qj["quotient_type"] = to_json(q.quotient);
        qj["degree"] = q.d_min;
        if (q.d_max) qj["degree_max"] = *q.d_max;
        qj["branching_order"] = q.O_at_min;
        j["quotients"].push_back(qj);
    }
    if (!cert.quotients.empty()) {
        j["quotient_type"] = to_json(cert.quotients.front().quotient);
        j["degree"] = cert.min_degree;
        j["branching_order"] = cert.quotients.front().O_at_min;
    }
    j["area_factor"] = cert.area_factor;
    j["steps"] = cert.steps;
    j["verdict"] = cert.verdict;
    return j;
}

inline std::string render_text(const MinimalityCertificate &cert)
{
    std::string out = fmt::format("surface: {}\n", cert.sigma.name());
    if (!cert.applicable) return out + "verdict: not-applicable\n";
    for (const auto &q : cert.quotients)
        out += fmt::format("quotient_type: {}\ndegree: {}\nbranching_order: {}\n", q.quotient.name(), q.d_min, q.O_at_min);
    out += fmt::format("area_factor: {}\n", cert.area_factor);
    for (const auto &s : cert.steps) out += fmt::format("step: {}\n", s);
    out += fmt::format("verdict: {}\n", cert.verdict);
    return out;
}

inline nlohmann::json to_json(const QuotientEnumeration &e)
{
    nlohmann::json j;
    j["cap"] = e.cap;
    j["stable"] = e.stable;
    j["options"] = nlohmann::json::array();
    for (const auto &q : e.options) {
        nlohmann::json qj{{"quotient_type", to_json(q.quotient)}, {"d_min", q.d_min}, {"branching_order_at_d_min", q.O_at_min}};
        if (q.d_max) qj["d_max"] = *q.d_max;
        j["options"].push_back(qj);
    }
    return j;
}

inline nlohmann::json to_json(const SeamReport &r)
{
    return {{"continuity_jump", r.continuity_jump}, {"scale", r.scale},       {"area_Q", r.area_Q},
            {"area_D", r.area_D},                   {"rel_area_diff", r.rel_area_diff}, {"min_seam_angle", r.min_seam_angle}};
}

inline std::string render_text(const SeamReport &r, const PentagonDecomposition &d, int resolution)
{
    return fmt::format("interior: quadrant split at bisecting rays, Coons-blended patches on both sides\n"
                       "D_radius: {:.12g}\neps: {:.12g}\nresolution: {}\npair_gap: {:.3e}\n"
                       "continuity_jump: {:.3e}\nscale: {:.12g}\narea_Q: {:.12g}\narea_D: {:.12g}\n"
                       "rel_area_diff: {:.3e}\nmin_seam_angle: {:.6e}\n",
                       d.D_radius, d.eps, resolution, d.max_pair_gap, r.continuity_jump, r.scale, r.area_Q, r.area_D,
                       r.rel_area_diff, r.min_seam_angle);
}

} // namespace branchpt

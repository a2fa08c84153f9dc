// Command-line front end: analyze, trace, courant, topology, cutpaste, energy.
//
// Exit status: 0 success, 1 unknown command, 2 invalid input, 3 numerical failure.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <regex>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "branchpt/branchpt.hpp"
#include "branchpt/io.hpp"
#include "branchpt/report.hpp"

namespace fs = std::filesystem;
using namespace branchpt;

namespace {

constexpr int exit_unknown = 1;
constexpr int exit_validation = 2;
constexpr int exit_numerical = 3;

struct Common {
    std::string surface;
    std::string a = "1,0";
    std::string b = "1,0";
    int trunc = BiSeries::default_trunc;
    double rmax = 0.3;
    std::string out = "out";
    double tol = 1e-9;
    double radius = 1.0;
    int point = 1;
};

Complex parse_complex(const std::string &text)
{
    static const std::regex pattern(R"(\s*([-+0-9.eE]+)\s*(?:,\s*([-+0-9.eE]+)\s*)?)");
    std::smatch m;
    if (!std::regex_match(text, m, pattern)) fail("complex-format", fmt::format("expected re,im but got '{}'", text));
    try {
        const double re = std::stod(m[1].str());
        const double im = m[2].matched ? std::stod(m[2].str()) : 0.0;
        return {re, im};
    } catch (const std::exception &) {
        fail("complex-format", fmt::format("expected re,im but got '{}'", text));
    }
}

void add_common(CLI::App *cmd, Common &c)
{
    cmd->add_option("--surface", c.surface, "Weierstrass data file {\"h\": [[re,im],...], \"g\": [...]}");
    cmd->add_option("--a", c.a, "coefficient a of g = a z^2 + b z^3 when no --surface is given")->capture_default_str();
    cmd->add_option("--b", c.b, "coefficient b of g = a z^2 + b z^3")->capture_default_str();
    cmd->add_option("--trunc", c.trunc, "series truncation order T")->capture_default_str();
    cmd->add_option("--rmax", c.rmax, "outer radius in the w-plane for tracing")->capture_default_str();
    cmd->add_option("--out", c.out, "output directory")->capture_default_str();
    cmd->add_option("--tol", c.tol, "verdict / comparison tolerance")->capture_default_str();
    cmd->add_option("--radius", c.radius, "branch points are sought in |z| < radius")->capture_default_str();
    cmd->add_option("--point", c.point, "which branch point (1-based, sorted by |z0|)")->capture_default_str();
}

bool is_example(const Common &c) { return c.surface.empty(); }

WeierstrassData load(const Common &c)
{
    if (!c.surface.empty()) return load_surface(c.surface);
    return example_surface(parse_complex(c.a), parse_complex(c.b));
}

/// The coefficient 8b quoted for family 2 of the example surface.
std::vector<ReferenceValue> references(const Common &c)
{
    if (!is_example(c)) return {};
    return {{2, 8.0 * parse_complex(c.b), "quoted 8b"}};
}

struct Local {
    SurfaceMap surface;
    BranchPointRecord bp;
    NormalForm nf;
};

Local local_analysis(const Common &c)
{
    if (c.trunc < 1) fail("trunc-invalid", "truncation must be at least 1");
    SurfaceMap surface = build_surface(load(c));
    const auto bps = detect_branch_points(surface.data(), c.radius);
    if (bps.empty()) fail("no-branch-point", fmt::format("no branch point in |z| < {}", c.radius));
    if (c.point < 1 || c.point > static_cast<int>(bps.size()))
        fail("point-index", fmt::format("--point must be in 1..{}", bps.size()));
    const BranchPointRecord bp = bps[c.point - 1];
    NormalForm nf = normal_form(surface, bp, c.trunc);
    return {std::move(surface), bp, std::move(nf)};
}

int cmd_analyze(const Common &c)
{
    if (c.trunc < 1) fail("trunc-invalid", "truncation must be at least 1");
    const SurfaceMap surface = build_surface(load(c));
    const auto all = analyze_surface(surface, c.radius, c.trunc);
    const auto refs = references(c);
    nlohmann::json j;
    j["branch_points"] = nlohmann::json::array();
    for (const auto &a : all) j["branch_points"].push_back(to_json(a, refs));
    const std::string text = render_text(all, refs);
    write_file_atomic(fs::path(c.out) / "analysis.json", j.dump(2) + "\n");
    write_file_atomic(fs::path(c.out) / "analysis.txt", text);
    std::cout << text;
    return 0;
}

int cmd_trace(const Common &c, TraceConfig cfg)
{
    const Local L = local_analysis(c);
    cfg.r_max = c.rmax;
    const LocalChart chart(L.surface, L.nf);
    std::vector<ZeroCurve> curves;
    for (int k = 1; k < L.nf.m; ++k) {
        const SheetDifference sd = sheet_difference(L.nf, k);
        for (double theta : sd.directions_param) curves.push_back(trace_zero_curve(chart, k, theta, cfg));
    }
    const fs::path out(c.out);
    write_stream_atomic(out / "curves.csv", [&](std::ostream &os) { write_curves_csv(os, curves); });
    write_stream_atomic(out / "curves.svg", [&](std::ostream &os) { write_curves_svg(os, curves, cfg.r_max); });
    const CourantReport rep = courant_report(L.nf, c.tol);
    write_stream_atomic(out / "star.csv", [&](std::ostream &os) { write_star_csv(os, rep); });
    write_stream_atomic(out / "star.svg", [&](std::ostream &os) { write_star_svg(os, rep); });
    std::string text = "k,theta_start,theta_fit,samples,max_residual\n";
    for (const auto &curve : curves) {
        double res = 0.0;
        for (const auto &s : curve.samples) res = std::max(res, s.residual);
        text += fmt::format("{},{:.9f},{:.9f},{},{:.3e}\n", curve.k, curve.theta_start, tangent_angle_at_origin(curve),
                            curve.samples.size(), res);
    }
    write_file_atomic(out / "trace_summary.csv", text);
    std::cout << text;
    return 0;
}

int cmd_courant(const Common &c)
{
    const Local L = local_analysis(c);
    const CourantReport rep = courant_report(L.nf, c.tol);
    const fs::path out(c.out);
    write_file_atomic(out / "courant.json", to_json(rep).dump(2) + "\n");
    write_file_atomic(out / "courant.txt", render_text(rep));
    write_stream_atomic(out / "star.csv", [&](std::ostream &os) { write_star_csv(os, rep); });
    write_stream_atomic(out / "star.svg", [&](std::ostream &os) { write_star_svg(os, rep); });
    std::cout << render_text(rep);
    return 0;
}

SurfaceType parse_surface_type(const std::string &name)
{
    if (name == "sphere") return SurfaceType::sphere();
    if (name == "rp2") return SurfaceType::projective_plane();
    if (name == "torus") return SurfaceType::torus();
    if (name == "klein") return SurfaceType::klein_bottle();
    std::smatch m;
    static const std::regex genus(R"(genus(\d+))"), nonor(R"(nonor(\d+))");
    if (std::regex_match(name, m, genus)) return SurfaceType::genus(std::stoi(m[1].str()));
    if (std::regex_match(name, m, nonor)) {
        SurfaceType s{false, std::stoi(m[1].str()), 0};
        s.validate();
        return s;
    }
    fail("surface-type", fmt::format("unknown surface '{}' (sphere, rp2, torus, klein, genusG, nonorR)", name));
}

struct TopologyArgs {
    std::string sigma = "rp2";
    bool ramified = false;
    bool no_parity = false;
    std::string base;
    int degree = 0;
    int d_min = 2;
};

int cmd_topology(const Common &c, const TopologyArgs &t)
{
    const SurfaceType sigma = parse_surface_type(t.sigma);
    nlohmann::json j;
    std::string text = fmt::format("sigma: {}\neuler_char: {}\n", sigma.name(), euler_char(sigma));
    j["sigma"] = to_json(sigma);
    j["euler_char"] = euler_char(sigma);
    if (!t.base.empty()) {
        if (t.degree < 1) fail("degree-invalid", "--degree is required with --base");
        const SurfaceType base = parse_surface_type(t.base);
        const int O = rh_branching(base, sigma, t.degree);
        j["rh"] = {{"base", to_json(base)}, {"degree", t.degree}, {"branching_order", O}};
        text += fmt::format("covering {} -> {} of degree {}: branching_order {}\n", sigma.name(), base.name(), t.degree, O);
    }
    const int O_min = t.ramified ? 1 : 0;
    const QuotientEnumeration e = admissible_quotients(sigma, t.d_min, O_min, !t.no_parity);
    j["admissible_quotients"] = to_json(e);
    for (const auto &q : e.options)
        text += fmt::format("quotient: {} d >= {}{} (O = {} at d = {})\n", q.quotient.name(), q.d_min,
                            q.d_max ? fmt::format(", d <= {}", *q.d_max) : std::string(), q.O_at_min, q.d_min);
    const MinimalityCertificate cert = minimality_certificate(sigma, O_min);
    j["certificate"] = to_json(cert);
    text += render_text(cert);
    write_file_atomic(fs::path(c.out) / "topology.json", j.dump(2) + "\n");
    write_file_atomic(fs::path(c.out) / "topology.txt", text);
    std::cout << text;
    return 0;
}

struct CutArgs {
    double D_radius = 0.25;
    double eps = 0.0;
    int resolution = 128;
    int family = 1;
    int direction = 0;
};

int cmd_cutpaste(const Common &c, const CutArgs &a)
{
    const Local L = local_analysis(c);
    const LocalChart chart(L.surface, L.nf);
    const SheetDifference sd = sheet_difference(L.nf, a.family);
    if (sd.N == 0) fail("no-leading-term", "the chosen family has no intersection curves to truncation order");
    if (a.direction < 0 || a.direction >= static_cast<int>(sd.directions_param.size()))
        fail("direction-index", fmt::format("--direction must be in 0..{}", sd.directions_param.size() - 1));
    TraceConfig cfg;
    cfg.r_max = c.rmax;
    const ZeroCurve g1 = trace_zero_curve(chart, a.family, sd.directions_param[a.direction], cfg);
    CutPasteConfig cc;
    cc.D_radius = a.D_radius;
    if (a.eps > 0.0) cc.eps = a.eps;
    const PentagonDecomposition d = build_decomposition(chart, g1, partner_curve(g1, L.nf.m), cc);
    const BuiltQ built = build_Q(d, a.resolution);
    const SeamReport rep = seam_checks(built);
    const fs::path out(c.out);
    write_stream_atomic(out / "qmesh_vertices.csv", [&](std::ostream &os) { write_qmesh_vertices_csv(os, built.mesh); });
    write_stream_atomic(out / "qmesh_triangles.csv", [&](std::ostream &os) { write_qmesh_triangles_csv(os, built.mesh); });
    nlohmann::json j = to_json(rep);
    j["D_radius"] = d.D_radius;
    j["eps"] = d.eps;
    j["resolution"] = a.resolution;
    j["pair_gap"] = d.max_pair_gap;
    j["interior"] = "quadrant split at bisecting rays, Coons-blended patches on both sides";
    j["named_points"] = nlohmann::json::array();
    std::string text = render_text(rep, d, a.resolution);
    for (const auto &chk : boundary_checks(built.Q)) {
        j["named_points"].push_back({{"name", chk.name}, {"expected", complex_to_json(chk.expected)},
                                     {"actual", complex_to_json(chk.actual)}, {"error", chk.error}});
        text += fmt::format("named {}: error {:.3e}\n", chk.name, chk.error);
    }
    write_file_atomic(out / "seam.json", j.dump(2) + "\n");
    write_file_atomic(out / "seam.txt", text);
    std::cout << text;
    return 0;
}

int cmd_energy(const Common &c, double disk, const std::vector<int> &rings)
{
    const SurfaceMap surface = build_surface(load(c));
    std::string csv = "mesh,triangles,energy,area,gap\n";
    ParamMesh finest;
    for (int n : rings) {
        if (n < 1) fail("rings-invalid", "ring counts must be positive");
        ParamMesh mesh = disk_mesh(disk, n);
        if (mesh.triangles.size() >= finest.triangles.size()) finest = mesh;
        const EnergyArea ea = mesh_energy_area(surface, mesh);
        csv += fmt::format("disk-{},{},{:.15g},{:.15g},{:.3e}\n", n, mesh.triangles.size(), ea.energy, ea.area,
                           ea.energy - ea.area);
    }
    evaluate_images(surface, finest);
    write_file_atomic(fs::path(c.out) / "energy.csv", csv);
    write_stream_atomic(fs::path(c.out) / "mesh_vertices.csv", [&](std::ostream &os) { write_mesh_vertices_csv(os, finest); });
    write_stream_atomic(fs::path(c.out) / "mesh_triangles.csv", [&](std::ostream &os) { write_mesh_triangles_csv(os, finest); });
    std::cout << csv;
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Branch points of minimal surfaces: local analysis, intersection curves, topology."};
    app.require_subcommand(1);
    Common common;
    TraceConfig trace_cfg;
    TopologyArgs topo;
    CutArgs cut;
    double disk = 1.0;
    std::vector<int> rings{10, 20, 41};

    auto *analyze = app.add_subcommand("analyze", "branch detection, normal form and proper indices");
    add_common(analyze, common);
    auto *trace = app.add_subcommand("trace", "trace self-intersection curves (CSV + SVG)");
    add_common(trace, common);
    trace->add_option("--step", trace_cfg.step, "continuation step")->capture_default_str();
    trace->add_option("--rstart", trace_cfg.r_start, "starting radius")->capture_default_str();
    trace->add_option("--residual-tol", trace_cfg.residual_tol, "max |f(z1) - f(z2)| per sample")->capture_default_str();
    auto *courant = app.add_subcommand("courant", "combined direction report and equal-angle verdict");
    add_common(courant, common);
    auto *topology = app.add_subcommand("topology", "Riemann-Hurwitz queries and minimality certificate");
    add_common(topology, common);
    topology->add_option("--sigma", topo.sigma, "sphere, rp2, torus, klein, genusG or nonorR")->capture_default_str();
    topology->add_flag("--ramified", topo.ramified, "require branching order >= 1");
    topology->add_flag("--no-parity", topo.no_parity, "allow quotients of either orientability");
    topology->add_option("--base", topo.base, "quotient surface for a branching-order query");
    topology->add_option("--degree", topo.degree, "covering degree for --base");
    topology->add_option("--dmin", topo.d_min, "minimum covering degree")->capture_default_str();
    auto *cutpaste = app.add_subcommand("cutpaste", "cut-and-paste map Q and seam report");
    add_common(cutpaste, common);
    cutpaste->add_option("--dradius", cut.D_radius, "radius of D in the w-plane")->capture_default_str();
    cutpaste->add_option("--eps", cut.eps, "arc parameter cut (derived from --dradius when 0)")->capture_default_str();
    cutpaste->add_option("--resolution", cut.resolution, "grid cells per quadrant edge")->capture_default_str();
    cutpaste->add_option("--family", cut.family, "sheet family k of the cut arc")->capture_default_str();
    cutpaste->add_option("--direction", cut.direction, "index of the start direction")->capture_default_str();
    auto *energy = app.add_subcommand("energy", "Dirichlet energy and area table on disk meshes");
    add_common(energy, common);
    energy->add_option("--disk", disk, "parameter disk radius")->capture_default_str();
    energy->add_option("--rings", rings, "ring counts of the disk meshes")->capture_default_str();

    const std::set<std::string> known{"analyze", "trace", "courant", "topology", "cutpaste", "energy"};
    if (argc < 2 || (argv[1][0] != '-' && !known.count(argv[1]))) {
        std::cerr << app.help();
        return exit_unknown;
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return exit_validation;
    }

    try {
        if (*analyze) return cmd_analyze(common);
        if (*trace) return cmd_trace(common, trace_cfg);
        if (*courant) return cmd_courant(common);
        if (*topology) return cmd_topology(common, topo);
        if (*cutpaste) return cmd_cutpaste(common, cut);
        if (*energy) return cmd_energy(common, disk, rings);
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.kind() == ErrorKind::numerical ? exit_numerical : exit_validation;
    } catch (const fs::filesystem_error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_validation;
    }
    std::cerr << app.help();
    return exit_unknown;
}

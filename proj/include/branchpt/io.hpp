#pragma once

// File output helpers: atomic writes, surface description files, SVG plots.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <json.hpp>

#include "branchpt/branchlocal.hpp"
#include "branchpt/curvetrace.hpp"

namespace branchpt {

/// Writes to a sibling temporary and renames it over the target.
inline void write_file_atomic(const std::filesystem::path &path, const std::string &content)
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) fail("io-error", fmt::format("cannot open {}", tmp.string()));
        os << content;
        os.flush();
        if (!os) fail("io-error", fmt::format("write to {} failed", tmp.string()));
    }
    std::filesystem::rename(tmp, path);
}

/// Writes whatever `emit(std::ostream &)` produces, atomically.
template <class Emit>
void write_stream_atomic(const std::filesystem::path &path, Emit &&emit)
{
    std::ostringstream os;
    emit(os);
    write_file_atomic(path, os.str());
}

inline Complex complex_from_json(const nlohmann::json &j)
{
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        fail("surface-format", "complex numbers are [re, im] pairs");
    const Complex c(j[0].get<double>(), j[1].get<double>());
    if (!is_finite(c)) fail("non-finite", "complex value is NaN or infinite");
    return c;
}

inline nlohmann::json complex_to_json(Complex c) { return nlohmann::json::array({c.real(), c.imag()}); }

/// {"h": [[re, im], ...], "g": [[re, im], ...]}, coefficients ascending by degree.
inline WeierstrassData parse_surface(const std::string &text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        fail("surface-format", e.what());
    }
    if (!j.is_object() || !j.contains("h")) fail("surface-format", "missing \"h\"");
    auto poly = [&](const char *key) {
        std::vector<Complex> c;
        if (!j.contains(key)) return Polynomial{};
        if (!j[key].is_array()) fail("surface-format", fmt::format("\"{}\" must be an array", key));
        for (const auto &x : j[key]) c.push_back(complex_from_json(x));
        return Polynomial(std::move(c));
    };
    WeierstrassData data{poly("h"), poly("g")};
    data.validate();
    return data;
}

inline WeierstrassData load_surface(const std::filesystem::path &path)
{
    std::ifstream is(path);
    if (!is) fail("surface-missing", fmt::format("cannot read {}", path.string()));
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_surface(ss.str());
}

inline std::string surface_to_json(const WeierstrassData &data)
{
    nlohmann::json j;
    j["h"] = nlohmann::json::array();
    j["g"] = nlohmann::json::array();
    for (Complex c : data.h.coeffs()) j["h"].push_back(complex_to_json(c));
    for (Complex c : data.g.coeffs()) j["g"].push_back(complex_to_json(c));
    return j.dump(2) + "\n";
}

/// Mesh export: "x,y,f1,f2,f3" per vertex.
inline void write_mesh_vertices_csv(std::ostream &os, const ParamMesh &mesh)
{
    if (mesh.images.size() != mesh.vertices.size()) fail("mesh-images", "mesh has no vertex images");
    os << "x,y,f1,f2,f3\n";
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i)
        fmt::print(os, "{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", mesh.vertices[i].real(), mesh.vertices[i].imag(),
                   mesh.images[i][0], mesh.images[i][1], mesh.images[i][2]);
}

/// Mesh export: "i0,i1,i2" per triangle.
inline void write_mesh_triangles_csv(std::ostream &os, const ParamMesh &mesh)
{
    os << "i0,i1,i2\n";
    for (const auto &t : mesh.triangles) fmt::print(os, "{},{},{}\n", t[0], t[1], t[2]);
}

namespace detail {

inline const char *family_color(int k)
{
    static const char *palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    return palette[(k - 1) % 6];
}

} // namespace detail

/// Image rays of each family; ray length grows with multiplicity.
inline void write_star_csv(std::ostream &os, const CourantReport &rep)
{
    os << "k,angle,count\n";
    for (const auto &f : rep.families)
        for (const auto &r : f.rays) fmt::print(os, "{},{:.17g},{}\n", f.k, r.angle, r.count);
}

inline void write_star_svg(std::ostream &os, const CourantReport &rep)
{
    const double size = 400.0, c = size / 2.0, unit = 40.0;
    fmt::print(os, "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{0}\" viewBox=\"0 0 {0} {0}\">\n", size);
    fmt::print(os, "<rect width=\"{0}\" height=\"{0}\" fill=\"white\"/>\n", size);
    fmt::print(os, "<circle cx=\"{0}\" cy=\"{0}\" r=\"3\" fill=\"black\"/>\n", c);
    for (const auto &f : rep.families) {
        fmt::print(os, "<g stroke=\"{}\" stroke-width=\"2\"><title>family {} (N = {})</title>\n", detail::family_color(f.k), f.k, f.N);
        for (const auto &r : f.rays) {
            const double len = std::min(c - 10.0, unit * (1.0 + r.count) + 10.0 * f.k);
            fmt::print(os, "<line x1=\"{:.3f}\" y1=\"{:.3f}\" x2=\"{:.3f}\" y2=\"{:.3f}\"/>\n", c, c,
                       c + len * std::cos(r.angle), c - len * std::sin(r.angle));
        }
        os << "</g>\n";
    }
    os << "</svg>\n";
}

/// Traced curves in the w-plane; the twin CSV is the curve export.
inline void write_curves_svg(std::ostream &os, const std::vector<ZeroCurve> &curves, double r_max)
{
    const double size = 400.0, c = size / 2.0, scale = (c - 10.0) / r_max;
    fmt::print(os, "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{0}\" viewBox=\"0 0 {0} {0}\">\n", size);
    fmt::print(os, "<rect width=\"{0}\" height=\"{0}\" fill=\"white\"/>\n", size);
    fmt::print(os, "<circle cx=\"{0}\" cy=\"{0}\" r=\"{1:.3f}\" fill=\"none\" stroke=\"#bbb\"/>\n", c, r_max * scale);
    for (const auto &curve : curves) {
        fmt::print(os, "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{:.3f},{:.3f}", detail::family_color(curve.k), c, c);
        for (const auto &s : curve.samples) fmt::print(os, " {:.3f},{:.3f}", c + scale * s.w.real(), c - scale * s.w.imag());
        os << "\"/>\n";
    }
    os << "</svg>\n";
}

} // namespace branchpt

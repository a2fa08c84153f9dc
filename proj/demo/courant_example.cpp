// Traces every self-intersection curve of the example surface and compares
// the fitted exit angles with the leading-order prediction.

#include <fmt/format.h>

#include "branchpt/curvetrace.hpp"

using namespace branchpt;

int main(int argc, char **argv)
{
    const double arg_b = argc > 1 ? std::stod(argv[1]) : 0.0;
    const WeierstrassData data = example_surface(1.0, std::polar(1.0, arg_b));
    const SurfaceMap surface = build_surface(data);
    const NormalForm nf = normal_form(surface, detect_branch_points(data, 1.0).at(0));

    const CourantReport rep = courant_report(nf);
    for (const auto &fam : rep.families) {
        const auto curves = trace_family(surface, nf, fam.k);
        double worst_angle = 0.0, worst_residual = 0.0;
        for (const auto &c : curves) {
            worst_angle = std::max(worst_angle, std::abs(tangent_angle_at_origin(c) - c.theta_start));
            for (const auto &s : c.samples) worst_residual = std::max(worst_residual, s.residual);
        }
        fmt::print("k = {}: N = {}, {} curves, {} image rays, angle error {:.2e}, residual {:.2e}\n", fam.k, fam.N,
                   curves.size(), fam.rays.size(), worst_angle, worst_residual);
    }
    fmt::print("combined: {} rays, gap ratio {:.4f}, equal angles: {}\n", rep.combined_rays.size(), rep.gap_ratio,
               rep.equal_angles ? "yes" : "no");
    return 0;
}

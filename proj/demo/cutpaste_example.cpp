// Cut-and-paste along a matched pair of intersection arcs, with the
// continuity, area and crease diagnostics at increasing resolution.

#include <fmt/format.h>

#include "branchpt/cutpaste.hpp"

using namespace branchpt;

int main(int argc, char **argv)
{
    const double R = argc > 1 ? std::stod(argv[1]) : 0.25;
    const WeierstrassData data = example_surface(1.0, 1.0);
    const SurfaceMap surface = build_surface(data);
    const NormalForm nf = normal_form(surface, detect_branch_points(data, 1.0).at(0));
    const LocalChart chart(surface, nf);

    TraceConfig tc;
    tc.r_max = R + 0.05;
    const ZeroCurve gamma1 = trace_zero_curve(chart, 1, sheet_difference(nf, 1).directions_param[0], tc);
    const ZeroCurve gamma2 = partner_curve(gamma1, nf.m);
    CutPasteConfig cc;
    cc.D_radius = R;
    const PentagonDecomposition d = build_decomposition(chart, gamma1, gamma2, cc);
    fmt::print("R = {}, eps = {:.6f}, pair gap {:.2e}\n", R, d.eps, d.max_pair_gap);

    for (int n : {16, 32, 64}) {
        const BuiltQ built = build_Q(d, n);
        const SeamReport rep = seam_checks(built);
        fmt::print("n = {:>3}: jump {:.2e}, area rel diff {:.2e}, min crease angle {:.3e}\n", n, rep.continuity_jump,
                   rep.rel_area_diff, rep.min_seam_angle);
    }
    for (const auto &c : boundary_checks(PiecewiseMapQ(d))) fmt::print("  {:<3} error {:.1e}\n", c.name, c.error);
    return 0;
}

// Builds the local normal form of the degree-4 example by hand-sized steps:
// the w^4 expansion, its fourth root, the reversion and the height series.

#include <cstdio>

#include <fmt/format.h>

#include "branchpt/branchlocal.hpp"

using namespace branchpt;

namespace {

void show(const char *label, const BiSeries &s, int max_grade)
{
    fmt::print("{}\n", label);
    for (const auto &[k, c] : s.terms())
        if (k.grade() <= max_grade) fmt::print("  ({:>2},{:>2})  {:+.6f} {:+.6f}i\n", k.i, k.j, c.real(), c.imag());
}

} // namespace

int main()
{
    const Complex a(1.0, 0.0), b(1.0, 0.0);
    const WeierstrassData data = example_surface(a, b);
    const SurfaceMap surface = build_surface(data);
    const auto bp = detect_branch_points(data, 1.0).at(0);
    fmt::print("branch point at z0 = {}, m = {}\n\n", bp.z0.real(), bp.m);

    const NormalForm nf = normal_form(surface, bp);
    show("p1 + i p2 in (z, conj z):", nf.p12, 10);
    show("w(z):", nf.w_of_z, 9);
    show("z(w):", nf.z_of_w, 9);
    show("phi(w) = p3(z(w)):", nf.phi, 10);

    for (int k = 1; k < nf.m; ++k) {
        const SheetDifference sd = sheet_difference(nf, k);
        fmt::print("\nPhi_{}: N = {}, A = {:.6f}{:+.6f}i, {} zero directions\n", k, sd.N, sd.A.real(), sd.A.imag(),
                   sd.directions_param.size());
    }
    return 0;
}

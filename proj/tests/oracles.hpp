#pragma once

// Independent checks shared by the unit tests and the acceptance binary.

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "branchpt/biseries.hpp"

namespace testsupport {

using branchpt::BiSeries;
using branchpt::Complex;

/// Largest coefficient difference over the union of keys.
inline double max_diff(const BiSeries &a, const BiSeries &b)
{
    double m = 0.0;
    for (const auto &[k, c] : a.terms()) m = std::max(m, std::abs(c - b.coeff(k.i, k.j)));
    for (const auto &[k, c] : b.terms()) m = std::max(m, std::abs(c - a.coeff(k.i, k.j)));
    return m;
}

/// Random series with keys i, j >= 0 of grade lo..hi.
inline BiSeries random_series(std::mt19937_64 &rng, int lo, int hi, int T, double scale = 1.0)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    BiSeries s(T);
    for (int g = lo; g <= hi; ++g)
        for (int i = 0; i <= g; ++i) s.add_term({i, g - i}, scale * Complex(u(rng), u(rng)));
    return s;
}

/// Least-squares slope of y against x.
inline double fit_slope(const std::vector<double> &x, const std::vector<double> &y)
{
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Log-log slope of max_theta |s(w) t(w) - (s t)(w)| over |w| in [0.06, 0.1].
/// Below 0.06 the T+1 remainder drops under double rounding of the O(|w|^2) values.
inline double homomorphism_slope(const BiSeries &s, const BiSeries &t)
{
    const BiSeries st = s * t;
    std::vector<double> lr, le;
    for (int i = 0; i < 8; ++i) {
        const double r = 0.06 * std::pow(0.1 / 0.06, i / 7.0);
        double err = 0.0;
        for (int j = 0; j < 16; ++j) {
            const Complex w = std::polar(r, 2.0 * M_PI * j / 16.0 + 0.1);
            err = std::max(err, std::abs(branchpt::evaluate(st, w) - branchpt::evaluate(s, w) * branchpt::evaluate(t, w)));
        }
        lr.push_back(std::log(r));
        le.push_back(std::log(err));
    }
    return fit_slope(lr, le);
}

} // namespace testsupport

#pragma once

#include <algorithm>
#include <complex>
#include <initializer_list>
#include <vector>

#include <Eigen/Dense>

#include "branchpt/error.hpp"

namespace branchpt {

using Complex = std::complex<double>;

/// Dense complex polynomial, coefficients ascending by degree.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<Complex> coeffs) : c_(std::move(coeffs)) { trim(); }
    Polynomial(std::initializer_list<Complex> coeffs) : c_(coeffs) { trim(); }

    static Polynomial monomial(Complex c, int degree)
    {
        std::vector<Complex> v(degree + 1, Complex(0.0));
        v[degree] = c;
        return Polynomial(std::move(v));
    }

    const std::vector<Complex> &coeffs() const { return c_; }
    /// -1 for the zero polynomial.
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    Complex coeff(int n) const { return n >= 0 && n < static_cast<int>(c_.size()) ? c_[n] : Complex(0.0); }

    Complex operator()(Complex z) const
    {
        Complex acc(0.0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
        return acc;
    }

    Polynomial derivative() const
    {
        std::vector<Complex> d;
        for (std::size_t n = 1; n < c_.size(); ++n) d.push_back(static_cast<double>(n) * c_[n]);
        return Polynomial(std::move(d));
    }

    /// Antiderivative vanishing at 0.
    Polynomial antiderivative() const
    {
        std::vector<Complex> a(c_.size() + 1, Complex(0.0));
        for (std::size_t n = 0; n < c_.size(); ++n) a[n + 1] = c_[n] / static_cast<double>(n + 1);
        return Polynomial(std::move(a));
    }

    /// Coefficients of p(z0 + t) in t.
    Polynomial shifted(Complex z0) const
    {
        std::vector<Complex> out(c_.begin(), c_.end());
        const int n = degree();
        for (int k = 0; k < n; ++k)
            for (int j = n - 1; j >= k; --j) out[j] += z0 * out[j + 1];
        return Polynomial(std::move(out));
    }

    double max_abs_coeff() const
    {
        double m = 0.0;
        for (auto c : c_) m = std::max(m, std::abs(c));
        return m;
    }

    friend Polynomial operator+(const Polynomial &p, const Polynomial &q)
    {
        std::vector<Complex> out(std::max(p.c_.size(), q.c_.size()), Complex(0.0));
        for (std::size_t n = 0; n < p.c_.size(); ++n) out[n] += p.c_[n];
        for (std::size_t n = 0; n < q.c_.size(); ++n) out[n] += q.c_[n];
        return Polynomial(std::move(out));
    }
    friend Polynomial operator-(const Polynomial &p, const Polynomial &q) { return p + Complex(-1.0) * q; }
    friend Polynomial operator*(Complex s, const Polynomial &p)
    {
        std::vector<Complex> out(p.c_);
        for (auto &c : out) c *= s;
        return Polynomial(std::move(out));
    }
    friend Polynomial operator*(const Polynomial &p, const Polynomial &q)
    {
        if (p.is_zero() || q.is_zero()) return {};
        std::vector<Complex> out(p.c_.size() + q.c_.size() - 1, Complex(0.0));
        for (std::size_t a = 0; a < p.c_.size(); ++a)
            for (std::size_t b = 0; b < q.c_.size(); ++b) out[a + b] += p.c_[a] * q.c_[b];
        return Polynomial(std::move(out));
    }

private:
    // Only exact zeros are trimmed; callers decide on numerical tolerance.
    void trim()
    {
        while (!c_.empty() && c_.back() == Complex(0.0)) c_.pop_back();
    }

    std::vector<Complex> c_;
};

/// A root with its multiplicity.
struct PolynomialRoot {
    Complex z;
    int multiplicity = 1;
};

namespace detail {

// Newton on a polynomial for a simple root.
inline Complex polish_root(const Polynomial &p, Complex z)
{
    const Polynomial dp = p.derivative();
    for (int it = 0; it < 60; ++it) {
        const Complex d = dp(z);
        if (std::abs(d) == 0.0) break;
        const Complex step = p(z) / d;
        z -= step;
        if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(z))) break;
    }
    return z;
}

} // namespace detail

/// Roots of p with multiplicities.
///
/// Companion-matrix eigenvalues seed the search.  A k-fold root splits into a
/// ring of radius ~eps^(1/k), so eigenvalues are first grouped loosely, each
/// group's multiplicity is confirmed by the vanishing of p, p', ..., p^(k-1)
/// at its centroid, and the center is polished as a simple root of p^(k-1).
/// Polished roots closer than `merge_tol` are finally merged.
inline std::vector<PolynomialRoot> polynomial_roots(const Polynomial &p, double merge_tol = 1e-8)
{
    if (p.is_zero()) fail("zero-polynomial", "roots of the zero polynomial are undefined");
    const int n = p.degree();
    if (n == 0) return {};
    const Complex lead = p.coeff(n);
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
    for (int r = 1; r < n; ++r) companion(r, r - 1) = 1.0;
    for (int r = 0; r < n; ++r) companion(r, n - 1) = -p.coeff(r) / lead;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    if (solver.info() != Eigen::Success) fail_numeric("rootfind-failed", "companion eigen-solver did not converge");
    std::vector<Complex> eig(n);
    for (int k = 0; k < n; ++k) eig[k] = solver.eigenvalues()[k];

    // Derivatives p^(0..n) for multiplicity tests.
    std::vector<Polynomial> derivs{p};
    for (int k = 0; k < n; ++k) derivs.push_back(derivs.back().derivative());
    auto scale_at = [&](int order, Complex z) {
        // magnitude of the terms that make up p^(order)(z), for relative tests
        double s = 0.0, zp = 1.0;
        for (int k = 0; k <= derivs[order].degree(); ++k, zp *= std::abs(z)) s += std::abs(derivs[order].coeff(k)) * zp;
        return std::max(s, 1e-300);
    };

    std::vector<bool> used(n, false);
    std::vector<PolynomialRoot> roots;
    for (int i = 0; i < n; ++i) {
        if (used[i]) continue;
        // grow a cluster around eig[i]
        std::vector<int> members{i};
        const double radius = 1e-3 * std::max(1.0, std::abs(eig[i]));
        for (int j = i + 1; j < n; ++j)
            if (!used[j] && std::abs(eig[j] - eig[i]) < radius) members.push_back(j);
        Complex centre(0.0);
        for (int m : members) centre += eig[m];
        centre /= static_cast<double>(members.size());
        int mult = static_cast<int>(members.size());
        // confirm: p^(k)(centre) ~ 0 for k < mult, else shrink to what holds
        int confirmed = 1;
        for (int k = 1; k < mult; ++k) {
            if (std::abs(derivs[k](centre)) <= 1e-6 * scale_at(k, centre)) confirmed = k + 1;
            else break;
        }
        if (confirmed < mult) {
            members = {i};
            centre = eig[i];
            mult = 1;
        }
        for (int m : members) used[m] = true;
        centre = detail::polish_root(derivs[mult - 1], centre);
        roots.push_back({centre, mult});
    }

    std::vector<PolynomialRoot> merged;
    for (const auto &r : roots) {
        auto it = std::find_if(merged.begin(), merged.end(),
                               [&](const PolynomialRoot &m) { return std::abs(m.z - r.z) < merge_tol; });
        if (it == merged.end()) merged.push_back(r);
        else it->multiplicity += r.multiplicity;
    }
    std::sort(merged.begin(), merged.end(), [](const PolynomialRoot &a, const PolynomialRoot &b) {
        if (std::abs(a.z) != std::abs(b.z)) return std::abs(a.z) < std::abs(b.z);
        return std::arg(a.z) < std::arg(b.z);
    });
    return merged;
}

} // namespace branchpt

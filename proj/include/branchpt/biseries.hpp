#pragma once

// Truncated bivariate series in w and conj(w) with complex coefficients.
//
// A BiSeries holds terms c * w^i * conj(w)^j keyed by integer exponent pairs
// (i, j), graded by total order i + j.  Everything above the truncation order
// T is dropped and treated as unknown.  Negative exponents are allowed (they
// show up when a coordinate change is inverted, e.g. w^-3 conj(w)^8), as long
// as the total order of every product stays bounded below.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "branchpt/error.hpp"

namespace branchpt {

using Complex = std::complex<double>;

inline bool is_finite(Complex c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); }

/// Exponent pair of w^i conj(w)^j.
struct Key {
    int i = 0;
    int j = 0;

    constexpr int grade() const { return i + j; }
    friend constexpr bool operator==(const Key &, const Key &) = default;
};

/// Ascending by total order, then by the w exponent.
struct KeyLess {
    constexpr bool operator()(const Key &a, const Key &b) const
    {
        if (a.grade() != b.grade()) return a.grade() < b.grade();
        return a.i < b.i;
    }
};

/// c^n for integer n by repeated squaring (exact for n = 0, avoids complex log).
inline Complex ipow(Complex c, int n)
{
    if (n < 0) return Complex(1.0) / ipow(c, -n);
    Complex result(1.0), base = c;
    while (n > 0) {
        if (n & 1) result *= base;
        base *= base;
        n >>= 1;
    }
    return result;
}

class BiSeries {
public:
    using Terms = std::map<Key, Complex, KeyLess>;

    static constexpr int default_trunc = 12;
    /// Coefficients below this modulus are dropped after every operation.
    static constexpr double purge_threshold = 1e-13;

    explicit BiSeries(int trunc = default_trunc) : trunc_(trunc)
    {
        if (trunc < 1) fail("trunc-invalid", "truncation order must be >= 1");
    }

    /// Intermediate results may carry any truncation order, including <= 0.
    struct unchecked_t {};
    BiSeries(int trunc, unchecked_t) : trunc_(trunc) {}

    BiSeries(std::initializer_list<std::pair<Key, Complex>> terms, int trunc = default_trunc)
        : BiSeries(trunc)
    {
        for (const auto &[k, c] : terms) add_term(k, c);
    }

    static BiSeries monomial(Complex c, int i, int j, int trunc = default_trunc)
    {
        BiSeries s(trunc, unchecked_t{});
        s.add_term({i, j}, c);
        return s;
    }
    /// The coordinate series w itself.
    static BiSeries identity(int trunc = default_trunc) { return monomial(1.0, 1, 0, trunc); }

    int trunc() const { return trunc_; }
    const Terms &terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    Complex coeff(int i, int j) const
    {
        auto it = terms_.find({i, j});
        return it == terms_.end() ? Complex(0.0) : it->second;
    }

    std::optional<int> min_grade() const
    {
        if (terms_.empty()) return std::nullopt;
        return terms_.begin()->first.grade();
    }

    /// Terms of total order exactly g.
    std::vector<std::pair<Key, Complex>> block(int g) const
    {
        std::vector<std::pair<Key, Complex>> out;
        for (const auto &[k, c] : terms_)
            if (k.grade() == g) out.emplace_back(k, c);
        return out;
    }

    double max_abs() const
    {
        double m = 0.0;
        for (const auto &[k, c] : terms_) m = std::max(m, std::abs(c));
        return m;
    }

    /// Accumulates c into key k, dropping it when above truncation or tiny.
    void add_term(Key k, Complex c)
    {
        if (!is_finite(c)) fail("non-finite", "series coefficient is NaN or infinite");
        if (k.grade() > trunc_) return;
        auto [it, inserted] = terms_.try_emplace(k, c);
        if (!inserted) it->second += c;
        if (std::abs(it->second) < purge_threshold) terms_.erase(it);
    }

    /// Same terms, new truncation order (terms above it are dropped).
    BiSeries with_trunc(int trunc) const
    {
        BiSeries out(trunc, unchecked_t{});
        for (const auto &[k, c] : terms_)
            if (k.grade() <= trunc) out.terms_.emplace(k, c);
        return out;
    }

    /// Drops terms whose modulus is at most tol.
    BiSeries chopped(double tol) const
    {
        BiSeries out(trunc_, unchecked_t{});
        for (const auto &[k, c] : terms_)
            if (std::abs(c) > tol) out.terms_.emplace(k, c);
        return out;
    }

    /// Debug rendering: one "coeff_re,coeff_im,i,j" line per term, ascending by (i+j, i).
    std::string to_debug_string() const
    {
        std::string out;
        for (const auto &[k, c] : terms_)
            out += fmt::format("{:.17g},{:.17g},{},{}\n", c.real(), c.imag(), k.i, k.j);
        return out;
    }

    friend bool operator==(const BiSeries &, const BiSeries &) = default;

private:
    Terms terms_;
    int trunc_;
};

namespace detail {

inline void check_same_trunc(const BiSeries &s, const BiSeries &t)
{
    if (s.trunc() != t.trunc())
        fail("trunc-mismatch", fmt::format("truncation orders {} and {} differ", s.trunc(), t.trunc()));
}

inline BiSeries scaled(const BiSeries &s, Complex factor, int trunc)
{
    BiSeries out(trunc, BiSeries::unchecked_t{});
    for (const auto &[k, c] : s.terms()) out.add_term(k, c * factor);
    return out;
}

inline BiSeries combine(const BiSeries &s, const BiSeries &t, double sign, int trunc)
{
    BiSeries out = s.with_trunc(trunc);
    for (const auto &[k, c] : t.terms()) out.add_term(k, sign * c);
    return out;
}

/// Product truncated at `trunc` regardless of the operands' own orders.
inline BiSeries mul_to(const BiSeries &s, const BiSeries &t, int trunc)
{
    BiSeries out(trunc, BiSeries::unchecked_t{});
    if (s.empty() || t.empty()) return out;
    const int t_low = *t.min_grade();
    for (const auto &[ka, ca] : s.terms()) {
        if (ka.grade() + t_low > trunc) break;
        for (const auto &[kb, cb] : t.terms()) {
            const Key k{ka.i + kb.i, ka.j + kb.j};
            if (k.grade() > trunc) break;
            out.add_term(k, ca * cb);
        }
    }
    return out;
}

/// sum_k binom(alpha, k) u^k for u of total order >= 1, truncated at `trunc`.
inline BiSeries binomial_series(const BiSeries &u, double alpha, int trunc)
{
    BiSeries result = BiSeries::monomial(1.0, 0, 0, trunc);
    if (u.empty()) return result;
    if (*u.min_grade() < 1) fail("binomial-order", "binomial expansion needs a correction of order >= 1");
    BiSeries u_power = BiSeries::monomial(1.0, 0, 0, trunc);
    double binom = 1.0;
    for (int k = 1;; ++k) {
        u_power = mul_to(u_power, u, trunc);
        if (u_power.empty()) break;
        binom *= (alpha - (k - 1)) / k;
        if (binom == 0.0) break;
        for (const auto &[key, c] : u_power.terms()) result.add_term(key, binom * c);
    }
    return result;
}

/// Leading monomial when the lowest-order block is a single term.
inline std::optional<std::pair<Key, Complex>> leading_monomial(const BiSeries &s)
{
    if (s.empty()) return std::nullopt;
    auto lead = s.block(*s.min_grade());
    if (lead.size() != 1) return std::nullopt;
    return lead.front();
}

/// s^n for any integer n, truncated at `trunc`.  Negative n needs a monomial
/// leading block c w^p conj(w)^q; the rest is expanded as a binomial series.
inline BiSeries power(const BiSeries &s, int n, int trunc)
{
    const BiSeries::unchecked_t unchecked{};
    if (n == 0) return BiSeries::monomial(1.0, 0, 0, trunc);
    if (n > 0) {
        // Factors of negative order would pull dropped terms back below trunc.
        const int low = s.empty() ? 0 : *s.min_grade();
        const int work = trunc + std::max(0, -low) * (n - 1);
        BiSeries result = s.with_trunc(work);
        for (int k = 1; k < n; ++k) result = mul_to(result, s, work);
        return result.with_trunc(trunc);
    }
    auto lead = leading_monomial(s);
    if (!lead) fail("compose-negative-power", "negative power of a series without a monomial leading term");
    const auto [lk, lc] = *lead;
    // s = lc * w^p conj(w)^q * (1 + u), u of order >= 1
    const int inner_trunc = trunc - n * lk.grade();
    if (inner_trunc < 0) return BiSeries(trunc, unchecked);
    BiSeries u(inner_trunc, unchecked);
    for (const auto &[k, c] : s.terms())
        if (k != lk) u.add_term({k.i - lk.i, k.j - lk.j}, c / lc);
    const BiSeries factor = binomial_series(u, n, inner_trunc);
    BiSeries out(trunc, unchecked);
    const Complex lead_pow = ipow(lc, n);
    for (const auto &[k, c] : factor.terms()) out.add_term({k.i + n * lk.i, k.j + n * lk.j}, c * lead_pow);
    return out;
}

} // namespace detail

inline BiSeries add(const BiSeries &s, const BiSeries &t)
{
    detail::check_same_trunc(s, t);
    return detail::combine(s, t, 1.0, s.trunc());
}

inline BiSeries sub(const BiSeries &s, const BiSeries &t)
{
    detail::check_same_trunc(s, t);
    return detail::combine(s, t, -1.0, s.trunc());
}

inline BiSeries mul(const BiSeries &s, const BiSeries &t)
{
    detail::check_same_trunc(s, t);
    return detail::mul_to(s, t, s.trunc());
}

inline BiSeries operator+(const BiSeries &s, const BiSeries &t) { return add(s, t); }
inline BiSeries operator-(const BiSeries &s, const BiSeries &t) { return sub(s, t); }
inline BiSeries operator*(const BiSeries &s, const BiSeries &t) { return mul(s, t); }
inline BiSeries operator*(Complex factor, const BiSeries &s) { return detail::scaled(s, factor, s.trunc()); }
inline BiSeries operator-(const BiSeries &s) { return detail::scaled(s, -1.0, s.trunc()); }

/// (i, j) -> (j, i) with conjugated coefficients.
inline BiSeries conjugate(const BiSeries &s)
{
    BiSeries out(s.trunc(), BiSeries::unchecked_t{});
    for (const auto &[k, c] : s.terms()) out.add_term({k.j, k.i}, std::conj(c));
    return out;
}

/// (s + conj(s)) / 2.
inline BiSeries real_part(const BiSeries &s)
{
    BiSeries out(s.trunc(), BiSeries::unchecked_t{});
    for (const auto &[k, c] : s.terms()) {
        out.add_term(k, 0.5 * c);
        out.add_term({k.j, k.i}, 0.5 * std::conj(c));
    }
    return out;
}

/// Substitutes w := inner, conj(w) := conj(inner) into outer.
///
/// Each outer term w^i conj(w)^j is expanded with its two factors carried at
/// the truncation their partner's lowest order allows, so that the product is
/// complete through the result's order min(outer.trunc, inner.trunc).
inline BiSeries compose(const BiSeries &outer, const BiSeries &inner)
{
    const int trunc = std::min(outer.trunc(), inner.trunc());
    BiSeries out(trunc, BiSeries::unchecked_t{});
    if (outer.empty()) return out;
    if (inner.empty()) {
        for (const auto &[k, c] : outer.terms())
            if (k.i == 0 && k.j == 0) out.add_term(k, c);
        return out;
    }
    if (*inner.min_grade() < 1) fail("compose-constant-term", "inner series must have no term of order < 1");
    const bool needs_inverse = std::any_of(outer.terms().begin(), outer.terms().end(),
                                           [](const auto &t) { return t.first.i < 0 || t.first.j < 0; });
    if (needs_inverse && !detail::leading_monomial(inner))
        fail("compose-negative-power", "inner series lacks a monomial leading term");

    const BiSeries inner_bar = conjugate(inner);
    const int low = *inner.min_grade();
    std::map<std::pair<int, int>, BiSeries> cache_w, cache_wb;
    auto cached = [](std::map<std::pair<int, int>, BiSeries> &cache, const BiSeries &base, int n, int t) {
        auto it = cache.find({n, t});
        if (it == cache.end()) it = cache.emplace(std::pair{n, t}, detail::power(base, n, t)).first;
        return it->second;
    };
    for (const auto &[k, c] : outer.terms()) {
        if (k.grade() * low > trunc) continue;
        const BiSeries pw = cached(cache_w, inner, k.i, trunc - k.j * low);
        const BiSeries pwb = cached(cache_wb, inner_bar, k.j, trunc - k.i * low);
        const BiSeries prod = detail::mul_to(pw, pwb, trunc);
        for (const auto &[pk, pc] : prod.terms()) out.add_term(pk, c * pc);
    }
    return out;
}

/// Principal m-th root of a series whose lowest block is exactly c w^m.
///
/// Factors s = c w^m (1 + u) and expands (1 + u)^{1/m} binomially.  The m-fold
/// product of the result reproduces s through the truncation order.
inline BiSeries mth_root(const BiSeries &s, int m)
{
    if (m < 1) fail("root-order", "root order must be positive");
    auto lead = detail::leading_monomial(s);
    if (!lead || lead->first != Key{m, 0} || std::abs(lead->second) == 0.0)
        fail("root-leading-form", fmt::format("leading part is not c*w^{}", m));
    const int trunc = s.trunc();
    const Complex c = lead->second;
    BiSeries u(trunc - 1, BiSeries::unchecked_t{});
    for (const auto &[k, coeff] : s.terms())
        if (k != lead->first) u.add_term({k.i - m, k.j}, coeff / c);
    const BiSeries factor = detail::binomial_series(u, 1.0 / m, trunc - 1);
    const Complex root_c = m == 1 ? c : std::pow(c, 1.0 / m);
    BiSeries out(trunc, BiSeries::unchecked_t{});
    for (const auto &[k, coeff] : factor.terms()) out.add_term({k.i + 1, k.j}, root_c * coeff);
    return out;
}

namespace detail {

// Inverse of s = c w + (order >= 2) for any c != 0.  Fixed-point iteration
// Z <- (w - h(Z)) / c, h = s - c w, settles one more order per sweep.
inline BiSeries revert_scaled(const BiSeries &s)
{
    const int trunc = s.trunc();
    if (s.empty() || *s.min_grade() != 1) fail("revert-leading", "series must start at order 1");
    const auto lead = s.block(1);
    if (lead.size() != 1 || lead.front().first != Key{1, 0})
        fail("revert-leading", "order-1 part must be a single c*w term");
    const Complex c = lead.front().second;
    BiSeries h = s;
    h.add_term({1, 0}, -c);

    const BiSeries w = BiSeries::identity(trunc);
    BiSeries z = (1.0 / c) * w;
    const double tol = 1e-13;
    for (int iter = 0; iter <= trunc + 1; ++iter) {
        BiSeries next = (1.0 / c) * (w - compose(h, z));
        const BiSeries diff = next - z;
        z = std::move(next);
        if (diff.max_abs() <= tol * std::max(1.0, z.max_abs())) return z;
    }
    fail_numeric("revert-diverged", "fixed-point iteration did not settle");
}

} // namespace detail

/// Compositional inverse of s = w + (order >= 2): the series Z with
/// compose(s, Z) = w.
inline BiSeries revert(const BiSeries &s)
{
    if (std::abs(s.coeff(1, 0) - 1.0) > 1e-12) fail("revert-leading", "coefficient of w must be 1");
    return detail::revert_scaled(s);
}

/// Sum of c w^i conj(w)^j at a point.
inline Complex evaluate(const BiSeries &s, Complex w)
{
    if (!is_finite(w)) fail("non-finite", "evaluation point is NaN or infinite");
    if (w == Complex(0.0)) {
        for (const auto &[k, c] : s.terms())
            if (k.i < 0 || k.j < 0) fail("evaluate-pole", "negative exponent at w = 0");
        return s.coeff(0, 0);
    }
    const Complex wb = std::conj(w);
    Complex sum(0.0);
    for (const auto &[k, c] : s.terms()) sum += c * ipow(w, k.i) * ipow(wb, k.j);
    return sum;
}

} // namespace branchpt

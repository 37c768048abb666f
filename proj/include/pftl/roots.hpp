#pragma once

// Simultaneous (Aberth) root iteration in multiprecision arithmetic, followed
// by a posteriori inclusion disks: with Weierstrass corrections
// W_i = f(z_i) / (a_n prod_{j != i} (z_i - z_j)), the disks D(z_i, n |W_i|)
// cover all roots, and a connected component made of k disks holds exactly
// k roots (counted with multiplicity).

#include <climits>
#include <cmath>
#include <numeric>
#include <vector>

#include "pftl/interval.hpp"

namespace pftl {

/// A cluster of `count` roots whose moduli all lie in `modulus`.
struct RootCluster {
    Interval modulus;
    int count = 0;
};

namespace detail {

inline Complex horner(const std::vector<Float>& c, const Complex& z, Complex* deriv) {
    const mpfr_prec_t p = z.re.prec();
    Complex v(p), dv(p);
    for (std::size_t i = c.size(); i-- > 0;) {
        if (deriv) dv = dv * z + v;
        v = v * z + Complex(c[i], Float(p));
    }
    if (deriv) *deriv = dv;
    return v;
}

inline ComplexInterval horner(const std::vector<Integer>& c, const ComplexInterval& z, mpfr_prec_t p) {
    ComplexInterval v(p);
    for (std::size_t i = c.size(); i-- > 0;) v = v * z + ComplexInterval(Interval(c[i], p), Interval(p));
    return v;
}

/// Aberth iteration on a polynomial with nonzero constant term and degree >= 2.
inline std::vector<Complex> aberth(const std::vector<Integer>& coeffs, mpfr_prec_t wp) {
    const std::size_t n = coeffs.size() - 1;
    std::vector<Float> c;
    for (const auto& v : coeffs) c.emplace_back(v, wp);
    const double radius =
        std::pow(std::abs(coeffs.front().get_d()) / std::abs(coeffs.back().get_d()), 1.0 / static_cast<double>(n));
    std::vector<Complex> z;
    for (std::size_t k = 0; k < n; ++k) {
        const double ang = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(n) + 0.4;
        z.emplace_back(Float(radius * std::cos(ang), wp), Float(radius * std::sin(ang), wp));
    }
    const Float tol(std::ldexp(1.0, -static_cast<int>(wp) + 8), wp);
    const long max_iter = 100 + 10 * static_cast<long>(n) + static_cast<long>(wp);
    std::vector<bool> done(n, false);
    for (long it = 0; it < max_iter; ++it) {
        bool all_done = true;
        for (std::size_t i = 0; i < n; ++i) {
            if (done[i]) continue;
            Complex dp(wp);
            Complex p = horner(c, z[i], &dp);
            if (p.re.is_zero() && p.im.is_zero()) {
                done[i] = true;
                continue;
            }
            Complex newton = p / dp;
            Complex s(wp);
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) s = s + Complex(Float(1.0, wp), Float(wp)) / (z[i] - z[j]);
            Complex corr = newton / (Complex(Float(1.0, wp), Float(wp)) - newton * s);
            z[i] = z[i] - corr;
            Float mag = z[i].abs();
            if (corr.abs() < tol * (mag > Float(1.0, wp) ? mag : Float(1.0, wp)))
                done[i] = true;
            else
                all_done = false;
        }
        if (all_done) break;
    }
    return z;
}

}  // namespace detail

/// Certified clusters of the nonzero roots of a polynomial with nonzero
/// constant term and degree >= 1.  Returns an empty vector when the
/// certification fails at this precision.
inline std::vector<RootCluster> certified_root_clusters(const std::vector<Integer>& coeffs, mpfr_prec_t prec) {
    const std::size_t n = coeffs.size() - 1;
    if (n == 1) {
        Interval r = abs(Interval(make_rational(-coeffs[0], coeffs[1]), prec));
        return {RootCluster{r, 1}};
    }
    const mpfr_prec_t wp = prec + 32;
    const auto z = detail::aberth(coeffs, wp);
    std::vector<ComplexInterval> zi;
    for (const auto& v : z) zi.emplace_back(v);
    const Interval lead = abs(Interval(coeffs.back(), wp));
    std::vector<Interval> radius;
    for (std::size_t i = 0; i < n; ++i) {
        Interval den = lead;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) den = den * (zi[i] - zi[j]).abs();
        if (den.contains_zero()) return {};
        Interval w = detail::horner(coeffs, zi[i], wp).abs() / den;
        Interval r = Interval(Integer(static_cast<unsigned long>(n)), wp) * w;
        Interval upper(Rational(r.hi_rational()), wp);
        radius.push_back(upper);
    }
    // Union-find on overlapping disks.
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            Interval dist = (zi[i] - zi[j]).abs();
            Interval reach = radius[i] + radius[j];
            if (!reach.certainly_less(dist)) parent[static_cast<std::size_t>(find(i))] = find(j);
        }
    }
    std::vector<RootCluster> clusters;
    std::vector<long> slot(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t root = find(i);
        Interval m = zi[i].abs();
        const Interval& r = radius[i];
        Interval span = (m - r);
        span = hull(span, m + r);
        span = span.clamped(0, LONG_MAX);
        if (slot[root] < 0) {
            slot[root] = static_cast<long>(clusters.size());
            clusters.push_back({span, 1});
        } else {
            auto& c = clusters[static_cast<std::size_t>(slot[root])];
            c.modulus = hull(c.modulus, span);
            ++c.count;
        }
    }
    return clusters;
}

}  // namespace pftl

#pragma once

// Test-only oracle: the discriminant of a pure cubic field computed from a
// brute-force maximal order.  Starting from Z[theta], for every prime p with
// p^2 | disc(x^3 - a) we search the finitely many classes (sum c_i w_i)/p,
// 0 <= c_i < p, for algebraic integers not yet in the order and adjoin them.
// O_K / O is a finite p-group at p, so the search terminates exactly at the
// p-maximal order.

#include <array>

#include "pftl/arith.hpp"
#include "pftl/element.hpp"

namespace oracle {

using pftl::FieldElement;
using pftl::Integer;
using pftl::Rational;

using Basis = std::array<std::array<Rational, 3>, 3>;  // rows: coordinates in 1, t, t^2

inline FieldElement to_element(const pftl::FieldRef& f, const std::array<Rational, 3>& c) {
    return FieldElement::from_rationals(f, {c[0], c[1], c[2]});
}

/// Characteristic polynomial coefficients (trace, second symmetric, norm) of
/// multiplication by x.
inline std::array<Rational, 3> charpoly(const FieldElement& x) {
    std::array<std::array<Rational, 3>, 3> m;  // column k = x * t^k
    for (int k = 0; k < 3; ++k) {
        auto col = (x * FieldElement::theta(x.field(), k)).coords();
        for (int r = 0; r < 3; ++r) m[r][k] = col[r];
    }
    Rational tr = m[0][0] + m[1][1] + m[2][2];
    Rational s2 = m[0][0] * m[1][1] - m[0][1] * m[1][0] + m[0][0] * m[2][2] - m[0][2] * m[2][0] +
                  m[1][1] * m[2][2] - m[1][2] * m[2][1];
    Rational det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                   m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                   m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    return {tr, s2, det};
}

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

inline bool is_algebraic_integer(const FieldElement& x) {
    for (const auto& c : charpoly(x))
        if (!is_integer(c)) return false;
    return true;
}

inline Rational det3(const Basis& b) {
    return b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1]) - b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0]) +
           b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
}

/// Replaces `b` by a basis of the lattice spanned by b and v (rational
/// Hermite reduction on the scaled integer matrix).
inline void adjoin(Basis& b, const std::array<Rational, 3>& v) {
    std::vector<std::array<Rational, 3>> rows(b.begin(), b.end());
    rows.push_back(v);
    Integer l = 1;
    for (const auto& r : rows)
        for (const auto& c : r) l = lcm(l, Integer(c.get_den()));
    std::vector<std::array<Integer, 3>> m;
    for (const auto& r : rows) m.push_back({Integer(r[0] * l), Integer(r[1] * l), Integer(r[2] * l)});
    // Integer row echelon via repeated Euclid on each column.
    std::size_t top = 0;
    for (int col = 0; col < 3; ++col) {
        for (;;) {
            std::size_t piv = m.size();
            for (std::size_t i = top; i < m.size(); ++i)
                if (m[i][col] != 0 && (piv == m.size() || abs(m[i][col]) < abs(m[piv][col]))) piv = i;
            if (piv == m.size()) break;
            std::swap(m[top], m[piv]);
            bool done = true;
            for (std::size_t i = top + 1; i < m.size(); ++i) {
                if (m[i][col] == 0) continue;
                Integer q;
                mpz_fdiv_q(q.get_mpz_t(), m[i][col].get_mpz_t(), m[top][col].get_mpz_t());
                for (int c = 0; c < 3; ++c) m[i][c] -= q * m[top][c];
                if (m[i][col] != 0) done = false;
            }
            if (done) break;
        }
        ++top;
    }
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) b[r][c] = pftl::make_rational(m[r][c], l);
}

/// |D_K| of Q(a^(1/3)) from the brute-force maximal order.
inline Integer cubic_discriminant(const Integer& a) {
    auto field = pftl::make_field(3, a);
    const Integer poly_disc = 27 * a * a;
    Basis b{};
    for (int i = 0; i < 3; ++i) b[i][i] = 1;
    for (const auto& pf : pftl::factor(poly_disc).factors) {
        if (pf.exponent < 2) continue;
        const long p = pf.prime.get_si();
        bool grew = true;
        while (grew) {
            grew = false;
            std::array<Rational, 3> tr;
            for (int i = 0; i < 3; ++i) tr[i] = charpoly(to_element(field, b[i]))[0];
            for (long c0 = 0; c0 < p && !grew; ++c0)
                for (long c1 = 0; c1 < p && !grew; ++c1)
                    for (long c2 = 0; c2 < p && !grew; ++c2) {
                        if (c0 == 0 && c1 == 0 && c2 == 0) continue;
                        if (!is_integer((c0 * tr[0] + c1 * tr[1] + c2 * tr[2]) / p)) continue;
                        std::array<Rational, 3> v;
                        for (int k = 0; k < 3; ++k) v[k] = (c0 * b[0][k] + c1 * b[1][k] + c2 * b[2][k]) / p;
                        if (!is_algebraic_integer(to_element(field, v))) continue;
                        adjoin(b, v);
                        grew = true;
                    }
        }
    }
    const Rational index = 1 / abs(det3(b));
    if (!is_integer(index)) throw std::runtime_error("oracle: non-integral index");
    return poly_disc / (index.get_num() * index.get_num());
}

}  // namespace oracle

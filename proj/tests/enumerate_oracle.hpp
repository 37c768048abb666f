#pragma once

// Test-only brute force for pure cubic fields: every canonical c/q in a plain
// box, the leading coefficient from the closed-form characteristic
// polynomial, the conjugates in long double.  Near-ties are settled with the
// exact all-inside / all-outside values or reported as undecided.

#include <array>
#include <cmath>
#include <numeric>
#include <set>

#include "cubic_oracle.hpp"

namespace oracle {

struct BoxCount {
    std::uint64_t count = 0;
    std::uint64_t undecided = 0;
    std::set<std::array<long, 4>> elements;  // (c0, c1, c2, q)
};

using i128 = __int128;

inline i128 gcd128(i128 x, i128 y) {
    if (x < 0) x = -x;
    if (y < 0) y = -y;
    while (y != 0) {
        const i128 t = x % y;
        x = y;
        y = t;
    }
    return x;
}

/// Reduced denominator of num / den (den > 0).
inline i128 reduced_den(i128 num, i128 den) { return den / gcd128(num, den); }

inline i128 lcm128(i128 x, i128 y) { return x / gcd128(x, y) * y; }

/// The index s with s^2 = 27 a^2 / D_K.
inline long index_of(long a) {
    const Integer ratio = Integer(27) * a * a / cubic_discriminant(Integer(a));
    Integer s;
    mpz_sqrt(s.get_mpz_t(), ratio.get_mpz_t());
    return s.get_si();
}

/// Brute force over q <= q_hi and |c_k| <= b[k], counting canonical primitive
/// elements of height < X = xn / xd.
inline BoxCount brute_count(long a, long xn, long xd, long q_hi, const std::array<long, 3>& b) {
    BoxCount out;
    const long double th = std::cbrt(static_cast<long double>(a));
    const long double th2 = th * th;
    const long double X = static_cast<long double>(xn) / xd;
    for (long q = 1; q <= q_hi; ++q)
        for (long c2 = -b[2]; c2 <= b[2]; ++c2)
            for (long c1 = -b[1]; c1 <= b[1]; ++c1) {
                if (c1 == 0 && c2 == 0) continue;  // rational
                const long g12 = std::gcd(std::gcd(c1, c2), q);
                for (long c0 = -b[0]; c0 <= b[0]; ++c0) {
                    if (std::gcd(g12, c0) != 1) continue;
                    const i128 n3 = static_cast<i128>(c0) * c0 * c0 + static_cast<i128>(a) * c1 * c1 * c1 +
                                    static_cast<i128>(a) * a * c2 * c2 * c2 - static_cast<i128>(3) * a * c0 * c1 * c2;
                    const i128 n2 = static_cast<i128>(3) * c0 * c0 - static_cast<i128>(3) * a * c1 * c2;
                    const i128 n1 = static_cast<i128>(3) * c0;
                    const i128 q1 = q, q2 = q1 * q, q3 = q2 * q;
                    const i128 T = lcm128(lcm128(reduced_den(n1, q1), reduced_den(n2, q2)), reduced_den(n3, q3));
                    const long double re0 = (c0 + c1 * th + c2 * th2) / q;
                    const long double re1 = (c0 - (c1 * th + c2 * th2) / 2) / q;
                    const long double im1 = std::sqrt(3.0L) / 2 * (c1 * th - c2 * th2) / q;
                    const long double m0 = std::fabs(re0), m1 = std::hypot(re1, im1);
                    const long double H = static_cast<long double>(T) * std::max(1.0L, m0) * std::max(1.0L, m1) *
                                          std::max(1.0L, m1);
                    bool less;
                    if (H < X * (1 - 1e-9L)) {
                        less = true;
                    } else if (H > X * (1 + 1e-9L)) {
                        less = false;
                    } else if (m0 > 1 + 1e-9L && m1 > 1 + 1e-9L) {
                        // H = T |N(alpha)| = T |n3| / q^3, compared exactly
                        const i128 g = gcd128(n3, q3);
                        const i128 hn = T * (n3 < 0 ? -n3 : n3) / g, hd = q3 / g;
                        less = hn * xd < hd * xn;
                    } else if (m0 < 1 - 1e-9L && m1 < 1 - 1e-9L) {
                        less = T * xd < static_cast<i128>(xn);
                    } else {
                        ++out.undecided;
                        continue;
                    }
                    if (!less) continue;
                    ++out.count;
                    out.elements.insert({c0, c1, c2, q});
                }
            }
    return out;
}

}  // namespace oracle

#pragma once

// Mahler measures and relative Weil heights with certified enclosures.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "pftl/element.hpp"
#include "pftl/roots.hpp"

namespace pftl {

inline constexpr mpfr_prec_t kDefaultPrecBits = 128;

struct MahlerOptions {
    mpfr_prec_t prec = kDefaultPrecBits;
    /// Refinement doubles the working precision up to this ceiling.
    mpfr_prec_t max_prec = 2048;
};

namespace detail {

/// True when width <= 2^(-prec/4) * midpoint.
inline bool narrow_enough(const RealEnclosure& e, mpfr_prec_t prec) {
    if (e.is_exact()) return true;
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 2, static_cast<unsigned long>(prec / 4));
    return e.width() * scale <= e.midpoint();
}

inline RealEnclosure mahler_at(const std::vector<Integer>& g, const Integer& lead_abs, const Integer& low_abs,
                               mpfr_prec_t prec, bool& certified) {
    certified = false;
    auto clusters = certified_root_clusters(g, prec);
    if (clusters.empty()) return RealEnclosure::exact(0);
    certified = true;
    const bool all_out = std::all_of(clusters.begin(), clusters.end(),
                                     [](const RootCluster& c) { return c.modulus.lo_greater(1); });
    if (all_out) return RealEnclosure::exact(Rational(low_abs));
    const bool all_in = std::all_of(clusters.begin(), clusters.end(),
                                    [](const RootCluster& c) { return c.modulus.hi_less(1); });
    if (all_in) return RealEnclosure::exact(Rational(lead_abs));
    Interval m(lead_abs, prec + 32);
    for (const auto& c : clusters) m = m * pow(max1(c.modulus), static_cast<unsigned long>(c.count));
    return RealEnclosure(m);
}

}  // namespace detail

/// M(f) = |a_n| prod max(1, |root|).  Collapses to an exact integer when every
/// root is certified outside (|a_0|) or inside (|a_n|) the unit circle.
inline RealEnclosure mahler_measure(const IntPolynomial& f, const MahlerOptions& opts = {}) {
    if (f.degree() < 1) throw PreconditionError("Mahler measure needs degree >= 1");
    // Roots at zero contribute a factor 1.
    std::size_t low = 0;
    while (f.coeffs()[low] == 0) ++low;
    std::vector<Integer> g(f.coeffs().begin() + static_cast<long>(low), f.coeffs().end());
    const Integer lead_abs = abs(g.back());
    const Integer low_abs = abs(g.front());
    if (g.size() == 1) return RealEnclosure::exact(Rational(lead_abs));
    if (g.size() == 2) return RealEnclosure::exact(Rational(std::max(lead_abs, low_abs)));

    RealEnclosure best;
    bool have = false;
    for (mpfr_prec_t p = opts.prec; p <= opts.max_prec; p *= 2) {
        bool certified = false;
        RealEnclosure e = detail::mahler_at(g, lead_abs, low_abs, p, certified);
        if (certified) {
            if (!have || e.width() < best.width()) best = e;
            have = true;
            if (detail::narrow_enough(e, opts.prec)) return e;
        }
    }
    if (!have) {
        // Landau: max(|a_n|, |a_0|) <= M(f) <= ||f||_2.
        Integer norm2 = 0, root;
        for (const auto& c : g) norm2 += c * c;
        mpz_sqrt(root.get_mpz_t(), norm2.get_mpz_t());
        best = RealEnclosure(Rational(std::max(lead_abs, low_abs)), Rational(root + 1));
    }
    throw RefinementError("Mahler measure of " + f.to_string() + " not certified at " +
                              std::to_string(opts.max_prec) + " bits",
                          best);
}

inline RealEnclosure mahler_measure(const IntPolynomial& f, mpfr_prec_t prec) {
    return mahler_measure(f, MahlerOptions{prec, std::max<mpfr_prec_t>(2048, 4 * prec)});
}

/// H_Q(b1/b0) = max(b0, |b1|) for b1/b0 in lowest terms.
inline Integer rational_height(const Rational& b) { return std::max(Integer(abs(b.get_num())), Integer(b.get_den())); }

/// H_K(x) given its minimal polynomial f of degree e: T^(d/e) prod_j max(1, |x_j|)
/// over the d conjugates, which equals M(f)^(d/e).
inline RealEnclosure weil_height(const FieldElement& x, const IntPolynomial& minpoly, mpfr_prec_t prec) {
    const int d = x.d();
    if (x.is_zero()) return RealEnclosure::exact(1);
    const int e = minpoly.degree();
    const auto r = static_cast<unsigned long>(d / e);
    if (e == 1) return RealEnclosure::exact(Rational(ipow(rational_height(x.coord(0)), static_cast<unsigned long>(d))));
    const auto conj = conjugate_enclosures(x, prec);
    std::vector<Interval> moduli;
    for (const auto& c : conj) moduli.push_back(c.abs());
    if (std::all_of(moduli.begin(), moduli.end(), [](const Interval& m) { return m.lo_greater(1); }))
        return RealEnclosure::exact(Rational(ipow(abs(minpoly.coeff(0)), r)));
    if (std::all_of(moduli.begin(), moduli.end(), [](const Interval& m) { return m.hi_less(1); }))
        return RealEnclosure::exact(Rational(ipow(minpoly.leading(), r)));
    Interval h(ipow(minpoly.leading(), r), prec + 16);
    for (const auto& m : moduli) h = h * max1(m);
    return RealEnclosure(h);
}

inline RealEnclosure weil_height(const FieldElement& x, mpfr_prec_t prec = kDefaultPrecBits) {
    if (x.is_zero()) return RealEnclosure::exact(1);
    return weil_height(x, minimal_polynomial(x), prec);
}

enum class Comparison { Less, Greater, Undecided, Equal };

inline std::string to_string(Comparison c) {
    switch (c) {
        case Comparison::Less: return "Less";
        case Comparison::Greater: return "Greater";
        case Comparison::Equal: return "Equal";
        case Comparison::Undecided: break;
    }
    return "Undecided";
}

/// Less iff hi < x, Greater iff lo > x.  A point enclosure equal to x
/// compares Equal; anything else straddling x is Undecided.
inline Comparison height_compare(const RealEnclosure& h, const Rational& x) {
    if (h.hi() < x) return Comparison::Less;
    if (h.lo() > x) return Comparison::Greater;
    if (h.is_exact()) return Comparison::Equal;
    return Comparison::Undecided;
}

}  // namespace pftl

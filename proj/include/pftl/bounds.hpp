#pragma once

// Generator height lower bounds (Silverman, Dubickas) and the torsion
// exponent calculus built on them.  Exponents are enclosures; the arbitrary
// +epsilon and every implied constant stay symbolic.

#include <optional>
#include <string>
#include <vector>

#include "pftl/purefield.hpp"

namespace pftl {

namespace detail {

inline constexpr mpfr_prec_t kBoundsPrec = 192;

inline Interval d_root(const Integer& v, unsigned long n, mpfr_prec_t prec) { return rootn(Interval(v, prec), n); }

}  // namespace detail

/// 1/2 * D^(1/(2(d-1))) over the discriminant range [d_lo, d_hi].
inline RealEnclosure silverman_lower(const Integer& d_lo, const Integer& d_hi, int d,
                                     mpfr_prec_t prec = detail::kBoundsPrec) {
    check_degree(d);
    const auto n = static_cast<unsigned long>(2 * (d - 1));
    const Interval half(make_rational(1, 2), prec);
    const Interval lo = half * detail::d_root(d_lo, n, prec);
    const Interval hi = half * detail::d_root(d_hi, n, prec);
    return RealEnclosure(hull(lo, hi));
}

/// Uses the exact discriminant when known, else [lower, upper].
inline RealEnclosure silverman_lower(const DiscriminantInfo& disc, int d, mpfr_prec_t prec = detail::kBoundsPrec) {
    return silverman_lower(disc.best_lower(), disc.best_upper(), d, prec);
}

struct MinProduct {
    RealEnclosure value;  // min_m prod_i A_i^frac(i m / d)
    int argmin_m = 0;
    /// The minimum is norm^(1/d) with norm = prod_i A_i^(i m mod d), an integer.
    Integer norm;
};

/// The m-product at a single m, as the integer prod_i A_i^(i m mod d).
inline Integer m_product_norm(const PowerFreeDecomposition& dec, int m) {
    const int d = dec.d();
    Integer n = 1;
    for (int i = 1; i < d; ++i) n *= ipow(dec.part(i), static_cast<unsigned long>((i * m) % d));
    return n;
}

/// Minimum over (d+1)/2 <= m <= d-1 of prod_i A_i^frac(i m / d), compared
/// exactly through the integer d-th powers; ties go to the smaller m.
inline MinProduct min_product(const PowerFreeDecomposition& dec, mpfr_prec_t prec = detail::kBoundsPrec) {
    const int d = dec.d();
    MinProduct best;
    for (int m = (d + 1) / 2; m <= d - 1; ++m) {
        Integer n = m_product_norm(dec, m);
        if (best.argmin_m == 0 || n < best.norm) {
            best.norm = std::move(n);
            best.argmin_m = m;
        }
    }
    best.value = RealEnclosure(detail::d_root(best.norm, static_cast<unsigned long>(d), prec));
    return best;
}

/// C_d = d^-(2d-1).
inline Rational dubickas_constant(int d) {
    return make_rational(Integer(1), ipow(Integer(d), static_cast<unsigned long>(2 * d - 1)));
}

/// C_d * min_product: every primitive element has height strictly above this.
inline RealEnclosure dubickas_lower(const PowerFreeDecomposition& dec, mpfr_prec_t prec = detail::kBoundsPrec) {
    const auto mp = min_product(dec, prec);
    const Interval v = Interval(dubickas_constant(dec.d()), prec) *
                       detail::d_root(mp.norm, static_cast<unsigned long>(dec.d()), prec);
    return RealEnclosure(v);
}

struct GammaReport {
    RealEnclosure gamma;
    /// True when the bound carries no information (C_d * min_product <= 1).
    bool degenerate = false;
};

/// gamma = log(A) / log(D) over D in [d_lo, d_hi], where A = C_d * min_product
/// (or the bare min_product when with_constant is false).
inline GammaReport gamma_of(const PowerFreeDecomposition& dec, const Integer& d_lo, const Integer& d_hi,
                            bool with_constant = true, mpfr_prec_t prec = detail::kBoundsPrec) {
    if (d_lo < 2) throw PreconditionError("gamma needs a discriminant bound above 1");
    const int d = dec.d();
    const auto mp = min_product(dec, prec);
    GammaReport r;
    // A <= 1  <=>  norm <= d^(d(2d-1)) (with the constant) or norm <= 1.
    const Integer threshold =
        with_constant ? ipow(Integer(d), static_cast<unsigned long>(d * (2 * d - 1))) : Integer(1);
    r.degenerate = mp.norm <= threshold;
    Interval log_a = log(Interval(mp.norm, prec)) / Interval(Integer(d), prec);
    if (with_constant) log_a = log_a - Interval(Integer(2 * d - 1), prec) * log(Interval(Integer(d), prec));
    const Interval log_d = hull(log(Interval(d_lo, prec)), log(Interval(d_hi, prec)));
    r.gamma = RealEnclosure(log_a / log_d);
    return r;
}

inline GammaReport gamma_of(const PowerFreeDecomposition& dec, const DiscriminantInfo& disc,
                            bool with_constant = true, mpfr_prec_t prec = detail::kBoundsPrec) {
    return gamma_of(dec, disc.best_lower(), disc.best_upper(), with_constant, prec);
}

/// A factor base^exponent multiplying a D-power bound.
struct FactorExponent {
    std::string label;   // which bound it belongs to
    std::string symbol;  // e.g. "A_2"
    Integer base;
    Rational exponent;
};

struct ExponentEntry {
    std::string label;  // EV, HB, SilHB, HBD, GB
    RealEnclosure exponent;
    std::string note;
};

struct TorsionExponentReport {
    int d = 0;
    Integer a;
    int ell = 0;
    std::vector<Integer> parts;
    Integer disc_lo, disc_hi;
    ExponentEntry ev, silhb, gb;
    std::optional<ExponentEntry> hb, hbd;
    std::vector<FactorExponent> a_factor_exponents;
    GammaReport gamma;
    int argmin_m = 0;
    std::string epsilon_note;
};

namespace detail {

inline RealEnclosure half_minus(const Rational& r) { return RealEnclosure::exact(make_rational(1, 2) - r); }

}  // namespace detail

/// Every applicable D_K exponent for one field and one ell.  All exponents
/// carry +epsilon and an unspecified constant depending on (epsilon, ell, d).
inline TorsionExponentReport torsion_exponents(const PureField& field, int ell,
                                               mpfr_prec_t prec = detail::kBoundsPrec) {
    if (ell < 1) throw PreconditionError("ell must be >= 1, got " + std::to_string(ell));
    const int d = field.d();
    TorsionExponentReport r;
    r.d = d;
    r.a = field.a();
    r.ell = ell;
    r.parts = field.dec().parts();
    r.disc_lo = field.disc().best_lower();
    r.disc_hi = field.disc().best_upper();
    const Rational sil(1, 2 * ell * (d - 1));
    r.ev = {"EV", detail::half_minus(sil), "1/2 - 1/(2 ell (d-1))"};
    r.silhb = {"SilHB", detail::half_minus(sil), "1/2 - 1/(2 (d-1) ell), pure fields of odd degree"};
    if (d == 3) {
        r.hb = ExponentEntry{"HB", detail::half_minus(make_rational(1, 4 * ell)), "1/2 - 1/(4 ell), pure cubic fields"};
        // Rotating a by k = 2 swaps A_1 and A_2; keep the smaller one in the factor.
        const Integer& a1 = field.dec().part(1);
        const Integer& a2 = field.dec().part(2);
        const bool swapped = a1 < a2;
        r.hbd = ExponentEntry{"HBD", detail::half_minus(make_rational(1, 3 * ell)),
                              swapped ? "1/2 - 1/(3 ell), times A_2^(1/(3 ell)) after swapping A_1 and A_2"
                                      : "1/2 - 1/(3 ell), times A_2^(1/(3 ell))"};
        r.a_factor_exponents.push_back({"HBD", "A_2", swapped ? a1 : a2, make_rational(1, 3 * ell)});
    }
    r.gamma = gamma_of(field.dec(), field.disc(), true, prec);
    r.argmin_m = min_product(field.dec(), prec).argmin_m;
    if (r.gamma.degenerate) {
        r.gb = {"GB", RealEnclosure::exact(make_rational(1, 2)),
                "degenerate: C_d * min_product <= 1 gives no saving over D^(1/2)"};
    } else {
        const Rational inv_ell(1, ell);
        r.gb = {"GB",
                RealEnclosure(make_rational(1, 2) - r.gamma.gamma.hi() * inv_ell,
                              make_rational(1, 2) - r.gamma.gamma.lo() * inv_ell),
                "1/2 - gamma/ell with C_d * min_product = D^gamma"};
    }
    r.epsilon_note = "every exponent holds with +epsilon for any epsilon > 0; implied constants depend on "
                     "(epsilon, ell, d) and are not evaluated";
    return r;
}

/// f(ell, d) = 1/(2 ell (d-1)), valid for ell >= d/2.
inline Rational f_value(int ell, int d) {
    if (d <= 1) throw PreconditionError("f(ell, d) needs d > 1");
    if (2 * ell < d)
        throw PreconditionError("f(ell, d) is only known for ell >= d/2; got ell = " + std::to_string(ell) +
                                ", d = " + std::to_string(d));
    return make_rational(1, 2 * ell * (d - 1));
}

/// eta^(-1/ell): the M_{K,ell} floor up to an absolute constant.
inline RealEnclosure mkl_lower(const RealEnclosure& eta, int ell, mpfr_prec_t prec = detail::kBoundsPrec) {
    if (eta.lo() <= 0) throw PreconditionError("eta must be positive");
    if (ell < 1) throw PreconditionError("ell must be >= 1");
    const auto n = static_cast<unsigned long>(ell);
    const Interval one(Integer(1), prec);
    const Interval v = one / rootn(eta.to_interval(prec), n);
    return RealEnclosure(v);
}

struct EquivalentForms {
    RealEnclosure first;   // D^(1/2 - (d+1)/(2d(d-1)ell)) A_2^((d-1)/(2d ell))
    RealEnclosure second;  // D^(1/2 - 1/(2(d-1)ell)) (A_2^(d-2)/A_1)^(1/(2d ell))
    double relative_gap = 0;
};

/// Both closed forms of the cubefree GB bound, with D = (A_1 A_2)^(d-1).
inline EquivalentForms equivalent_forms(int d, int ell, const Integer& a1, const Integer& a2,
                                        mpfr_prec_t prec = detail::kBoundsPrec) {
    const Interval log_d = Interval(Integer(d - 1), prec) * log(Interval(Integer(a1 * a2), prec));
    const Interval log_a1 = log(Interval(a1, prec));
    const Interval log_a2 = log(Interval(a2, prec));
    const auto iv = [prec](const Rational& q) { return Interval(q, prec); };
    const Interval first = exp(iv(make_rational(1, 2) - make_rational(d + 1, 2 * d * (d - 1) * ell)) * log_d +
                               iv(make_rational(d - 1, 2 * d * ell)) * log_a2);
    const Interval second = exp(iv(make_rational(1, 2) - make_rational(1, 2 * (d - 1) * ell)) * log_d +
                                iv(make_rational(1, 2 * d * ell)) * (iv(Rational(d - 2)) * log_a2 - log_a1));
    EquivalentForms r{RealEnclosure(first), RealEnclosure(second), 0};
    const double m1 = r.first.mid_double(), m2 = r.second.mid_double();
    r.relative_gap = std::abs(m1 - m2) / std::max(std::abs(m1), std::abs(m2));
    return r;
}

inline bool equivalent_forms_check(int d, int ell, const Integer& a1, const Integer& a2, double tol = 1e-12) {
    const auto r = equivalent_forms(d, ell, a1, a2);
    return r.first.overlaps(r.second) || r.relative_gap <= tol;
}

}  // namespace pftl

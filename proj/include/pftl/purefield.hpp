#pragma once

// The pure field Q(a^(1/d)) for odd d: construction with an irreducibility
// check, discriminant data, and the radical subfields used for primitivity.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pftl/arith.hpp"
#include "pftl/interval.hpp"

namespace pftl {

struct DiscriminantInfo {
    Integer lower;              // (prod_{(k,d)=1} A_k)^(d-1)
    Integer upper;              // unconditional: |disc(x^d - a)|
    std::optional<Integer> exact;
    Integer poly_disc_modulus;  // d^d a^(d-1)

    /// Best known lower end of the interval containing D_K.
    const Integer& best_lower() const { return exact ? *exact : lower; }
    const Integer& best_upper() const { return exact ? *exact : upper; }
};

/// The radical subfield Q(theta^(d/e)) of degree e: elements supported on multiples of d/e.
struct SubfieldSupport {
    int degree = 0;
    std::vector<int> support;

    friend bool operator==(const SubfieldSupport&, const SubfieldSupport&) = default;
};

class PureField {
public:
    int d() const { return d_; }
    const Integer& a() const { return a_; }
    const PowerFreeDecomposition& dec() const { return dec_; }
    /// Enclosure of the real root theta = a^(1/d) with lo^d <= a <= hi^d.
    const RealEnclosure& theta() const { return theta_; }
    const DiscriminantInfo& disc() const { return disc_; }

    friend bool operator==(const PureField& x, const PureField& y) { return x.d_ == y.d_ && x.a_ == y.a_; }

private:
    friend PureField new_field(int d, const Integer& a);
    int d_ = 0;
    Integer a_;
    PowerFreeDecomposition dec_;
    RealEnclosure theta_;
    DiscriminantInfo disc_;
};

using FieldRef = std::shared_ptr<const PureField>;

inline std::vector<Integer> prime_divisors(long n) {
    std::vector<Integer> out;
    for (const auto& f : factor(Integer(n)).factors) out.push_back(f.prime);
    return out;
}

inline DiscriminantInfo disc_bounds(const PowerFreeDecomposition& dec) {
    const int d = dec.d();
    const auto dd = static_cast<unsigned long>(d);
    DiscriminantInfo info;
    Integer coprime_product = 1;
    for (int k = 1; k < d; ++k)
        if (std::gcd(k, d) == 1) coprime_product *= dec.part(k);
    info.lower = ipow(coprime_product, dd - 1);
    info.poly_disc_modulus = ipow(Integer(d), dd) * ipow(dec.radicand(), dd - 1);
    info.upper = info.poly_disc_modulus;
    return info;
}

inline DiscriminantInfo disc_bounds(const PureField& field) {
    DiscriminantInfo info = disc_bounds(field.dec());
    info.exact = field.disc().exact;
    return info;
}

/// |D_K| for a pure cubic field a = A_1 A_2^2: 3 (A_1 A_2)^2 when A_1^2 = A_2^2 mod 9,
/// 27 (A_1 A_2)^2 otherwise.
inline Integer disc_exact_cubic(const PowerFreeDecomposition& dec) {
    if (dec.d() != 3)
        throw UnsupportedDegreeError("exact discriminant is only available for d = 3, got d = " +
                                     std::to_string(dec.d()));
    const Integer& a1 = dec.part(1);
    const Integer& a2 = dec.part(2);
    const Integer r1 = (a1 * a1) % 9, r2 = (a2 * a2) % 9;
    const Integer base = (a1 * a2) * (a1 * a2);
    return r1 == r2 ? 3 * base : 27 * base;
}

inline Integer disc_exact_cubic(const PureField& field) { return disc_exact_cubic(field.dec()); }

inline std::vector<SubfieldSupport> subfield_degrees(int d) {
    std::vector<SubfieldSupport> out;
    for (int e = 2; e < d; ++e) {
        if (d % e != 0) continue;
        SubfieldSupport s{e, {}};
        for (int k = 0; k < d; k += d / e) s.support.push_back(k);
        out.push_back(std::move(s));
    }
    return out;
}

inline std::vector<SubfieldSupport> subfield_degrees(const PureField& field) { return subfield_degrees(field.d()); }

inline RealEnclosure theta_enclosure(const Integer& a, int d, mpfr_prec_t prec) {
    return RealEnclosure(rootn(Interval(a, prec), static_cast<unsigned long>(d)));
}

inline PureField new_field(int d, const Integer& a) {
    check_degree(d);
    if (a < 2) throw DomainError("radicand must be >= 2, got " + a.get_str());
    PureField f;
    f.d_ = d;
    f.a_ = a;
    f.dec_ = decompose(a, d);
    for (const auto& p : prime_divisors(d)) {
        if (is_pth_power(a, p.get_ui()))
            throw ReducibilityError("x^" + std::to_string(d) + " - " + a.get_str() + " is reducible: " +
                                    a.get_str() + " is a " + p.get_str() + "-th power");
    }
    f.theta_ = theta_enclosure(a, d, 256);
    f.disc_ = disc_bounds(f.dec_);
    if (d == 3) f.disc_.exact = disc_exact_cubic(f.dec_);
    return f;
}

inline FieldRef make_field(int d, const Integer& a) { return std::make_shared<const PureField>(new_field(d, a)); }

/// Bound on the index [O_K : Z[theta]]: the exact index when D_K is known,
/// otherwise the largest s with s^2 | d^d a^(d-1) / D_lower.  The true index
/// always divides the returned value.
inline Integer index_bound(const PureField& field) {
    const auto& disc = field.disc();
    if (disc.exact) {
        const Integer ratio = disc.poly_disc_modulus / *disc.exact;
        Integer s;
        if (disc.poly_disc_modulus % *disc.exact != 0 || !mpz_perfect_square_p(ratio.get_mpz_t()))
            throw RigorError("polynomial discriminant / field discriminant is not a square");
        mpz_sqrt(s.get_mpz_t(), ratio.get_mpz_t());
        return s;
    }
    const int d = field.d();
    std::map<Integer, unsigned long> ord;  // ord_p(d^d a^(d-1) / D_lower)
    for (const auto& f : factor(Integer(d)).factors) ord[f.prime] += static_cast<unsigned long>(d) * f.exponent;
    for (int i = 1; i < d; ++i) {
        if (field.dec().part(i) == 1) continue;
        const unsigned long drop = std::gcd(i, d) == 1 ? static_cast<unsigned long>(d - 1) : 0;
        for (const auto& f : factor(field.dec().part(i)).factors)
            ord[f.prime] += static_cast<unsigned long>((d - 1) * i) - drop;
    }
    Integer s = 1;
    for (const auto& [p, e] : ord) s *= ipow(p, e / 2);
    return s;
}

}  // namespace pftl

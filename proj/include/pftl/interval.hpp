#pragma once

// Multiprecision floating point and outward-rounded interval arithmetic on
// top of MPFR.  Float is a plain round-to-nearest number used by iterative
// solvers; Interval rounds every endpoint outward so the true value of any
// expression evaluated in it is always enclosed.

#include <algorithm>
#include <cmath>
#include <gmpxx.h>
#include <mpfr.h>
#include <ostream>
#include <string>
#include <utility>

#include "pftl/errors.hpp"

namespace pftl {

using Integer = mpz_class;
using Rational = mpq_class;

/// num/den in lowest terms with a positive denominator.
inline Rational make_rational(const Integer& num, const Integer& den) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

class Float {
public:
    explicit Float(mpfr_prec_t prec = 64) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
    Float(double x, mpfr_prec_t prec) : Float(prec) { mpfr_set_d(v_, x, MPFR_RNDN); }
    Float(const Integer& x, mpfr_prec_t prec) : Float(prec) { mpfr_set_z(v_, x.get_mpz_t(), MPFR_RNDN); }
    Float(const Rational& x, mpfr_prec_t prec) : Float(prec) { mpfr_set_q(v_, x.get_mpq_t(), MPFR_RNDN); }
    Float(const Float& o) : Float(mpfr_get_prec(o.v_)) { mpfr_set(v_, o.v_, MPFR_RNDN); }
    Float(Float&& o) noexcept : Float(2) { mpfr_swap(v_, o.v_); }
    Float& operator=(const Float& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    Float& operator=(Float&& o) noexcept { mpfr_swap(v_, o.v_); return *this; }
    ~Float() { mpfr_clear(v_); }

    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    Rational to_rational() const {
        Rational q;
        mpfr_get_q(q.get_mpq_t(), v_);
        return q;
    }

    friend Float operator+(const Float& x, const Float& y) { return bin(x, y, mpfr_add); }
    friend Float operator-(const Float& x, const Float& y) { return bin(x, y, mpfr_sub); }
    friend Float operator*(const Float& x, const Float& y) { return bin(x, y, mpfr_mul); }
    friend Float operator/(const Float& x, const Float& y) { return bin(x, y, mpfr_div); }
    Float operator-() const {
        Float r(prec());
        mpfr_neg(r.v_, v_, MPFR_RNDN);
        return r;
    }
    Float& operator+=(const Float& y) { return *this = *this + y; }
    Float& operator-=(const Float& y) { return *this = *this - y; }
    Float& operator*=(const Float& y) { return *this = *this * y; }

    friend bool operator<(const Float& x, const Float& y) { return mpfr_less_p(x.v_, y.v_) != 0; }
    friend bool operator>(const Float& x, const Float& y) { return mpfr_greater_p(x.v_, y.v_) != 0; }

    friend Float abs(const Float& x) {
        Float r(x.prec());
        mpfr_abs(r.v_, x.v_, MPFR_RNDN);
        return r;
    }
    friend Float sqrt(const Float& x) {
        Float r(x.prec());
        mpfr_sqrt(r.v_, x.v_, MPFR_RNDN);
        return r;
    }
    friend Float hypot(const Float& x, const Float& y) { return bin(x, y, mpfr_hypot); }

private:
    template <class Op>
    static Float bin(const Float& x, const Float& y, Op op) {
        Float r(std::max(x.prec(), y.prec()));
        op(r.v_, x.v_, y.v_, MPFR_RNDN);
        return r;
    }
    mpfr_t v_;
};

/// Point complex number for iterative root refinement.
struct Complex {
    Float re, im;

    explicit Complex(mpfr_prec_t prec) : re(prec), im(prec) {}
    Complex(Float r, Float i) : re(std::move(r)), im(std::move(i)) {}

    friend Complex operator+(const Complex& x, const Complex& y) { return {x.re + y.re, x.im + y.im}; }
    friend Complex operator-(const Complex& x, const Complex& y) { return {x.re - y.re, x.im - y.im}; }
    friend Complex operator*(const Complex& x, const Complex& y) {
        return {x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re};
    }
    friend Complex operator/(const Complex& x, const Complex& y) {
        Float n = y.re * y.re + y.im * y.im;
        return {(x.re * y.re + x.im * y.im) / n, (x.im * y.re - x.re * y.im) / n};
    }
    Float abs() const { return hypot(re, im); }
};

/// Closed interval [lo, hi] with MPFR endpoints, rounded outward.
class Interval {
public:
    explicit Interval(mpfr_prec_t prec = 64) {
        mpfr_init2(lo_, prec);
        mpfr_init2(hi_, prec);
        mpfr_set_zero(lo_, 1);
        mpfr_set_zero(hi_, 1);
    }
    Interval(const Integer& x, mpfr_prec_t prec) : Interval(prec) {
        mpfr_set_z(lo_, x.get_mpz_t(), MPFR_RNDD);
        mpfr_set_z(hi_, x.get_mpz_t(), MPFR_RNDU);
    }
    Interval(const Rational& x, mpfr_prec_t prec) : Interval(prec) {
        mpfr_set_q(lo_, x.get_mpq_t(), MPFR_RNDD);
        mpfr_set_q(hi_, x.get_mpq_t(), MPFR_RNDU);
    }
    Interval(const Rational& lo, const Rational& hi, mpfr_prec_t prec) : Interval(prec) {
        mpfr_set_q(lo_, lo.get_mpq_t(), MPFR_RNDD);
        mpfr_set_q(hi_, hi.get_mpq_t(), MPFR_RNDU);
    }
    /// Exact copy of a point value; precision grows if needed.
    explicit Interval(const Float& x) : Interval(x.prec()) {
        mpfr_set(lo_, x.raw(), MPFR_RNDD);
        mpfr_set(hi_, x.raw(), MPFR_RNDU);
    }
    Interval(const Interval& o) : Interval(o.prec()) {
        mpfr_set(lo_, o.lo_, MPFR_RNDD);
        mpfr_set(hi_, o.hi_, MPFR_RNDU);
    }
    Interval(Interval&& o) noexcept : Interval(2) {
        mpfr_swap(lo_, o.lo_);
        mpfr_swap(hi_, o.hi_);
    }
    Interval& operator=(Interval o) noexcept {
        mpfr_swap(lo_, o.lo_);
        mpfr_swap(hi_, o.hi_);
        return *this;
    }
    ~Interval() {
        mpfr_clear(lo_);
        mpfr_clear(hi_);
    }

    static Interval pi(mpfr_prec_t prec) {
        Interval r(prec);
        mpfr_const_pi(r.lo_, MPFR_RNDD);
        mpfr_const_pi(r.hi_, MPFR_RNDU);
        return r;
    }

    mpfr_prec_t prec() const { return std::max(mpfr_get_prec(lo_), mpfr_get_prec(hi_)); }
    mpfr_srcptr lo() const { return lo_; }
    mpfr_srcptr hi() const { return hi_; }
    Rational lo_rational() const { return get_q(lo_); }
    Rational hi_rational() const { return get_q(hi_); }
    double lo_double() const { return mpfr_get_d(lo_, MPFR_RNDD); }
    double hi_double() const { return mpfr_get_d(hi_, MPFR_RNDU); }
    Float midpoint() const {
        Float m(prec() + 1);
        mpfr_add(m.raw(), lo_, hi_, MPFR_RNDN);
        mpfr_div_2ui(m.raw(), m.raw(), 1, MPFR_RNDN);
        return m;
    }
    /// Upper bound on hi - lo.
    double width() const {
        mpfr_t w;
        mpfr_init2(w, 53);
        mpfr_sub(w, hi_, lo_, MPFR_RNDU);
        double r = mpfr_get_d(w, MPFR_RNDU);
        mpfr_clear(w);
        return r;
    }

    bool contains_zero() const { return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0; }
    bool positive() const { return mpfr_sgn(lo_) > 0; }
    bool certainly_less(const Interval& o) const { return mpfr_less_p(hi_, o.lo_) != 0; }
    /// lo > c
    bool lo_greater(long c) const { return mpfr_cmp_si(lo_, c) > 0; }
    /// hi < c
    bool hi_less(long c) const { return mpfr_cmp_si(hi_, c) < 0; }

    friend Interval operator+(const Interval& x, const Interval& y) {
        Interval r(std::max(x.prec(), y.prec()));
        mpfr_add(r.lo_, x.lo_, y.lo_, MPFR_RNDD);
        mpfr_add(r.hi_, x.hi_, y.hi_, MPFR_RNDU);
        return r;
    }
    friend Interval operator-(const Interval& x, const Interval& y) {
        Interval r(std::max(x.prec(), y.prec()));
        mpfr_sub(r.lo_, x.lo_, y.hi_, MPFR_RNDD);
        mpfr_sub(r.hi_, x.hi_, y.lo_, MPFR_RNDU);
        return r;
    }
    Interval operator-() const {
        Interval r(prec());
        mpfr_neg(r.lo_, hi_, MPFR_RNDD);
        mpfr_neg(r.hi_, lo_, MPFR_RNDU);
        return r;
    }
    friend Interval operator*(const Interval& x, const Interval& y) {
        return corners(x, y, mpfr_mul);
    }
    friend Interval operator/(const Interval& x, const Interval& y) {
        if (y.contains_zero()) throw RigorError("interval division by an interval containing zero");
        return corners(x, y, mpfr_div);
    }
    Interval& operator+=(const Interval& y) { return *this = *this + y; }
    Interval& operator*=(const Interval& y) { return *this = *this * y; }

    friend Interval sqr(const Interval& x) {
        Interval a = abs(x);
        Interval r(x.prec());
        mpfr_sqr(r.lo_, a.lo_, MPFR_RNDD);
        mpfr_sqr(r.hi_, a.hi_, MPFR_RNDU);
        return r;
    }
    friend Interval abs(const Interval& x) {
        if (mpfr_sgn(x.lo_) >= 0) return x;
        if (mpfr_sgn(x.hi_) <= 0) return -x;
        Interval r(x.prec());
        mpfr_set_zero(r.lo_, 1);
        mpfr_neg(r.hi_, x.lo_, MPFR_RNDU);
        mpfr_max(r.hi_, r.hi_, x.hi_, MPFR_RNDU);
        return r;
    }
    friend Interval sqrt(const Interval& x) {
        if (mpfr_sgn(x.hi_) < 0) throw RigorError("square root of a negative interval");
        Interval r(x.prec());
        if (mpfr_sgn(x.lo_) <= 0) mpfr_set_zero(r.lo_, 1);
        else mpfr_sqrt(r.lo_, x.lo_, MPFR_RNDD);
        mpfr_sqrt(r.hi_, x.hi_, MPFR_RNDU);
        return r;
    }
    /// max(1, x) applied to both endpoints (monotone).
    friend Interval max1(const Interval& x) {
        Interval r(x);
        if (mpfr_cmp_ui(r.lo_, 1) < 0) mpfr_set_ui(r.lo_, 1, MPFR_RNDD);
        if (mpfr_cmp_ui(r.hi_, 1) < 0) mpfr_set_ui(r.hi_, 1, MPFR_RNDU);
        return r;
    }
    friend Interval log(const Interval& x) {
        if (!x.positive()) throw RigorError("logarithm of a non-positive interval");
        Interval r(x.prec());
        mpfr_log(r.lo_, x.lo_, MPFR_RNDD);
        mpfr_log(r.hi_, x.hi_, MPFR_RNDU);
        return r;
    }
    friend Interval exp(const Interval& x) {
        Interval r(x.prec());
        mpfr_exp(r.lo_, x.lo_, MPFR_RNDD);
        mpfr_exp(r.hi_, x.hi_, MPFR_RNDU);
        return r;
    }
    /// n-th root of a non-negative interval.
    friend Interval rootn(const Interval& x, unsigned long n) {
        if (mpfr_sgn(x.lo_) < 0) throw RigorError("root of a negative interval");
        Interval r(x.prec());
        mpfr_rootn_ui(r.lo_, x.lo_, n, MPFR_RNDD);
        mpfr_rootn_ui(r.hi_, x.hi_, n, MPFR_RNDU);
        return r;
    }
    friend Interval pow(const Interval& x, unsigned long n) {
        Interval r(Integer(1), x.prec());
        Interval base = x;
        while (n > 0) {
            if (n & 1UL) r = r * base;
            n >>= 1;
            if (n > 0) base = sqr(base);
        }
        return r;
    }
    /// x^e for a positive interval and rational exponent.
    friend Interval pow(const Interval& x, const Rational& e) {
        if (e == 0) return Interval(Integer(1), x.prec());
        return exp(log(x) * Interval(e, x.prec()));
    }
    friend Interval hull(const Interval& x, const Interval& y) {
        Interval r(std::max(x.prec(), y.prec()));
        mpfr_min(r.lo_, x.lo_, y.lo_, MPFR_RNDD);
        mpfr_max(r.hi_, x.hi_, y.hi_, MPFR_RNDU);
        return r;
    }
    /// Widens by an absolute amount given as an upper-rounded interval endpoint.
    Interval widened(mpfr_srcptr w) const {
        Interval r(prec());
        mpfr_sub(r.lo_, lo_, w, MPFR_RNDD);
        mpfr_add(r.hi_, hi_, w, MPFR_RNDU);
        return r;
    }
    Interval clamped(long lo, long hi) const {
        Interval r(*this);
        if (mpfr_cmp_si(r.lo_, lo) < 0) mpfr_set_si(r.lo_, lo, MPFR_RNDD);
        if (mpfr_cmp_si(r.hi_, hi) > 0) mpfr_set_si(r.hi_, hi, MPFR_RNDU);
        return r;
    }

    friend std::ostream& operator<<(std::ostream& os, const Interval& x) {
        return os << '[' << x.lo_double() << ", " << x.hi_double() << ']';
    }

private:
    static Rational get_q(mpfr_srcptr v) {
        if (!mpfr_number_p(v)) throw RigorError("non-finite interval endpoint");
        Rational q;
        mpfr_get_q(q.get_mpq_t(), v);
        return q;
    }
    template <class Op>
    static Interval corners(const Interval& x, const Interval& y, Op op) {
        const mpfr_prec_t p = std::max(x.prec(), y.prec());
        Interval r(p);
        mpfr_t t;
        mpfr_init2(t, p);
        bool first = true;
        for (mpfr_srcptr a : {x.lo_, x.hi_}) {
            for (mpfr_srcptr b : {y.lo_, y.hi_}) {
                op(t, a, b, MPFR_RNDD);
                if (first || mpfr_less_p(t, r.lo_)) mpfr_set(r.lo_, t, MPFR_RNDD);
                op(t, a, b, MPFR_RNDU);
                if (first || mpfr_greater_p(t, r.hi_)) mpfr_set(r.hi_, t, MPFR_RNDU);
                first = false;
            }
        }
        mpfr_clear(t);
        return r;
    }

    mpfr_t lo_, hi_;
};

/// Rectangular complex interval.
struct ComplexInterval {
    Interval re, im;

    explicit ComplexInterval(mpfr_prec_t prec) : re(prec), im(prec) {}
    ComplexInterval(Interval r, Interval i) : re(std::move(r)), im(std::move(i)) {}
    explicit ComplexInterval(const Complex& z) : re(z.re), im(z.im) {}

    friend ComplexInterval operator+(const ComplexInterval& x, const ComplexInterval& y) {
        return {x.re + y.re, x.im + y.im};
    }
    friend ComplexInterval operator-(const ComplexInterval& x, const ComplexInterval& y) {
        return {x.re - y.re, x.im - y.im};
    }
    friend ComplexInterval operator*(const ComplexInterval& x, const ComplexInterval& y) {
        return {x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re};
    }
    friend ComplexInterval operator*(const Interval& s, const ComplexInterval& y) {
        return {s * y.re, s * y.im};
    }
    Interval abs() const { return sqrt(sqr(re) + sqr(im)); }
};

/// e^{2 pi i k / n}, enclosed.
inline ComplexInterval unit_root(long k, long n, mpfr_prec_t prec) {
    k %= n;
    if (k < 0) k += n;
    if (k == 0) return {Interval(Integer(1), prec), Interval(Integer(0), prec)};
    // cos and sin are 1-Lipschitz: evaluate at the lower angle endpoint and
    // widen by the angle enclosure's width.
    Interval angle = Interval::pi(prec + 16) * Interval(make_rational(2 * k, n), prec + 16);
    mpfr_t w;
    mpfr_init2(w, prec + 16);
    mpfr_sub(w, angle.hi(), angle.lo(), MPFR_RNDU);
    Interval cs(prec + 16), sn(prec + 16);
    auto eval = [&](auto fn, Interval& out) {
        mpfr_t lo, hi;
        mpfr_init2(lo, prec + 16);
        mpfr_init2(hi, prec + 16);
        fn(lo, angle.lo(), MPFR_RNDD);
        fn(hi, angle.lo(), MPFR_RNDU);
        Rational l, h;
        mpfr_get_q(l.get_mpq_t(), lo);
        mpfr_get_q(h.get_mpq_t(), hi);
        out = Interval(l, h, prec + 16).widened(w).clamped(-1, 1);
        mpfr_clear(lo);
        mpfr_clear(hi);
    };
    eval(mpfr_cos, cs);
    eval(mpfr_sin, sn);
    mpfr_clear(w);
    return {cs, sn};
}

/// Certified rational enclosure [lo, hi] of a real quantity.
class RealEnclosure {
public:
    RealEnclosure() = default;
    RealEnclosure(Rational lo, Rational hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
        lo_.canonicalize();
        hi_.canonicalize();
        if (lo_ > hi_) throw RigorError("enclosure with lo > hi");
    }
    explicit RealEnclosure(const Interval& x) : RealEnclosure(x.lo_rational(), x.hi_rational()) {}
    static RealEnclosure exact(const Rational& v) { return {v, v}; }

    const Rational& lo() const { return lo_; }
    const Rational& hi() const { return hi_; }
    bool is_exact() const { return lo_ == hi_; }
    Rational width() const { return hi_ - lo_; }
    Rational midpoint() const { return (lo_ + hi_) / 2; }
    bool contains(const Rational& x) const { return lo_ <= x && x <= hi_; }
    bool overlaps(const RealEnclosure& o) const { return lo_ <= o.hi_ && o.lo_ <= hi_; }
    /// Endpoints widened to doubles outward.
    double lo_double() const { return down(lo_); }
    double hi_double() const { return up(hi_); }
    double mid_double() const { return midpoint().get_d(); }
    Interval to_interval(mpfr_prec_t prec) const { return Interval(lo_, hi_, prec); }

    friend bool operator==(const RealEnclosure& x, const RealEnclosure& y) {
        return x.lo_ == y.lo_ && x.hi_ == y.hi_;
    }

private:
    static double down(const Rational& q) {
        double d = q.get_d();
        if (Rational(d) > q) d = std::nextafter(d, -HUGE_VAL);
        return d;
    }
    static double up(const Rational& q) {
        double d = q.get_d();
        if (Rational(d) < q) d = std::nextafter(d, HUGE_VAL);
        return d;
    }
    Rational lo_{0}, hi_{0};
};

/// Refinement stopped at the precision ceiling; carries the best enclosure found.
class RefinementError : public RigorError {
public:
    RefinementError(const std::string& what, RealEnclosure best)
        : RigorError(what), best_(std::move(best)) {}
    const RealEnclosure& best() const { return best_; }

private:
    RealEnclosure best_;
};

}  // namespace pftl

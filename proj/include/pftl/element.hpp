#pragma once

// Exact arithmetic in K = Q[t]/(t^d - a) in the power basis 1, t, ..., t^(d-1),
// minimal polynomials, primitivity, and conjugate enclosures.

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "pftl/purefield.hpp"

namespace pftl {

/// Integer polynomial a_0 + a_1 x + ... + a_n x^n; canonical form has content 1
/// and a positive leading coefficient.
class IntPolynomial {
public:
    IntPolynomial() = default;
    explicit IntPolynomial(std::vector<Integer> coeffs, bool canonicalize = true) : c_(std::move(coeffs)) {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
        if (c_.empty()) throw DomainError("zero polynomial");
        if (canonicalize) normalize();
    }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const std::vector<Integer>& coeffs() const { return c_; }
    const Integer& coeff(int i) const { return c_.at(static_cast<std::size_t>(i)); }
    const Integer& leading() const { return c_.back(); }

    friend IntPolynomial operator*(const IntPolynomial& f, const IntPolynomial& g) {
        std::vector<Integer> r(f.c_.size() + g.c_.size() - 1, Integer(0));
        for (std::size_t i = 0; i < f.c_.size(); ++i)
            for (std::size_t j = 0; j < g.c_.size(); ++j) r[i + j] += f.c_[i] * g.c_[j];
        return IntPolynomial(std::move(r), false);
    }
    friend bool operator==(const IntPolynomial&, const IntPolynomial&) = default;

    std::string to_string() const {
        std::ostringstream os;
        bool first = true;
        for (int i = degree(); i >= 0; --i) {
            const Integer& c = coeff(i);
            if (c == 0) continue;
            Integer m = abs(c);
            if (first) os << (c < 0 ? "-" : "");
            else os << (c < 0 ? " - " : " + ");
            first = false;
            if (i == 0 || m != 1) os << m.get_str();
            if (i > 0) os << "x";
            if (i > 1) os << "^" << i;
        }
        return os.str();
    }

private:
    void normalize() {
        Integer g = 0;
        for (const auto& c : c_) g = gcd(g, c);
        if (c_.back() < 0) g = -g;
        for (auto& c : c_) c /= g;
    }
    std::vector<Integer> c_;
};

/// Element (c_0 + c_1 t + ... + c_{d-1} t^{d-1}) / q of a pure field, kept in
/// canonical form gcd(c_0, ..., c_{d-1}, q) = 1, q >= 1.
class FieldElement {
public:
    FieldElement(FieldRef field, std::vector<Integer> num, Integer den = 1)
        : field_(std::move(field)), num_(std::move(num)), den_(std::move(den)) {
        if (!field_) throw DomainError("element without a field");
        if (num_.size() > static_cast<std::size_t>(field_->d()))
            throw DomainError("too many coordinates for degree " + std::to_string(field_->d()));
        num_.resize(static_cast<std::size_t>(field_->d()), Integer(0));
        if (den_ == 0) throw DomainError("zero denominator");
        canonicalize();
    }

    static FieldElement rational(FieldRef field, const Rational& r) {
        return {std::move(field), {r.get_num()}, r.get_den()};
    }
    static FieldElement zero(FieldRef field) { return rational(std::move(field), 0); }
    static FieldElement one(FieldRef field) { return rational(std::move(field), 1); }
    /// theta^k for 0 <= k < d.
    static FieldElement theta(FieldRef field, int k = 1) {
        std::vector<Integer> num(static_cast<std::size_t>(field->d()), Integer(0));
        num.at(static_cast<std::size_t>(k)) = 1;
        return {std::move(field), std::move(num)};
    }
    static FieldElement from_rationals(FieldRef field, const std::vector<Rational>& coords) {
        Integer l = 1;
        for (const auto& c : coords) l = lcm(l, Integer(c.get_den()));
        std::vector<Integer> num;
        for (const auto& c : coords) num.push_back(Integer(c * l));
        return {std::move(field), std::move(num), l};
    }

    const FieldRef& field() const { return field_; }
    int d() const { return field_->d(); }
    const std::vector<Integer>& num() const { return num_; }
    const Integer& den() const { return den_; }
    Rational coord(int k) const { return make_rational(num_.at(static_cast<std::size_t>(k)), den_); }
    std::vector<Rational> coords() const {
        std::vector<Rational> r;
        for (int k = 0; k < d(); ++k) r.push_back(coord(k));
        return r;
    }
    bool is_zero() const { return std::all_of(num_.begin(), num_.end(), [](const Integer& c) { return c == 0; }); }
    bool is_rational() const {
        return std::all_of(num_.begin() + 1, num_.end(), [](const Integer& c) { return c == 0; });
    }
    /// Indices k with c_k != 0.
    std::vector<int> support() const {
        std::vector<int> s;
        for (int k = 0; k < d(); ++k)
            if (num_[static_cast<std::size_t>(k)] != 0) s.push_back(k);
        return s;
    }

    friend FieldElement operator+(const FieldElement& x, const FieldElement& y) {
        check_same(x, y);
        std::vector<Integer> r(x.num_.size());
        for (std::size_t k = 0; k < r.size(); ++k) r[k] = x.num_[k] * y.den_ + y.num_[k] * x.den_;
        return {x.field_, std::move(r), x.den_ * y.den_};
    }
    FieldElement operator-() const {
        std::vector<Integer> r(num_.size());
        for (std::size_t k = 0; k < r.size(); ++k) r[k] = -num_[k];
        return {field_, std::move(r), den_};
    }
    friend FieldElement operator-(const FieldElement& x, const FieldElement& y) { return x + (-y); }
    friend FieldElement operator*(const FieldElement& x, const FieldElement& y) {
        check_same(x, y);
        const std::size_t d = x.num_.size();
        std::vector<Integer> r(d, Integer(0));
        const Integer& a = x.field_->a();
        for (std::size_t i = 0; i < d; ++i) {
            if (x.num_[i] == 0) continue;
            for (std::size_t j = 0; j < d; ++j) {
                if (y.num_[j] == 0) continue;
                if (i + j < d) r[i + j] += x.num_[i] * y.num_[j];
                else r[i + j - d] += a * x.num_[i] * y.num_[j];
            }
        }
        return {x.field_, std::move(r), x.den_ * y.den_};
    }
    friend bool operator==(const FieldElement& x, const FieldElement& y) {
        return same_field(x, y) && x.num_ == y.num_ && x.den_ == y.den_;
    }

    /// Text form "(c_0 + c_1*t + ... + c_{d-1}*t^{d-1})/q".
    std::string to_string() const {
        std::ostringstream os;
        os << '(' << num_[0].get_str();
        for (std::size_t k = 1; k < num_.size(); ++k) {
            os << (num_[k] < 0 ? " - " : " + ") << Integer(abs(num_[k])).get_str() << "*t";
            if (k > 1) os << '^' << k;
        }
        os << ")/" << den_.get_str();
        return os.str();
    }

    static bool same_field(const FieldElement& x, const FieldElement& y) {
        return x.field_ == y.field_ || *x.field_ == *y.field_;
    }

private:
    static void check_same(const FieldElement& x, const FieldElement& y) {
        if (!same_field(x, y)) throw DomainError("arithmetic between elements of different fields");
    }
    void canonicalize() {
        if (den_ < 0) {
            den_ = -den_;
            for (auto& c : num_) c = -c;
        }
        Integer g = den_;
        for (const auto& c : num_) g = gcd(g, c);
        if (is_zero()) g = den_;
        if (g != 1) {
            for (auto& c : num_) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
            mpz_divexact(den_.get_mpz_t(), den_.get_mpz_t(), g.get_mpz_t());
        }
    }

    FieldRef field_;
    std::vector<Integer> num_;
    Integer den_;
};

namespace detail {

using QPoly = std::vector<Rational>;  // low to high, no trailing zeros

inline void trim(QPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

inline void divmod(QPoly num, const QPoly& den, QPoly& quot, QPoly& rem) {
    quot.assign(num.size() >= den.size() ? num.size() - den.size() + 1 : 0, Rational(0));
    trim(num);
    while (num.size() >= den.size() && !num.empty()) {
        const std::size_t shift = num.size() - den.size();
        const Rational f = num.back() / den.back();
        quot[shift] = f;
        for (std::size_t i = 0; i < den.size(); ++i) num[i + shift] -= f * den[i];
        num.pop_back();
        trim(num);
    }
    rem = std::move(num);
}

inline QPoly mul(const QPoly& x, const QPoly& y) {
    if (x.empty() || y.empty()) return {};
    QPoly r(x.size() + y.size() - 1, Rational(0));
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < y.size(); ++j) r[i + j] += x[i] * y[j];
    trim(r);
    return r;
}

inline QPoly sub(QPoly x, const QPoly& y) {
    if (x.size() < y.size()) x.resize(y.size(), Rational(0));
    for (std::size_t i = 0; i < y.size(); ++i) x[i] -= y[i];
    trim(x);
    return x;
}

}  // namespace detail

/// Inverse by the extended Euclidean algorithm on (representative, t^d - a).
inline FieldElement invert(const FieldElement& x) {
    using detail::QPoly;
    if (x.is_zero()) throw DomainError("inverse of zero");
    const int d = x.d();
    QPoly modulus(static_cast<std::size_t>(d) + 1, Rational(0));
    modulus[0] = -Rational(x.field()->a());
    modulus.back() = 1;
    QPoly rep = x.coords();
    detail::trim(rep);

    QPoly old_r = modulus, r = rep, old_t, t{Rational(1)};
    while (!r.empty()) {
        QPoly q, rem;
        detail::divmod(old_r, r, q, rem);
        old_r = std::move(r);
        r = std::move(rem);
        QPoly next_t = detail::sub(old_t, detail::mul(q, t));
        old_t = std::move(t);
        t = std::move(next_t);
    }
    if (old_r.size() != 1) throw RigorError("t^d - a shares a factor with an element representative");
    const Rational c = old_r[0];
    QPoly q, inv;
    detail::divmod(old_t, modulus, q, inv);
    for (auto& v : inv) v /= c;
    inv.resize(static_cast<std::size_t>(d), Rational(0));
    return FieldElement::from_rationals(x.field(), inv);
}

/// Minimal polynomial over Z: the first power x^k that is a rational linear
/// combination of 1, x, ..., x^(k-1) in the power basis.
inline IntPolynomial minimal_polynomial(const FieldElement& x) {
    const int d = x.d();
    struct Row {
        std::vector<Rational> vec;
        std::vector<Rational> combo;  // over powers x^0 .. x^k
        int pivot;
    };
    std::vector<Row> rows;
    FieldElement power = FieldElement::one(x.field());
    for (int k = 0; k <= d; ++k) {
        std::vector<Rational> vec = power.coords();
        std::vector<Rational> combo(static_cast<std::size_t>(k) + 1, Rational(0));
        combo[static_cast<std::size_t>(k)] = 1;
        for (const auto& row : rows) {
            const Rational& v = vec[static_cast<std::size_t>(row.pivot)];
            if (v == 0) continue;
            const Rational f = v / row.vec[static_cast<std::size_t>(row.pivot)];
            for (int i = 0; i < d; ++i) vec[static_cast<std::size_t>(i)] -= f * row.vec[static_cast<std::size_t>(i)];
            for (std::size_t i = 0; i < row.combo.size(); ++i) combo[i] -= f * row.combo[i];
        }
        auto nz = std::find_if(vec.begin(), vec.end(), [](const Rational& v) { return v != 0; });
        if (nz == vec.end()) {
            Integer l = 1;
            for (const auto& c : combo) l = lcm(l, Integer(c.get_den()));
            std::vector<Integer> coeffs;
            for (const auto& c : combo) coeffs.push_back(Integer(c * l));
            return IntPolynomial(std::move(coeffs));
        }
        const int pivot = static_cast<int>(nz - vec.begin());
        rows.push_back({std::move(vec), std::move(combo), pivot});
        power = power * x;
    }
    throw RigorError("no linear dependency among 1, x, ..., x^d");
}

/// Support-based test: x is imprimitive iff its nonzero coordinates lie in
/// the support of a proper subfield (including Q, support {0}).
inline bool is_primitive_by_support(const std::vector<int>& support, int d) {
    if (std::all_of(support.begin(), support.end(), [](int k) { return k == 0; })) return false;
    for (const auto& sub : subfield_degrees(d)) {
        const int step = d / sub.degree;
        if (std::all_of(support.begin(), support.end(), [step](int k) { return k % step == 0; })) return false;
    }
    return true;
}

/// Primitive iff Q(x) = K.  Both the support criterion and the minimal
/// polynomial degree are evaluated; disagreement is a rigor failure.
inline bool is_primitive(const FieldElement& x) {
    const bool by_support = is_primitive_by_support(x.support(), x.d());
    const bool by_degree = minimal_polynomial(x).degree() == x.d();
    if (by_support != by_degree)
        throw RigorError("support and degree primitivity criteria disagree for " + x.to_string());
    return by_degree;
}

/// Enclosures of the d conjugates alpha_j = sum_k b_k theta^k zeta^(jk), j = 0..d-1.
inline std::vector<ComplexInterval> conjugate_enclosures(const FieldElement& x, mpfr_prec_t prec) {
    if (prec < 32) throw PreconditionError("conjugate enclosures need at least 32 bits of precision");
    const int d = x.d();
    const mpfr_prec_t wp = prec + 16;
    const Interval theta = rootn(Interval(x.field()->a(), wp), static_cast<unsigned long>(d));
    std::vector<Interval> terms;  // b_k theta^k
    Interval tk(Integer(1), wp);
    for (int k = 0; k < d; ++k) {
        terms.push_back(Interval(x.coord(k), wp) * tk);
        tk = tk * theta;
    }
    std::vector<ComplexInterval> out;
    for (int j = 0; j < d; ++j) {
        ComplexInterval sum(wp);
        for (int k = 0; k < d; ++k) {
            if (x.num()[static_cast<std::size_t>(k)] == 0) continue;
            sum = sum + terms[static_cast<std::size_t>(k)] * unit_root(static_cast<long>(j) * k, d, wp);
        }
        out.push_back(std::move(sum));
    }
    return out;
}

/// Parses the element text form.  Accepts any sum of terms c, c*t, c*t^k
/// (c an integer, optionally signed), optionally parenthesised and followed
/// by "/q"; plain rationals such as "3/2" are accepted too.
inline FieldElement parse_element(FieldRef field, const std::string& text) {
    const int d = field->d();
    std::vector<Integer> num(static_cast<std::size_t>(d), Integer(0));
    std::size_t i = 0;
    auto skip = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    auto fail = [&](const std::string& why) -> FieldElement {
        throw DomainError("cannot parse element '" + text + "': " + why);
    };
    auto read_int = [&]() -> std::string {
        std::size_t start = i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        return text.substr(start, i - start);
    };
    skip();
    bool paren = false;
    if (i < text.size() && text[i] == '(') {
        paren = true;
        ++i;
    }
    bool any = false;
    for (;;) {
        skip();
        if (i >= text.size() || text[i] == ')' || (text[i] == '/' && any)) break;
        int sign = 1;
        if (text[i] == '+' || text[i] == '-') {
            if (text[i] == '-') sign = -1;
            ++i;
            skip();
        } else if (any) {
            return fail("expected + or -");
        }
        if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
            if (text[i] == '-') sign = -sign;
            ++i;
            skip();
        }
        std::string digits = read_int();
        Integer c = digits.empty() ? Integer(1) : Integer(digits);
        skip();
        int power = 0;
        if (i < text.size() && text[i] == '*') {
            ++i;
            skip();
            if (i >= text.size() || text[i] != 't') return fail("expected t after *");
        }
        if (i < text.size() && text[i] == 't') {
            ++i;
            power = 1;
            skip();
            if (i < text.size() && text[i] == '^') {
                ++i;
                skip();
                std::string e = read_int();
                if (e.empty()) return fail("missing exponent");
                power = std::stoi(e);
            }
        } else if (digits.empty()) {
            return fail("empty term");
        }
        if (power >= d) return fail("power of t must be below d");
        num[static_cast<std::size_t>(power)] += sign * c;
        any = true;
    }
    if (!any) return fail("no terms");
    if (paren) {
        if (i >= text.size() || text[i] != ')') return fail("missing )");
        ++i;
    }
    skip();
    Integer den = 1;
    if (i < text.size() && text[i] == '/') {
        ++i;
        skip();
        std::string q = read_int();
        if (q.empty()) return fail("missing denominator");
        den = Integer(q);
        if (den == 0) return fail("zero denominator");
    }
    skip();
    if (i != text.size()) return fail("trailing characters");
    return {std::move(field), std::move(num), den};
}

}  // namespace pftl

#pragma once

// Certified enumeration of primitive elements of bounded height.
//
// Every alpha in K is c/q with c in Z^d, q >= 1 and gcd(c, q) = 1.  Its height
// is tau * prod_j max(1, |alpha_j|), where tau = T^(d/e) is the norm of the
// denominator ideal (T the leading coefficient of the degree-e minimal
// polynomial).  tau only depends on c mod q, it is multiplicative over the
// prime powers dividing q, and q | s * tau where s is the power-basis index
// bound.  So the search runs over
//   q <= s * (ceil(X) - 1),
//   residue classes c mod q with tau < X, assembled prime power by prime power,
//   lattice points of each class with prod_j max(1, |alpha_j|) < X / tau.
// Inside a class, |alpha_j| < X / tau bounds every coordinate through the
// inverse transform, |c_k| < q (X / tau) a^(-k/d).

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <thread>
#include <variant>
#include <vector>

#include "pftl/bounds.hpp"
#include "pftl/element.hpp"
#include "pftl/height.hpp"
#include "pftl/primes.hpp"
#include "pftl/text.hpp"

namespace pftl {

struct EnumerateOptions {
    mpfr_prec_t prec = kDefaultPrecBits;
    mpfr_prec_t max_prec = 1024;
    unsigned workers = 1;
    std::uint64_t limit = 100'000'000;  // candidate rows (c_1..c_{d-1} tuples)
    bool keep_witnesses = true;
    /// Recompute the minimal polynomial of every counted element and check
    /// that its leading coefficient matches the residue-class tau.
    bool verify_minpoly = false;
};

struct EnumerationBox {
    Rational X;
    Integer q_max;
    std::vector<Integer> coeff_bounds;  // ceil(q_max X a^(-k/d))
    Integer s_max;
    bool certified = false;
    std::uint64_t ambiguous_count = 0;
    std::uint64_t residue_classes = 0;
    std::uint64_t rows = 0;  // candidate rows actually scheduled
};

struct Witness {
    FieldElement element;
    RealEnclosure height;
    Integer tau;
};

struct CountResult {
    std::uint64_t count = 0;
    std::uint64_t ambiguous = 0;
    std::vector<Witness> witnesses;
    std::vector<Witness> ambiguous_elements;
    EnumerationBox box;
};

namespace detail {

struct ModU64 {
    using value_type = std::uint64_t;
    std::uint64_t m;
    value_type from(const Integer& x) const {
        Integer r;
        mpz_fdiv_r_ui(r.get_mpz_t(), x.get_mpz_t(), m);
        return r.get_ui();
    }
    value_type add(value_type x, value_type y) const {
        const value_type s = x + y;
        return s >= m ? s - m : s;
    }
    value_type from(std::int64_t x) const {
        const auto mm = static_cast<std::int64_t>(m);
        return static_cast<value_type>(((x % mm) + mm) % mm);
    }
    value_type neg(value_type x) const { return x == 0 ? 0 : m - x; }
    value_type mul(value_type x, value_type y) const { return mulmod(x, y, m); }
    unsigned valuation(value_type x, std::uint64_t p, unsigned cap) const {
        if (x == 0) return cap;
        unsigned v = 0;
        while (x % p == 0 && v < cap) x /= p, ++v;
        return v;
    }
};

struct ModMpz {
    using value_type = Integer;
    Integer m;
    value_type from(const Integer& x) const {
        Integer r;
        mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
        return r;
    }
    value_type from(std::int64_t x) const { return from(Integer(static_cast<long>(x))); }
    value_type add(const value_type& x, const value_type& y) const {
        Integer s = x + y;
        if (s >= m) s -= m;
        return s;
    }
    value_type neg(const value_type& x) const { return x == 0 ? Integer(0) : Integer(m - x); }
    value_type mul(const value_type& x, const value_type& y) const { return from(x * y); }
    unsigned valuation(const value_type& x, std::uint64_t p, unsigned cap) const {
        if (x == 0) return cap;
        Integer pp(static_cast<unsigned long>(p));
        return std::min(cap, static_cast<unsigned>(mpz_remove(Integer().get_mpz_t(), x.get_mpz_t(), pp.get_mpz_t())));
    }
};

/// Characteristic polynomial coefficients c_0 = 1, c_1, ..., c_n of a square
/// matrix over a ring, by Berkowitz's division-free recurrence.
template <class Ring>
std::vector<typename Ring::value_type> berkowitz(const Ring& R,
                                                 const std::vector<std::vector<typename Ring::value_type>>& A) {
    using V = typename Ring::value_type;
    const std::size_t n = A.size();
    std::vector<V> vect{V(1), R.neg(A[0][0])};
    for (std::size_t r = 1; r < n; ++r) {
        std::vector<V> t(r + 2, V(0));
        t[0] = V(1);
        t[1] = R.neg(A[r][r]);
        std::vector<V> v(r);
        for (std::size_t i = 0; i < r; ++i) v[i] = A[i][r];
        for (std::size_t k = 2; k < r + 2; ++k) {
            V dot(0);
            for (std::size_t i = 0; i < r; ++i) dot = R.add(dot, R.mul(A[r][i], v[i]));
            t[k] = R.neg(dot);
            if (k + 1 < r + 2) {
                std::vector<V> w(r, V(0));
                for (std::size_t i = 0; i < r; ++i)
                    for (std::size_t j = 0; j < r; ++j) w[i] = R.add(w[i], R.mul(A[i][j], v[j]));
                v = std::move(w);
            }
        }
        std::vector<V> next(r + 2, V(0));
        for (std::size_t i = 0; i < r + 2; ++i)
            for (std::size_t j = 0; j <= std::min(i, r); ++j) next[i] = R.add(next[i], R.mul(t[i - j], vect[j]));
        vect = std::move(next);
    }
    return vect;
}

/// t with tau(r / p^e) = p^t, read off the p-adic valuations of the
/// characteristic polynomial of r in Z[theta] (enough to know it mod p^(d e)).
class TauCalculator {
public:
    TauCalculator(const Integer& a, int d, std::uint64_t p, unsigned e) : d_(d), p_(p), e_(e) {
        modulus_ = ipow(Integer(static_cast<unsigned long>(p)), static_cast<unsigned long>(d) * e);
        small_ = modulus_ < (Integer(1) << 62);
        if (small_) {
            u64_ = ModU64{modulus_.get_ui()};
            a64_ = u64_.from(a);
        } else {
            mpz_ = ModMpz{modulus_};
            ampz_ = mpz_.from(a);
        }
    }

    unsigned exponent(const std::vector<std::int64_t>& r) const {
        return small_ ? run(u64_, a64_, r) : run(mpz_, ampz_, r);
    }

private:
    template <class Ring>
    unsigned run(const Ring& R, const typename Ring::value_type& amod, const std::vector<std::int64_t>& r) const {
        using V = typename Ring::value_type;
        const auto n = static_cast<std::size_t>(d_);
        std::vector<std::vector<V>> A(n, std::vector<V>(n, V(0)));
        for (std::size_t i = 0; i < n; ++i) {
            if (r[i] == 0) continue;
            const V ri = R.from(r[i]);
            for (std::size_t col = 0; col < n; ++col) {
                const std::size_t row = (i + col) % n;
                A[row][col] = R.add(A[row][col], i + col >= n ? R.mul(ri, amod) : ri);
            }
        }
        const auto c = berkowitz(R, A);
        unsigned t = 0;
        for (std::size_t i = 1; i <= n; ++i) {
            const unsigned cap = static_cast<unsigned>(i) * e_;
            const unsigned v = R.valuation(c[i], p_, cap);
            t = std::max(t, cap - v);
        }
        return t;
    }

    int d_;
    std::uint64_t p_;
    unsigned e_;
    Integer modulus_;
    bool small_ = true;
    ModU64 u64_{1};
    std::uint64_t a64_ = 0;
    ModMpz mpz_;
    Integer ampz_;
};

struct ResidueClass {
    std::vector<std::int64_t> r;  // representatives in [0, modulus)
    std::uint64_t tau = 1;

    friend bool operator<(const ResidueClass& x, const ResidueClass& y) { return x.r < y.r; }
};

/// Residues of F_p[x] / (x^d - a) as coefficient vectors, low degree first.
using PolyFp = std::vector<std::uint64_t>;

inline bool divides_fp(const PolyFp& f, const PolyFp& c, std::uint64_t p, PolyFp& quotient) {
    // c monic
    PolyFp rem = f;
    const std::size_t dc = c.size() - 1;
    if (rem.size() < c.size()) return false;
    quotient.assign(rem.size() - dc, 0);
    for (std::size_t i = rem.size(); i-- > dc;) {
        const std::uint64_t coef = rem[i];
        quotient[i - dc] = coef;
        if (coef == 0) continue;
        for (std::size_t j = 0; j <= dc; ++j) rem[i - dc + j] = (rem[i - dc + j] + p - mulmod(coef, c[j], p)) % p;
    }
    return std::all_of(rem.begin(), rem.begin() + static_cast<std::ptrdiff_t>(dc), [](std::uint64_t x) { return x == 0; });
}

/// Calls f(u) for every u in [0, base)^n.
template <class F>
void for_each_tuple(std::size_t n, std::uint64_t base, F&& f) {
    std::vector<std::uint64_t> u(n, 0);
    while (true) {
        f(u);
        std::size_t i = 0;
        while (i < n && ++u[i] == base) u[i++] = 0;
        if (i == n) return;
    }
}

inline std::uint64_t checked_pow(std::uint64_t b, unsigned e, std::uint64_t cap) {
    std::uint64_t r = 1;
    for (unsigned i = 0; i < e; ++i) {
        if (r > cap / b) return cap + 1;
        r *= b;
    }
    return r;
}

/// All residues r mod p^e (e = 0 .. levels) with tau(r / p^e) <= tmax.
class PrimeResidues {
public:
    PrimeResidues(const PureField& field, std::uint64_t p, unsigned levels, std::uint64_t tmax, bool p_divides_index,
                  std::uint64_t work_limit)
        : p_(p) {
        const auto n = static_cast<std::size_t>(field.d());
        levels_.push_back({ResidueClass{std::vector<std::int64_t>(n, 0), 1}});
        for (unsigned e = 1; e <= levels; ++e) {
            std::vector<ResidueClass> out;
            TauCalculator tc(field.a(), field.d(), p, e);
            auto keep = [&](std::vector<std::int64_t> r) {
                const unsigned t = tc.exponent(r);
                const std::uint64_t tau = checked_pow(p, t, tmax);
                if (tau <= tmax) out.push_back({std::move(r), tau});
            };
            const std::uint64_t pd = checked_pow(p, static_cast<unsigned>(n), work_limit);
            if (e == 1 && pd > (1u << 15) && !p_divides_index && checked_pow(p, static_cast<unsigned>(n), tmax) > tmax) {
                for (auto& r : level_one_by_divisors(field, tmax)) keep(std::move(r));
            } else {
                const auto& parents = levels_.back();
                if (pd > work_limit || parents.size() > work_limit / pd)
                    throw ResourceError("residue lifting mod " + std::to_string(p) + "^" + std::to_string(e) +
                                        " exceeds the work limit of " + std::to_string(work_limit) + " evaluations");
                const std::uint64_t step = checked_pow(p, e - 1, ~std::uint64_t{0} >> 2);
                for (const auto& parent : parents)
                    for_each_tuple(n, p, [&](const std::vector<std::uint64_t>& u) {
                        std::vector<std::int64_t> r(n);
                        for (std::size_t k = 0; k < n; ++k)
                            r[k] = parent.r[k] + static_cast<std::int64_t>(step * u[k]);
                        keep(std::move(r));
                    });
            }
            std::sort(out.begin(), out.end());
            std::vector<ResidueClass> canon;
            for (const auto& c : out)
                if (std::any_of(c.r.begin(), c.r.end(),
                                [&](std::int64_t x) { return x % static_cast<std::int64_t>(p) != 0; }))
                    canon.push_back(c);
            levels_.push_back(std::move(out));
            canonical_.push_back(std::move(canon));
        }
    }

    std::uint64_t p() const { return p_; }
    unsigned levels() const { return static_cast<unsigned>(levels_.size() - 1); }
    /// Every class at level e, canonical or not.
    const std::vector<ResidueClass>& level(unsigned e) const { return levels_.at(e); }
    /// Classes at level e not divisible by p (gcd with p^e is one).
    const std::vector<ResidueClass>& canonical(unsigned e) const { return canonical_.at(e - 1); }

private:
    // When Z[theta] is p-maximal, tau(r / p) = p^(d - deg gcd(r, x^d - a)) over
    // F_p, so tau <= p^k forces r to be a multiple of f / C for a monic divisor
    // C of f = x^d - a with deg C <= k.
    std::vector<std::vector<std::int64_t>> level_one_by_divisors(const PureField& field, std::uint64_t tmax) const {
        const auto n = static_cast<std::size_t>(field.d());
        const std::uint64_t p = p_;
        PolyFp f(n + 1, 0);
        f[0] = (p - Integer(field.a() % static_cast<unsigned long>(p)).get_ui()) % p;
        f[n] = 1;
        unsigned kmax = 0;
        while (kmax < n && checked_pow(p, kmax + 1, tmax) <= tmax) ++kmax;
        std::set<std::vector<std::int64_t>> out;
        for (unsigned j = 0; j <= kmax; ++j) {
            for_each_tuple(j, p, [&](const std::vector<std::uint64_t>& low) {
                PolyFp c(low.begin(), low.end());
                c.push_back(1);
                PolyFp g;
                if (!divides_fp(f, c, p, g)) return;
                for_each_tuple(j, p, [&](const std::vector<std::uint64_t>& h) {
                    std::vector<std::int64_t> r(n, 0);
                    for (std::size_t x = 0; x < g.size(); ++x)
                        for (std::size_t y = 0; y < h.size(); ++y)
                            r[x + y] = static_cast<std::int64_t>(
                                (static_cast<std::uint64_t>(r[x + y]) + mulmod(g[x], h[y], p)) % p);
                    out.insert(std::move(r));
                });
            });
        }
        return {out.begin(), out.end()};
    }

    std::uint64_t p_;
    std::vector<std::vector<ResidueClass>> levels_;
    std::vector<std::vector<ResidueClass>> canonical_;  // levels 1..
};

/// Double-precision conjugate data: w[j][k] = theta^k zeta^(jk).
struct Geometry {
    int d = 0;
    std::vector<double> theta_pow;
    std::vector<std::vector<double>> wr, wi;

    explicit Geometry(const PureField& field) : d(field.d()) {
        const auto n = static_cast<std::size_t>(d);
        const Interval theta = field.theta().to_interval(128);
        const long double th = static_cast<long double>(theta.lo_double());
        theta_pow.resize(n);
        wr.assign(n, std::vector<double>(n));
        wi.assign(n, std::vector<double>(n));
        for (std::size_t k = 0; k < n; ++k) {
            const Interval tk = pow(theta, static_cast<unsigned long>(k));
            theta_pow[k] = tk.hi_double();
            for (std::size_t j = 0; j < n; ++j) {
                const long double ang =
                    2.0L * std::numbers::pi_v<long double> * static_cast<long double>((j * k) % n) / d;
                const long double mag = std::pow(th, static_cast<long double>(k));
                wr[j][k] = static_cast<double>(mag * std::cos(ang));
                wi[j][k] = static_cast<double>(mag * std::sin(ang));
            }
        }
    }
};

/// A residue class mod q together with its tau and row estimate.
struct ClassJob {
    std::vector<std::int64_t> r;
    std::uint64_t tau = 1;
};

struct SliceJob {
    std::uint64_t q = 1;
    std::vector<ClassJob> classes;
};

struct SliceResult {
    std::uint64_t count = 0, ambiguous = 0, rows = 0;
    std::vector<Witness> witnesses, ambiguous_elements;
};

inline Rational to_rational(double x) { return Rational(x); }

inline std::vector<Integer> to_integers(const std::vector<std::int64_t>& c) {
    std::vector<Integer> out;
    out.reserve(c.size());
    for (auto x : c) out.emplace_back(static_cast<long>(x));
    return out;
}

class Enumerator {
public:
    Enumerator(FieldRef field, const Rational& X, const EnumerateOptions& opts)
        : field_(std::move(field)), X_(X), opts_(opts), geo_(*field_) {
        x_lo_ = X_.get_d();
        if (Rational(x_lo_) > X_) x_lo_ = std::nextafter(x_lo_, 0.0);
        x_hi_ = std::nextafter(x_lo_, HUGE_VAL);
    }

    SliceResult run(const SliceJob& job) const {
        SliceResult out;
        for (const auto& cls : job.classes) run_class(job.q, cls, out);
        auto by_coords = [](const Witness& u, const Witness& v) { return u.element.num() < v.element.num(); };
        std::sort(out.witnesses.begin(), out.witnesses.end(), by_coords);
        std::sort(out.ambiguous_elements.begin(), out.ambiguous_elements.end(), by_coords);
        return out;
    }

    /// Number of (c_1, ..., c_{d-1}) rows scanned for a class.
    std::uint64_t rows_estimate(std::uint64_t q, const ClassJob& cls) const {
        const double Y = x_hi_ / static_cast<double>(cls.tau) * (1 + 1e-9);
        double rows = 1;
        for (int k = 1; k < geo_.d; ++k) {
            const double bk = std::floor(static_cast<double>(q) * Y / geo_.theta_pow[static_cast<std::size_t>(k)]) + 1;
            rows *= std::floor(2 * bk / static_cast<double>(q)) + 1;
        }
        return rows > 1e18 ? ~std::uint64_t{0} : static_cast<std::uint64_t>(rows);
    }

private:
    void run_class(std::uint64_t q, const ClassJob& cls, SliceResult& out) const {
        const int d = geo_.d;
        const auto n = static_cast<std::size_t>(d);
        const auto qi = static_cast<std::int64_t>(q);
        const double qd = static_cast<double>(q);
        const double Y = x_hi_ / static_cast<double>(cls.tau) * (1 + 1e-9);
        std::vector<std::int64_t> lo(n), hi(n), c(n);
        for (std::size_t k = 0; k < n; ++k) {
            const auto b = static_cast<std::int64_t>(std::floor(qd * Y / geo_.theta_pow[k])) + 1;
            hi[k] = b;
            // smallest value >= -b congruent to r_k mod q
            const std::int64_t shift = ((cls.r[k] + b) % qi + qi) % qi;
            lo[k] = -b + shift;
        }
        if (d == 1) return;
        for (std::size_t k = 1; k < n; ++k) {
            if (lo[k] > hi[k]) return;
            c[k] = lo[k];
        }
        Scratch sc(n);
        while (true) {
            ++out.rows;
            scan_row(q, cls, c, lo[0], Y, sc, out);
            std::size_t k = 1;
            while (k < n) {
                c[k] += qi;
                if (c[k] <= hi[k]) break;
                c[k] = lo[k];
                ++k;
            }
            if (k == n) return;
        }
    }

    struct Scratch {
        explicit Scratch(std::size_t n) : sr(n), im(n), si(n), bound(n) {}
        std::vector<double> sr, im, si, bound;
        std::vector<int> support;
    };

    void scan_row(std::uint64_t q, const ClassJob& cls, std::vector<std::int64_t>& c, std::int64_t c0_first,
                  double Y, Scratch& sc, SliceResult& out) const {
        auto& [sr, im_part, si, bound, support] = sc;
        const int d = geo_.d;
        const auto n = static_cast<std::size_t>(d);
        const double qd = static_cast<double>(q);
        support.assign(1, 0);
        for (std::size_t k = 1; k < n; ++k)
            if (c[k] != 0) support.push_back(static_cast<int>(k));
        if (support.size() == 1 || !is_primitive_by_support(support, d)) return;
        double abs_sum = 0;
        for (std::size_t k = 1; k < n; ++k) abs_sum += std::abs(static_cast<double>(c[k])) * geo_.theta_pow[k];
        const double err = 1e-14 * abs_sum;
        double prod_l = 1;
        for (std::size_t j = 0; j < n; ++j) {
            double re = 0, im = 0;
            for (std::size_t k = 1; k < n; ++k) {
                re += static_cast<double>(c[k]) * geo_.wr[j][k];
                im += static_cast<double>(c[k]) * geo_.wi[j][k];
            }
            sr[j] = re;
            im_part[j] = im;
            si[j] = std::max(0.0, std::abs(im) - err);
            bound[j] = std::max(1.0, si[j] / qd);
            prod_l *= bound[j];
        }
        if (prod_l > Y) return;
        // max(1, |alpha_j|) < Y / prod_{i != j} max(1, |Im alpha_i|)
        double c0_lo = -HUGE_VAL, c0_hi = HUGE_VAL;
        for (std::size_t j = 0; j < n; ++j) {
            const double rj = qd * Y * bound[j] / prod_l;
            const double rad2 = rj * rj - si[j] * si[j];
            if (rad2 < 0) return;
            const double w = std::sqrt(rad2);
            const double slack = 1e-9 * (std::abs(sr[j]) + w) + 1;
            c0_lo = std::max(c0_lo, -sr[j] - w - slack);
            c0_hi = std::min(c0_hi, -sr[j] + w + slack);
        }
        if (c0_lo > c0_hi) return;
        const auto qi = static_cast<std::int64_t>(q);
        std::int64_t start = static_cast<std::int64_t>(std::ceil(c0_lo));
        start += (((c0_first - start) % qi) + qi) % qi;
        const auto stop = static_cast<std::int64_t>(std::floor(c0_hi));
        const double tau = static_cast<double>(cls.tau);
        for (std::int64_t c0 = start; c0 <= stop; c0 += qi) {
            c[0] = c0;
            const double c0d = static_cast<double>(c0);
            const double e_abs = 1e-14 * (std::abs(c0d) + abs_sum) / qd + 1e-300;
            double p_lo = 1, p_hi = 1;
            for (std::size_t j = 0; j < n; ++j) {
                const double mag = std::hypot(c0d + sr[j], im_part[j]) / qd;
                p_lo *= std::max(1.0, mag * (1 - 1e-15) - e_abs);
                p_hi *= std::max(1.0, mag * (1 + 1e-15) + e_abs);
            }
            const double h_lo = tau * p_lo * (1 - 1e-14);
            const double h_hi = tau * p_hi * (1 + 1e-14);
            if (h_lo >= x_hi_) continue;
            if (h_hi < x_lo_) {
                accept(q, cls, c, RealEnclosure(to_rational(h_lo), to_rational(h_hi)), out);
                continue;
            }
            decide_exactly(q, cls, c, out);
        }
        c[0] = 0;
    }

    FieldElement element(std::uint64_t q, const std::vector<std::int64_t>& c) const {
        return FieldElement(field_, to_integers(c), Integer(static_cast<unsigned long>(q)));
    }

    void check_tau(const FieldElement& x, const IntPolynomial& f, const ClassJob& cls) const {
        const auto r = static_cast<unsigned long>(field_->d() / f.degree());
        if (ipow(f.leading(), r) != Integer(static_cast<unsigned long>(cls.tau)))
            throw RigorError("denominator norm mismatch for " + x.to_string());
    }

    void accept(std::uint64_t q, const ClassJob& cls, const std::vector<std::int64_t>& c, RealEnclosure h,
                SliceResult& out) const {
        ++out.count;
        if (!opts_.keep_witnesses && !opts_.verify_minpoly) return;
        FieldElement x = element(q, c);
        if (opts_.verify_minpoly) check_tau(x, minimal_polynomial(x), cls);
        if (opts_.keep_witnesses)
            out.witnesses.push_back({std::move(x), std::move(h), Integer(static_cast<unsigned long>(cls.tau))});
    }

    void decide_exactly(std::uint64_t q, const ClassJob& cls, const std::vector<std::int64_t>& c,
                        SliceResult& out) const {
        FieldElement x = element(q, c);
        const IntPolynomial f = minimal_polynomial(x);
        check_tau(x, f, cls);
        RealEnclosure h;
        for (mpfr_prec_t p = opts_.prec;; p *= 2) {
            h = weil_height(x, f, p);
            const Comparison cmp = height_compare(h, X_);
            if (cmp == Comparison::Less) {
                ++out.count;
                if (opts_.keep_witnesses)
                    out.witnesses.push_back({std::move(x), std::move(h), Integer(static_cast<unsigned long>(cls.tau))});
                return;
            }
            if (cmp != Comparison::Undecided) return;
            if (p >= opts_.max_prec) break;
        }
        ++out.ambiguous;
        out.ambiguous_elements.push_back({std::move(x), std::move(h), Integer(static_cast<unsigned long>(cls.tau))});
    }

    FieldRef field_;
    Rational X_;
    EnumerateOptions opts_;
    Geometry geo_;
    double x_lo_ = 0, x_hi_ = 0;
};

/// Factor lists (p, e) of every admissible q, with the per-factor canonical classes.
struct QPlan {
    std::uint64_t q = 1;
    std::vector<std::pair<const PrimeResidues*, unsigned>> factors;
};

inline void plan_q(const std::vector<PrimeResidues>& primes, std::size_t idx, std::uint64_t q, std::uint64_t tau_min,
                   std::uint64_t q_cap, std::uint64_t tmax,
                   std::vector<std::pair<const PrimeResidues*, unsigned>>& stack,
                   const std::vector<std::vector<std::uint64_t>>& min_tau, std::vector<QPlan>& out) {
    if (idx == primes.size()) {
        out.push_back({q, stack});
        return;
    }
    plan_q(primes, idx + 1, q, tau_min, q_cap, tmax, stack, min_tau, out);
    const std::uint64_t p = primes[idx].p();
    std::uint64_t pe = 1;
    for (unsigned e = 1; e <= primes[idx].levels(); ++e) {
        pe *= p;
        if (q > q_cap / pe) break;
        const std::uint64_t mt = min_tau[idx][e];
        if (mt == 0 || tau_min > tmax / mt) continue;
        stack.emplace_back(&primes[idx], e);
        plan_q(primes, idx + 1, q * pe, tau_min * mt, q_cap, tmax, stack, min_tau, out);
        stack.pop_back();
    }
}

inline SliceJob assemble(const QPlan& plan, std::uint64_t tmax, int d) {
    SliceJob job;
    job.q = plan.q;
    const auto n = static_cast<std::size_t>(d);
    std::vector<const std::vector<ResidueClass>*> sets;
    std::vector<std::uint64_t> mods, coef;
    for (const auto& [pr, e] : plan.factors) {
        sets.push_back(&pr->canonical(e));
        mods.push_back(checked_pow(pr->p(), e, ~std::uint64_t{0} >> 2));
    }
    for (auto m : mods) {
        const std::uint64_t rest = plan.q / m;
        coef.push_back(mulmod(rest, m == 1 ? 0 : inverse_mod_u64(rest % m, m), plan.q));
    }
    std::vector<std::uint64_t> acc(n, 0);
    auto rec = [&](auto&& self, std::size_t i, std::uint64_t tau) -> void {
        if (i == sets.size()) {
            std::vector<std::int64_t> r(n);
            for (std::size_t k = 0; k < n; ++k) r[k] = static_cast<std::int64_t>(acc[k] % plan.q);
            job.classes.push_back({std::move(r), tau});
            return;
        }
        for (const auto& cls : *sets[i]) {
            if (tau > tmax / cls.tau) continue;
            std::vector<std::uint64_t> saved = acc;
            for (std::size_t k = 0; k < n; ++k)
                acc[k] = (acc[k] + mulmod(static_cast<std::uint64_t>(cls.r[k]), coef[i], plan.q)) % plan.q;
            self(self, i + 1, tau * cls.tau);
            acc = std::move(saved);
        }
    };
    if (plan.q == 1) {
        job.classes.push_back({std::vector<std::int64_t>(n, 0), 1});
        return job;
    }
    rec(rec, 0, 1);
    std::sort(job.classes.begin(), job.classes.end(),
              [](const ClassJob& x, const ClassJob& y) { return x.r < y.r; });
    return job;
}

inline std::vector<Integer> reported_bounds(const PureField& field, const Integer& q_max, const Rational& X) {
    std::vector<Integer> out;
    const Interval qx(Rational(q_max * X), 128);
    for (int k = 0; k < field.d(); ++k) {
        const Interval v = qx / pow(Interval(field.a(), 128), make_rational(k, field.d()));
        Integer b;
        const Rational hi = v.hi_rational();
        mpz_cdiv_q(b.get_mpz_t(), hi.get_num_mpz_t(), hi.get_den_mpz_t());
        out.push_back(b);
    }
    return out;
}

}  // namespace detail

/// Every primitive alpha with H_K(alpha) < X, each counted once in canonical
/// form.  Elements whose comparison with X stays open at max_prec land in
/// the ambiguous bucket, so count <= N'_K(X) <= count + ambiguous.
inline CountResult count_primitive(const FieldRef& field, const Rational& X, const EnumerateOptions& opts = {}) {
    CountResult res;
    res.box.X = X;
    res.box.s_max = index_bound(*field);
    {
        Integer qm;
        const Rational sx = X * res.box.s_max;
        mpz_cdiv_q(qm.get_mpz_t(), sx.get_num_mpz_t(), sx.get_den_mpz_t());
        res.box.q_max = std::max(qm, Integer(1));
    }
    res.box.coeff_bounds = detail::reported_bounds(*field, res.box.q_max, X);
    res.box.certified = Rational(res.box.q_max) >= X * res.box.s_max;
    if (X <= 1) return res;

    Integer tmax_z;
    mpz_cdiv_q(tmax_z.get_mpz_t(), X.get_num_mpz_t(), X.get_den_mpz_t());
    tmax_z -= 1;  // T < X
    const Integer q_cap_z = tmax_z * res.box.s_max;
    if (q_cap_z > Integer(1'000'000'000L))
        throw ResourceError("denominator range " + q_cap_z.get_str() + " exceeds 10^9");
    if (Rational(res.box.q_max) * X > Rational(Integer(1) << 50))
        throw ResourceError("coordinate bound q_max * X above 2^50");
    const std::uint64_t tmax = tmax_z.get_ui();
    const std::uint64_t q_cap = q_cap_z.get_ui();

    // primes that can divide q: p <= tmax, or p | s
    std::set<std::uint64_t> plist;
    for (auto p : detail::primes_below(tmax + 1)) plist.insert(p);
    for (const auto& f : factor(res.box.s_max).factors) plist.insert(f.prime.get_ui());
    std::vector<detail::PrimeResidues> primes;
    std::vector<std::vector<std::uint64_t>> min_tau;
    for (auto p : plist) {
        const unsigned vs = static_cast<unsigned>(mpz_remove(Integer().get_mpz_t(), res.box.s_max.get_mpz_t(),
                                                             Integer(static_cast<unsigned long>(p)).get_mpz_t()));
        unsigned levels = 0;
        for (std::uint64_t pe = 1; pe <= q_cap / p;) {
            pe *= p;
            const unsigned e = levels + 1;
            if (e > vs && detail::checked_pow(p, e - vs, tmax) > tmax) break;
            levels = e;
        }
        if (levels == 0) continue;
        primes.emplace_back(*field, p, levels, tmax, vs > 0, opts.limit);
        std::vector<std::uint64_t> mt(levels + 1, 0);
        for (unsigned e = 1; e <= levels; ++e) {
            for (const auto& c : primes.back().canonical(e))
                if (mt[e] == 0 || c.tau < mt[e]) mt[e] = c.tau;
        }
        min_tau.push_back(std::move(mt));
    }

    std::vector<detail::QPlan> plans;
    std::vector<std::pair<const detail::PrimeResidues*, unsigned>> stack;
    detail::plan_q(primes, 0, 1, 1, q_cap, tmax, stack, min_tau, plans);
    std::sort(plans.begin(), plans.end(), [](const auto& x, const auto& y) { return x.q < y.q; });

    const detail::Enumerator en(field, X, opts);
    std::vector<detail::SliceJob> jobs;
    std::uint64_t rows = 0;
    for (const auto& plan : plans) {
        auto job = detail::assemble(plan, tmax, field->d());
        if (job.classes.empty()) continue;
        for (const auto& cls : job.classes) {
            const std::uint64_t r = en.rows_estimate(job.q, cls);
            rows = r > opts.limit || rows > opts.limit - r ? opts.limit + 1 : rows + r;
        }
        res.box.residue_classes += job.classes.size();
        if (rows > opts.limit)
            throw ResourceError("enumeration box exceeds the work limit of " + std::to_string(opts.limit) +
                                " candidate rows (" + std::to_string(res.box.residue_classes) +
                                " residue classes scheduled so far)");
        jobs.push_back(std::move(job));
    }
    res.box.rows = rows;

    std::vector<detail::SliceResult> slices(jobs.size());
    std::atomic<std::size_t> next{0};
    const unsigned nworkers = std::max(1u, std::min<unsigned>(opts.workers, static_cast<unsigned>(jobs.size())));
    std::vector<std::exception_ptr> errors(nworkers);
    auto work = [&](unsigned id) {
        try {
            for (std::size_t i; (i = next.fetch_add(1)) < jobs.size();) slices[i] = en.run(jobs[i]);
        } catch (...) {
            errors[id] = std::current_exception();
        }
    };
    if (nworkers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned id = 0; id < nworkers; ++id) pool.emplace_back(work, id);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    for (auto& s : slices) {
        res.count += s.count;
        res.ambiguous += s.ambiguous;
        std::move(s.witnesses.begin(), s.witnesses.end(), std::back_inserter(res.witnesses));
        std::move(s.ambiguous_elements.begin(), s.ambiguous_elements.end(), std::back_inserter(res.ambiguous_elements));
    }
    res.box.ambiguous_count = res.ambiguous;
    return res;
}

struct MinGenerator {
    RealEnclosure eta;
    FieldElement witness;
    Rational searched_X;
    /// An enumeration below eta.lo found nothing (and nothing ambiguous).
    bool certified_minimal = false;
};

struct AboveCap {
    Rational lower_bound;  // no primitive element has height below this
};

using MinGeneratorResult = std::variant<MinGenerator, AboveCap>;

/// Smallest height of a primitive element, searching X = S, 2S, 4S, ... from
/// the Silverman bound S up to X_cap.  The minimum is read off the certified
/// enumeration itself; the bound only picks the starting point.
inline MinGeneratorResult min_generator(const FieldRef& field, const Rational& X_cap, const EnumerateOptions& opts = {}) {
    if (!(X_cap > 1)) throw PreconditionError("X_cap must exceed 1");
    EnumerateOptions keep = opts;
    keep.keep_witnesses = true;
    Rational X = silverman_lower(field->disc(), field->d()).hi();
    if (X <= 1) X = 2;
    while (true) {
        if (X > X_cap) X = X_cap;
        auto res = count_primitive(field, X, keep);
        if (res.count == 0) {
            if (X >= X_cap) {
                Rational lb = X_cap;
                for (const auto& w : res.ambiguous_elements) lb = std::min(lb, w.height.lo());
                return AboveCap{lb};
            }
            X *= 2;
            continue;
        }
        // Tighten every candidate that might be the minimum.
        Rational best_hi = res.witnesses.front().height.hi();
        for (const auto& w : res.witnesses) best_hi = std::min(best_hi, w.height.hi());
        const mpfr_prec_t fine = std::max<mpfr_prec_t>(opts.prec * 2, 256);
        for (auto* bucket : {&res.witnesses, &res.ambiguous_elements})
            for (auto& w : *bucket)
                if (w.height.lo() <= best_hi) w.height = weil_height(w.element, fine);
        std::optional<std::size_t> arg;
        auto positive_top = [](const FieldElement& x) {
            for (auto k = x.num().size(); k-- > 0;)
                if (x.num()[k] != 0) return x.num()[k] > 0;
            return false;
        };
        for (std::size_t i = 0; i < res.witnesses.size(); ++i) {
            const auto& h = res.witnesses[i].height;
            if (!arg) {
                arg = i;
                continue;
            }
            const auto& cur = res.witnesses[*arg];
            if (h.hi() < cur.height.hi() ||
                (h.hi() == cur.height.hi() && positive_top(res.witnesses[i].element) && !positive_top(cur.element)))
                arg = i;
        }
        const auto& win = res.witnesses[*arg];
        Rational lo = win.height.lo();
        for (auto* bucket : {&res.witnesses, &res.ambiguous_elements})
            for (const auto& w : *bucket) lo = std::min(lo, w.height.lo());
        MinGenerator mg{RealEnclosure(lo, win.height.hi()), win.element, X, false};
        if (lo <= 1) {
            mg.certified_minimal = true;
        } else {
            EnumerateOptions quiet = opts;
            quiet.keep_witnesses = false;
            const auto below = count_primitive(field, lo, quiet);
            mg.certified_minimal = below.count == 0 && below.ambiguous == 0;
        }
        return mg;
    }
}

/// alpha * b_1/b_0 for every coprime pair with b_1 != 0, b_0 >= 1 and
/// max(|b_1|, b_0) < T, ordered by that maximum, then b_0, then b_1.
inline std::vector<FieldElement> rational_multiples(const FieldElement& alpha, const Rational& T) {
    if (!(T > 1)) throw PreconditionError("T must exceed 1");
    if (!is_primitive(alpha)) throw DomainError("alpha is not primitive: " + alpha.to_string());
    Integer top;
    mpz_cdiv_q(top.get_mpz_t(), T.get_num_mpz_t(), T.get_den_mpz_t());
    top -= 1;  // max < T
    std::vector<FieldElement> out;
    for (Integer m = 1; m <= top; ++m)
        for (Integer b0 = 1; b0 <= m; ++b0)
            for (Integer b1 = -m; b1 <= m; ++b1) {
                if (b1 == 0 || std::max(Integer(abs(b1)), b0) != m || gcd(b1, b0) != 1) continue;
                out.push_back(alpha * FieldElement::rational(alpha.field(), make_rational(b1, b0)));
            }
    return out;
}

struct MklRow {
    Rational X;
    std::uint64_t count = 0, ambiguous = 0;
    RealEnclosure value;  // X^(-1/ell) (1 + N'(X))
};

struct MklReport {
    int ell = 0;
    RealEnclosure value;  // min over the grid: an upper bound for the infimum
    Rational argmin_X;
    std::vector<MklRow> rows;
    std::optional<RealEnclosure> floor;  // eta^(-1/ell)
};

inline MklReport empirical_mkl(const FieldRef& field, int ell, const std::vector<Rational>& grid,
                               const EnumerateOptions& opts = {}, const std::optional<RealEnclosure>& eta = {}) {
    if (ell < 1) throw PreconditionError("ell must be >= 1");
    if (grid.empty()) throw PreconditionError("empty X grid");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 1)) throw PreconditionError("grid values must exceed 1");
        if (i > 0 && !(grid[i] > grid[i - 1])) throw PreconditionError("grid must be strictly increasing");
    }
    EnumerateOptions quiet = opts;
    quiet.keep_witnesses = false;
    const mpfr_prec_t prec = std::max<mpfr_prec_t>(opts.prec, 64);
    MklReport rep;
    rep.ell = ell;
    for (const auto& X : grid) {
        const auto res = count_primitive(field, X, quiet);
        const Interval scale = Interval(Integer(1), prec) / rootn(Interval(X, prec), static_cast<unsigned long>(ell));
        const Interval lo = scale * Interval(Integer(static_cast<unsigned long>(1 + res.count)), prec);
        const Interval hi = scale * Interval(Integer(static_cast<unsigned long>(1 + res.count + res.ambiguous)), prec);
        rep.rows.push_back({X, res.count, res.ambiguous, RealEnclosure(hull(lo, hi))});
    }
    std::size_t arg = 0;
    Rational lo = rep.rows[0].value.lo();
    for (std::size_t i = 1; i < rep.rows.size(); ++i) {
        if (rep.rows[i].value.hi() < rep.rows[arg].value.hi()) arg = i;
        lo = std::min(lo, rep.rows[i].value.lo());
    }
    rep.value = RealEnclosure(lo, rep.rows[arg].value.hi());
    rep.argmin_X = rep.rows[arg].X;
    if (eta) rep.floor = mkl_lower(*eta, ell);
    return rep;
}

struct GrowthRow {
    Rational X;
    std::uint64_t count = 0, ambiguous = 0;

    friend bool operator==(const GrowthRow&, const GrowthRow&) = default;
};

inline std::vector<GrowthRow> growth_curve(const FieldRef& field, const std::vector<Rational>& Xs,
                                           const EnumerateOptions& opts = {}) {
    EnumerateOptions quiet = opts;
    quiet.keep_witnesses = false;
    std::map<Rational, GrowthRow> seen;
    std::vector<GrowthRow> rows;
    for (const auto& X : Xs) {
        auto it = seen.find(X);
        if (it == seen.end()) {
            const auto res = count_primitive(field, X, quiet);
            it = seen.emplace(X, GrowthRow{X, res.count, res.ambiguous}).first;
        }
        rows.push_back(it->second);
    }
    return rows;
}

inline std::string growth_csv(const std::vector<GrowthRow>& rows) {
    std::string out = "X,count,ambiguous\n";
    for (const auto& r : rows)
        out += format_rational(r.X) + "," + std::to_string(r.count) + "," + std::to_string(r.ambiguous) + "\n";
    return out;
}

}  // namespace pftl

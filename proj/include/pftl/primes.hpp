#pragma once

// Small unramified primes of residue degree one: rational primes
// p = 2 (mod d) with p not dividing d*a, each with an explicit root of
// x^d - a mod p (it exists and is unique because gcd(d, p - 1) = 1).

#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "pftl/purefield.hpp"

namespace pftl {

struct RamifiedPrimes {
    std::vector<Integer> ramified;  // primes dividing a
    std::vector<Integer> flagged;   // primes dividing d but not a: possibly ramified
};

inline RamifiedPrimes ramified_primes(const PureField& field) {
    RamifiedPrimes r;
    for (const auto& f : factor(field.a()).factors) r.ramified.push_back(f.prime);
    for (const auto& p : prime_divisors(field.d()))
        if (field.a() % p != 0) r.flagged.push_back(p);
    return r;
}

struct GoodPrime {
    std::uint64_t p = 0;
    std::uint64_t root = 0;
    bool residue_class_ok = false;
    bool unramified = false;

    friend bool operator==(const GoodPrime&, const GoodPrime&) = default;
};

namespace detail {

inline std::uint64_t mulmod(std::uint64_t x, std::uint64_t y, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(x) * y % m);
}

inline std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    b %= m;
    for (; e; e >>= 1, b = mulmod(b, b, m))
        if (e & 1) r = mulmod(r, b, m);
    return r;
}

/// Primes below `bound` (exclusive).
inline std::vector<std::uint64_t> primes_below(std::uint64_t bound) {
    constexpr std::uint64_t kMaxSieve = std::uint64_t{1} << 32;
    if (bound > kMaxSieve)
        throw ResourceError("prime bound " + std::to_string(bound) + " exceeds the sieve limit 2^32");
    std::vector<std::uint64_t> out;
    if (bound <= 2) return out;
    std::vector<bool> composite(bound, false);
    for (std::uint64_t i = 2; i < bound; ++i) {
        if (composite[i]) continue;
        out.push_back(i);
        for (std::uint64_t j = i * i; j < bound; j += i) composite[j] = true;
    }
    return out;
}

inline std::uint64_t inverse_mod_u64(std::uint64_t k, std::uint64_t m) {
    Integer r;
    const Integer kk(static_cast<unsigned long>(k)), mm(static_cast<unsigned long>(m));
    if (mpz_invert(r.get_mpz_t(), kk.get_mpz_t(), mm.get_mpz_t()) == 0)
        throw DomainError(std::to_string(k) + " is not invertible mod " + std::to_string(m));
    return r.get_ui();
}

}  // namespace detail

/// The unique d-th root of a mod p when gcd(d, p - 1) = 1: a^(d^-1 mod (p-1)).
inline std::uint64_t dth_root_mod(const Integer& a, int d, std::uint64_t p) {
    const auto dd = static_cast<std::uint64_t>(d);
    if (std::gcd(dd, p - 1) != 1) throw DomainError("gcd(d, p - 1) != 1 for p = " + std::to_string(p));
    const std::uint64_t am = Integer(a % static_cast<unsigned long>(p)).get_ui();
    return detail::powmod(am, detail::inverse_mod_u64(dd, p - 1), p);
}

/// A generator of the multiplicative group mod p (smallest one).
inline std::uint64_t primitive_root(std::uint64_t p) {
    if (p == 2) return 1;
    std::vector<std::uint64_t> qs;
    for (const auto& f : factor(Integer(static_cast<unsigned long>(p - 1))).factors) qs.push_back(f.prime.get_ui());
    for (std::uint64_t g = 2; g < p; ++g) {
        bool ok = true;
        for (auto q : qs)
            if (detail::powmod(g, (p - 1) / q, p) == 1) {
                ok = false;
                break;
            }
        if (ok) return g;
    }
    throw RigorError("no primitive root mod " + std::to_string(p));
}

/// Index t with g^t = x (mod p) by baby-step giant-step.
inline std::uint64_t discrete_log(std::uint64_t g, std::uint64_t x, std::uint64_t p) {
    const auto m = static_cast<std::uint64_t>(std::ceil(std::sqrt(static_cast<double>(p - 1)))) + 1;
    std::unordered_map<std::uint64_t, std::uint64_t> baby;
    std::uint64_t cur = 1;
    for (std::uint64_t j = 0; j < m; ++j) {
        baby.emplace(cur, j);
        cur = detail::mulmod(cur, g, p);
    }
    const std::uint64_t step = detail::powmod(detail::inverse_mod_u64(g, p), m, p);
    std::uint64_t y = x % p;
    for (std::uint64_t i = 0; i <= m; ++i) {
        if (auto it = baby.find(y); it != baby.end()) return (i * m + it->second) % (p - 1);
        y = detail::mulmod(y, step, p);
    }
    throw RigorError("discrete logarithm not found mod " + std::to_string(p));
}

/// The same root built from a generator g: with a = g^t, solve s d = t (mod p-1)
/// and return g^s.
inline std::uint64_t root_via_generator(const Integer& a, int d, std::uint64_t p) {
    const auto dd = static_cast<std::uint64_t>(d);
    const std::uint64_t am = Integer(a % static_cast<unsigned long>(p)).get_ui();
    if (am == 0) return 0;
    const std::uint64_t g = primitive_root(p);
    const std::uint64_t t = discrete_log(g, am, p);
    const std::uint64_t s = detail::mulmod(t, detail::inverse_mod_u64(dd, p - 1), p - 1);
    return detail::powmod(g, s, p);
}

/// Every prime p < norm_bound with p = 2 (mod d) and p not dividing d*a, with its root.
inline std::vector<GoodPrime> find_good_primes(const PureField& field, std::uint64_t norm_bound) {
    if (norm_bound < 2) throw PreconditionError("norm bound must be >= 2");
    const auto d = static_cast<std::uint64_t>(field.d());
    const Integer da = field.a() * field.d();
    std::vector<GoodPrime> out;
    for (auto p : detail::primes_below(norm_bound)) {
        if (p % d != 2 % d) continue;
        if (da % static_cast<unsigned long>(p) == 0) continue;
        GoodPrime g{p, dth_root_mod(field.a(), field.d(), p), true, true};
        const std::uint64_t am = Integer(field.a() % static_cast<unsigned long>(p)).get_ui();
        if (detail::powmod(g.root, d, p) != am) throw RigorError("root check failed mod " + std::to_string(p));
        out.push_back(g);
    }
    return out;
}

/// Which discriminant value feeds D^delta.
enum class DiscChoice {
    Best,   // exact when known, else the lower bound
    Lower,  // always the product lower bound (prod_{(k,d)=1} A_k)^(d-1)
};

struct GoodPrimeCountReport {
    Integer disc;             // D used
    Rational delta, epsilon;
    Integer bound_floor;      // floor(D^delta)
    bool bound_exact = false; // D^delta is an integer (then p < bound_floor)
    std::vector<GoodPrime> primes;
    RealEnclosure ratio;      // count / D^(delta - epsilon)
};

/// Good primes of norm below D^delta and their count relative to D^(delta - epsilon).
inline GoodPrimeCountReport good_prime_count_report(const PureField& field, const Rational& delta,
                                                    const Rational& epsilon, DiscChoice choice = DiscChoice::Best,
                                                    mpfr_prec_t prec = 128) {
    if (!(epsilon > 0) || !(epsilon < delta))
        throw PreconditionError("need 0 < epsilon < delta, got delta = " + delta.get_str() +
                                ", epsilon = " + epsilon.get_str());
    GoodPrimeCountReport r;
    r.disc = choice == DiscChoice::Lower ? field.disc().lower : field.disc().best_lower();
    r.delta = delta;
    r.epsilon = epsilon;
    // p < D^(u/v)  <=>  p^v < D^u for integers p.
    const Integer num = ipow(r.disc, delta.get_num().get_ui());
    Integer root;
    r.bound_exact = mpz_root(root.get_mpz_t(), num.get_mpz_t(), delta.get_den().get_ui()) != 0;
    r.bound_floor = root;
    if (!root.fits_ulong_p() || root.get_ui() >= (1UL << 32))
        throw ResourceError("good-prime bound D^delta = " + root.get_str() + " exceeds the sieve limit 2^32");
    const std::uint64_t limit = root.get_ui() + (r.bound_exact ? 0 : 1);
    r.primes = limit >= 2 ? find_good_primes(field, limit) : std::vector<GoodPrime>{};
    const Interval denom = pow(Interval(r.disc, prec), Rational(delta - epsilon));
    r.ratio = RealEnclosure(Interval(Integer(static_cast<unsigned long>(r.primes.size())), prec) / denom);
    return r;
}

}  // namespace pftl

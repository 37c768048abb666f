#pragma once

// Integer factorization and the d-th-power-free decomposition a = prod A_i^i
// of a radicand into squarefree, pairwise coprime parts.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "pftl/errors.hpp"
#include "pftl/interval.hpp"

namespace pftl {

struct PrimePower {
    Integer prime;
    unsigned exponent = 0;

    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

struct Factorization {
    Integer n{1};
    std::vector<PrimePower> factors;  // primes strictly increasing

    Integer value() const {
        Integer r = 1;
        for (const auto& f : factors) {
            Integer t;
            mpz_pow_ui(t.get_mpz_t(), f.prime.get_mpz_t(), f.exponent);
            r *= t;
        }
        return r;
    }
    /// ord_p(n); zero when p does not divide n.
    unsigned ord(const Integer& p) const {
        for (const auto& f : factors)
            if (f.prime == p) return f.exponent;
        return 0;
    }
    friend bool operator==(const Factorization&, const Factorization&) = default;
};

struct FactorOptions {
    unsigned cap_bits = 128;  // n must be < 2^cap_bits
};

namespace detail {

inline const std::vector<std::uint32_t>& small_primes() {
    static const std::vector<std::uint32_t> primes = [] {
        constexpr std::uint32_t limit = 1000000;
        std::vector<bool> composite(limit + 1, false);
        std::vector<std::uint32_t> out;
        for (std::uint32_t i = 2; i <= limit; ++i) {
            if (composite[i]) continue;
            out.push_back(i);
            for (std::uint64_t j = std::uint64_t(i) * i; j <= limit; j += i) composite[j] = true;
        }
        return out;
    }();
    return primes;
}

inline Integer pollard_brent(const Integer& n, std::mt19937_64& rng) {
    if (mpz_even_p(n.get_mpz_t())) return 2;
    for (;;) {
        Integer y = Integer(static_cast<unsigned long>(rng() % 1000000007ULL)) % n;
        Integer c = Integer(static_cast<unsigned long>(rng() % 1000000007ULL)) % (n - 1) + 1;
        Integer g = 1, r = 1, q = 1, x, ys;
        const unsigned long m = 128;
        auto step = [&](Integer& v) { v = (v * v + c) % n; };
        do {
            x = y;
            for (Integer i = 0; i < r; ++i) step(y);
            Integer k = 0;
            do {
                ys = y;
                for (unsigned long i = 0; i < m && k + i < r; ++i) {
                    step(y);
                    q = (q * abs(Integer(x - y))) % n;
                }
                g = gcd(q, n);
                k += m;
            } while (k < r && g == 1);
            r *= 2;
        } while (g == 1);
        if (g == n) {
            do {
                step(ys);
                g = gcd(abs(Integer(x - ys)), n);
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

inline void factor_rec(const Integer& n, std::map<Integer, unsigned>& out, std::mt19937_64& rng);

}  // namespace detail

/// Primality of n by GMP's BPSW-based test (deterministic output).
inline bool is_prime(const Integer& n) {
    if (n < 2) return false;
    return mpz_probab_prime_p(n.get_mpz_t(), 30) > 0;
}

namespace detail {

inline void factor_rec(const Integer& n, std::map<Integer, unsigned>& out, std::mt19937_64& rng) {
    if (n == 1) return;
    if (is_prime(n)) {
        ++out[n];
        return;
    }
    Integer perfect;
    for (unsigned k = 2; k < 8; ++k) {
        if (mpz_root(perfect.get_mpz_t(), n.get_mpz_t(), k) != 0) {
            std::map<Integer, unsigned> sub;
            factor_rec(perfect, sub, rng);
            for (auto& [p, e] : sub) out[p] += e * k;
            return;
        }
    }
    Integer f = pollard_brent(n, rng);
    factor_rec(f, out, rng);
    factor_rec(n / f, out, rng);
}

}  // namespace detail

/// Complete prime factorization: trial division to 10^6, then Pollard-Brent
/// with a fixed seed.
inline Factorization factor(const Integer& n, const FactorOptions& opts = {}) {
    if (n < 1) throw DomainError("factor: n must be positive, got " + n.get_str());
    if (mpz_sizeinbase(n.get_mpz_t(), 2) > opts.cap_bits)
        throw ResourceError("factor: " + n.get_str() + " exceeds the magnitude cap 2^" +
                            std::to_string(opts.cap_bits));
    Factorization fac;
    fac.n = n;
    Integer m = n;
    std::map<Integer, unsigned> found;
    for (std::uint32_t p : detail::small_primes()) {
        if (Integer(p) * p > m) break;
        unsigned e = 0;
        while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
            mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
            ++e;
        }
        if (e) found[Integer(p)] = e;
    }
    if (m > 1) {
        std::mt19937_64 rng(0x5eed5eedULL);
        detail::factor_rec(m, found, rng);
    }
    for (auto& [p, e] : found) fac.factors.push_back({p, e});
    return fac;
}

/// Factorization of the product of two coprime-or-not numbers from their factorizations.
inline Factorization merge(const Factorization& x, const Factorization& y) {
    std::map<Integer, unsigned> m;
    for (const auto& f : x.factors) m[f.prime] += f.exponent;
    for (const auto& f : y.factors) m[f.prime] += f.exponent;
    Factorization r;
    r.n = x.n * y.n;
    for (auto& [p, e] : m) r.factors.push_back({p, e});
    return r;
}

inline bool is_squarefree(const Integer& n) {
    const auto fac = factor(n);
    return std::all_of(fac.factors.begin(), fac.factors.end(),
                       [](const PrimePower& f) { return f.exponent == 1; });
}

inline bool is_pth_power(const Integer& n, unsigned long p) {
    if (n < 1) throw DomainError("is_pth_power: n must be positive");
    Integer r;
    return mpz_root(r.get_mpz_t(), n.get_mpz_t(), p) != 0;
}

inline Integer ipow(const Integer& b, unsigned long e) {
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

/// The tuple (A_1, ..., A_{d-1}) with a = prod A_i^i.
class PowerFreeDecomposition {
public:
    PowerFreeDecomposition() = default;
    PowerFreeDecomposition(int d, std::vector<Integer> parts) : d_(d), parts_(std::move(parts)) {
        if (d_ < 3 || d_ % 2 == 0) throw DomainError("degree must be odd and >= 3");
        if (parts_.size() != static_cast<std::size_t>(d_ - 1))
            throw DomainError("decomposition needs exactly d-1 parts");
        for (const auto& p : parts_)
            if (p < 1) throw DomainError("decomposition parts must be positive");
    }

    int d() const { return d_; }
    /// A_i for 1 <= i <= d-1.
    const Integer& part(int i) const { return parts_.at(static_cast<std::size_t>(i - 1)); }
    const std::vector<Integer>& parts() const { return parts_; }

    Integer radicand() const {
        Integer a = 1;
        for (int i = 1; i < d_; ++i) a *= ipow(part(i), static_cast<unsigned long>(i));
        return a;
    }

    friend bool operator==(const PowerFreeDecomposition&, const PowerFreeDecomposition&) = default;

private:
    int d_ = 0;
    std::vector<Integer> parts_;
};

inline void check_degree(int d) {
    if (d < 3 || d % 2 == 0)
        throw DomainError("degree d must be odd and >= 3, got " + std::to_string(d));
}

inline PowerFreeDecomposition decompose(const Integer& a, int d) {
    check_degree(d);
    if (a < 2) throw DomainError("radicand must be >= 2, got " + a.get_str());
    const auto fac = factor(a);
    std::vector<Integer> parts(static_cast<std::size_t>(d - 1), Integer(1));
    for (const auto& f : fac.factors) {
        if (f.exponent >= static_cast<unsigned>(d))
            throw DomainError("radicand " + a.get_str() + " is divisible by " + f.prime.get_str() + "^" +
                              std::to_string(d) + " (a d-th power)");
        parts[f.exponent - 1] *= f.prime;
    }
    return {d, std::move(parts)};
}

inline long mod_positive(long k, long m) {
    long r = k % m;
    return r < 0 ? r + m : r;
}

/// Decomposition of phi_k(a): a^k with all d-th powers deleted.  The part
/// A_j moves to index jk mod d.
inline PowerFreeDecomposition rotate(const PowerFreeDecomposition& dec, long k) {
    const int d = dec.d();
    if (std::gcd(k < 0 ? -k : k, static_cast<long>(d)) != 1)
        throw DomainError("rotate: k=" + std::to_string(k) + " is not coprime to d=" + std::to_string(d));
    const long kk = mod_positive(k, d);
    std::vector<Integer> parts(static_cast<std::size_t>(d - 1), Integer(1));
    for (int j = 1; j < d; ++j) parts[static_cast<std::size_t>((j * kk) % d - 1)] *= dec.part(j);
    return {d, std::move(parts)};
}

/// Inverse of k modulo m (gcd(k, m) = 1 assumed).
inline long inverse_mod(long k, long m) {
    long t = 0, nt = 1, r = m, nr = mod_positive(k, m);
    while (nr != 0) {
        long q = r / nr;
        std::tie(t, nt) = std::pair{nt, t - q * nt};
        std::tie(r, nr) = std::pair{nr, r - q * nr};
    }
    if (r != 1) throw DomainError("inverse_mod: not invertible");
    return mod_positive(t, m);
}

}  // namespace pftl

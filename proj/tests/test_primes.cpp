#include <gtest/gtest.h>

#include "pftl/primes.hpp"

using namespace pftl;

namespace {

std::vector<std::uint64_t> brute_roots(long a, int d, std::uint64_t p) {
    std::vector<std::uint64_t> r;
    const std::uint64_t am = static_cast<std::uint64_t>(a) % p;
    for (std::uint64_t x = 0; x < p; ++x) {
        std::uint64_t v = 1;
        for (int i = 0; i < d; ++i) v = v * x % p;
        if (v == am) r.push_back(x);
    }
    return r;
}

bool trial_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q = 2; q * q <= n; ++q)
        if (n % q == 0) return false;
    return true;
}

}  // namespace

TEST(Ramified, Examples) {
    const auto r10 = ramified_primes(new_field(3, 10));
    EXPECT_EQ(r10.ramified, (std::vector<Integer>{2, 5}));
    EXPECT_EQ(r10.flagged, (std::vector<Integer>{3}));
    const auto r2 = ramified_primes(new_field(3, 2));
    EXPECT_EQ(r2.ramified, (std::vector<Integer>{2}));
    EXPECT_EQ(r2.flagged, (std::vector<Integer>{3}));
    const auto r6 = ramified_primes(new_field(5, 6));
    EXPECT_EQ(r6.ramified, (std::vector<Integer>{2, 3}));
    EXPECT_EQ(r6.flagged, (std::vector<Integer>{5}));
    EXPECT_TRUE(ramified_primes(new_field(3, 6)).flagged.empty());
}

TEST(GoodPrimes, Examples) {
    const auto g = find_good_primes(new_field(3, 2), 12);
    ASSERT_EQ(g.size(), 2u);
    EXPECT_EQ(g[0], (GoodPrime{5, 3, true, true}));
    EXPECT_EQ(g[1], (GoodPrime{11, 7, true, true}));
    const auto g5 = find_good_primes(new_field(5, 3), 20);
    ASSERT_EQ(g5.size(), 3u);
    EXPECT_EQ(g5[0].p, 2u);
    EXPECT_EQ(g5[1].p, 7u);
    EXPECT_EQ(g5[2].p, 17u);
    EXPECT_EQ(brute_roots(3, 5, 7), std::vector<std::uint64_t>{g5[1].root});
    EXPECT_THROW(find_good_primes(new_field(3, 2), 1), PreconditionError);
}

TEST(GoodPrimes, SolvabilityExhaustive) {
    const auto primes = detail::primes_below(10001);
    long cases = 0;
    for (int d : {3, 5, 7, 9}) {
        for (long a = 2; a <= 200; ++a) {
            FieldRef k;
            try {
                k = make_field(d, a);
            } catch (const DomainError&) {
                continue;
            }
            const auto good = find_good_primes(*k, 10001);
            std::size_t idx = 0;
            for (auto p : primes) {
                if (p % static_cast<std::uint64_t>(d) != 2 || (a * d) % static_cast<long>(p) == 0) continue;
                ASSERT_LT(idx, good.size());
                EXPECT_EQ(good[idx].p, p);
                const std::uint64_t r = good[idx].root;
                EXPECT_EQ(detail::powmod(r, static_cast<std::uint64_t>(d), p), static_cast<std::uint64_t>(a) % p);
                ++idx;
                ++cases;
            }
            EXPECT_EQ(idx, good.size());
        }
    }
    EXPECT_GT(cases, 100000);
}

TEST(GoodPrimes, GeneratorAndBruteForceAgree) {
    for (int d : {3, 5, 7, 9}) {
        for (long a : {2L, 3L, 10L, 31L, 150L, 199L}) {
            FieldRef k;
            try {
                k = make_field(d, a);
            } catch (const DomainError&) {
                continue;
            }
            for (const auto& g : find_good_primes(*k, 3000)) {
                EXPECT_TRUE(trial_prime(g.p));
                EXPECT_EQ(root_via_generator(a, d, g.p), g.root);
                EXPECT_EQ(brute_roots(a, d, g.p), std::vector<std::uint64_t>{g.root});
            }
        }
    }
}

TEST(GoodPrimes, DiscreteLogLargePrime) {
    const std::uint64_t p = 1000000007;
    const std::uint64_t g = primitive_root(p);
    EXPECT_EQ(g, 5u);
    const std::uint64_t x = 123456789;
    EXPECT_EQ(detail::powmod(g, discrete_log(g, x, p), p), x);
}

TEST(CountReport, Examples) {
    const auto r2 = good_prime_count_report(new_field(3, 2), Rational(1, 2), Rational(1, 10));
    EXPECT_EQ(r2.disc, 108);
    ASSERT_EQ(r2.primes.size(), 1u);
    EXPECT_EQ(r2.primes[0].p, 5u);
    EXPECT_EQ(r2.bound_floor, 10);
    EXPECT_THROW(good_prime_count_report(new_field(3, 2), Rational(0), Rational(1, 10)), PreconditionError);
    EXPECT_THROW(good_prime_count_report(new_field(3, 2), Rational(1, 2), Rational(1, 2)), PreconditionError);
    const auto r150 = good_prime_count_report(new_field(3, 150), Rational(1, 2), Rational(1, 10), DiscChoice::Lower);
    EXPECT_EQ(r150.disc, 900);
    EXPECT_TRUE(r150.bound_exact);
    std::vector<std::uint64_t> ps;
    for (const auto& g : r150.primes) ps.push_back(g.p);
    EXPECT_EQ(ps, (std::vector<std::uint64_t>{11, 17, 23, 29}));
    // ratio = 4 / 900^(2/5)
    EXPECT_NEAR(r150.ratio.mid_double(), 4 / std::pow(900.0, 0.4), 1e-12);
    const auto best = good_prime_count_report(new_field(3, 150), Rational(1, 2), Rational(1, 10));
    EXPECT_EQ(best.disc, 24300);
    EXPECT_GT(best.primes.size(), 4u);
}

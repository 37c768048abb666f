#include <gtest/gtest.h>

#include <random>

#include "enumerate_oracle.hpp"
#include "pftl/enumerate.hpp"

using namespace pftl;

namespace {

std::array<long, 4> key(const FieldElement& x) {
    return {x.num()[0].get_si(), x.num()[1].get_si(), x.num()[2].get_si(), x.den().get_si()};
}

EnumerateOptions strict_opts(unsigned workers = 1) {
    EnumerateOptions o;
    o.prec = 256;
    o.workers = workers;
    o.verify_minpoly = true;
    return o;
}

bool contains(const CountResult& r, const FieldElement& x) {
    return std::any_of(r.witnesses.begin(), r.witnesses.end(), [&](const Witness& w) { return w.element == x; });
}

}  // namespace

TEST(CountPrimitive, MatchesDoubledBoxOracle) {
    for (long a : {2L, 3L, 5L}) {
        const auto k = make_field(3, a);
        const long s = oracle::index_of(a);
        ASSERT_EQ(index_bound(*k), s);
        for (auto [xn, xd] : {std::pair{2L, 1L}, {5L, 2L}, {3L, 1L}, {4L, 1L}}) {
            const Rational X = make_rational(xn, xd);
            const auto res = count_primitive(k, X, strict_opts());
            ASSERT_TRUE(res.box.certified);
            EXPECT_EQ(res.ambiguous, 0u);
            const long q_max = res.box.q_max.get_si();
            std::array<long, 3> b{};
            for (int i = 0; i < 3; ++i) {
                const double bk = std::ceil(q_max * X.get_d() / std::pow(static_cast<double>(a), i / 3.0));
                b[static_cast<std::size_t>(i)] = 2 * static_cast<long>(bk);
                EXPECT_GE(res.box.coeff_bounds[static_cast<std::size_t>(i)], static_cast<long>(bk));
            }
            const auto brute = oracle::brute_count(a, xn, xd, 2 * q_max, b);
            EXPECT_EQ(brute.undecided, 0u);
            EXPECT_EQ(res.count, brute.count) << "a = " << a << ", X = " << X;
            std::set<std::array<long, 4>> mine;
            for (const auto& w : res.witnesses) mine.insert(key(w.element));
            EXPECT_EQ(mine, brute.elements) << "a = " << a << ", X = " << X;
        }
    }
}

TEST(CountPrimitive, Examples) {
    const auto k = make_field(3, 2);
    EXPECT_EQ(count_primitive(k, make_rational(3, 2)).count, 0u);
    EXPECT_EQ(count_primitive(k, Rational(1)).count, 0u);
    EXPECT_EQ(count_primitive(k, make_rational(1, 2)).count, 0u);
    const auto r = count_primitive(k, make_rational(5, 2));
    const auto t = FieldElement::theta(k);
    const auto t2 = FieldElement(k, {0, 0, 1}, 2);
    for (const auto& x : {t, t * FieldElement::rational(k, -1), t2, t2 * FieldElement::rational(k, -1)})
        EXPECT_TRUE(contains(r, x)) << x.to_string();
    for (const auto& w : r.witnesses) {
        if (w.element == t) {
            EXPECT_TRUE(w.height.contains(Rational(2)));
        }
        EXPECT_TRUE(is_primitive(w.element));
        EXPECT_LT(w.height.hi(), make_rational(5, 2));
    }
    // X = 2 excludes the height-2 elements
    EXPECT_FALSE(contains(count_primitive(k, Rational(2)), t));
}

TEST(CountPrimitive, WorkerCountInvariant) {
    for (long a : {2L, 12L}) {
        const auto k = make_field(3, a);
        const auto one = count_primitive(k, Rational(7), strict_opts(1));
        const auto eight = count_primitive(k, Rational(7), strict_opts(8));
        EXPECT_EQ(one.count, eight.count);
        EXPECT_EQ(one.ambiguous, eight.ambiguous);
        ASSERT_EQ(one.witnesses.size(), eight.witnesses.size());
        for (std::size_t i = 0; i < one.witnesses.size(); ++i)
            EXPECT_EQ(one.witnesses[i].element, eight.witnesses[i].element);
    }
}

TEST(CountPrimitive, RotationInvariant) {
    // 12 = 3 * 2^2 and its rotation 18 = 2 * 3^2 define the same field
    const auto r12 = count_primitive(make_field(3, 12), Rational(8));
    const auto r18 = count_primitive(make_field(3, 18), Rational(8));
    EXPECT_EQ(r12.count, r18.count);
    EXPECT_GT(r12.count, 0u);
    const auto r20 = count_primitive(make_field(3, 20), Rational(9));
    const auto r50 = count_primitive(make_field(3, 50), Rational(9));
    EXPECT_EQ(r20.count, r50.count);
}

TEST(CountPrimitive, WitnessesRespectLowerBounds) {
    for (long a : {2L, 3L, 5L, 6L, 7L, 10L, 11L, 12L, 15L}) {
        const auto k = make_field(3, a);
        const auto sil = silverman_lower(k->disc(), 3);
        const auto dub = dubickas_lower(k->dec());
        const auto r = count_primitive(k, Rational(6));
        for (const auto& w : r.witnesses) {
            EXPECT_GT(w.height.lo(), sil.hi()) << "a = " << a << " " << w.element.to_string();
            EXPECT_GT(w.height.lo(), dub.hi()) << "a = " << a << " " << w.element.to_string();
        }
    }
}

TEST(CountPrimitive, HigherDegree) {
    // d = 5: theta has height 2 in Q(2^(1/5))
    const auto k = make_field(5, 2);
    const auto r = count_primitive(k, make_rational(21, 10), strict_opts());
    EXPECT_TRUE(contains(r, FieldElement::theta(k)));
    for (const auto& w : r.witnesses) {
        const auto h = weil_height(w.element, 256);
        EXPECT_TRUE(h.overlaps(w.height));
        EXPECT_LT(h.lo(), make_rational(21, 10));
    }
    EXPECT_EQ(count_primitive(k, make_rational(3, 2)).count, 0u);
}

TEST(CountPrimitive, WorkLimit) {
    EnumerateOptions o;
    o.limit = 10;
    try {
        count_primitive(make_field(3, 2), Rational(40), o);
        FAIL() << "expected ResourceError";
    } catch (const ResourceError& e) {
        EXPECT_NE(std::string(e.what()).find("work limit"), std::string::npos);
    }
}

TEST(Residues, TauMatchesMinimalPolynomial) {
    std::mt19937_64 rng(20261016);
    for (auto [d, a] : {std::pair{3, 2L}, {3, 150L}, {5, 12L}, {9, 6L}}) {
        const auto k = make_field(d, a);
        for (auto [p, e] : {std::pair{2ULL, 3U}, {3ULL, 2U}, {5ULL, 2U}, {7ULL, 1U}}) {
            const detail::TauCalculator tc(k->a(), d, p, e);
            std::uint64_t pe = 1;
            for (unsigned i = 0; i < e; ++i) pe *= p;
            std::uniform_int_distribution<std::int64_t> dist(0, static_cast<std::int64_t>(pe) - 1);
            for (int trial = 0; trial < 40; ++trial) {
                std::vector<std::int64_t> r(static_cast<std::size_t>(d));
                for (auto& x : r) x = dist(rng);
                std::vector<Integer> num;
                for (auto x : r) num.emplace_back(static_cast<long>(x));
                num[1] += static_cast<long>(pe);  // keep the element irrational without changing r mod p^e
                const FieldElement x(k, num, Integer(static_cast<unsigned long>(pe)));
                const auto f = minimal_polynomial(x);
                // p-part of the denominator norm T^(d/deg f)
                Integer T = ipow(f.leading(), static_cast<unsigned long>(d / f.degree()));
                unsigned v = 0;
                while (T % static_cast<unsigned long>(p) == 0) T /= static_cast<unsigned long>(p), ++v;
                EXPECT_EQ(tc.exponent(r), v) << x.to_string();
            }
        }
    }
}

TEST(Residues, DivisorMethodMatchesBruteForce) {
    for (long a : {2L, 3L, 10L}) {
        const auto k = make_field(3, a);
        for (std::uint64_t p : {37ULL, 41ULL, 43ULL}) {
            const std::uint64_t tmax = 3 * p;
            const detail::PrimeResidues fast(*k, p, 1, tmax, false, 100'000'000);
            const detail::TauCalculator tc(k->a(), 3, p, 1);
            std::vector<std::vector<std::int64_t>> brute;
            detail::for_each_tuple(3, p, [&](const std::vector<std::uint64_t>& u) {
                std::vector<std::int64_t> r(u.begin(), u.end());
                const std::uint64_t tau = detail::checked_pow(p, tc.exponent(r), tmax);
                if (tau <= tmax) brute.push_back(r);
            });
            std::sort(brute.begin(), brute.end());
            std::vector<std::vector<std::int64_t>> got;
            for (const auto& c : fast.level(1)) got.push_back(c.r);
            EXPECT_EQ(got, brute) << "a = " << a << ", p = " << p;
        }
    }
}

TEST(MinGenerator, CubeRootOfTwo) {
    const auto k = make_field(3, 2);
    const auto res = min_generator(k, Rational(100));
    ASSERT_TRUE(std::holds_alternative<MinGenerator>(res));
    const auto& mg = std::get<MinGenerator>(res);
    EXPECT_TRUE(mg.eta.is_exact());
    EXPECT_EQ(mg.eta.lo(), 2);
    EXPECT_EQ(mg.witness, FieldElement::theta(k));
    EXPECT_TRUE(mg.certified_minimal);
}

TEST(MinGenerator, SixFifths) {
    const auto k = make_field(3, 150);
    const auto res = min_generator(k, Rational(100));
    ASSERT_TRUE(std::holds_alternative<MinGenerator>(res));
    const auto& mg = std::get<MinGenerator>(res);
    EXPECT_LE(mg.eta.hi(), 6);
    EXPECT_TRUE(mg.certified_minimal);
    // theta / A_2 has minimal polynomial 5 x^3 - 6
    const auto w = FieldElement(k, {0, 1, 0}, 5);
    EXPECT_EQ(minimal_polynomial(w), IntPolynomial({-6, 0, 0, 5}));
    EXPECT_EQ(weil_height(w), RealEnclosure::exact(6));
}

TEST(MinGenerator, AboveCap) {
    const auto res = min_generator(make_field(3, 2), make_rational(3, 2));
    ASSERT_TRUE(std::holds_alternative<AboveCap>(res));
    EXPECT_EQ(std::get<AboveCap>(res).lower_bound, make_rational(3, 2));
    EXPECT_THROW(min_generator(make_field(3, 2), Rational(1)), PreconditionError);
}

TEST(RationalMultiples, CoprimePairCounts) {
    const auto k = make_field(3, 2);
    const auto t = FieldElement::theta(k);
    auto pairs = [](long T) {
        long n = 0;
        for (long b0 = 1; b0 < T; ++b0)
            for (long b1 = -(T - 1); b1 < T; ++b1)
                if (b1 != 0 && std::gcd(b0, b1) == 1) ++n;
        return n;
    };
    EXPECT_EQ(rational_multiples(t, Rational(2)).size(), 2u);
    EXPECT_EQ(rational_multiples(t, Rational(3)).size(), 6u);
    EXPECT_EQ(static_cast<long>(rational_multiples(t, Rational(5)).size()), pairs(5));
    EXPECT_EQ(pairs(5), 22);
    const auto m5 = rational_multiples(t, Rational(5));
    for (std::size_t i = 0; i < m5.size(); ++i) {
        EXPECT_TRUE(is_primitive(m5[i]));
        EXPECT_LE(weil_height(m5[i]).hi(), Rational(2 * 125));
        for (std::size_t j = 0; j < i; ++j) EXPECT_FALSE(m5[i] == m5[j]);
    }
    EXPECT_THROW(rational_multiples(FieldElement::rational(k, 3), Rational(3)), DomainError);
    EXPECT_THROW(rational_multiples(t, Rational(1)), PreconditionError);
}

TEST(RationalMultiples, CountedByEnumeration) {
    const auto k = make_field(3, 2);
    const auto t = FieldElement::theta(k);
    for (long T : {2L, 3L}) {
        const Rational X = Rational(2 * T * T * T) + make_rational(1, 1000);
        const auto res = count_primitive(k, X);
        const auto mult = rational_multiples(t, Rational(T));
        EXPECT_GE(res.count, mult.size());
        for (const auto& m : mult) EXPECT_TRUE(contains(res, m)) << m.to_string();
    }
}

TEST(EmpiricalMkl, Examples) {
    const auto k = make_field(3, 2);
    const auto r = empirical_mkl(k, 2, {Rational(2)}, {}, RealEnclosure::exact(2));
    EXPECT_EQ(r.rows[0].count, 0u);
    // the enclosure brackets 2^(-1/2)
    EXPECT_LE(r.value.lo() * r.value.lo(), make_rational(1, 2));
    EXPECT_GE(r.value.hi() * r.value.hi(), make_rational(1, 2));
    EXPECT_NEAR(r.value.mid_double(), std::sqrt(0.5), 1e-15);
    ASSERT_TRUE(r.floor);
    EXPECT_TRUE(r.floor->overlaps(r.value));
    const auto big = empirical_mkl(k, 200, {make_rational(3, 2), Rational(2)}, {});
    EXPECT_LT(big.value.hi(), 1);
    EXPECT_GT(big.value.lo(), make_rational(99, 100));
    EXPECT_EQ(big.argmin_X, Rational(2));
    EXPECT_THROW(empirical_mkl(k, 2, {}, {}), PreconditionError);
    EXPECT_THROW(empirical_mkl(k, 2, {Rational(3), Rational(2)}, {}), PreconditionError);
}

TEST(GrowthCurve, MonotoneAndDeterministic) {
    const auto k = make_field(3, 2);
    const std::vector<Rational> xs{make_rational(3, 2), Rational(3), Rational(3), Rational(6), Rational(10)};
    const auto rows = growth_curve(k, xs);
    ASSERT_EQ(rows.size(), xs.size());
    EXPECT_EQ(rows[0].count, 0u);
    EXPECT_EQ(rows[1], rows[2]);
    for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LE(rows[i - 1].count, rows[i].count);
    const auto sub = growth_curve(k, {Rational(6)});
    EXPECT_EQ(sub[0].count, rows[3].count);
    const auto csv = growth_csv(rows);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "X,count,ambiguous");
    EXPECT_NE(csv.find("\n1.5,0,0\n"), std::string::npos);
}

#include <gtest/gtest.h>

#include "cubic_oracle.hpp"
#include "pftl/purefield.hpp"

using namespace pftl;

TEST(NewField, Examples) {
    const auto k = new_field(3, 2);
    EXPECT_EQ(k.d(), 3);
    EXPECT_EQ(k.a(), 2);
    EXPECT_THROW(new_field(9, 8), ReducibilityError);
    EXPECT_THROW(new_field(3, 8), DomainError);
    EXPECT_THROW(new_field(4, 3), DomainError);
    EXPECT_THROW(new_field(3, 1), DomainError);
    const auto k150 = new_field(3, 150);
    EXPECT_EQ(k150.dec().part(1), 6);
    EXPECT_EQ(k150.dec().part(2), 5);
    // 5^5 = 3125 is free of 15th powers but a 5th power with 5 | 15.
    EXPECT_THROW(new_field(15, 3125), ReducibilityError);
    EXPECT_NO_THROW(new_field(15, 4));
}

TEST(NewField, ThetaEnclosure) {
    for (int d : {3, 5, 7, 9}) {
        for (long a : {2L, 3L, 10L, 150L, 1000003L}) {
            FieldRef k;
            try {
                k = make_field(d, a);
            } catch (const DomainError&) {
                continue;
            }
            const auto& t = k->theta();
            const auto dd = static_cast<unsigned long>(d);
            mpq_class lo = 1, hi = 1;
            for (unsigned long i = 0; i < dd; ++i) lo *= t.lo(), hi *= t.hi();
            EXPECT_LE(lo, Rational(a));
            EXPECT_GE(hi, Rational(a));
            EXPECT_LT(t.width(), Rational(1, 1000000));
        }
    }
}

TEST(DiscBounds, Examples) {
    const auto d2 = disc_bounds(new_field(3, 2));
    EXPECT_EQ(d2.lower, 4);
    EXPECT_EQ(d2.poly_disc_modulus, 108);
    EXPECT_EQ(d2.upper, 108);
    EXPECT_EQ(disc_bounds(new_field(3, 150)).lower, 900);
    const auto d5 = disc_bounds(new_field(5, 2));
    EXPECT_EQ(d5.lower, 16);
    EXPECT_EQ(d5.poly_disc_modulus, 50000);
    EXPECT_FALSE(d5.exact.has_value());
    // Parts at indices sharing a factor with d do not enter the lower bound.
    const auto d9 = disc_bounds(decompose(Integer(2) * 27 * 5, 9));  // A_1 = 10, A_3 = 3
    EXPECT_EQ(d9.lower, ipow(10, 8));
}

TEST(DiscExactCubic, Examples) {
    EXPECT_EQ(disc_exact_cubic(new_field(3, 2)), 108);
    EXPECT_EQ(disc_exact_cubic(new_field(3, 10)), 300);
    EXPECT_EQ(disc_exact_cubic(new_field(3, 6)), 972);
    EXPECT_EQ(disc_exact_cubic(new_field(3, 150)), 24300);
    EXPECT_THROW(disc_exact_cubic(new_field(5, 2)), UnsupportedDegreeError);
}

TEST(DiscExactCubic, MatchesMaximalOrderOracle) {
    for (long a = 2; a <= 100; ++a) {
        FieldRef k;
        try {
            k = make_field(3, a);
        } catch (const DomainError&) {
            continue;
        }
        const Integer d = disc_exact_cubic(*k);
        EXPECT_EQ(d, oracle::cubic_discriminant(a)) << "a = " << a;
        const auto info = disc_bounds(*k);
        EXPECT_LE(info.lower, d);
        EXPECT_LE(d, info.poly_disc_modulus);
        EXPECT_EQ(d % info.lower, 0);
        EXPECT_EQ(info.poly_disc_modulus % d, 0);
        const Integer s = index_bound(*k);
        EXPECT_EQ(d * s * s, info.poly_disc_modulus);
    }
}

TEST(DiscExactCubic, RotationInvariant) {
    for (long a = 2; a <= 300; ++a) {
        PowerFreeDecomposition dec;
        try {
            dec = decompose(a, 3);
        } catch (const DomainError&) {
            continue;
        }
        const auto r = rotate(dec, 2);
        EXPECT_EQ(disc_exact_cubic(dec), disc_exact_cubic(r)) << a;
        EXPECT_EQ(disc_bounds(dec).lower, disc_bounds(r).lower);
    }
}

TEST(Subfields, Patterns) {
    EXPECT_TRUE(subfield_degrees(3).empty());
    EXPECT_EQ(subfield_degrees(9), (std::vector<SubfieldSupport>{{3, {0, 3, 6}}}));
    EXPECT_EQ(subfield_degrees(15),
              (std::vector<SubfieldSupport>{{3, {0, 5, 10}}, {5, {0, 3, 6, 9, 12}}}));
}

TEST(IndexBound, DividesPolynomialDiscriminantQuotient) {
    for (int d : {5, 7, 9}) {
        for (long a = 2; a <= 60; ++a) {
            FieldRef k;
            try {
                k = make_field(d, a);
            } catch (const DomainError&) {
                continue;
            }
            const Integer s = index_bound(*k);
            const auto& info = k->disc();
            EXPECT_EQ((info.poly_disc_modulus / info.lower) % (s * s), 0);
            EXPECT_EQ(info.poly_disc_modulus % info.lower, 0);
        }
    }
    EXPECT_EQ(index_bound(new_field(3, 150)), 5);
    EXPECT_EQ(index_bound(new_field(3, 10)), 3);
    EXPECT_EQ(index_bound(new_field(3, 2)), 1);
}

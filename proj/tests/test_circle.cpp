#include <gclose/circle.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace gclose;

namespace {

CirclePoint rat(long long p, long long q) { return CirclePoint::from_rational(Int(p), Int(q)); }

const CirclePoint golden = CirclePoint::from_quadratic(-1, 1, 2, 5);

} // namespace

TEST(CircleNormalize, ReducesIntoUnitInterval)
{
    EXPECT_EQ(normalize(7, 16), rat(7, 16));
    EXPECT_EQ(normalize(7, 16).num(), 7);
    EXPECT_EQ(normalize(-1, 3).num(), 2);
    EXPECT_EQ(normalize(-1, 3).den(), 3);
    EXPECT_EQ(normalize(10, 8).num(), 1);
    EXPECT_EQ(normalize(10, 8).den(), 4);
    EXPECT_EQ(normalize(5, -5), CirclePoint());
}

TEST(CircleNormalize, ZeroDenominatorRejected)
{
    try {
        normalize(1, 0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::zero_denominator);
    }
}

TEST(CircleNormalize, QuadraticCanonicalForm)
{
    // (-1 + sqrt 5)/2 stays as is; (3 + 2*sqrt 20)/2 = (3 + 4 sqrt 5)/2 mod 1
    EXPECT_EQ(golden.a(), -1);
    EXPECT_EQ(golden.b(), 1);
    EXPECT_EQ(golden.c(), 2);
    EXPECT_EQ(golden.d(), 5);
    const CirclePoint p = CirclePoint::from_quadratic(3, 2, 2, 20);
    EXPECT_EQ(p.d(), 5);
    EXPECT_EQ(p.b(), 4);
    EXPECT_GE(p.compare_representative(0), 0);
    EXPECT_LT(p.compare_representative(1), 0);
    EXPECT_TRUE(CirclePoint::from_quadratic(1, 0, 3, 5).is_rational());
    EXPECT_THROW(CirclePoint::from_quadratic(1, 1, 3, 4), Error);
}

TEST(CircleAdd, Examples)
{
    EXPECT_TRUE(add(rat(1, 2), rat(1, 2)).is_zero());
    EXPECT_EQ(add(rat(1, 3), rat(1, 2)), rat(5, 6));
    // golden + golden = sqrt(5) - 2 ~ 0.236
    const CirclePoint twice = add(golden, golden);
    EXPECT_EQ(twice, CirclePoint::from_quadratic(-4, 2, 2, 5));
    EXPECT_EQ(twice.a(), -2);
    EXPECT_EQ(twice.b(), 1);
    EXPECT_EQ(twice.c(), 1);
    EXPECT_NEAR(twice.approx(), 0.2360679, 1e-6);
}

TEST(CircleAdd, MixedFieldsRejected)
{
    const CirclePoint s2 = CirclePoint::from_quadratic(0, 1, 1, 2);
    try {
        add(golden, s2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::incompatible_fields);
    }
    EXPECT_NO_THROW(add(golden, rat(1, 3)));
}

TEST(CircleIntMul, Examples)
{
    EXPECT_TRUE(int_mul(6, rat(1, 6)).is_zero());
    EXPECT_EQ(int_mul(2, rat(2, 3)), rat(1, 3));
    const CirclePoint three = int_mul(3, golden);
    EXPECT_EQ(three, CirclePoint::from_quadratic(-5, 3, 2, 5));
    EXPECT_NEAR(three.approx(), 0.854101966, 1e-8);
    EXPECT_TRUE(int_mul(0, golden).is_zero());
}

TEST(CircleNorm, Examples)
{
    EXPECT_EQ(norm(CirclePoint()), Enclosure::exact(0));
    EXPECT_EQ(norm(rat(2, 3)), Enclosure::exact(Rational(1, 3)));
    const Enclosure e = norm(golden);
    EXPECT_FALSE(e.is_exact());
    EXPECT_LE(e.width(), default_norm_tolerance());
    // exact value (3 - sqrt 5)/2 must lie inside
    const CirclePoint exact = CirclePoint::from_quadratic(3, -1, 2, 5);
    EXPECT_GE(exact.compare_representative(e.lower), 0);
    EXPECT_LE(exact.compare_representative(e.upper), 0);
    const Enclosure coarse = norm(golden, Rational(1, 1000));
    EXPECT_LE(coarse.width(), Rational(1, 1000));
}

TEST(CircleNorm, ExactComparisons)
{
    EXPECT_TRUE(golden.norm_lt(Rational(382, 1000)));
    EXPECT_TRUE(golden.norm_ge(Rational(381, 1000)));
    EXPECT_TRUE(rat(1, 3).norm_ge(Rational(1, 3)));
    EXPECT_FALSE(rat(1, 3).norm_lt(Rational(1, 3)));
    EXPECT_TRUE(rat(5, 6).norm_le(Rational(1, 6)));
}

TEST(CircleParse, Literals)
{
    EXPECT_EQ(parse_point("7/16"), rat(7, 16));
    EXPECT_EQ(parse_point("10/8"), rat(1, 4));
    EXPECT_EQ(parse_point("quad:(-1+1*sqrt(5))/2"), golden);
    EXPECT_EQ(parse_point("quad:(3-1*sqrt(5))/2"), CirclePoint::from_quadratic(3, -1, 2, 5));
    EXPECT_EQ(parse_point(golden.to_string()), golden);
    EXPECT_EQ(parse_point(" 1/3 "), rat(1, 3));
}

TEST(CircleParse, Errors)
{
    for (const char* bad : {"", "1/0", "abc", "quad:(1+1*sqrt(4))/2", "quad:(1+1*sqrt(5)/2", "quad:(1+0*sqrt(5))/2",
                            "quad:(1+1*sqrt(5))/0", "quad:1+sqrt(5)", "1/2/3x"}) {
        EXPECT_THROW(parse_point(bad), Error) << bad;
    }
    try {
        parse_point("quad:(1+1*sqrt(9))/2");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.position(), 15U); // the radicand
    }
}

TEST(CircleProperties, GroupLawsOnRandomRationals)
{
    std::mt19937_64 rng(20240611);
    std::uniform_int_distribution<long long> num(-1'000'000, 1'000'000);
    std::uniform_int_distribution<long long> den(1, 1'000'000);
    for (int i = 0; i < 2000; ++i) {
        const CirclePoint x = rat(num(rng), den(rng));
        const CirclePoint y = rat(num(rng), den(rng));
        const CirclePoint z = rat(num(rng), den(rng));
        ASSERT_EQ(add(add(x, y), z), add(x, add(y, z)));
        ASSERT_EQ(add(x, y), add(y, x));
        ASSERT_TRUE(add(x, neg(x)).is_zero());
        ASSERT_EQ(CirclePoint::from_rational(x.num(), x.den()), x);
        ASSERT_EQ(norm(x), norm(neg(x)));
        ASSERT_LE(norm(add(x, y)).upper, norm(x).upper + norm(y).upper);
    }
}

TEST(CircleProperties, QuadraticNormConsistency)
{
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> small(-20, 20);
    std::uniform_int_distribution<int> pos(1, 20);
    for (int i = 0; i < 300; ++i) {
        int b = small(rng);
        if (b == 0)
            b = 1;
        const CirclePoint x = CirclePoint::from_quadratic(small(rng), b, pos(rng), 7);
        const CirclePoint y = CirclePoint::from_quadratic(small(rng), b == 3 ? 2 : 3, pos(rng), 7);
        const Enclosure nx = norm(x), nmx = norm(neg(x));
        ASSERT_TRUE(nx.intersects(nmx));
        const Enclosure s = norm(add(x, y));
        ASSERT_LE(s.lower, norm(x).upper + norm(y).upper);
        ASSERT_TRUE(add(add(x, y), neg(y)) == x);
    }
}

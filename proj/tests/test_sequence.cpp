#include <gclose/sequence.hpp>

#include <gtest/gtest.h>

using namespace gclose;

namespace {

const CirclePoint golden = CirclePoint::from_quadratic(-1, 1, 2, 5);

std::vector<Int> v(std::initializer_list<long long> xs)
{
    std::vector<Int> out;
    for (long long x : xs)
        out.emplace_back(x);
    return out;
}

} // namespace

TEST(EvalSeq, Examples)
{
    EXPECT_EQ(eval_seq(IntVecSeq::geometric(2), 5), v({32}));
    EXPECT_EQ(eval_seq(IntVecSeq::factorial(), 4), v({24}));
    EXPECT_EQ(eval_seq(IntVecSeq::cf_denominators(golden), 5), v({8}));
    EXPECT_EQ(eval_seq(IntVecSeq::constant(v({6, -1})), 1000), v({6, -1}));
}

TEST(EvalSeq, PatternsScaleEveryTerm)
{
    const IntVecSeq u = IntVecSeq::geometric(3, v({1, -2}));
    EXPECT_EQ(u.dimension(), 2U);
    EXPECT_EQ(eval_seq(u, 3), v({27, -54}));
}

TEST(EvalSeq, ExplicitHorizon)
{
    const IntVecSeq u = IntVecSeq::explicit_list({v({1}), v({2}), v({3})});
    EXPECT_EQ(u.horizon(), 3U);
    EXPECT_EQ(eval_seq(u, 2), v({3}));
    try {
        eval_seq(u, 3);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::bounded_sequence);
    }
    EXPECT_FALSE(IntVecSeq::geometric(2).horizon().has_value());
}

TEST(EvalSeq, InterleaveAndSubsequence)
{
    const IntVecSeq a = IntVecSeq::geometric(2);
    const IntVecSeq b = IntVecSeq::factorial();
    const IntVecSeq mix = IntVecSeq::interleave({a, b});
    // 1, 1, 2, 1, 4, 2, 8, 6
    const auto t = mix.terms(8);
    EXPECT_EQ(t[0], v({1}));
    EXPECT_EQ(t[4], v({4}));
    EXPECT_EQ(t[7], v({6}));

    const IntVecSeq blocks = IntVecSeq::interleave({a, b}, {2, 1});
    // a0 a1 b0 a2 a3 b1 ...
    const auto tb = blocks.terms(6);
    EXPECT_EQ(tb[3], v({4}));
    EXPECT_EQ(tb[5], v({1}));

    const IntVecSeq sub = IntVecSeq::subsequence(a, 3, 1);
    EXPECT_EQ(eval_seq(sub, 2), v({128}));
    EXPECT_THROW(IntVecSeq::subsequence(a, 0, 0), Error);
}

TEST(EvalSeq, InterleaveHorizonIsFirstMissingTerm)
{
    const IntVecSeq fin = IntVecSeq::explicit_list({v({5}), v({6})});
    const IntVecSeq mix = IntVecSeq::interleave({IntVecSeq::geometric(2), fin}, {1, 1});
    // g0 f0 g1 f1 g2, then f2 is missing
    ASSERT_EQ(mix.horizon(), 5U);
    EXPECT_NO_THROW(mix.terms(5));
    EXPECT_THROW(mix.eval(5), Error);
    const IntVecSeq sub = IntVecSeq::subsequence(IntVecSeq::explicit_list({v({1}), v({2}), v({3}), v({4}), v({5})}), 2, 1);
    EXPECT_EQ(sub.horizon(), 2U);
}

TEST(EvalSeq, BatchedTermsMatchPointwise)
{
    const IntVecSeq u = parse_seq("interleave[2,1](sub(2,1):fact;cfden:quad:(-1+1*sqrt(5))/2@3)");
    const auto batch = u.terms(30);
    for (std::size_t n = 0; n < batch.size(); ++n)
        ASSERT_EQ(batch[n], u.eval(n)) << n;
}

TEST(ParseSeq, RoundTrip)
{
    for (const char* text : {"geom:2", "fact", "geom:10@(1,-3)", "cfden:quad:(-1+1*sqrt(5))/2", "const:6", "const:(1,2)",
                             "list:1,2,3", "list:(1,0),(0,1)", "interleave(geom:2;fact)", "interleave[3,1](geom:2;const:5)",
                             "sub(2,1):fact", "sub(3,0):interleave(geom:3;list:1,2)", "fact@7"}) {
        const IntVecSeq u = parse_seq(text);
        EXPECT_EQ(u.to_string(), text);
        const std::size_t n = std::min<std::size_t>(4, u.horizon().value_or(4));
        EXPECT_EQ(parse_seq(u.to_string()).terms(n), u.terms(n)) << text;
    }
}

TEST(ParseSeq, Errors)
{
    for (const char* bad : {"", "geom:1", "geom:x", "cfden:1/3", "interleave(geom:2;fact", "sub(0,1):fact", "list:",
                            "list:(1,2),3", "warp:2", "interleave[0,1](geom:2;fact)", "interleave(geom:2@(1,1);fact)"}) {
        EXPECT_THROW(parse_seq(bad), Error) << bad;
    }
    try {
        parse_seq("interleave(geom:2;bogus)");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.position(), 18U);
    }
}

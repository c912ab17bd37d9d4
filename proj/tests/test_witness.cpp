#include <gclose/witness.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace gclose;

namespace {

CirclePoint rat(long long p, long long q) { return CirclePoint::from_rational(Int(p), Int(q)); }

const CirclePoint golden = CirclePoint::from_quadratic(-1, 1, 2, 5);
const CirclePoint silver = CirclePoint::from_quadratic(-1, 1, 1, 2);

PrecompactTopology on_T(std::vector<CirclePoint> gens)
{
    std::vector<std::vector<CirclePoint>> chars;
    for (auto& g : gens)
        chars.push_back({g});
    return PrecompactTopology::on_free(1, chars);
}

Int fibonacci(std::size_t n)
{
    Int a = 0, b = 1;
    for (std::size_t i = 0; i < n; ++i) {
        Int c = a + b;
        a = b;
        b = c;
    }
    return a;
}

} // namespace

TEST(FindWitness, GoldenAgainstOneHalf)
{
    const auto w = find_witness(on_T({golden}), {rat(1, 2)}, Rational(1, 2));
    ASSERT_TRUE(w.has_value());
    EXPECT_EQ(w->strategy, "cf");
    const auto terms = w->sequence.terms(w->certified_terms);
    for (std::size_t n = 0; n < terms.size(); ++n)
        EXPECT_EQ(terms[n][0], fibonacci(3 * n + 1)) << n;
    for (const auto& e : w->escape_certificate)
        EXPECT_EQ(e.norm, Enclosure::exact(Rational(1, 2)));
    EXPECT_TRUE(check_witness(*w, on_T({golden}), {rat(1, 2)}));
    EXPECT_FALSE(check_witness(*w, on_T({golden}), {rat(1, 3)}));
}

TEST(FindWitness, AnnihilatorShortcut)
{
    const auto w = find_witness(on_T({rat(1, 3)}), {rat(1, 2)}, Rational(1, 2));
    ASSERT_TRUE(w.has_value());
    EXPECT_EQ(w->strategy, "annihilator");
    EXPECT_EQ(w->sequence.to_string(), "const:3");
    EXPECT_TRUE(check_witness(*w, on_T({rat(1, 3)}), {rat(1, 2)}));
}

TEST(FindWitness, MemberGetsNoWitness)
{
    for (const Rational& delta : default_delta_ladder())
        EXPECT_FALSE(find_witness(on_T({rat(1, 3)}), {rat(2, 3)}, delta).has_value());
    EXPECT_FALSE(find_witness(on_T({golden}), {golden}, Rational(1, 12)).has_value());
}

TEST(FindWitness, DeltaOutOfRange)
{
    for (const Rational& bad : {Rational(0), Rational(-1, 3), Rational(2, 3)}) {
        try {
            find_witness(on_T({golden}), {rat(1, 2)}, bad);
            FAIL();
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::rejected_input);
        }
    }
    EXPECT_THROW(find_witness(on_T({golden}), {rat(1, 2), rat(1, 2)}, Rational(1, 2)), Error);
}

TEST(FindWitness, LatticeStrategyForTwoIrrationals)
{
    const PrecompactTopology H = on_T({golden, silver});
    const auto w = find_witness(H, {rat(1, 2)}, Rational(1, 2));
    ASSERT_TRUE(w.has_value());
    EXPECT_EQ(w->strategy, "lattice");
    EXPECT_TRUE(check_witness(*w, H, {rat(1, 2)}));
}

TEST(FindWitness, QuadraticChiThroughTheCfOrbit)
{
    // q_n * (golden + 1/3) approaches q_n/3 mod 1; the limit norm 1/3 is only
    // approached, so the cf strategy needs delta strictly below it
    const PrecompactTopology H = on_T({golden});
    const std::vector<CirclePoint> chi{add(golden, rat(1, 3))};
    const auto w = find_witness(H, chi, Rational(1, 6));
    ASSERT_TRUE(w.has_value());
    EXPECT_EQ(w->strategy, "cf");
    EXPECT_TRUE(check_witness(*w, H, chi));
}

TEST(CheckWitness, TamperedCertificatesFail)
{
    const PrecompactTopology H = on_T({golden});
    const auto w = find_witness(H, {rat(1, 2)}, Rational(1, 2));
    ASSERT_TRUE(w.has_value());

    Witness fewer = *w;
    fewer.null_certificate.pop_back();
    EXPECT_FALSE(check_witness(fewer, H, {rat(1, 2)}));

    Witness shifted = *w;
    shifted.sequence = IntVecSeq::subsequence(IntVecSeq::cf_denominators(golden), 3, 2); // even terms
    EXPECT_FALSE(check_witness(shifted, H, {rat(1, 2)}));

    Witness wrong_bound = *w;
    wrong_bound.null_certificate[3].bound = Rational(1, 2);
    EXPECT_FALSE(check_witness(wrong_bound, H, {rat(1, 2)}));

    Witness greedy = *w;
    greedy.escape_threshold = Rational(2, 3);
    EXPECT_FALSE(check_witness(greedy, H, {rat(1, 2)}));

    Witness zero = *w;
    zero.sequence = IntVecSeq::constant({Int(0)});
    EXPECT_FALSE(check_witness(zero, H, {rat(1, 2)}));
}

TEST(GMembership, Examples)
{
    const auto a = g_membership_experiment(on_T({golden}), {rat(1, 2)});
    EXPECT_TRUE(a.not_in_closure());
    EXPECT_EQ(a.deltas_tried.size(), 1U);

    const auto b = g_membership_experiment(on_T({golden}), {golden});
    EXPECT_FALSE(b.not_in_closure());
    EXPECT_EQ(b.deltas_tried, default_delta_ladder());

    const auto c = g_membership_experiment(on_T({rat(1, 2), rat(1, 3)}), {rat(1, 5)});
    ASSERT_TRUE(c.not_in_closure());
    EXPECT_EQ(c.witness->strategy, "annihilator");
    const Int a0 = c.witness->sequence.eval(0)[0];
    EXPECT_EQ(a0 % 6, 0);
    EXPECT_GE(norm(int_mul(a0, rat(1, 5))).lower, c.witness->escape_threshold);
}

TEST(GMembership, WitnessSequenceSeparatesThroughSMembership)
{
    // H <= s_u and chi outside s_u for the witness sequence u
    const PrecompactTopology H = on_T({golden, rat(1, 4)});
    const auto out = g_membership_experiment(H, {rat(1, 3)});
    ASSERT_TRUE(out.not_in_closure());
    const IntVecSeq& u = out.witness->sequence;
    EXPECT_TRUE(t_membership(u, golden).is_exact_in());
    EXPECT_TRUE(t_membership(u, rat(1, 4)).is_exact_in());
    EXPECT_TRUE(t_membership(u, rat(1, 3)).is_exact_out());
}

TEST(Bds, GoldenAndSilver)
{
    const BdsReport g = bds_experiment(golden, {rat(1, 2), rat(1, 3), golden});
    EXPECT_TRUE(g.inclusion_verified);
    EXPECT_EQ(g.multiples.size(), 21U);
    ASSERT_EQ(g.probes.size(), 3U);
    EXPECT_TRUE(g.probes[0].outcome.not_in_closure());
    EXPECT_TRUE(g.probes[1].outcome.not_in_closure());
    EXPECT_FALSE(g.probes[2].outcome.not_in_closure());

    const BdsReport s = bds_experiment(silver, {rat(1, 2)});
    ASSERT_TRUE(s.probes[0].outcome.not_in_closure());
    // the selected Pell denominators are odd
    for (const auto& t : s.probes[0].outcome.witness->sequence.terms(20))
        EXPECT_EQ(t[0] % 2, 1);

    EXPECT_THROW(bds_experiment(rat(1, 2), {rat(1, 3)}), Error);
    EXPECT_THROW(bds_experiment(golden, {}), Error);
}

TEST(WitnessProperties, FuzzRationalNonMembersAndMembers)
{
    std::mt19937_64 rng(53);
    std::uniform_int_distribution<int> qd(2, 30);
    int witnessed = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t k = 1 + trial % 2, m = 1 + (trial / 2) % 2;
        std::vector<std::vector<CirclePoint>> gens(m);
        for (auto& g : gens)
            for (std::size_t j = 0; j < k; ++j) {
                const int q = qd(rng);
                g.push_back(rat(std::uniform_int_distribution<int>(0, q - 1)(rng), q));
            }
        const PrecompactTopology H = PrecompactTopology::on_free(k, gens);

        // a member: integer combination of generators
        std::vector<CirclePoint> member(k);
        for (const auto& g : gens) {
            const int c = std::uniform_int_distribution<int>(-5, 5)(rng);
            for (std::size_t j = 0; j < k; ++j)
                member[j] = add(member[j], int_mul(c, g[j]));
        }
        ASSERT_FALSE(g_membership_experiment(H, member).not_in_closure());

        std::vector<CirclePoint> chi(k);
        for (auto& x : chi) {
            const int q = qd(rng);
            x = rat(std::uniform_int_distribution<int>(0, q - 1)(rng), q);
        }
        DualSubgroup Hd{H.ambient, H.characters};
        if (contains(Hd, Character{chi, {}}))
            continue;
        const auto out = g_membership_experiment(H, chi);
        ASSERT_TRUE(out.not_in_closure()) << trial;
        ASSERT_TRUE(check_witness(*out.witness, H, chi));
        ++witnessed;
    }
    EXPECT_GT(witnessed, 40);
}

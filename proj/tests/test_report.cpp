#include <gclose/report.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace gclose;
namespace rp = gclose::report;

namespace {

CirclePoint rat(long long p, long long q) { return CirclePoint::from_rational(Int(p), Int(q)); }

const CirclePoint golden = CirclePoint::from_quadratic(-1, 1, 2, 5);

PrecompactTopology on_T(std::vector<CirclePoint> gens)
{
    std::vector<std::vector<CirclePoint>> chars;
    for (auto& g : gens)
        chars.push_back({g});
    return PrecompactTopology::on_free(1, chars);
}

rp::Report wrap(rp::json result, rp::Provenance p = rp::Provenance::exact)
{
    return {{"gclose", "test"}, "0.1.0", {{"horizon", 512}}, std::move(result), 1.25, p};
}

} // namespace

TEST(ReportJson, BigIntegersAreDecimalStrings)
{
    const Int big = pow2(200) + 7;
    const rp::json j = rp::to_json(big);
    ASSERT_TRUE(j.is_string());
    EXPECT_EQ(rp::int_from_json(j), big);
    EXPECT_EQ(rp::rational_from_json(rp::to_json(Rational(-3, 8))), Rational(-3, 8));
    EXPECT_THROW(rp::int_from_json(rp::json(5)), Error);
}

TEST(ReportJson, VerdictsRoundTrip)
{
    const IntVecSeq fib = IntVecSeq::cf_denominators(golden);
    std::vector<Verdict> vs{t_membership(IntVecSeq::geometric(2), rat(1, 3)), t_membership(IntVecSeq::geometric(2), rat(3, 8)),
                            t_membership(fib, int_mul(4, golden)), t_membership(IntVecSeq::factorial(), golden)};
    MembershipPolicy tight;
    tight.horizon = 40;
    tight.tolerance = Rational(1, 2);
    vs.push_back(t_membership(IntVecSeq::explicit_list({{Int(0)}, {Int(0)}, {Int(0)}}), golden, tight));
    for (const auto& v : vs) {
        const Verdict back = rp::verdict_from_json(rp::json::parse(rp::to_json(v).dump()));
        EXPECT_EQ(back, v) << v.reason;
    }
}

TEST(ReportJson, GroupObjectsRoundTrip)
{
    const IntMatrix M = parse_matrix("2,4,4;-6,6,12;10,-4,-16");
    const SmithForm f = smith_normal_form(M);
    const SmithForm g = rp::smith_from_json(rp::to_json(f));
    EXPECT_EQ(g.U, f.U);
    EXPECT_EQ(g.D, f.D);
    EXPECT_EQ(g.V, f.V);

    const FgAbelianGroup A{1, {Int(2), Int(4)}};
    EXPECT_EQ(rp::group_from_json(rp::to_json(A)), A);

    const DualSubgroup H{A, {Character{{rat(1, 3)}, {Int(1), Int(2)}}, Character{{golden}, {Int(0), Int(0)}}}};
    const Sublattice L = annihilator(H);
    EXPECT_EQ(rp::sublattice_from_json(rp::to_json(L)), L);
    const ClosureDescription c = closure_in_dual(H);
    const ClosureDescription c2 = rp::closure_from_json(rp::to_json(c));
    EXPECT_EQ(c2.finite_generators, c.finite_generators);
    EXPECT_EQ(c2.torus_directions, c.torus_directions);
    EXPECT_EQ(annihilator(c2), annihilator(c));
}

TEST(ReportJson, WitnessSurvivesSerializationAndReverifies)
{
    const PrecompactTopology H = on_T({golden});
    const std::vector<CirclePoint> chi{rat(1, 2)};
    const auto w = find_witness(H, chi, Rational(1, 2));
    ASSERT_TRUE(w.has_value());

    const rp::json result{{"topology", rp::to_json(H)}, {"chi", rp::array_json(chi)}, {"witness", rp::to_json(*w)}};
    const rp::Report r = wrap(result);
    const rp::Report back = rp::parse_report(rp::serialize(r));
    EXPECT_EQ(back, r);
    EXPECT_TRUE(rp::recheck_witness(back.result));

    const Witness w2 = rp::witness_from_json(back.result["witness"]);
    EXPECT_EQ(w2.sequence.to_string(), w->sequence.to_string());
    EXPECT_EQ(w2.null_certificate, w->null_certificate);
    EXPECT_EQ(w2.escape_certificate, w->escape_certificate);
}

TEST(ReportJson, TamperedWitnessInReportFailsRecheck)
{
    const PrecompactTopology H = on_T({golden});
    const std::vector<CirclePoint> chi{rat(1, 2)};
    const auto w = find_witness(H, chi, Rational(1, 2));
    ASSERT_TRUE(w.has_value());
    rp::json result{{"topology", rp::to_json(H)}, {"chi", rp::array_json(chi)}, {"witness", rp::to_json(*w)}};
    result["witness"]["sequence"] = "sub(3,1):cfden:quad:(-1+1*sqrt(5))/2";
    EXPECT_FALSE(rp::recheck_witness(result));
    result["witness"]["sequence"] = "sub(3,0):cfden:quad:(-1+1*sqrt(5))/2";
    result["chi"] = rp::json::array({"1/3"});
    EXPECT_FALSE(rp::recheck_witness(result));
}

TEST(ReportJson, RandomWitnessReportsRoundTrip)
{
    std::mt19937_64 rng(71);
    std::uniform_int_distribution<int> qd(2, 24);
    int checked = 0;
    for (int trial = 0; trial < 30; ++trial) {
        const int q1 = qd(rng), q2 = qd(rng), q3 = qd(rng);
        const PrecompactTopology H = PrecompactTopology::on_free(2, {{rat(1, q1), rat(trial % q2, q2)}});
        const std::vector<CirclePoint> chi{rat(1, q3), rat(0, 1)};
        const GMembershipOutcome g = g_membership_experiment(H, chi);
        const rp::json result{{"topology", rp::to_json(H)}, {"chi", rp::array_json(chi)}, {"g_membership", rp::to_json(g)}};
        const rp::Report r = wrap(result, g.not_in_closure() ? rp::Provenance::exact : rp::Provenance::undecided);
        const rp::Report back = rp::parse_report(rp::serialize(r));
        ASSERT_EQ(back, r);
        if (g.not_in_closure()) {
            ASSERT_TRUE(rp::recheck_witness(back.result));
            ++checked;
        }
    }
    EXPECT_GT(checked, 10);
}

TEST(ReportJson, MalformedReportsAreStructuredErrors)
{
    for (const char* bad : {"", "{", "[]", "{\"schema_version\": 99}", "{\"schema_version\": 1}",
                            "{\"schema_version\":1,\"command\":[1],\"version\":\"x\",\"config\":{},\"result\":{},"
                            "\"timing\":{\"elapsed_ms\":0},\"provenance\":\"exact\"}",
                            "{\"schema_version\":1,\"command\":[],\"version\":\"x\",\"config\":{},\"result\":{},"
                            "\"timing\":{\"elapsed_ms\":0},\"provenance\":\"maybe\"}"}) {
        EXPECT_THROW(rp::parse_report(bad), ParseError) << bad;
    }
    EXPECT_THROW(rp::verdict_from_json(rp::json{{"status", "exact_in"}}), ParseError);
    EXPECT_THROW(rp::witness_from_json(rp::json{{"sequence", "warp:1"}}), Error);
}

TEST(ReportJson, ProvenanceIsTheWeakestVerdict)
{
    Verdict in = Verdict::exact_in(0, "x");
    Verdict cert;
    cert.status = Verdict::Status::certified_up_to;
    Verdict und;
    EXPECT_EQ(rp::provenance_of({&in}), rp::Provenance::exact);
    EXPECT_EQ(rp::provenance_of({&in, &cert}), rp::Provenance::certified_up_to);
    EXPECT_EQ(rp::provenance_of({&cert, &und, &in}), rp::Provenance::undecided);
}

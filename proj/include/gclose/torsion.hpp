#pragma once

// Membership in s_u(G) = {x : <u_n, x> -> 0 in T} for G = T^k, and in
// t_u(T) for k = 1.
//
// Decision ladder:
//   1. zero point, or a scalar generator whose pattern annihilates x: in.
//   2. geometric / factorial generators at rational x: divisibility.
//   3. any closed-form generator whose orbit is finite-state (see orbit.hpp):
//      full-state cycle detection.
//   4. otherwise a certified scan to the policy horizon; never exact.

#include "orbit.hpp"
#include "search.hpp"
#include "verdict.hpp"

#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace gclose {

struct MembershipPolicy {
    std::size_t horizon = 512;
    Rational tolerance = Rational(Int(1), pow2(20));
    std::size_t state_cap = 1'000'000;
};

namespace detail {

inline const std::vector<Int>* scalar_pattern(const IntVecSeq& u)
{
    return std::visit(
        [](const auto& n) -> const std::vector<Int>* {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, seq::Geometric> || std::is_same_v<T, seq::Factorial> ||
                          std::is_same_v<T, seq::CFDenominators> || std::is_same_v<T, seq::Constant>)
                return &n.pattern;
            else
                return nullptr;
        },
        u.node());
}

inline std::optional<Verdict> geometric_decision(const seq::Geometric& g, const CirclePoint& z)
{
    // b^n * A/Q -> 0 iff Q | b^n eventually iff every prime of Q divides b
    Int rest = z.den();
    for (Int d = gcd(rest, g.base); d > 1; d = gcd(rest, g.base))
        rest /= d;
    if (rest == 1) {
        std::size_t n = 0;
        Int power = 1 % z.den();
        while (power != 0) {
            power = mod(power * g.base, z.den());
            ++n;
        }
        return Verdict::exact_in(n, "every prime factor of " + z.den().str() + " divides " + g.base.str() + ", so " +
                                        g.base.str() + "^n * " + z.to_string() + " = 0 mod 1 for n >= " + std::to_string(n));
    }
    Verdict v = Verdict::exact_out("the factor " + rest.str() + " of the denominator is coprime to " + g.base.str() +
                                   ", so ||" + g.base.str() + "^n * " + z.to_string() + "|| >= 1/" + z.den().str() + " for all n");
    v.escape_lower_bound = Rational(Int(1), z.den());
    return v;
}

inline Verdict factorial_decision(const CirclePoint& z)
{
    const Int& Q = z.den();
    std::size_t n = 0;
    if (Q < 10'000'000) {
        Int f = 1 % Q;
        while (f != 0) {
            ++n;
            f = mod(f * n, Q);
        }
    } else {
        n = Q.convert_to<std::size_t>();
    }
    return Verdict::exact_in(n, Q.str() + " divides n! for n >= " + std::to_string(n));
}

inline Verdict verdict_from_cycle(const OrbitCycle& cycle)
{
    const std::size_t end = cycle.preperiod + cycle.period;
    std::optional<std::size_t> escape;
    Rational best = -1;
    for (std::size_t i = cycle.preperiod; i < end; ++i) {
        const auto& v = cycle.outputs[i];
        if (v.is_zero())
            continue;
        const Rational lower = norm(v.point()).lower;
        if (!escape || lower > best) {
            escape = i;
            best = lower;
        }
    }
    if (!escape) {
        std::size_t from = 0;
        for (std::size_t i = 0; i < cycle.preperiod; ++i)
            if (!cycle.outputs[i].is_zero())
                from = i + 1;
        const std::string cyc = " (cycle of length " + std::to_string(cycle.period) + " starting at n = " +
                                std::to_string(cycle.preperiod) + ")";
        if (cycle.approximate)
            return Verdict::exact_in(from, "q_n * x = lambda*p_n + mu*q_n + lambda*(q_n*alpha - p_n) with |q_n*alpha - p_n| < "
                                           "1/q_(n+1); the rational part is 0 mod 1 from n = " +
                                               std::to_string(from) + cyc);
        return Verdict::exact_in(from, "residue orbit is 0 from n = " + std::to_string(from) + cyc);
    }
    const CirclePoint value = cycle.outputs[*escape].point();
    Verdict v = Verdict::exact_out(std::string(cycle.approximate ? "limit value " : "value ") + value.to_string() + " (norm " + gclose::to_string(norm(value).upper) +
                                   ") recurs at n = " + std::to_string(*escape) + " + " + std::to_string(cycle.period) +
                                   "j for all j >= 0");
    v.escape_index = escape;
    v.period = cycle.period;
    v.escape_value = value;
    return v;
}

inline std::optional<Verdict> exact_decision(const IntVecSeq& u, const std::vector<CirclePoint>& x, const MembershipPolicy& policy)
{
    if (std::all_of(x.begin(), x.end(), [](const CirclePoint& p) { return p.is_zero(); }))
        return Verdict::exact_in(0, "x = 0 is annihilated by every character");

    if (const auto* pattern = scalar_pattern(u)) {
        std::optional<CirclePoint> z;
        try {
            z = pair(*pattern, x);
        } catch (const Error&) {
        }
        if (z && z->is_zero())
            return Verdict::exact_in(0, "<u_n, x> = s_n * <pattern, x> and <pattern, x> = 0");
        if (z && z->is_rational()) {
            if (const auto* g = std::get_if<seq::Geometric>(&u.node())) {
                auto v = geometric_decision(*g, *z);
                if (v->is_exact_out()) {
                    // attach the periodic escape when the orbit is small enough to walk
                    if (auto machine = build_orbit(u, x))
                        if (auto cycle = find_cycle(*machine, policy.state_cap)) {
                            Verdict periodic = verdict_from_cycle(*cycle);
                            v->escape_index = periodic.escape_index;
                            v->period = periodic.period;
                            v->escape_value = periodic.escape_value;
                        }
                }
                return v;
            }
            if (std::holds_alternative<seq::Factorial>(u.node()))
                return factorial_decision(*z);
        }
    }
    auto machine = build_orbit(u, x);
    if (!machine)
        return std::nullopt;
    auto cycle = find_cycle(*machine, policy.state_cap);
    if (!cycle)
        return std::nullopt;
    return verdict_from_cycle(*cycle);
}

inline Verdict scan_decision(const IntVecSeq& u, const std::vector<CirclePoint>& x, const MembershipPolicy& policy,
                             std::string why_not_exact)
{
    Verdict v;
    std::size_t N = policy.horizon;
    if (auto h = u.horizon())
        N = std::min(N, *h);
    v.horizon = N;
    if (N == 0) {
        v.reason = why_not_exact + "; empty scan";
        return v;
    }
    std::vector<std::vector<Int>> terms;
    try {
        terms = u.terms(N);
        for (const auto& t : terms)
            v.trace.push_back(norm(pair(t, x)));
    } catch (const Error& e) {
        v.trace.clear();
        v.reason = why_not_exact + "; scan impossible: " + e.what();
        return v;
    }
    // the exact bound lives in worst_bound; reasons only need something readable
    const auto brief = [](const Rational& r) {
        std::string s = gclose::to_string(r);
        if (s.size() <= 24)
            return s;
        std::ostringstream o;
        o << "~" << std::setprecision(6) << static_cast<double>(r);
        return o.str();
    };
    const std::size_t tail = N / 2;
    Rational worst = 0;
    for (std::size_t n = tail; n < N; ++n)
        worst = std::max(worst, v.trace[n].upper);
    v.worst_bound = worst;
    if (worst <= policy.tolerance) {
        v.status = Verdict::Status::certified_up_to;
        v.reason = why_not_exact + "; all norms for " + std::to_string(tail) + " <= n < " + std::to_string(N) +
                   " are <= " + brief(worst) + " (tolerance " + gclose::to_string(policy.tolerance) + ")";
    } else {
        v.status = Verdict::Status::undecided;
        v.reason = why_not_exact + "; the scan to n = " + std::to_string(N) + " reaches norm " + brief(worst) +
                   " in its second half";
    }
    return v;
}

} // namespace detail

inline Verdict s_membership(const IntVecSeq& u, const std::vector<CirclePoint>& x, const MembershipPolicy& policy = {})
{
    if (u.dimension() != x.size())
        throw Error(ErrorCode::dimension_mismatch, "sequence has dimension " + std::to_string(u.dimension()) +
                                                       " but the point has " + std::to_string(x.size()) + " coordinates");
    if (auto exact = detail::exact_decision(u, x, policy))
        return *exact;
    return detail::scan_decision(u, x, policy, "no exact decision procedure applies");
}

inline Verdict t_membership(const IntVecSeq& u, const CirclePoint& x, const MembershipPolicy& policy = {})
{
    if (u.dimension() != 1)
        throw Error(ErrorCode::dimension_mismatch, "t-membership needs a sequence of integers (k = 1)");
    return s_membership(u, {x}, policy);
}

struct ProfileEntry {
    Int denominator;
    Verdict verdict;
};

// Verdicts for x = 1/q, q = 1 .. max_den.
inline std::vector<ProfileEntry> rational_torsion_profile(const IntVecSeq& u, std::size_t max_den, const MembershipPolicy& policy = {})
{
    if (u.dimension() != 1)
        throw Error(ErrorCode::dimension_mismatch, "the torsion profile needs a sequence of integers (k = 1)");
    if (max_den < 1)
        throw Error(ErrorCode::rejected_input, "max_den must be >= 1");
    std::vector<ProfileEntry> out;
    for (std::size_t q = 1; q <= max_den; ++q)
        out.push_back({Int(q), t_membership(u, CirclePoint::from_rational(Int(1), Int(q)), policy)});
    return out;
}

inline std::vector<Int> admitted_denominators(const std::vector<ProfileEntry>& profile)
{
    std::vector<Int> out;
    for (const auto& e : profile)
        if (e.verdict.is_exact_in())
            out.push_back(e.denominator);
    return out;
}

struct NullSequence {
    std::optional<SearchResult> found; // nullopt: budget exhausted, nothing claimed
};

// A certified nontrivial null sequence of (Z^k, tau_H).
inline NullSequence null_sequence(const PrecompactTopology& topology, const SearchBudget& budget = {})
{
    const auto gens = topology.free_characters();
    for (const auto& h : gens)
        detail::require_single_field(h, "a generating character");
    const std::size_t k = topology.dimension();
    static const Rational unused = 0;
    if (auto r = search_annihilator(k, gens, nullptr, unused, budget))
        return {r};
    if (auto r = search_cf(k, gens, nullptr, unused, budget))
        return {r};
    if (auto r = search_lattice(k, gens, nullptr, unused, budget))
        return {r};
    return {};
}

} // namespace gclose

#pragma once

#include "circle.hpp"

#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace gclose {

struct CFPeriod {
    std::size_t start = 0;
    std::size_t length = 0;

    friend bool operator==(const CFPeriod&, const CFPeriod&) = default;
};

// Simple continued fraction [a0; a1, a2, ...]. Quadratic irrationals carry
// their period, so digit(i) is defined for every i.
struct CFExpansion {
    std::vector<Int> partial_quotients;
    std::optional<CFPeriod> period;

    bool is_finite() const { return !period.has_value(); }

    // Folds an index into the stored prefix using the period.
    std::size_t fold(std::size_t i) const
    {
        if (i < partial_quotients.size() || !period)
            return i;
        return period->start + (i - period->start) % period->length;
    }

    const Int& digit(std::size_t i) const
    {
        const std::size_t j = fold(i);
        if (j >= partial_quotients.size())
            throw Error(ErrorCode::bounded_expansion,
                        "continued fraction has only " + std::to_string(partial_quotients.size()) + " terms");
        return partial_quotients[j];
    }

    friend bool operator==(const CFExpansion&, const CFExpansion&) = default;
};

struct Convergent {
    Int p;
    Int q;

    friend bool operator==(const Convergent&, const Convergent&) = default;
};

namespace detail {

inline CFExpansion cf_rational(Int num, Int den)
{
    CFExpansion cf;
    while (den != 0) {
        const Int q = floor_div(num, den);
        cf.partial_quotients.push_back(q);
        const Int r = num - q * den;
        num = den;
        den = r;
    }
    return cf;
}

// Complete-quotient recurrence on (P + sqrt(D))/Q with Q | D - P^2.
inline CFExpansion cf_quadratic(const CirclePoint& x, std::size_t max_terms, std::size_t state_cap)
{
    Int P = x.b() > 0 ? x.a() : Int(-x.a());
    Int Q = x.b() > 0 ? x.c() : Int(-x.c());
    Int D = x.b() * x.b() * x.d();
    if (mod(D - P * P, Q) != 0) {
        const Int aq = abs(Q);
        P *= aq;
        D *= Q * Q;
        Q *= aq;
    }
    const Int s = isqrt(D);

    CFExpansion cf;
    std::map<std::pair<Int, Int>, std::size_t> seen;
    while (cf.partial_quotients.size() < state_cap) {
        auto [it, inserted] = seen.emplace(std::make_pair(P, Q), cf.partial_quotients.size());
        if (!inserted) {
            cf.period = CFPeriod{it->second, cf.partial_quotients.size() - it->second};
            break;
        }
        const Int a = Q > 0 ? floor_div(P + s, Q) : floor_div(-(P + s + 1), -Q);
        cf.partial_quotients.push_back(a);
        P = a * Q - P;
        Q = (D - P * P) / Q;
    }
    if (cf.period) {
        while (cf.partial_quotients.size() < max_terms)
            cf.partial_quotients.push_back(cf.digit(cf.partial_quotients.size()));
    }
    return cf;
}

} // namespace detail

inline constexpr std::size_t cf_state_cap = 1'000'000;

inline CFExpansion cf_expand(const CirclePoint& x, std::size_t max_terms)
{
    if (max_terms < 1)
        throw Error(ErrorCode::rejected_input, "max_terms must be at least 1");
    if (x.is_rational())
        return detail::cf_rational(x.num(), x.den());
    return detail::cf_quadratic(x, max_terms, cf_state_cap);
}

// Convergents p_k/q_k for k = 0..n inclusive.
inline std::vector<Convergent> convergents(const CFExpansion& cf, std::size_t n)
{
    if (cf.is_finite() && n >= cf.partial_quotients.size())
        throw Error(ErrorCode::bounded_expansion, "requested convergent " + std::to_string(n) + " of a " +
                                                      std::to_string(cf.partial_quotients.size()) + "-term expansion");
    std::vector<Convergent> out;
    out.reserve(n + 1);
    Int p_prev = 1, q_prev = 0;
    Int p = cf.digit(0), q = 1;
    out.push_back({p, q});
    for (std::size_t k = 1; k <= n; ++k) {
        const Int& a = cf.digit(k);
        Int p_next = a * p + p_prev;
        Int q_next = a * q + q_prev;
        p_prev = std::move(p);
        q_prev = std::move(q);
        p = std::move(p_next);
        q = std::move(q_next);
        out.push_back({p, q});
    }
    return out;
}

// Exact value of a finite expansion.
inline Rational evaluate(const CFExpansion& cf)
{
    if (!cf.is_finite())
        throw Error(ErrorCode::bounded_expansion, "cannot evaluate an infinite expansion");
    if (cf.partial_quotients.empty())
        return 0;
    Rational v = cf.partial_quotients.back();
    for (std::size_t i = cf.partial_quotients.size() - 1; i-- > 0;)
        v = Rational(cf.partial_quotients[i]) + Rational(1) / v;
    return v;
}

inline std::string to_string(const CFExpansion& cf)
{
    std::string s = "[";
    for (std::size_t i = 0; i < cf.partial_quotients.size(); ++i) {
        if (i == 1)
            s += "; ";
        else if (i > 1)
            s += ", ";
        s += cf.partial_quotients[i].str();
    }
    if (cf.period)
        s += ", ...";
    s += "]";
    return s;
}

} // namespace gclose

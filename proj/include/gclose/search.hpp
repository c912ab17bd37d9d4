#pragma once

// Search for tau_H-null sequences (a_n) in Z^k, optionally keeping a target
// character chi at norm >= delta on every term. Three strategies share one
// certificate format: term n satisfies max_i ||<a_n, h_i>|| <= 2^-n exactly,
// and, when chi is given, ||<a_n, chi>|| >= delta exactly.
//
//   annihilator  constant a in the joint kernel H^perp
//   cf           a_n = N*q_(s+m*n) along continued-fraction denominators of
//                the single irrational generator (k = 1)
//   lattice      short vectors of a simultaneous-approximation lattice

#include "duality.hpp"
#include "lattice.hpp"
#include "orbit.hpp"
#include "sequence.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace gclose {

struct SearchBudget {
    std::size_t max_terms = 48;
    std::size_t max_candidates = 4096;
};

struct NullCertificateTerm {
    std::size_t n = 0;
    Enclosure max_norm; // max_i ||<a_n, h_i>||
    Rational bound;     // 2^-n

    friend bool operator==(const NullCertificateTerm&, const NullCertificateTerm&) = default;
};

struct EscapeCertificateTerm {
    std::size_t n = 0;
    Enclosure norm; // ||<a_n, chi>||

    friend bool operator==(const EscapeCertificateTerm&, const EscapeCertificateTerm&) = default;
};

struct SearchResult {
    IntVecSeq sequence;
    std::string strategy;
    std::size_t certified_terms = 0;
    std::vector<NullCertificateTerm> null_certificate;
    std::vector<EscapeCertificateTerm> escape_certificate;
};

using CharacterList = std::vector<std::vector<CirclePoint>>;

inline Rational dyadic_bound(std::size_t n) { return Rational(Int(1), pow2(static_cast<unsigned>(n))); }

// Builds and checks certificates for the first `terms` terms; nullopt if any bound fails.
inline std::optional<SearchResult> certify(const IntVecSeq& sequence, const std::string& strategy, const CharacterList& gens,
                                           const std::vector<CirclePoint>* chi, const Rational& delta, std::size_t terms)
{
    if (auto h = sequence.horizon())
        terms = std::min(terms, *h);
    SearchResult out{sequence, strategy, terms, {}, {}};
    const auto values = sequence.terms(terms);
    for (std::size_t n = 0; n < terms; ++n) {
        const auto& a = values[n];
        if (std::all_of(a.begin(), a.end(), [](const Int& v) { return v == 0; }))
            return std::nullopt;
        const Rational bound = dyadic_bound(n);
        Enclosure worst = Enclosure::exact(0);
        for (const auto& h : gens) {
            const CirclePoint v = pair(a, h);
            if (!v.norm_le(bound))
                return std::nullopt;
            const Enclosure e = norm(v);
            if (e.upper > worst.upper)
                worst.upper = e.upper;
            if (e.lower > worst.lower)
                worst.lower = e.lower;
            if (!e.is_exact())
                worst.kind = Enclosure::Kind::interval;
        }
        if (worst.is_exact() && worst.lower != worst.upper)
            worst.kind = Enclosure::Kind::interval;
        out.null_certificate.push_back({n, worst, bound});
        if (chi) {
            const CirclePoint v = pair(a, *chi);
            if (!v.norm_ge(delta))
                return std::nullopt;
            out.escape_certificate.push_back({n, norm(v)});
        }
    }
    return out;
}

namespace detail {

inline bool is_zero_vector(const std::vector<Int>& v)
{
    return std::all_of(v.begin(), v.end(), [](const Int& x) { return x == 0; });
}

// First nonzero coordinate positive.
inline std::vector<Int> canonical_sign(std::vector<Int> v)
{
    for (const Int& x : v) {
        if (x == 0)
            continue;
        if (x < 0)
            for (Int& y : v)
                y = -y;
        break;
    }
    return v;
}

// <a, h> must stay inside one quadratic field for every integer vector a.
inline void require_single_field(const std::vector<CirclePoint>& h, const char* what)
{
    Int d = 0;
    for (const auto& x : h) {
        if (x.is_rational())
            continue;
        if (d != 0 && x.d() != d)
            throw Error(ErrorCode::incompatible_fields, std::string(what) + " mixes Q(sqrt(" + d.str() + ")) and Q(sqrt(" +
                                                            x.d().str() + ")); pairings would leave the supported fields");
        d = x.d();
    }
}

inline bool all_rational(const std::vector<CirclePoint>& v)
{
    return std::all_of(v.begin(), v.end(), [](const CirclePoint& p) { return p.is_rational(); });
}

struct ExtendedGcd {
    Int g, s, t; // g = s*a + t*b
};

inline ExtendedGcd extended_gcd(Int a, Int b)
{
    Int s0 = 1, s1 = 0, t0 = 0, t1 = 1;
    while (b != 0) {
        const Int q = floor_div(a, b);
        Int r = a - q * b;
        a = b;
        b = r;
        Int s2 = s0 - q * s1;
        s0 = s1;
        s1 = s2;
        Int t2 = t0 - q * t1;
        t0 = t1;
        t1 = t2;
    }
    if (a < 0)
        return {-a, -s0, -t0};
    return {a, s0, t0};
}

// Integer vectors c in [-R, R]^r ordered by max |c_i|, then lexicographically.
inline std::vector<std::vector<Int>> small_coefficient_vectors(std::size_t r, int R)
{
    std::vector<std::vector<Int>> all;
    std::vector<int> c(r, -R);
    if (r == 0)
        return all;
    while (true) {
        std::vector<Int> v(c.begin(), c.end());
        if (!is_zero_vector(v))
            all.push_back(std::move(v));
        std::size_t i = r;
        while (i > 0 && c[i - 1] == R) {
            c[i - 1] = -R;
            --i;
        }
        if (i == 0)
            break;
        ++c[i - 1];
    }
    std::stable_sort(all.begin(), all.end(), [](const auto& x, const auto& y) {
        Int mx = 0, my = 0;
        for (const auto& v : x)
            mx = std::max(mx, abs(v));
        for (const auto& v : y)
            my = std::max(my, abs(v));
        return mx < my;
    });
    return all;
}

inline std::vector<Int> combine(const std::vector<std::vector<Int>>& basis, const std::vector<Int>& coeffs, std::size_t k)
{
    std::vector<Int> a(k);
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = 0; j < k; ++j)
            a[j] += coeffs[i] * basis[i][j];
    return a;
}

// floor(2^bits * representative(x))
inline Int scaled_floor(const CirclePoint& x, unsigned bits)
{
    const Int s = pow2(bits);
    if (x.is_rational())
        return floor_div(x.num() * s, x.den());
    return floor_quadratic(x.a() * s, x.b() * s, x.c(), x.d());
}

} // namespace detail

// Strategy: constant sequence inside the joint kernel H^perp.
inline std::optional<SearchResult> search_annihilator(std::size_t k, const CharacterList& gens, const std::vector<CirclePoint>* chi,
                                                      const Rational& delta, const SearchBudget& budget)
{
    DualSubgroup H{FgAbelianGroup::free(k), {}};
    for (const auto& g : gens)
        H.generators.push_back(Character{g, {}});
    const auto basis = annihilator(H).generators();
    if (basis.empty())
        return std::nullopt;

    std::vector<Int> a;
    if (!chi) {
        a = basis.front();
    } else if (detail::all_rational(*chi)) {
        // The image of H^perp under chi is (1/N)Z/Z; hit floor(N/2)/N.
        Int N = 1;
        std::vector<Rational> values;
        for (const auto& b : basis) {
            values.push_back(pair(b, *chi).as_rational());
            N = lcm(N, denominator(values.back()));
        }
        if (N == 1)
            return std::nullopt;
        Int g = N;
        std::vector<Int> coeffs(basis.size());
        for (std::size_t i = 0; i < basis.size(); ++i) {
            const Int w = numerator(values[i] * N);
            const auto eg = detail::extended_gcd(g, w);
            for (auto& c : coeffs)
                c *= eg.s;
            coeffs[i] += eg.t;
            g = eg.g;
        }
        const Int j = N / 2;
        for (auto& c : coeffs) {
            c = mod(c * j, N);
            if (2 * c > N)
                c -= N;
        }
        a = detail::canonical_sign(detail::combine(basis, coeffs, k));
        if (!pair(a, *chi).norm_ge(delta))
            return std::nullopt;
    } else {
        const int radius = basis.size() <= 3 ? 4 : 2;
        for (const auto& c : detail::small_coefficient_vectors(basis.size(), radius)) {
            auto cand = detail::combine(basis, c, k);
            if (pair(cand, *chi).norm_ge(delta)) {
                a = detail::canonical_sign(std::move(cand));
                break;
            }
        }
        if (a.empty())
            return std::nullopt;
    }
    return certify(IntVecSeq::constant(a), "annihilator", gens, chi, delta, budget.max_terms);
}

// Strategy: continued-fraction denominators of the single irrational
// generator alpha of H <= T, scaled by the lcm N of the rational generators'
// denominators.
inline std::optional<SearchResult> search_cf(std::size_t k, const CharacterList& gens, const std::vector<CirclePoint>* chi,
                                             const Rational& delta, const SearchBudget& budget)
{
    if (k != 1 || gens.empty())
        return std::nullopt;
    std::optional<CirclePoint> alpha;
    Int N = 1;
    for (const auto& g : gens) {
        if (g[0].is_rational()) {
            N = lcm(N, g[0].den());
        } else if (!alpha) {
            alpha = g[0];
        } else if (*alpha != g[0]) {
            return std::nullopt;
        }
    }
    if (!alpha)
        return std::nullopt;
    const IntVecSeq base = IntVecSeq::cf_denominators(*alpha, {N});
    const CFExpansion& cf = std::get<seq::CFDenominators>(base.node()).cf;

    // convergent denominators, extended on demand
    std::vector<Int> q{1};
    Int q_prev = 0;
    auto q_at = [&](std::size_t i) -> const Int& {
        while (q.size() <= i) {
            Int next = cf.digit(q.size()) * q.back() + q_prev;
            q_prev = q.back();
            q.push_back(std::move(next));
        }
        return q[i];
    };

    std::size_t cls = 0;
    std::size_t period = 1;
    Rational lambda_scaled = 0;
    Rational gamma = 0;
    if (chi) {
        const auto parts = detail::decompose_in_field((*chi)[0], *alpha);
        if (!parts)
            return std::nullopt;
        lambda_scaled = parts->first * N;
        auto leaf = detail::make_cf_output_leaf(&cf, parts->first * N, parts->second * N);
        if (!leaf)
            return std::nullopt;
        const auto cycle = detail::find_cycle(*leaf, 1'000'000);
        if (!cycle)
            return std::nullopt;
        // Best residue class; ties go to the class whose progression starts earliest,
        // walking back into the preperiod while the value stays the same.
        bool found = false;
        for (std::size_t c = cycle->preperiod; c < cycle->preperiod + cycle->period; ++c) {
            const CirclePoint value = cycle->outputs[c].point();
            const Rational g = norm(value).lower;
            const bool eligible = g > delta || (g == delta && lambda_scaled == 0);
            if (!eligible)
                continue;
            std::size_t start = c;
            while (start >= cycle->period && cycle->outputs[start - cycle->period].point() == value)
                start -= cycle->period;
            if (!found || g > gamma || (g == gamma && start < cls)) {
                found = true;
                gamma = g;
                cls = start;
            }
        }
        if (!found)
            return std::nullopt;
        period = cycle->period;
    }
    const std::size_t step = period >= 2 ? period : 2 * period;
    std::size_t offset = cls;
    // q_(s+1) >= N keeps N/q_(s+m*n+1) <= 2^-n; the escape margin absorbs lambda*(q*alpha - p).
    for (std::size_t guard = 0; guard < 100'000; ++guard, offset += period) {
        const Int& next = q_at(offset + 1);
        if (next < N)
            continue;
        if (lambda_scaled != 0 && gamma > delta && Rational(abs(numerator(lambda_scaled)), denominator(lambda_scaled)) / Rational(next) > gamma - delta)
            continue;
        return certify(IntVecSeq::subsequence(base, step, offset), "cf", gens, chi, delta, budget.max_terms);
    }
    return std::nullopt;
}

// Strategy: simultaneous approximation. For scale 2^e the lattice rows are
//   (2^e * e_j | floor(2^(2e) * h_i[j]) for i)     j = 1..k
//   (0         | 2^(2e) * e_i)                      i = 1..m
// so a short vector carries a with every <a, h_i> close to an integer.
inline std::optional<SearchResult> search_lattice(std::size_t k, const CharacterList& gens, const std::vector<CirclePoint>* chi,
                                                  const Rational& delta, const SearchBudget& budget)
{
    const std::size_t m = gens.size();
    if (m == 0 || k == 0)
        return std::nullopt;
    const std::size_t T = budget.max_terms;
    std::vector<std::optional<std::vector<Int>>> filled(T);
    std::size_t remaining = T;
    std::size_t tested = 0;

    for (unsigned e = 4; e <= 512 && remaining > 0 && tested < budget.max_candidates; e *= 2) {
        const Int W = pow2(e);
        const Int S = pow2(2 * e);
        std::vector<std::vector<Int>> rows;
        for (std::size_t j = 0; j < k; ++j) {
            std::vector<Int> r(k + m);
            r[j] = W;
            for (std::size_t i = 0; i < m; ++i)
                r[k + i] = detail::scaled_floor(gens[i][j], 2 * e);
            rows.push_back(std::move(r));
        }
        for (std::size_t i = 0; i < m; ++i) {
            std::vector<Int> r(k + m);
            r[k + i] = S;
            rows.push_back(std::move(r));
        }
        lll_reduce(rows);

        std::set<std::vector<Int>> pool;
        auto add_candidate = [&](const std::vector<Int>& v) {
            std::vector<Int> a(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k));
            for (auto& x : a)
                x /= W;
            if (!detail::is_zero_vector(a))
                pool.insert(detail::canonical_sign(std::move(a)));
        };
        for (std::size_t i = 0; i < rows.size(); ++i) {
            add_candidate(rows[i]);
            for (std::size_t j = i + 1; j < rows.size(); ++j) {
                std::vector<Int> s(rows[i].size()), d(rows[i].size());
                for (std::size_t t = 0; t < s.size(); ++t) {
                    s[t] = rows[i][t] + rows[j][t];
                    d[t] = rows[i][t] - rows[j][t];
                }
                add_candidate(s);
                add_candidate(d);
            }
        }

        // level = largest n < T with max_i ||<a, h_i>|| <= 2^-n
        for (const auto& a : pool) {
            if (tested++ >= budget.max_candidates)
                break;
            if (chi && !pair(a, *chi).norm_ge(delta))
                continue;
            std::vector<CirclePoint> values;
            for (const auto& h : gens)
                values.push_back(pair(a, h));
            std::optional<std::size_t> level;
            for (std::size_t n = 0; n < T; ++n) {
                const Rational b = dyadic_bound(n);
                if (!std::all_of(values.begin(), values.end(), [&](const CirclePoint& v) { return v.norm_le(b); }))
                    break;
                level = n;
            }
            if (!level)
                continue;
            for (std::size_t n = 0; n <= *level; ++n)
                if (!filled[n]) {
                    filled[n] = a;
                    --remaining;
                }
        }
    }
    if (remaining > 0)
        return std::nullopt;
    std::vector<std::vector<Int>> terms;
    for (auto& f : filled)
        terms.push_back(std::move(*f));
    return certify(IntVecSeq::explicit_list(std::move(terms)), "lattice", gens, chi, delta, T);
}

} // namespace gclose

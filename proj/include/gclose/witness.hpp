#pragma once

// Witnesses for chi outside the g-closure of H <= T^k.
//
// A witness is a sequence (a_n) in Z^k = dual of T^k that tends to 0 in
// tau_H (every generator h of H has ||<a_n, h>|| <= 2^-n) while chi stays at
// norm >= delta on every term. Such a sequence exhibits u = (a_n) with
// H <= s_u(T^k) and chi outside s_u(T^k), hence chi outside g(H).

#include "search.hpp"
#include "torsion.hpp"

#include <optional>
#include <string>
#include <vector>

namespace gclose {

struct Witness {
    IntVecSeq sequence;
    Rational escape_threshold;
    std::string strategy;
    std::size_t certified_terms = 0;
    std::vector<NullCertificateTerm> null_certificate;
    std::vector<EscapeCertificateTerm> escape_certificate;
};

namespace detail {

inline void check_witness_inputs(const PrecompactTopology& H, const std::vector<CirclePoint>& chi)
{
    if (!H.ambient.is_free())
        throw Error(ErrorCode::rejected_input, "witness search needs a free ambient group Z^k");
    if (chi.size() != H.dimension())
        throw Error(ErrorCode::dimension_mismatch, "chi has " + std::to_string(chi.size()) + " coordinates, expected " +
                                                       std::to_string(H.dimension()));
    for (const auto& c : H.characters)
        require_single_field(c.free, "a generating character");
    require_single_field(chi, "chi");
}

} // namespace detail

// Strategies in order: annihilator, continued fraction, lattice. nullopt means
// the budget was exhausted; that carries no claim about chi.
inline std::optional<Witness> find_witness(const PrecompactTopology& H, const std::vector<CirclePoint>& chi,
                                           const Rational& delta, const SearchBudget& budget = {})
{
    if (delta <= 0 || delta > Rational(1, 2))
        throw Error(ErrorCode::rejected_input, "delta must lie in (0, 1/2], got " + to_string(delta));
    detail::check_witness_inputs(H, chi);
    const auto gens = H.free_characters();
    const std::size_t k = H.dimension();
    using Strategy = std::optional<SearchResult> (*)(std::size_t, const CharacterList&, const std::vector<CirclePoint>*,
                                                      const Rational&, const SearchBudget&);
    for (Strategy s : {Strategy(&search_annihilator), Strategy(&search_cf), Strategy(&search_lattice)}) {
        if (auto r = s(k, gens, &chi, delta, budget))
            return Witness{r->sequence, delta, r->strategy, r->certified_terms, std::move(r->null_certificate),
                           std::move(r->escape_certificate)};
    }
    return std::nullopt;
}

// Recomputes every term and bound from scratch.
inline bool check_witness(const Witness& w, const PrecompactTopology& H, const std::vector<CirclePoint>& chi)
{
    if (!H.ambient.is_free() || chi.size() != H.dimension() || w.sequence.dimension() != H.dimension())
        return false;
    if (w.escape_threshold <= 0 || w.escape_threshold > Rational(1, 2))
        return false;
    if (w.certified_terms == 0 || w.null_certificate.size() != w.certified_terms ||
        w.escape_certificate.size() != w.certified_terms)
        return false;
    if (auto h = w.sequence.horizon(); h && *h < w.certified_terms)
        return false;
    const auto gens = H.free_characters();
    const auto terms = w.sequence.terms(w.certified_terms);
    for (std::size_t n = 0; n < w.certified_terms; ++n) {
        const auto& a = terms[n];
        if (detail::is_zero_vector(a))
            return false;
        const Rational bound = dyadic_bound(n);
        const auto& nc = w.null_certificate[n];
        const auto& ec = w.escape_certificate[n];
        if (nc.n != n || ec.n != n || nc.bound != bound)
            return false;
        Rational fresh_upper = 0;
        Rational fresh_lower = 0;
        for (const auto& h : gens) {
            const CirclePoint v = pair(a, h);
            if (!v.norm_le(bound))
                return false;
            const Enclosure e = norm(v);
            fresh_upper = std::max(fresh_upper, e.upper);
            fresh_lower = std::max(fresh_lower, e.lower);
        }
        if (!(nc.max_norm.lower <= fresh_upper && fresh_lower <= nc.max_norm.upper))
            return false;
        const CirclePoint c = pair(a, chi);
        if (!c.norm_ge(w.escape_threshold))
            return false;
        if (!ec.norm.intersects(norm(c)))
            return false;
    }
    return true;
}

inline const std::vector<Rational>& default_delta_ladder()
{
    static const std::vector<Rational> ladder{Rational(1, 2), Rational(1, 3), Rational(1, 6), Rational(1, 12)};
    return ladder;
}

struct GMembershipOutcome {
    enum class Kind { not_in_g_closure, consistent_with_membership };

    Kind kind = Kind::consistent_with_membership;
    std::optional<Witness> witness;
    std::vector<Rational> deltas_tried;
    SearchBudget budget;

    bool not_in_closure() const { return kind == Kind::not_in_g_closure; }
};

// chi in g(H) iff chi is sequentially continuous on (A, tau_H); a witness is a
// certified failure of sequential continuity. No witness is not a proof.
inline GMembershipOutcome g_membership_experiment(const PrecompactTopology& H, const std::vector<CirclePoint>& chi,
                                                  const SearchBudget& budget = {},
                                                  const std::vector<Rational>& ladder = default_delta_ladder())
{
    GMembershipOutcome out;
    out.budget = budget;
    for (const Rational& delta : ladder) {
        out.deltas_tried.push_back(delta);
        if (auto w = find_witness(H, chi, delta, budget)) {
            out.kind = GMembershipOutcome::Kind::not_in_g_closure;
            out.witness = std::move(w);
            return out;
        }
    }
    return out;
}

struct BdsMultipleCheck {
    long long multiple = 0;
    CirclePoint point;
    Verdict verdict;
};

struct BdsProbeResult {
    CirclePoint probe;
    GMembershipOutcome outcome;
};

struct BdsReport {
    CirclePoint alpha;
    IntVecSeq sequence;
    std::vector<BdsMultipleCheck> multiples;
    bool inclusion_verified = false; // every j*alpha, |j| <= bound, is exactly in t_u
    std::vector<BdsProbeResult> probes;
};

// For u = CF denominators of alpha: checks <alpha> <= t_u exactly on |j| <= multiple_bound and
// runs the g-membership experiment for every probe against H = <alpha>.
inline BdsReport bds_experiment(const CirclePoint& alpha, const std::vector<CirclePoint>& probes, const SearchBudget& budget = {},
                                long long multiple_bound = 10, const MembershipPolicy& policy = {})
{
    if (alpha.is_rational())
        throw Error(ErrorCode::rejected_input, "alpha must be a quadratic irrational");
    if (probes.empty())
        throw Error(ErrorCode::rejected_input, "at least one probe is required");
    BdsReport report{alpha, IntVecSeq::cf_denominators(alpha), {}, true, {}};
    for (long long j = -multiple_bound; j <= multiple_bound; ++j) {
        const CirclePoint p = int_mul(Int(j), alpha);
        Verdict v = t_membership(report.sequence, p, policy);
        report.inclusion_verified = report.inclusion_verified && v.is_exact_in();
        report.multiples.push_back({j, p, std::move(v)});
    }
    const PrecompactTopology H = PrecompactTopology::on_free(1, {{alpha}});
    for (const auto& beta : probes)
        report.probes.push_back({beta, g_membership_experiment(H, {beta}, budget)});
    return report;
}

} // namespace gclose

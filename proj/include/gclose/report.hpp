#pragma once

// JSON reports for every kernel result. Integers and rationals travel as
// decimal strings ("-12", "3/8"), points in the literal syntax accepted by
// parse_point, sequences in the sequence-spec syntax.
//
// Needs nlohmann/json on the include path (target gclose_vendor).

#include "duality.hpp"
#include "matrix.hpp"
#include "torsion.hpp"
#include "witness.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace gclose::report {

using json = nlohmann::ordered_json;

inline constexpr int schema_version = 1;

// --- scalars ---------------------------------------------------------------

inline json to_json(const Int& x) { return x.str(); }
inline json to_json(const Rational& r) { return gclose::to_string(r); }
inline json to_json(const CirclePoint& x) { return x.to_string(); }

// array_json below looks these up at definition time
inline json to_json(const std::vector<Int>& v);
inline json to_json(const Enclosure& e);
inline json to_json(const Character& c);
inline json to_json(const NullCertificateTerm& t);
inline json to_json(const EscapeCertificateTerm& t);
inline json to_json(const ProfileEntry& e);

namespace detail {

inline const json& field(const json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key))
        throw ParseError(std::string("report is missing field '") + key + "'", 0);
    return j.at(key);
}

inline std::string string_field(const json& j, const char* key)
{
    const json& v = field(j, key);
    if (!v.is_string())
        throw ParseError(std::string("report field '") + key + "' must be a string", 0);
    return v.get<std::string>();
}

inline std::size_t size_field(const json& j, const char* key)
{
    const json& v = field(j, key);
    if (!v.is_number_unsigned())
        throw ParseError(std::string("report field '") + key + "' must be a non-negative integer", 0);
    return v.get<std::size_t>();
}

} // namespace detail

inline Int int_from_json(const json& j)
{
    if (!j.is_string())
        throw ParseError("integer must be a decimal string", 0);
    return parse_int_or_throw(j.get<std::string>());
}

inline Rational rational_from_json(const json& j)
{
    if (!j.is_string())
        throw ParseError("rational must be a string", 0);
    return parse_rational(j.get<std::string>());
}

inline CirclePoint point_from_json(const json& j)
{
    if (!j.is_string())
        throw ParseError("point must be a string", 0);
    return parse_point(j.get<std::string>());
}

template <class T>
json array_json(const std::vector<T>& xs)
{
    json out = json::array();
    for (const auto& x : xs)
        out.push_back(to_json(x));
    return out;
}

template <class F>
auto array_from_json(const json& j, F&& f) -> std::vector<decltype(f(j))>
{
    if (!j.is_array())
        throw ParseError("expected an array in report", 0);
    std::vector<decltype(f(j))> out;
    for (const auto& e : j)
        out.push_back(f(e));
    return out;
}

inline std::vector<Int> int_vector_from_json(const json& j) { return array_from_json(j, int_from_json); }

inline json to_json(const std::vector<Int>& v) { return array_json(v); }

// --- certified quantities ----------------------------------------------------

inline json to_json(const Enclosure& e)
{
    return {{"kind", e.is_exact() ? "exact" : "interval"}, {"lower", to_json(e.lower)}, {"upper", to_json(e.upper)}};
}

inline Enclosure enclosure_from_json(const json& j)
{
    const std::string kind = detail::string_field(j, "kind");
    if (kind != "exact" && kind != "interval")
        throw ParseError("unknown enclosure kind '" + kind + "'", 0);
    return {rational_from_json(detail::field(j, "lower")), rational_from_json(detail::field(j, "upper")),
            kind == "exact" ? Enclosure::Kind::exact : Enclosure::Kind::interval};
}

inline json to_json(const Verdict& v)
{
    json j{{"status", status_name(v.status)}, {"reason", v.reason}};
    if (v.from_index)
        j["from_index"] = *v.from_index;
    if (v.escape_index)
        j["escape_index"] = *v.escape_index;
    if (v.period)
        j["period"] = *v.period;
    if (v.escape_value)
        j["escape_value"] = to_json(*v.escape_value);
    if (v.escape_lower_bound)
        j["escape_lower_bound"] = to_json(*v.escape_lower_bound);
    j["horizon"] = v.horizon;
    if (v.worst_bound)
        j["worst_bound"] = to_json(*v.worst_bound);
    j["trace"] = array_json(v.trace);
    return j;
}

inline Verdict verdict_from_json(const json& j)
{
    Verdict v;
    const auto status = status_from_name(detail::string_field(j, "status"));
    if (!status)
        throw ParseError("unknown verdict status", 0);
    v.status = *status;
    v.reason = detail::string_field(j, "reason");
    if (j.contains("from_index"))
        v.from_index = detail::size_field(j, "from_index");
    if (j.contains("escape_index"))
        v.escape_index = detail::size_field(j, "escape_index");
    if (j.contains("period"))
        v.period = detail::size_field(j, "period");
    if (j.contains("escape_value"))
        v.escape_value = point_from_json(j["escape_value"]);
    if (j.contains("escape_lower_bound"))
        v.escape_lower_bound = rational_from_json(j["escape_lower_bound"]);
    v.horizon = detail::size_field(j, "horizon");
    if (j.contains("worst_bound"))
        v.worst_bound = rational_from_json(j["worst_bound"]);
    v.trace = array_from_json(detail::field(j, "trace"), enclosure_from_json);
    return v;
}

// --- groups and matrices -----------------------------------------------------

inline json to_json(const IntMatrix& m)
{
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json r = json::array();
        for (std::size_t c = 0; c < m.cols(); ++c)
            r.push_back(to_json(m(i, c)));
        rows.push_back(std::move(r));
    }
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(rows)}};
}

inline IntMatrix matrix_from_json(const json& j)
{
    const std::size_t cols = detail::size_field(j, "cols");
    IntMatrix m = IntMatrix::from_rows(array_from_json(detail::field(j, "entries"), int_vector_from_json), cols);
    if (m.rows() != detail::size_field(j, "rows") || m.cols() != cols)
        throw ParseError("matrix shape does not match its entries", 0);
    return m;
}

inline json to_json(const SmithForm& f)
{
    return {{"U", to_json(f.U)}, {"D", to_json(f.D)}, {"V", to_json(f.V)}, {"diagonal", array_json(f.diagonal())},
            {"rank", f.rank()}};
}

inline SmithForm smith_from_json(const json& j)
{
    return {matrix_from_json(detail::field(j, "U")), matrix_from_json(detail::field(j, "D")),
            matrix_from_json(detail::field(j, "V"))};
}

inline json to_json(const FgAbelianGroup& A)
{
    return {{"free_rank", A.free_rank}, {"invariant_factors", array_json(A.invariant_factors)}, {"text", A.to_string()}};
}

inline FgAbelianGroup group_from_json(const json& j)
{
    FgAbelianGroup A{detail::size_field(j, "free_rank"), int_vector_from_json(detail::field(j, "invariant_factors"))};
    A.validate();
    return A;
}

inline json to_json(const Character& c) { return {{"free", array_json(c.free)}, {"residues", array_json(c.residues)}}; }

inline Character character_from_json(const json& j)
{
    return {array_from_json(detail::field(j, "free"), point_from_json), int_vector_from_json(detail::field(j, "residues"))};
}

inline json to_json(const Sublattice& L)
{
    json gens = json::array();
    for (const auto& g : L.generators())
        gens.push_back(to_json(g));
    return {{"ambient", to_json(L.ambient())}, {"generators", std::move(gens)}, {"text", L.to_string()}};
}

inline Sublattice sublattice_from_json(const json& j)
{
    return Sublattice(group_from_json(detail::field(j, "ambient")),
                      array_from_json(detail::field(j, "generators"), int_vector_from_json));
}

inline json to_json(const ClosureDescription& c)
{
    json dirs = json::array();
    for (const auto& v : c.torus_directions)
        dirs.push_back(to_json(v));
    return {{"ambient", to_json(c.ambient)},
            {"finite_generators", array_json(c.finite_generators)},
            {"torus_directions", std::move(dirs)},
            {"finitely_generated", c.is_finitely_generated()}};
}

inline ClosureDescription closure_from_json(const json& j)
{
    return {group_from_json(detail::field(j, "ambient")),
            array_from_json(detail::field(j, "finite_generators"), character_from_json),
            array_from_json(detail::field(j, "torus_directions"), int_vector_from_json)};
}

inline json to_json(const PrecompactTopology& H)
{
    return {{"ambient", to_json(H.ambient)}, {"characters", array_json(H.characters)}};
}

inline PrecompactTopology topology_from_json(const json& j)
{
    PrecompactTopology H{group_from_json(detail::field(j, "ambient")),
                         array_from_json(detail::field(j, "characters"), character_from_json)};
    for (const auto& c : H.characters)
        check_character(H.ambient, c);
    return H;
}

// --- sequences and certificates ------------------------------------------------

inline json to_json(const IntVecSeq& u) { return u.to_string(); }

inline IntVecSeq sequence_from_json(const json& j)
{
    if (!j.is_string())
        throw ParseError("sequence must be a string", 0);
    return parse_seq(j.get<std::string>());
}

inline json to_json(const NullCertificateTerm& t)
{
    return {{"n", t.n}, {"max_norm", to_json(t.max_norm)}, {"bound", to_json(t.bound)}};
}

inline json to_json(const EscapeCertificateTerm& t) { return {{"n", t.n}, {"norm", to_json(t.norm)}}; }

inline NullCertificateTerm null_term_from_json(const json& j)
{
    return {detail::size_field(j, "n"), enclosure_from_json(detail::field(j, "max_norm")),
            rational_from_json(detail::field(j, "bound"))};
}

inline EscapeCertificateTerm escape_term_from_json(const json& j)
{
    return {detail::size_field(j, "n"), enclosure_from_json(detail::field(j, "norm"))};
}

// The evaluated terms are included for plotting and inspection; parsing ignores them.
inline json terms_json(const IntVecSeq& u, std::size_t n)
{
    json out = json::array();
    for (const auto& t : u.terms(n))
        out.push_back(to_json(t));
    return out;
}

inline json to_json(const Witness& w)
{
    return {{"sequence", to_json(w.sequence)},
            {"strategy", w.strategy},
            {"escape_threshold", to_json(w.escape_threshold)},
            {"certified_terms", w.certified_terms},
            {"scope", "exact checks of terms 0 .. certified_terms - 1"},
            {"terms", terms_json(w.sequence, w.certified_terms)},
            {"null_certificate", array_json(w.null_certificate)},
            {"escape_certificate", array_json(w.escape_certificate)}};
}

inline Witness witness_from_json(const json& j)
{
    return {sequence_from_json(detail::field(j, "sequence")),
            rational_from_json(detail::field(j, "escape_threshold")),
            detail::string_field(j, "strategy"),
            detail::size_field(j, "certified_terms"),
            array_from_json(detail::field(j, "null_certificate"), null_term_from_json),
            array_from_json(detail::field(j, "escape_certificate"), escape_term_from_json)};
}

inline json to_json(const SearchResult& r)
{
    return {{"sequence", to_json(r.sequence)},
            {"strategy", r.strategy},
            {"certified_terms", r.certified_terms},
            {"terms", terms_json(r.sequence, r.certified_terms)},
            {"null_certificate", array_json(r.null_certificate)}};
}

inline json to_json(const SearchBudget& b) { return {{"max_terms", b.max_terms}, {"max_candidates", b.max_candidates}}; }

inline json to_json(const GMembershipOutcome& g)
{
    json j{{"outcome", g.not_in_closure() ? "not_in_g_closure" : "consistent_with_membership"},
           {"deltas_tried", array_json(g.deltas_tried)},
           {"budget", to_json(g.budget)}};
    if (g.witness)
        j["witness"] = to_json(*g.witness);
    else
        j["note"] = "no witness within the budget; this is not a proof of membership";
    return j;
}

inline json to_json(const ProfileEntry& e)
{
    return {{"denominator", to_json(e.denominator)}, {"verdict", to_json(e.verdict)}};
}

inline json to_json(const BdsReport& r)
{
    json multiples = json::array();
    for (const auto& m : r.multiples)
        multiples.push_back({{"multiple", m.multiple}, {"point", to_json(m.point)}, {"verdict", to_json(m.verdict)}});
    json probes = json::array();
    for (const auto& p : r.probes)
        probes.push_back({{"probe", to_json(p.probe)}, {"g_membership", to_json(p.outcome)}});
    return {{"alpha", to_json(r.alpha)},
            {"sequence", to_json(r.sequence)},
            {"inclusion_verified", r.inclusion_verified},
            {"multiples", std::move(multiples)},
            {"probes", std::move(probes)},
            {"note", "verifies <alpha> inside t_u on the listed multiples only; no claim that t_u equals <alpha>"}};
}

// --- the report envelope ---------------------------------------------------------

enum class Provenance { exact, certified_up_to, undecided, not_applicable };

inline std::string_view provenance_name(Provenance p)
{
    switch (p) {
    case Provenance::exact: return "exact";
    case Provenance::certified_up_to: return "certified_up_to";
    case Provenance::undecided: return "undecided";
    case Provenance::not_applicable: return "not_applicable";
    }
    return "not_applicable";
}

inline std::optional<Provenance> provenance_from_name(std::string_view s)
{
    for (Provenance p : {Provenance::exact, Provenance::certified_up_to, Provenance::undecided, Provenance::not_applicable})
        if (provenance_name(p) == s)
            return p;
    return std::nullopt;
}

// The weakest status among a set of verdicts.
inline Provenance provenance_of(const std::vector<const Verdict*>& verdicts)
{
    Provenance p = Provenance::exact;
    for (const Verdict* v : verdicts) {
        if (v->status == Verdict::Status::undecided)
            return Provenance::undecided;
        if (v->status == Verdict::Status::certified_up_to)
            p = Provenance::certified_up_to;
    }
    return p;
}

inline std::string provenance_note(Provenance p)
{
    switch (p) {
    case Provenance::exact:
        return "every claim in this report is exact: decided by finite integer arithmetic and exact quadratic sign tests";
    case Provenance::certified_up_to:
        return "contains certified_up_to verdicts: numerical evidence up to the stated horizon only, not a proof";
    case Provenance::undecided:
        return "contains undecided results: nothing is claimed for them";
    case Provenance::not_applicable:
        return "no verdict or certificate was produced";
    }
    return {};
}

struct Report {
    std::vector<std::string> command;
    std::string version;
    json config;
    json result;
    double elapsed_ms = 0;
    Provenance provenance = Provenance::not_applicable;

    friend bool operator==(const Report&, const Report&) = default;
};

inline json to_json(const Report& r)
{
    return {{"schema_version", schema_version},
            {"command", r.command},
            {"version", r.version},
            {"config", r.config},
            {"result", r.result},
            {"timing", {{"elapsed_ms", r.elapsed_ms}}},
            {"provenance", provenance_name(r.provenance)},
            {"provenance_note", provenance_note(r.provenance)}};
}

inline Report report_from_json(const json& j)
{
    const json& sv = detail::field(j, "schema_version");
    if (!sv.is_number_integer() || sv.get<int>() != schema_version)
        throw ParseError("unsupported report schema_version", 0);
    Report r;
    const json& cmd = detail::field(j, "command");
    if (!cmd.is_array())
        throw ParseError("report field 'command' must be an array", 0);
    for (const auto& c : cmd) {
        if (!c.is_string())
            throw ParseError("report command entries must be strings", 0);
        r.command.push_back(c.get<std::string>());
    }
    r.version = detail::string_field(j, "version");
    r.config = detail::field(j, "config");
    r.result = detail::field(j, "result");
    const json& ms = detail::field(detail::field(j, "timing"), "elapsed_ms");
    if (!ms.is_number())
        throw ParseError("report timing must be a number", 0);
    r.elapsed_ms = ms.get<double>();
    const auto p = provenance_from_name(detail::string_field(j, "provenance"));
    if (!p)
        throw ParseError("unknown provenance", 0);
    r.provenance = *p;
    return r;
}

inline std::string serialize(const Report& r) { return to_json(r).dump(2); }

inline Report parse_report(std::string_view text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("report is not valid JSON: ") + e.what(), e.byte > 0 ? e.byte - 1 : 0);
    }
    return report_from_json(j);
}

// Re-verifies a serialized witness against the topology and chi stored beside
// it (a witness or gmem result). Nothing outside the report is consulted.
inline bool recheck_witness(const json& result)
{
    const PrecompactTopology H = topology_from_json(detail::field(result, "topology"));
    const auto chi = array_from_json(detail::field(result, "chi"), point_from_json);
    const json* w = nullptr;
    if (result.contains("witness"))
        w = &result["witness"];
    else if (result.contains("g_membership") && result["g_membership"].contains("witness"))
        w = &result["g_membership"]["witness"];
    if (w == nullptr)
        throw Error(ErrorCode::rejected_input, "report carries no witness");
    return check_witness(witness_from_json(*w), H, chi);
}

} // namespace gclose::report

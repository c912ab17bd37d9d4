// gclose: command-line front end for the kernel.
//
//   gclose <verb> [flags]      verbs: dual closure radical snf tmem smem profile
//                                     nullseq witness gmem bds check
//
// Exit status: 0 success, 1 error (stable code on stderr), 2 when the result
// is dominated by undecided / not-found outcomes.

#include <gclose/report.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#ifndef GCLOSE_VERSION
#define GCLOSE_VERSION "0.0.0"
#endif

namespace {

using namespace gclose;
using report::json;

constexpr int exit_ok = 0;
constexpr int exit_error = 1;
constexpr int exit_undecided = 2;

// A usage problem caught after CLI11 parsing (missing companion flag etc).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- configuration: flags > GCLOSE_* environment > defaults ---------------------

template <class T>
struct Setting {
    T value;
    std::string source = "default";
};

struct Config {
    Setting<std::size_t> horizon{MembershipPolicy{}.horizon};
    Setting<Rational> tolerance{MembershipPolicy{}.tolerance};
    Setting<std::size_t> state_cap{MembershipPolicy{}.state_cap};
    Setting<std::size_t> budget{SearchBudget{}.max_candidates};
    Setting<std::size_t> terms{SearchBudget{}.max_terms};

    MembershipPolicy policy() const { return {horizon.value, tolerance.value, state_cap.value}; }
    SearchBudget search_budget() const { return {terms.value, budget.value}; }

    json to_json() const
    {
        return {{"horizon", {{"value", horizon.value}, {"source", horizon.source}}},
                {"tolerance", {{"value", report::to_json(tolerance.value)}, {"source", tolerance.source}}},
                {"state_cap", {{"value", state_cap.value}, {"source", state_cap.source}}},
                {"budget", {{"value", budget.value}, {"source", budget.source}}},
                {"terms", {{"value", terms.value}, {"source", terms.source}}}};
    }
};

std::size_t parse_count(const std::string& text, const std::string& what)
{
    const auto v = parse_int(text);
    if (!v || *v < 1 || *v > Int(std::numeric_limits<std::uint32_t>::max()))
        throw UsageError(what + " must be a positive integer, got '" + text + "'");
    return v->convert_to<std::size_t>();
}

Rational parse_tolerance(const std::string& text, const std::string& what)
{
    Rational r;
    try {
        r = parse_rational(text);
    } catch (const Error&) {
        throw UsageError(what + " must be a rational p/q, got '" + text + "'");
    }
    if (r <= 0 || r >= 1)
        throw UsageError(what + " must lie in (0, 1), got '" + text + "'");
    return r;
}

void apply_env(Config& c)
{
    if (const char* e = std::getenv("GCLOSE_HORIZON"))
        c.horizon = {parse_count(e, "GCLOSE_HORIZON"), "env"};
    if (const char* e = std::getenv("GCLOSE_TOLERANCE"))
        c.tolerance = {parse_tolerance(e, "GCLOSE_TOLERANCE"), "env"};
    if (const char* e = std::getenv("GCLOSE_BUDGET"))
        c.budget = {parse_count(e, "GCLOSE_BUDGET"), "env"};
}

// --- argument parsing helpers ------------------------------------------------

// Kernel parse errors carry positions relative to the flag value; name the flag.
template <class F>
auto parse_flag(const std::string& flag, F&& f) -> decltype(f())
{
    try {
        return f();
    } catch (const ParseError& e) {
        // e.what() already ends with the position
        throw Error(ErrorCode::parse, std::string("in ") + flag + ": " + e.what());
    }
}

std::vector<std::pair<std::string, std::size_t>> split_semicolons(const std::string& s)
{
    std::vector<std::pair<std::string, std::size_t>> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t semi = s.find(';', start);
        out.emplace_back(s.substr(start, semi == s.npos ? s.npos : semi - start), start);
        if (semi == s.npos)
            return out;
        start = semi + 1;
    }
}

struct AmbientFlags {
    std::optional<std::size_t> free_rank;
    std::string torsion;
};

std::size_t count_entries(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), ',')) + 1; }

FgAbelianGroup ambient_from(const AmbientFlags& a, const std::string& gens)
{
    FgAbelianGroup A;
    if (!a.torsion.empty()) {
        const auto fs = parse_flag("--torsion", [&] { return detail::parse_int_vector(a.torsion, 0); });
        for (const Int& d : fs)
            if (d != 1)
                A.invariant_factors.push_back(d);
        A.validate();
    }
    if (a.free_rank)
        A.free_rank = *a.free_rank;
    else if (a.torsion.empty() && !gens.empty())
        A.free_rank = count_entries(split_semicolons(gens).front().first);
    if (A.dimension() == 0)
        throw UsageError("the ambient group is trivial: pass --free and/or --torsion, or at least one --gens character");
    return A;
}

std::vector<Character> characters_from(const FgAbelianGroup& A, const std::string& gens)
{
    std::vector<Character> out;
    if (gens.empty())
        return out;
    for (const auto& [text, at] : split_semicolons(gens)) {
        Character c = parse_flag("--gens", [&] { return parse_character(A, text, at); });
        check_character(A, c);
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<CirclePoint> points_from(const std::string& flag, const std::string& text)
{
    return parse_flag(flag, [&] { return parse_point_vector(text); });
}

// Topology on Z^k for witness-style verbs; k comes from --free, then chi, then the first generator.
PrecompactTopology free_topology(const AmbientFlags& a, const std::string& gens, const std::vector<CirclePoint>* chi)
{
    if (!a.torsion.empty())
        throw Error(ErrorCode::rejected_input, "this verb needs a free ambient group Z^k; --torsion is not accepted");
    AmbientFlags f = a;
    if (!f.free_rank && chi)
        f.free_rank = chi->size();
    const FgAbelianGroup A = ambient_from(f, gens);
    return PrecompactTopology{A, characters_from(A, gens)};
}

// --- human and CSV rendering -----------------------------------------------------

std::string human_verdict(const json& v, const std::string& indent = "  ")
{
    std::ostringstream o;
    const std::string status = v["status"];
    if (status == "certified_up_to") {
        o << indent << "status: CERTIFIED UP TO HORIZON " << v["horizon"].get<std::size_t>()
          << " (numerical evidence, not a proof)\n";
    } else if (status == "undecided") {
        o << indent << "status: UNDECIDED (horizon " << v["horizon"].get<std::size_t>() << ", nothing claimed)\n";
    } else {
        o << indent << "status: " << status << " (exact)\n";
    }
    o << indent << "reason: " << v["reason"].get<std::string>() << "\n";
    if (v.contains("worst_bound"))
        o << indent << "worst tail bound: ~" << static_cast<double>(parse_rational(v["worst_bound"].get<std::string>()))
          << " (exact value in the JSON report)\n";
    return o.str();
}

std::string human_witness(const json& w)
{
    std::ostringstream o;
    o << "  witness sequence: " << w["sequence"].get<std::string>() << "  (strategy " << w["strategy"].get<std::string>()
      << ")\n";
    o << "  escape threshold: " << w["escape_threshold"].get<std::string>() << "\n";
    o << "  certified terms: " << w["certified_terms"].get<std::size_t>() << "\n";
    const auto& terms = w["terms"];
    o << "  first terms:";
    for (std::size_t n = 0; n < std::min<std::size_t>(8, terms.size()); ++n) {
        o << " (";
        for (std::size_t j = 0; j < terms[n].size(); ++j)
            o << (j ? "," : "") << terms[n][j].get<std::string>();
        o << ")";
    }
    o << "\n";
    return o.str();
}

std::string human_gmem(const json& g)
{
    std::ostringstream o;
    if (g["outcome"] == "not_in_g_closure") {
        o << "  outcome: NOT in the g-closure (certified witness)\n" << human_witness(g["witness"]);
    } else {
        o << "  outcome: consistent with membership; no witness for deltas";
        for (const auto& d : g["deltas_tried"])
            o << " " << d.get<std::string>();
        o << "\n  " << g["note"].get<std::string>() << "\n";
    }
    return o.str();
}

std::string render_human(const std::string& verb, const report::Report& r)
{
    std::ostringstream o;
    const json& res = r.result;
    o << "gclose " << verb << "  (version " << r.version << ")\n";
    if (verb == "snf") {
        const auto& s = res["smith"];
        o << "  D = diag(";
        for (std::size_t i = 0; i < s["diagonal"].size(); ++i)
            o << (i ? ", " : "") << s["diagonal"][i].get<std::string>();
        o << ")  rank " << s["rank"].get<std::size_t>() << "\n";
        for (const char* m : {"U", "V"}) {
            o << "  " << m << " =";
            for (const auto& row : s[m]["entries"]) {
                o << " [";
                for (std::size_t j = 0; j < row.size(); ++j)
                    o << (j ? " " : "") << row[j].get<std::string>();
                o << "]";
            }
            o << "\n";
        }
    } else if (verb == "dual" || verb == "radical") {
        o << "  " << res["sublattice"]["text"].get<std::string>() << " in " << res["sublattice"]["ambient"]["text"].get<std::string>()
          << "\n";
    } else if (verb == "closure") {
        const auto& c = res["closure"];
        o << "  finite generators: " << c["finite_generators"].size() << ", torus directions: " << c["torus_directions"].size()
          << "\n";
        o << "  annihilator: " << res["annihilator"]["text"].get<std::string>() << "\n";
    } else if (verb == "tmem" || verb == "smem") {
        o << human_verdict(res["verdict"]);
    } else if (verb == "profile") {
        for (const auto& e : res["entries"])
            o << "  1/" << e["denominator"].get<std::string>() << ":\n" << human_verdict(e["verdict"], "    ");
        o << "  admitted denominators:";
        for (const auto& q : res["admitted"])
            o << " " << q.get<std::string>();
        o << "\n";
    } else if (verb == "nullseq" || verb == "witness") {
        if (res.contains("witness"))
            o << human_witness(res["witness"]);
        else if (res.contains("null_sequence"))
            o << human_witness(res["null_sequence"]);
        else
            o << "  " << res["note"].get<std::string>() << "\n";
    } else if (verb == "gmem") {
        o << human_gmem(res["g_membership"]);
    } else if (verb == "bds") {
        o << "  inclusion <alpha> in t_u verified on |j| <= " << res["multiple_bound"].get<long long>() << ": "
          << (res["bds"]["inclusion_verified"].get<bool>() ? "yes" : "no") << "\n";
        for (const auto& p : res["bds"]["probes"])
            o << "  probe " << p["probe"].get<std::string>() << ":\n" << human_gmem(p["g_membership"]);
        o << "  " << res["bds"]["note"].get<std::string>() << "\n";
    } else if (verb == "check") {
        o << "  " << (res["verified"].get<bool>() ? "certificate verified" : "certificate REJECTED") << "\n";
    }
    o << "  provenance: " << report::provenance_note(r.provenance) << "\n";
    o << "  elapsed: " << r.elapsed_ms << " ms\n";
    return o.str();
}

std::string csv_quote(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string q = "\"";
    for (char ch : s)
        q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
}

std::string opt_field(const json& j, const char* key)
{
    if (!j.contains(key))
        return "";
    return j[key].is_string() ? j[key].get<std::string>() : j[key].dump();
}

std::string render_csv(const std::string& verb, const report::Report& r)
{
    std::ostringstream o;
    const json& res = r.result;
    if (verb == "profile") {
        o << "denominator,value,status,from_index,period,horizon,worst_bound,reason\n";
        for (const auto& e : res["entries"]) {
            const auto& v = e["verdict"];
            const std::string q = e["denominator"];
            o << q << "," << static_cast<double>(1) / std::stod(q) << "," << v["status"].get<std::string>() << ","
              << opt_field(v, "from_index") << "," << opt_field(v, "period") << "," << v["horizon"].get<std::size_t>() << ","
              << opt_field(v, "worst_bound") << "," << csv_quote(v["reason"]) << "\n";
        }
    } else if (verb == "witness" || verb == "nullseq") {
        const json& w = res.contains("witness") ? res["witness"] : res["null_sequence"];
        const bool escape = w.contains("escape_certificate");
        o << "n,term,null_norm_lower,null_norm_upper,bound" << (escape ? ",escape_norm_lower,escape_norm_upper" : "") << "\n";
        for (std::size_t n = 0; n < w["terms"].size(); ++n) {
            std::string term;
            for (std::size_t j = 0; j < w["terms"][n].size(); ++j)
                term += (j ? " " : "") + w["terms"][n][j].get<std::string>();
            const auto& nc = w["null_certificate"][n];
            o << n << "," << term << "," << nc["max_norm"]["lower"].get<std::string>() << ","
              << nc["max_norm"]["upper"].get<std::string>() << "," << nc["bound"].get<std::string>();
            if (escape)
                o << "," << w["escape_certificate"][n]["norm"]["lower"].get<std::string>() << ","
                  << w["escape_certificate"][n]["norm"]["upper"].get<std::string>();
            o << "\n";
        }
    } else if (verb == "bds") {
        o << "multiple,point,status,reason\n";
        for (const auto& m : res["bds"]["multiples"])
            o << m["multiple"].get<long long>() << "," << m["point"].get<std::string>() << ","
              << m["verdict"]["status"].get<std::string>() << "," << csv_quote(m["verdict"]["reason"]) << "\n";
    }
    return o.str();
}

bool csv_supported(const std::string& verb) { return verb == "profile" || verb == "witness" || verb == "nullseq" || verb == "bds"; }

std::string read_text(const std::string& path)
{
    if (path == "-") {
        std::ostringstream s;
        s << std::cin.rdbuf();
        return s.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw UsageError("cannot read '" + path + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// --- verbs -----------------------------------------------------------------------

struct Outcome {
    json result;
    report::Provenance provenance = report::Provenance::exact;
    int exit_code = exit_ok;
};

struct Inputs {
    AmbientFlags ambient;
    std::string gens, seq, point, chi, matrix, alpha, probes, input;
    std::string delta = "1/2";
    std::size_t max_den = 100;
    long long multiples = 10;
};

Outcome from_search(json payload, bool found)
{
    Outcome out{std::move(payload), found ? report::Provenance::exact : report::Provenance::not_applicable,
                found ? exit_ok : exit_undecided};
    return out;
}

Outcome run_verb(const std::string& verb, const Inputs& in, const Config& cfg)
{
    const MembershipPolicy policy = cfg.policy();
    const SearchBudget budget = cfg.search_budget();

    if (verb == "dual" || verb == "closure" || verb == "radical") {
        const FgAbelianGroup A = ambient_from(in.ambient, in.gens);
        const DualSubgroup H{A, characters_from(A, in.gens)};
        json res{{"ambient", report::to_json(A)}, {"generators", report::array_json(H.generators)}};
        if (verb == "dual") {
            res["sublattice"] = report::to_json(annihilator(H));
        } else if (verb == "radical") {
            res["sublattice"] = report::to_json(von_neumann_radical(PrecompactTopology{A, H.generators}));
        } else {
            const ClosureDescription c = closure_in_dual(H);
            res["closure"] = report::to_json(c);
            res["annihilator"] = report::to_json(annihilator(c));
        }
        return {std::move(res)};
    }
    if (verb == "snf") {
        const IntMatrix M = parse_flag("--matrix", [&] { return parse_matrix(in.matrix); });
        return {json{{"matrix", report::to_json(M)}, {"smith", report::to_json(smith_normal_form(M))}}};
    }
    if (verb == "tmem" || verb == "smem") {
        const IntVecSeq u = parse_flag("--seq", [&] { return parse_seq(in.seq); });
        const auto x = points_from("--point", in.point);
        const Verdict v = verb == "tmem" ? (x.size() == 1 ? t_membership(u, x[0], policy)
                                                          : throw Error(ErrorCode::dimension_mismatch, "tmem takes one point"))
                                         : s_membership(u, x, policy);
        const auto p = report::provenance_of({&v});
        return {json{{"sequence", report::to_json(u)}, {"point", report::array_json(x)}, {"verdict", report::to_json(v)}}, p,
                p == report::Provenance::undecided ? exit_undecided : exit_ok};
    }
    if (verb == "profile") {
        const IntVecSeq u = parse_flag("--seq", [&] { return parse_seq(in.seq); });
        const auto prof = rational_torsion_profile(u, in.max_den, policy);
        std::vector<const Verdict*> vs;
        for (const auto& e : prof)
            vs.push_back(&e.verdict);
        const auto p = report::provenance_of(vs);
        return {json{{"sequence", report::to_json(u)},
                     {"max_den", in.max_den},
                     {"entries", report::array_json(prof)},
                     {"admitted", report::array_json(admitted_denominators(prof))}},
                p, p == report::Provenance::undecided ? exit_undecided : exit_ok};
    }
    if (verb == "nullseq") {
        const PrecompactTopology H = free_topology(in.ambient, in.gens, nullptr);
        const NullSequence ns = null_sequence(H, budget);
        json res{{"topology", report::to_json(H)}, {"budget", report::to_json(budget)}};
        if (ns.found)
            res["null_sequence"] = report::to_json(*ns.found);
        else
            res["note"] = "budget exhausted without a certified null sequence; nothing is claimed";
        return from_search(std::move(res), ns.found.has_value());
    }
    if (verb == "witness" || verb == "gmem") {
        const auto chi = points_from("--chi", in.chi);
        const PrecompactTopology H = free_topology(in.ambient, in.gens, &chi);
        json res{{"topology", report::to_json(H)}, {"chi", report::array_json(chi)}, {"budget", report::to_json(budget)}};
        if (verb == "gmem") {
            const GMembershipOutcome g = g_membership_experiment(H, chi, budget);
            res["g_membership"] = report::to_json(g);
            if (!g.not_in_closure())
                return {std::move(res), report::Provenance::undecided, exit_undecided};
            return {std::move(res)};
        }
        const Rational delta = parse_flag("--delta", [&] { return parse_rational(in.delta); });
        res["delta"] = report::to_json(delta);
        const auto w = find_witness(H, chi, delta, budget);
        if (w)
            res["witness"] = report::to_json(*w);
        else
            res["note"] = "no witness within the budget; this carries no claim about chi";
        return from_search(std::move(res), w.has_value());
    }
    if (verb == "bds") {
        const CirclePoint alpha = parse_flag("--alpha", [&] { return parse_point(in.alpha); });
        const auto probes = points_from("--probes", in.probes);
        const BdsReport b = bds_experiment(alpha, probes, budget, in.multiples, policy);
        bool all_found = true;
        for (const auto& p : b.probes)
            all_found = all_found && p.outcome.not_in_closure();
        json res{{"multiple_bound", in.multiples}, {"budget", report::to_json(budget)}, {"bds", report::to_json(b)}};
        if (!all_found || !b.inclusion_verified)
            return {std::move(res), report::Provenance::undecided, exit_undecided};
        return {std::move(res)};
    }
    if (verb == "check") {
        const report::Report r = report::parse_report(read_text(in.input));
        const json& res = r.result;
        bool ok = true;
        std::size_t checked = 0;
        if (res.contains("bds")) {
            const CirclePoint alpha = report::point_from_json(res["bds"]["alpha"]);
            const PrecompactTopology H = PrecompactTopology::on_free(1, {{alpha}});
            for (const auto& p : res["bds"]["probes"]) {
                if (!p["g_membership"].contains("witness"))
                    continue;
                ++checked;
                ok = ok && check_witness(report::witness_from_json(p["g_membership"]["witness"]), H,
                                         {report::point_from_json(p["probe"])});
            }
        } else if (res.contains("witness") || (res.contains("g_membership") && res["g_membership"].contains("witness"))) {
            ++checked;
            ok = report::recheck_witness(res);
        }
        if (checked == 0)
            throw Error(ErrorCode::rejected_input, "report carries no witness to check");
        return {json{{"checked", checked}, {"verified", ok}}, report::Provenance::exact, ok ? exit_ok : exit_error};
    }
    throw UsageError("unknown verb '" + verb + "'");
}

void fail(const std::string& code, const std::string& message)
{
    std::cerr << "gclose: error " << code << ": " << message << "\n";
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"gclose: exact closure and convergence computations on the circle group"};
    app.set_version_flag("--version", GCLOSE_VERSION);
    app.require_subcommand(1, 1);
    app.fallthrough();

    std::optional<std::size_t> horizon, state_cap, budget, terms;
    std::string tolerance, format = "json", output;
    app.add_option("--horizon", horizon, "scan horizon for membership verdicts")->check(CLI::PositiveNumber);
    app.add_option("--tolerance", tolerance, "scan tolerance p/q in (0,1)");
    app.add_option("--state-cap", state_cap, "orbit state cap for exact decisions")->check(CLI::PositiveNumber);
    app.add_option("--budget", budget, "candidate budget for witness searches")->check(CLI::PositiveNumber);
    app.add_option("--terms", terms, "certified terms per witness")->check(CLI::PositiveNumber);
    app.add_option("--format", format, "output format")->check(CLI::IsMember({"json", "csv", "human"}));
    app.add_option("--output", output, "write the report here instead of stdout");

    Inputs in;
    auto add_ambient = [&](CLI::App* s) {
        s->add_option("--free", in.ambient.free_rank, "free rank r of Z^r + torsion");
        s->add_option("--torsion", in.ambient.torsion, "invariant factors d1,d2,... (divisibility chain)");
    };
    auto add_gens = [&](CLI::App* s, bool required) {
        auto* o = s->add_option("--gens", in.gens, "';'-separated characters, each comma-separated");
        if (required)
            o->required();
    };

    for (const char* v : {"dual", "closure", "radical"}) {
        auto* s = app.add_subcommand(v, std::string(v) == "dual"      ? "annihilator H^perp of a subgroup of the dual"
                                        : std::string(v) == "closure" ? "closure of a subgroup of the dual"
                                                                      : "von Neumann radical of a precompact topology");
        add_ambient(s);
        add_gens(s, false);
    }
    app.add_subcommand("snf", "Smith normal form with transforms")->add_option("--matrix", in.matrix, "rows 'a,b;c,d'")->required();
    for (const char* v : {"tmem", "smem"}) {
        auto* s = app.add_subcommand(v, std::string(v) == "tmem" ? "is x in t_u(T)?" : "is x in s_u(T^k)?");
        s->add_option("--seq", in.seq, "sequence spec")->required();
        s->add_option("--point", in.point, "point (comma-separated for smem)")->required();
    }
    {
        auto* s = app.add_subcommand("profile", "t_u(T) on 1/q, q <= max-den");
        s->add_option("--seq", in.seq, "sequence spec")->required();
        s->add_option("--max-den", in.max_den, "largest denominator")->check(CLI::PositiveNumber);
    }
    {
        auto* s = app.add_subcommand("nullseq", "certified null sequence of (Z^k, tau_H)");
        add_ambient(s);
        add_gens(s, true);
    }
    for (const char* v : {"witness", "gmem"}) {
        auto* s = app.add_subcommand(v, std::string(v) == "witness" ? "witness for chi outside g(H) at one delta"
                                                                    : "g-membership experiment over the delta ladder");
        add_ambient(s);
        add_gens(s, false);
        s->add_option("--chi", in.chi, "target character")->required();
        if (std::string(v) == "witness")
            s->add_option("--delta", in.delta, "escape threshold in (0,1/2]");
    }
    {
        auto* s = app.add_subcommand("bds", "CF-denominator experiment for a quadratic irrational");
        s->add_option("--alpha", in.alpha, "quadratic irrational")->required();
        s->add_option("--probes", in.probes, "comma-separated probe points")->required();
        s->add_option("--multiples", in.multiples, "check j*alpha for |j| <= this")->check(CLI::NonNegativeNumber);
    }
    app.add_subcommand("check", "re-verify the witnesses inside a JSON report")
        ->add_option("--report", in.input, "report file, '-' for stdin")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        fail("E_USAGE", e.what());
        return exit_error;
    }

    const std::string verb = app.get_subcommands().front()->get_name();
    std::vector<std::string> command(argv, argv + argc);
    command.front() = "gclose";

    try {
        Config cfg;
        apply_env(cfg);
        if (horizon)
            cfg.horizon = {*horizon, "flag"};
        if (!tolerance.empty())
            cfg.tolerance = {parse_tolerance(tolerance, "--tolerance"), "flag"};
        if (state_cap)
            cfg.state_cap = {*state_cap, "flag"};
        if (budget)
            cfg.budget = {*budget, "flag"};
        if (terms)
            cfg.terms = {*terms, "flag"};
        if (format == "csv" && !csv_supported(verb))
            throw UsageError("csv output is only available for profile, witness, nullseq and bds");

        const auto t0 = std::chrono::steady_clock::now();
        Outcome out = run_verb(verb, in, cfg);
        const auto t1 = std::chrono::steady_clock::now();

        report::Report r{command, GCLOSE_VERSION, cfg.to_json(), std::move(out.result),
                         std::chrono::duration<double, std::milli>(t1 - t0).count(), out.provenance};
        std::string text = format == "json"    ? report::serialize(r) + "\n"
                           : format == "human" ? render_human(verb, r)
                                               : render_csv(verb, r);
        if (output.empty()) {
            std::cout << text;
        } else {
            std::ofstream f(output, std::ios::binary);
            if (!(f << text))
                throw UsageError("cannot write '" + output + "'");
        }
        if (verb == "check" && out.exit_code == exit_error)
            fail("E_CHECK_FAILED", "a witness in the report did not re-verify");
        return out.exit_code;
    } catch (const UsageError& e) {
        fail("E_USAGE", e.what());
    } catch (const Error& e) {
        fail(std::string(error_code_name(e.code())), e.what());
    } catch (const std::exception& e) {
        fail("E_INTERNAL", e.what());
    }
    return exit_error;
}

#pragma once

// Finitely generated abelian groups A = Z^r + Z/d_1 + ... + Z/d_m and their
// duals. A character of A is a vector of r circle points followed by m
// residues (k mod d encodes x -> kx/d on the Z/d factor). Subgroups of A are
// stored as their preimage lattice in Z^(r+m), which always contains the
// torsion relations d_i e_(r+i).

#include "circle.hpp"
#include "matrix.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gclose {

struct FgAbelianGroup {
    std::size_t free_rank = 0;
    std::vector<Int> invariant_factors; // d_1 | d_2 | ..., each >= 2

    static FgAbelianGroup free(std::size_t r) { return {r, {}}; }

    std::size_t torsion_rank() const { return invariant_factors.size(); }
    std::size_t dimension() const { return free_rank + invariant_factors.size(); }
    bool is_free() const { return invariant_factors.empty(); }

    void validate() const
    {
        for (std::size_t i = 0; i < invariant_factors.size(); ++i) {
            if (invariant_factors[i] < 2)
                throw Error(ErrorCode::rejected_input, "invariant factors must be >= 2");
            if (i > 0 && invariant_factors[i] % invariant_factors[i - 1] != 0)
                throw Error(ErrorCode::rejected_input, "invariant factors must form a divisibility chain");
        }
    }

    std::string to_string() const
    {
        std::string s;
        if (free_rank > 0)
            s = free_rank == 1 ? "Z" : "Z^" + std::to_string(free_rank);
        for (const Int& d : invariant_factors)
            s += (s.empty() ? "" : " + ") + std::string("Z/") + d.str();
        return s.empty() ? "0" : s;
    }

    friend bool operator==(const FgAbelianGroup&, const FgAbelianGroup&) = default;
};

// Z^generators modulo the row span of `relations`.
inline FgAbelianGroup group_from_presentation(const IntMatrix& relations, std::size_t generators)
{
    if (relations.rows() > 0 && relations.cols() != generators)
        throw Error(ErrorCode::dimension_mismatch, "relation matrix must have one column per generator");
    FgAbelianGroup g;
    std::size_t nonzero = 0;
    if (relations.rows() > 0) {
        for (const Int& d : smith_normal_form(relations).diagonal()) {
            if (d == 0)
                continue;
            ++nonzero;
            if (d > 1)
                g.invariant_factors.push_back(d);
        }
    }
    g.free_rank = generators - nonzero;
    return g;
}

struct Character {
    std::vector<CirclePoint> free;
    std::vector<Int> residues;

    friend bool operator==(const Character&, const Character&) = default;

    bool is_zero() const
    {
        for (const auto& x : free)
            if (!x.is_zero())
                return false;
        for (const auto& r : residues)
            if (r != 0)
                return false;
        return true;
    }

    std::string to_string() const
    {
        std::string s = gclose::to_string(free);
        for (const Int& r : residues)
            s += (s.empty() ? "" : ",") + r.str();
        return s;
    }
};

inline void check_character(const FgAbelianGroup& A, const Character& chi)
{
    if (chi.free.size() != A.free_rank || chi.residues.size() != A.torsion_rank())
        throw Error(ErrorCode::dimension_mismatch, "character '" + chi.to_string() + "' does not match " + A.to_string());
    for (std::size_t i = 0; i < chi.residues.size(); ++i)
        if (chi.residues[i] < 0 || chi.residues[i] >= A.invariant_factors[i])
            throw Error(ErrorCode::rejected_input, "residue out of range in character '" + chi.to_string() + "'");
}

// chi(a) for a in Z^(r+m) (torsion coordinates taken mod d_i).
inline CirclePoint evaluate(const FgAbelianGroup& A, const Character& chi, const std::vector<Int>& a)
{
    if (a.size() != A.dimension())
        throw Error(ErrorCode::dimension_mismatch, "element has wrong dimension for " + A.to_string());
    CirclePoint acc;
    for (std::size_t j = 0; j < A.free_rank; ++j)
        acc = add(acc, int_mul(a[j], chi.free[j]));
    for (std::size_t i = 0; i < A.torsion_rank(); ++i)
        acc = add(acc, CirclePoint::from_rational(a[A.free_rank + i] * chi.residues[i], A.invariant_factors[i]));
    return acc;
}

// "p1,p2,...,k1,k2" with r points followed by m residues.
inline Character parse_character(const FgAbelianGroup& A, std::string_view text, std::size_t base = 0)
{
    Character chi;
    std::size_t start = 0;
    std::size_t index = 0;
    while (true) {
        const std::size_t comma = text.find(',', start);
        const std::string_view piece = text.substr(start, comma == text.npos ? text.npos : comma - start);
        if (index < A.free_rank)
            chi.free.push_back(parse_point(piece, base + start));
        else
            chi.residues.push_back(mod(parse_int_or_throw(piece, base + start), index - A.free_rank < A.torsion_rank()
                                                                                     ? A.invariant_factors[index - A.free_rank]
                                                                                     : Int(1)));
        ++index;
        if (comma == text.npos)
            break;
        start = comma + 1;
    }
    if (index != A.dimension())
        throw ParseError("character has " + std::to_string(index) + " entries, expected " + std::to_string(A.dimension()), base);
    return chi;
}

struct DualSubgroup {
    FgAbelianGroup ambient;
    std::vector<Character> generators;

    void validate() const
    {
        ambient.validate();
        for (const auto& g : generators)
            check_character(ambient, g);
    }
};

class Sublattice {
public:
    Sublattice(FgAbelianGroup ambient, const std::vector<std::vector<Int>>& generators) : ambient_(std::move(ambient))
    {
        std::vector<std::vector<Int>> cols = generators;
        for (std::size_t i = 0; i < ambient_.torsion_rank(); ++i) {
            std::vector<Int> rel(ambient_.dimension());
            rel[ambient_.free_rank + i] = ambient_.invariant_factors[i];
            cols.push_back(std::move(rel));
        }
        basis_ = column_hermite_basis(cols, ambient_.dimension());
    }

    static Sublattice whole(const FgAbelianGroup& A)
    {
        std::vector<std::vector<Int>> cols;
        for (std::size_t j = 0; j < A.dimension(); ++j) {
            std::vector<Int> e(A.dimension());
            e[j] = 1;
            cols.push_back(std::move(e));
        }
        return Sublattice(A, cols);
    }

    const FgAbelianGroup& ambient() const { return ambient_; }
    // Column Hermite basis of the preimage in Z^(r+m).
    const std::vector<std::vector<Int>>& basis() const { return basis_; }

    bool contains(const std::vector<Int>& a) const
    {
        if (a.size() != ambient_.dimension())
            throw Error(ErrorCode::dimension_mismatch, "element has wrong dimension");
        return hermite_coordinates(basis_, a).has_value();
    }

    // Generators as elements of A: torsion coordinates reduced, zero elements dropped.
    std::vector<std::vector<Int>> generators() const
    {
        std::vector<std::vector<Int>> out;
        for (auto v : basis_) {
            bool zero = true;
            for (std::size_t j = 0; j < v.size(); ++j) {
                if (j >= ambient_.free_rank)
                    v[j] = mod(v[j], ambient_.invariant_factors[j - ambient_.free_rank]);
                if (v[j] != 0)
                    zero = false;
            }
            if (!zero)
                out.push_back(std::move(v));
        }
        return out;
    }

    bool is_trivial() const { return generators().empty(); }

    friend bool operator==(const Sublattice&, const Sublattice&) = default;

    std::string to_string() const
    {
        const auto gens = generators();
        if (gens.empty())
            return "{0}";
        std::string s = "<";
        for (std::size_t i = 0; i < gens.size(); ++i) {
            s += i ? ", (" : "(";
            for (std::size_t j = 0; j < gens[i].size(); ++j)
                s += (j ? "," : "") + gens[i][j].str();
            s += ")";
        }
        return s + ">";
    }

private:
    FgAbelianGroup ambient_;
    std::vector<std::vector<Int>> basis_;
};

// Closure of a subgroup of the dual: finitely many characters plus full
// circle factors t -> t*v along integer directions v of the free part.
struct ClosureDescription {
    FgAbelianGroup ambient;
    std::vector<Character> finite_generators;
    std::vector<std::vector<Int>> torus_directions;

    bool is_finitely_generated() const { return torus_directions.empty(); }

    DualSubgroup as_dual_subgroup() const
    {
        if (!is_finitely_generated())
            throw Error(ErrorCode::rejected_input, "closure contains full circle factors");
        return {ambient, finite_generators};
    }
};

namespace detail {

// Conditions on x in Z^n: exact equations E x = 0 and congruences c x = 0 mod N.
struct KernelSystem {
    std::size_t n = 0;
    std::vector<std::vector<Int>> equations;
    std::vector<std::pair<std::vector<Int>, Int>> congruences;

    void add_character(const FgAbelianGroup& A, const Character& chi)
    {
        Int N = 1;
        for (const auto& x : chi.free)
            N = lcm(N, x.c());
        for (const Int& d : A.invariant_factors)
            N = lcm(N, d);
        std::vector<Int> row(n);
        std::map<Int, std::vector<Rational>> irrational; // d -> coefficient of sqrt(d) per coordinate
        for (std::size_t j = 0; j < A.free_rank; ++j) {
            const CirclePoint& x = chi.free[j];
            row[j] = x.a() * (N / x.c());
            if (x.is_quadratic()) {
                auto& coeffs = irrational[x.d()];
                coeffs.resize(n);
                coeffs[j] = Rational(x.b(), x.c());
            }
        }
        for (std::size_t i = 0; i < A.torsion_rank(); ++i)
            row[A.free_rank + i] = chi.residues[i] * (N / A.invariant_factors[i]);
        if (N > 1)
            congruences.emplace_back(std::move(row), N);
        for (auto& [d, coeffs] : irrational) {
            Int den = 1;
            for (const auto& c : coeffs)
                den = lcm(den, denominator(c));
            std::vector<Int> eq(n);
            for (std::size_t j = 0; j < n; ++j)
                eq[j] = numerator(coeffs[j] * den);
            equations.push_back(std::move(eq));
        }
    }

    std::vector<std::vector<Int>> solve() const
    {
        const std::size_t slack = congruences.size();
        const std::size_t rows = equations.size() + congruences.size();
        if (rows == 0) {
            std::vector<std::vector<Int>> all;
            for (std::size_t j = 0; j < n; ++j) {
                std::vector<Int> e(n);
                e[j] = 1;
                all.push_back(std::move(e));
            }
            return all;
        }
        IntMatrix M(rows, n + slack);
        std::size_t r = 0;
        for (const auto& eq : equations) {
            for (std::size_t j = 0; j < n; ++j)
                M(r, j) = eq[j];
            ++r;
        }
        for (std::size_t s = 0; s < congruences.size(); ++s, ++r) {
            for (std::size_t j = 0; j < n; ++j)
                M(r, j) = congruences[s].first[j];
            M(r, n + s) = congruences[s].second;
        }
        std::vector<std::vector<Int>> out;
        for (auto& v : integer_kernel(M)) {
            v.resize(n);
            out.push_back(std::move(v));
        }
        return out;
    }
};

} // namespace detail

inline Sublattice annihilator(const DualSubgroup& H)
{
    H.validate();
    detail::KernelSystem sys;
    sys.n = H.ambient.dimension();
    for (const auto& chi : H.generators)
        sys.add_character(H.ambient, chi);
    return Sublattice(H.ambient, sys.solve());
}

// The characters of A vanishing on L (the dual of A/L).
inline ClosureDescription annihilator(const Sublattice& L)
{
    const FgAbelianGroup& A = L.ambient();
    const std::size_t n = A.dimension();
    ClosureDescription out{A, {}, {}};
    const IntMatrix B = IntMatrix::from_columns(L.basis(), n);
    const SmithForm f = smith_normal_form(B);
    const std::vector<Int> diag = f.diagonal();
    for (std::size_t i = 0; i < n; ++i) {
        const Int e = i < diag.size() ? diag[i] : Int(0);
        if (e == 1)
            continue;
        if (e == 0) {
            std::vector<Int> dir(A.free_rank);
            for (std::size_t j = 0; j < A.free_rank; ++j)
                dir[j] = f.U(i, j);
            out.torus_directions.push_back(std::move(dir));
            continue;
        }
        Character chi;
        for (std::size_t j = 0; j < A.free_rank; ++j)
            chi.free.push_back(CirclePoint::from_rational(f.U(i, j), e));
        for (std::size_t t = 0; t < A.torsion_rank(); ++t) {
            const Int& d = A.invariant_factors[t];
            chi.residues.push_back(mod(f.U(i, A.free_rank + t) * d / e, d));
        }
        if (!chi.is_zero())
            out.finite_generators.push_back(std::move(chi));
    }
    return out;
}

inline Sublattice annihilator(const ClosureDescription& C)
{
    detail::KernelSystem sys;
    sys.n = C.ambient.dimension();
    for (const auto& chi : C.finite_generators)
        sys.add_character(C.ambient, chi);
    for (const auto& dir : C.torus_directions) {
        std::vector<Int> eq(sys.n);
        for (std::size_t j = 0; j < dir.size(); ++j)
            eq[j] = dir[j];
        sys.equations.push_back(std::move(eq));
    }
    return Sublattice(C.ambient, sys.solve());
}

// Closure of H in the compact dual, as the double annihilator.
inline ClosureDescription closure_in_dual(const DualSubgroup& H) { return annihilator(annihilator(H)); }

// Solves A z = b over the integers; nullopt when no integer solution exists.
inline std::optional<std::vector<Int>> solve_integer_system(const IntMatrix& M, const std::vector<Int>& b)
{
    if (b.size() != M.rows())
        throw Error(ErrorCode::dimension_mismatch, "right-hand side has wrong length");
    const SmithForm f = smith_normal_form(M);
    std::vector<Int> ub(M.rows());
    for (std::size_t i = 0; i < M.rows(); ++i)
        for (std::size_t k = 0; k < M.rows(); ++k)
            ub[i] += f.U(i, k) * b[k];
    std::vector<Int> y(M.cols());
    for (std::size_t i = 0; i < M.rows(); ++i) {
        const Int e = i < std::min(M.rows(), M.cols()) ? f.D(i, i) : Int(0);
        if (e == 0) {
            if (ub[i] != 0)
                return std::nullopt;
            continue;
        }
        if (ub[i] % e != 0)
            return std::nullopt;
        y[i] = ub[i] / e;
    }
    std::vector<Int> z(M.cols());
    for (std::size_t i = 0; i < M.cols(); ++i)
        for (std::size_t k = 0; k < M.cols(); ++k)
            z[i] += f.V(i, k) * y[k];
    return z;
}

// chi in <generators>? Irrational parts must match exactly; rational parts mod 1.
inline bool contains(const DualSubgroup& H, const Character& chi)
{
    H.validate();
    const FgAbelianGroup& A = H.ambient;
    check_character(A, chi);
    const std::size_t m = H.generators.size();
    const std::size_t n = A.dimension();

    // Unknowns: integer coefficients c (m) and integer shifts t (n).
    std::vector<std::vector<Int>> rows;
    std::vector<Int> rhs;
    std::map<Int, int> fields;
    for (const auto& g : H.generators)
        for (const auto& x : g.free)
            if (x.is_quadratic())
                fields[x.d()] = 0;
    for (const auto& x : chi.free)
        if (x.is_quadratic())
            fields[x.d()] = 0;

    auto rational_part = [&](const Character& c, std::size_t j) -> Rational {
        if (j < A.free_rank)
            return Rational(c.free[j].a(), c.free[j].c());
        return Rational(c.residues[j - A.free_rank], A.invariant_factors[j - A.free_rank]);
    };
    auto irrational_part = [&](const Character& c, std::size_t j, const Int& d) -> Rational {
        if (j >= A.free_rank || c.free[j].d() != d)
            return 0;
        return Rational(c.free[j].b(), c.free[j].c());
    };
    auto push_row = [&](std::vector<Rational> coeffs, Rational target) {
        Int den = denominator(target);
        for (const auto& c : coeffs)
            den = lcm(den, denominator(c));
        std::vector<Int> row;
        for (const auto& c : coeffs)
            row.push_back(numerator(c * den));
        rows.push_back(std::move(row));
        rhs.push_back(numerator(target * den));
    };

    for (std::size_t j = 0; j < n; ++j) {
        std::vector<Rational> coeffs(m + n);
        for (std::size_t i = 0; i < m; ++i)
            coeffs[i] = rational_part(H.generators[i], j);
        coeffs[m + j] = -1;
        push_row(std::move(coeffs), rational_part(chi, j));
        for (const auto& [d, unused] : fields) {
            std::vector<Rational> ic(m + n);
            bool any = false;
            for (std::size_t i = 0; i < m; ++i) {
                ic[i] = irrational_part(H.generators[i], j, d);
                any = any || ic[i] != 0;
            }
            const Rational target = irrational_part(chi, j, d);
            if (!any && target == 0)
                continue;
            push_row(std::move(ic), target);
        }
    }
    return solve_integer_system(IntMatrix::from_rows(rows, m + n), rhs).has_value();
}

// A discrete group A with the coarsest group topology making the listed
// characters continuous.
struct PrecompactTopology {
    FgAbelianGroup ambient;
    std::vector<Character> characters;

    static PrecompactTopology on_free(std::size_t k, const std::vector<std::vector<CirclePoint>>& chars)
    {
        PrecompactTopology t{FgAbelianGroup::free(k), {}};
        for (const auto& c : chars) {
            if (c.size() != k)
                throw Error(ErrorCode::dimension_mismatch, "character of length " + std::to_string(c.size()) +
                                                               " on Z^" + std::to_string(k));
            t.characters.push_back(Character{c, {}});
        }
        return t;
    }

    std::size_t dimension() const { return ambient.dimension(); }

    // Free-part coordinates of every character (requires a free ambient).
    std::vector<std::vector<CirclePoint>> free_characters() const
    {
        if (!ambient.is_free())
            throw Error(ErrorCode::rejected_input, "operation requires a free ambient group Z^k");
        std::vector<std::vector<CirclePoint>> out;
        for (const auto& c : characters)
            out.push_back(c.free);
        return out;
    }
};

// n(A, tau_H): the joint kernel of the generating characters.
inline Sublattice von_neumann_radical(const PrecompactTopology& topology)
{
    return annihilator(DualSubgroup{topology.ambient, topology.characters});
}

} // namespace gclose

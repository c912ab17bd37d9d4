#pragma once

// Independent reference computations shared by the unit tests and the
// acceptance binary. Everything here uses plain machine integers or naive
// algorithms; none of it calls the SNF, orbit or search code under test.

#include <gclose/circle.hpp>
#include <gclose/matrix.hpp>

#include <cstdint>
#include <numeric>
#include <set>
#include <vector>

namespace oracle {

using gclose::Int;

__extension__ using u128 = unsigned __int128;

// Does b^n * (1/q) reach 0 mod 1? The residues b^n mod q repeat within q
// steps, so q + 1 iterations decide it.
inline bool geometric_admits(std::uint64_t b, std::uint64_t q)
{
    std::uint64_t r = 1 % q;
    for (std::uint64_t n = 0; n <= q + 1; ++n) {
        if (r == 0)
            return true;
        r = static_cast<std::uint64_t>((static_cast<u128>(r) * b) % q);
    }
    return false;
}

// First n with q | n!, by direct multiplication.
inline std::uint64_t factorial_threshold(std::uint64_t q)
{
    std::uint64_t f = 1 % q, n = 0;
    while (f != 0) {
        ++n;
        f = static_cast<std::uint64_t>((static_cast<u128>(f) * n) % q);
    }
    return n;
}

// Pisano-style period of a linear recurrence x_{n+1} = a x_n + x_{n-1} mod m,
// started from (x_0, x_1); returns (preperiod, period) by naive pair search.
inline std::pair<std::size_t, std::size_t> recurrence_cycle(std::int64_t a, std::int64_t x0, std::int64_t x1, std::int64_t m)
{
    std::vector<std::pair<std::int64_t, std::int64_t>> seen;
    std::int64_t u = ((x0 % m) + m) % m, v = ((x1 % m) + m) % m;
    while (true) {
        for (std::size_t i = 0; i < seen.size(); ++i)
            if (seen[i] == std::make_pair(u, v))
                return {i, seen.size() - i};
        seen.emplace_back(u, v);
        const std::int64_t w = ((a % m) * v + u) % m;
        u = v;
        v = (w + m) % m;
    }
}

// Kernel of the integer matrix M (rows x cols) by extended-gcd column
// operations on [M; I]: once the top block is in column echelon form, the
// bottom parts of its zero columns span the kernel.
inline std::vector<std::vector<Int>> echelon_kernel(std::vector<std::vector<Int>> M, std::size_t cols)
{
    const std::size_t rows = M.size();
    std::vector<std::vector<Int>> A(rows + cols, std::vector<Int>(cols));
    for (std::size_t i = 0; i < rows; ++i)
        A[i] = M[i];
    for (std::size_t j = 0; j < cols; ++j)
        A[rows + j][j] = 1;
    auto col_op = [&](std::size_t dst, std::size_t src, const Int& k) {
        for (auto& row : A)
            row[dst] += k * row[src];
    };
    auto col_swap = [&](std::size_t x, std::size_t y) {
        for (auto& row : A)
            std::swap(row[x], row[y]);
    };
    std::size_t lead = 0;
    for (std::size_t r = 0; r < rows && lead < cols; ++r) {
        // gcd-combine columns lead.. on row r
        for (std::size_t j = lead + 1; j < cols; ++j) {
            while (A[r][j] != 0) {
                const Int q = A[r][lead] / A[r][j];
                col_op(lead, j, -q);
                col_swap(lead, j);
            }
        }
        if (A[r][lead] != 0)
            ++lead;
    }
    std::vector<std::vector<Int>> kernel;
    for (std::size_t j = lead; j < cols; ++j) {
        std::vector<Int> v(cols);
        for (std::size_t i = 0; i < cols; ++i)
            v[i] = A[rows + i][j];
        kernel.push_back(std::move(v));
    }
    return kernel;
}

// Joint kernel in Z^k of rational characters (each a list of k rationals):
// sum_j a_j p_j/q_j in Z for every character. Slack variables turn the
// congruences into a plain integer kernel.
inline std::vector<std::vector<Int>> rational_radical(const std::vector<std::vector<gclose::CirclePoint>>& chars, std::size_t k)
{
    const std::size_t m = chars.size();
    std::vector<std::vector<Int>> M;
    for (std::size_t i = 0; i < m; ++i) {
        Int N = 1;
        for (const auto& x : chars[i])
            N = gclose::lcm(N, x.den());
        std::vector<Int> row(k + m);
        for (std::size_t j = 0; j < k; ++j)
            row[j] = chars[i][j].num() * (N / chars[i][j].den());
        row[k + i] = N;
        M.push_back(std::move(row));
    }
    auto ker = echelon_kernel(M, k + m);
    for (auto& v : ker)
        v.resize(k);
    return ker;
}

// Brute-force dual of Z/d1 + Z/d2 (d2 may be 1 for a cyclic group).
struct FiniteGroup2 {
    int d1, d2;

    int size() const { return d1 * d2; }
    int encode(int x, int y) const { return x * d2 + y; }
    int add(int u, int v) const { return encode((u / d2 + v / d2) % d1, (u % d2 + v % d2) % d2); }

    // chi(a) = (k1 a1/d1 + k2 a2/d2) mod 1 == 0
    bool pairs_to_zero(int chi, int a) const
    {
        const long long num = static_cast<long long>(chi / d2) * (a / d2) * d2 + static_cast<long long>(chi % d2) * (a % d2) * d1;
        return num % (static_cast<long long>(d1) * d2) == 0;
    }

    std::set<int> span(const std::vector<int>& gens) const
    {
        std::set<int> s{0};
        std::vector<int> frontier{0};
        while (!frontier.empty()) {
            const int x = frontier.back();
            frontier.pop_back();
            for (int g : gens) {
                const int y = add(x, g);
                if (s.insert(y).second)
                    frontier.push_back(y);
            }
        }
        return s;
    }

    // Every subgroup, each as a sorted element set. Rank <= 2, so pairs suffice.
    std::set<std::set<int>> all_subgroups() const
    {
        std::set<std::set<int>> out;
        for (int x = 0; x < size(); ++x)
            for (int y = x; y < size(); ++y)
                out.insert(span({x, y}));
        return out;
    }

    std::set<int> annihilator(const std::set<int>& H) const
    {
        std::set<int> out;
        for (int a = 0; a < size(); ++a) {
            bool all = true;
            for (int chi : H)
                all = all && pairs_to_zero(chi, a);
            if (all)
                out.insert(a);
        }
        return out;
    }
};

// Cofactor expansion; independent of the Bareiss code under test.
inline Int laplace_det(const gclose::IntMatrix& m)
{
    const std::size_t n = m.rows();
    if (n == 0)
        return 1;
    if (n == 1)
        return m(0, 0);
    Int total = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (m(0, j) == 0)
            continue;
        gclose::IntMatrix minor(n - 1, n - 1);
        for (std::size_t i = 1; i < n; ++i)
            for (std::size_t c = 0, cc = 0; c < n; ++c)
                if (c != j)
                    minor(i - 1, cc++) = m(i, c);
        const Int term = m(0, j) * laplace_det(minor);
        total += (j % 2 == 0) ? term : Int(-term);
    }
    return total;
}

inline void subsets(std::size_t n, std::size_t k, std::size_t from, std::vector<std::size_t>& cur, std::vector<std::vector<std::size_t>>& out)
{
    if (cur.size() == k) {
        out.push_back(cur);
        return;
    }
    for (std::size_t i = from; i < n; ++i) {
        cur.push_back(i);
        subsets(n, k, i + 1, cur, out);
        cur.pop_back();
    }
}

// gcd of all i x i minors (the i-th determinantal divisor).
inline Int determinantal_divisor(const gclose::IntMatrix& m, std::size_t i)
{
    std::vector<std::vector<std::size_t>> rs, cs;
    std::vector<std::size_t> cur;
    subsets(m.rows(), i, 0, cur, rs);
    subsets(m.cols(), i, 0, cur, cs);
    Int g = 0;
    for (const auto& r : rs)
        for (const auto& c : cs) {
            gclose::IntMatrix sub(i, i);
            for (std::size_t a = 0; a < i; ++a)
                for (std::size_t b = 0; b < i; ++b)
                    sub(a, b) = m(r[a], c[b]);
            g = gclose::gcd(g, laplace_det(sub));
        }
    return g;
}

// Subgroup of (Q/Z)^k generated by rational vectors, by breadth-first
// closure on numerators over a common denominator L.
struct RationalSpan {
    long long L = 1;
    std::set<std::vector<long long>> elements;

    std::vector<long long> scaled(const std::vector<gclose::CirclePoint>& x) const
    {
        std::vector<long long> v;
        for (const auto& c : x) {
            const long long num = c.num().convert_to<long long>(), den = c.den().convert_to<long long>();
            if (L % den != 0)
                return {};
            v.push_back(((num * (L / den)) % L + L) % L);
        }
        return v;
    }

    bool contains(const std::vector<gclose::CirclePoint>& x) const
    {
        const auto v = scaled(x);
        return !v.empty() && elements.count(v) == 1;
    }
};

inline RationalSpan rational_span(const std::vector<std::vector<gclose::CirclePoint>>& gens, std::size_t k)
{
    RationalSpan s;
    for (const auto& g : gens)
        for (const auto& c : g)
            s.L = std::lcm(s.L, c.den().convert_to<long long>());
    std::vector<std::vector<long long>> steps;
    for (const auto& g : gens)
        steps.push_back(s.scaled(g));
    std::vector<long long> zero(k, 0);
    s.elements.insert(zero);
    std::vector<std::vector<long long>> frontier{zero};
    while (!frontier.empty()) {
        const auto x = frontier.back();
        frontier.pop_back();
        for (const auto& g : steps) {
            auto y = x;
            for (std::size_t j = 0; j < k; ++j)
                y[j] = (y[j] + g[j]) % s.L;
            if (s.elements.insert(y).second)
                frontier.push_back(y);
        }
    }
    return s;
}

} // namespace oracle

#pragma once

// Integer-vector sequences u = (u_n) in Z^k, described by closed-form
// generators. Scalar generators (geometric, factorial, continued-fraction
// denominators, constant) produce s_n * pattern for a fixed integer pattern.
//
// Text syntax:
//   geom:2            2^n
//   fact              n!
//   cfden:<point>     convergent denominators q_n of an irrational point
//   const:6           the constant sequence
//   <scalar>@(1,3)    scalar sequence times the pattern (1,3); @5 for k = 1
//   list:1,2,3,5      explicit finite list; list:(1,0),(0,1) for vectors
//   interleave(s1;s2)           round robin, one term from each
//   interleave[2,1](s1;s2)      round robin by blocks of 2 and 1
//   sub(a,b):<spec>   the subsequence n -> u_(a*n+b)

#include "continued_fraction.hpp"

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace gclose {

class IntVecSeq;

namespace seq {

struct Geometric {
    Int base;
    std::vector<Int> pattern;
};

struct Factorial {
    std::vector<Int> pattern;
};

struct CFDenominators {
    CirclePoint alpha;
    CFExpansion cf;
    std::vector<Int> pattern;
};

struct Constant {
    std::vector<Int> pattern;
};

struct Explicit {
    std::vector<std::vector<Int>> terms;
};

struct Interleave {
    std::vector<IntVecSeq> parts;
    std::vector<std::size_t> blocks;
};

struct Subsequence {
    std::shared_ptr<const IntVecSeq> parent;
    std::size_t step;
    std::size_t offset;
};

using Node = std::variant<Geometric, Factorial, CFDenominators, Constant, Explicit, Interleave, Subsequence>;

} // namespace seq

class IntVecSeq {
public:
    static IntVecSeq geometric(const Int& base, std::vector<Int> pattern = {1})
    {
        if (base < 2)
            throw Error(ErrorCode::rejected_input, "geometric base must be >= 2");
        return IntVecSeq(seq::Geometric{base, std::move(pattern)});
    }

    static IntVecSeq factorial(std::vector<Int> pattern = {1}) { return IntVecSeq(seq::Factorial{std::move(pattern)}); }

    static IntVecSeq cf_denominators(const CirclePoint& alpha, std::vector<Int> pattern = {1})
    {
        if (alpha.is_rational())
            throw Error(ErrorCode::rejected_input, "cfden needs an irrational point, got " + alpha.to_string());
        return IntVecSeq(seq::CFDenominators{alpha, cf_expand(alpha, 1), std::move(pattern)});
    }

    static IntVecSeq constant(std::vector<Int> pattern) { return IntVecSeq(seq::Constant{std::move(pattern)}); }

    static IntVecSeq explicit_list(std::vector<std::vector<Int>> terms)
    {
        if (terms.empty())
            throw Error(ErrorCode::rejected_input, "explicit sequence must have at least one term");
        for (const auto& t : terms)
            if (t.size() != terms.front().size() || t.empty())
                throw Error(ErrorCode::dimension_mismatch, "explicit sequence terms must share one dimension");
        return IntVecSeq(seq::Explicit{std::move(terms)});
    }

    static IntVecSeq interleave(std::vector<IntVecSeq> parts, std::vector<std::size_t> blocks = {})
    {
        if (parts.empty())
            throw Error(ErrorCode::rejected_input, "interleave needs at least one part");
        if (blocks.empty())
            blocks.assign(parts.size(), 1);
        if (blocks.size() != parts.size())
            throw Error(ErrorCode::rejected_input, "interleave needs one block length per part");
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (blocks[i] == 0)
                throw Error(ErrorCode::rejected_input, "interleave block lengths must be positive");
            if (parts[i].dimension() != parts.front().dimension())
                throw Error(ErrorCode::dimension_mismatch, "interleaved sequences must share one dimension");
        }
        return IntVecSeq(seq::Interleave{std::move(parts), std::move(blocks)});
    }

    static IntVecSeq subsequence(IntVecSeq parent, std::size_t step, std::size_t offset)
    {
        if (step == 0)
            throw Error(ErrorCode::rejected_input, "subsequence step must be >= 1");
        return IntVecSeq(seq::Subsequence{std::make_shared<const IntVecSeq>(std::move(parent)), step, offset});
    }

    const seq::Node& node() const { return *node_; }
    std::size_t dimension() const { return dimension_; }

    // Number of available terms; nullopt for infinite sequences.
    std::optional<std::size_t> horizon() const
    {
        return std::visit(
            [](const auto& n) -> std::optional<std::size_t> {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, seq::Explicit>) {
                    return n.terms.size();
                } else if constexpr (std::is_same_v<T, seq::Interleave>) {
                    // a finite part bounds the whole interleaving
                    std::optional<std::size_t> best;
                    const std::size_t cycle = total(n.blocks);
                    for (std::size_t i = 0; i < n.parts.size(); ++i) {
                        auto h = n.parts[i].horizon();
                        if (!h)
                            continue;
                        // term of part i with local index h is the first unavailable one
                        const std::size_t before = block_start(n.blocks, i);
                        const std::size_t limit = (*h / n.blocks[i]) * cycle + before + (*h % n.blocks[i]);
                        best = best ? std::min(*best, limit) : limit;
                    }
                    return best;
                } else if constexpr (std::is_same_v<T, seq::Subsequence>) {
                    auto h = n.parent->horizon();
                    if (!h)
                        return std::nullopt;
                    return *h <= n.offset ? 0 : (*h - n.offset + n.step - 1) / n.step;
                } else {
                    return std::nullopt;
                }
            },
            *node_);
    }

    // Resolves term n to (scalar leaf, leaf index) or (explicit leaf, index).
    std::pair<const IntVecSeq*, std::size_t> locate(std::size_t n) const
    {
        const IntVecSeq* s = this;
        while (true) {
            if (const auto* il = std::get_if<seq::Interleave>(&s->node())) {
                const std::size_t cycle = total(il->blocks);
                const std::size_t round = n / cycle;
                std::size_t r = n % cycle;
                std::size_t i = 0;
                while (r >= il->blocks[i]) {
                    r -= il->blocks[i];
                    ++i;
                }
                n = round * il->blocks[i] + r;
                s = &il->parts[i];
            } else if (const auto* sub = std::get_if<seq::Subsequence>(&s->node())) {
                n = sub->step * n + sub->offset;
                s = sub->parent.get();
            } else {
                return {s, n};
            }
        }
    }

    std::vector<Int> eval(std::size_t n) const
    {
        auto [leaf, index] = locate(n);
        return leaf->leaf_terms({index}).front();
    }

    // Terms u_0 .. u_(count-1).
    std::vector<std::vector<Int>> terms(std::size_t count) const
    {
        std::map<const IntVecSeq*, std::vector<std::size_t>> wanted;
        std::vector<std::pair<const IntVecSeq*, std::size_t>> where(count);
        for (std::size_t n = 0; n < count; ++n) {
            where[n] = locate(n);
            wanted[where[n].first].push_back(where[n].second);
        }
        std::map<const IntVecSeq*, std::map<std::size_t, std::vector<Int>>> values;
        for (auto& [leaf, idx] : wanted) {
            auto vals = leaf->leaf_terms(idx);
            for (std::size_t i = 0; i < idx.size(); ++i)
                values[leaf].emplace(idx[i], std::move(vals[i]));
        }
        std::vector<std::vector<Int>> out;
        out.reserve(count);
        for (auto& [leaf, index] : where)
            out.push_back(values[leaf].at(index));
        return out;
    }

    std::string to_string() const
    {
        return std::visit(
            [](const auto& n) -> std::string {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, seq::Geometric>) {
                    return "geom:" + n.base.str() + pattern_suffix(n.pattern);
                } else if constexpr (std::is_same_v<T, seq::Factorial>) {
                    return "fact" + pattern_suffix(n.pattern);
                } else if constexpr (std::is_same_v<T, seq::CFDenominators>) {
                    return "cfden:" + n.alpha.to_string() + pattern_suffix(n.pattern);
                } else if constexpr (std::is_same_v<T, seq::Constant>) {
                    return "const:" + vector_literal(n.pattern);
                } else if constexpr (std::is_same_v<T, seq::Explicit>) {
                    std::string s = "list:";
                    for (std::size_t i = 0; i < n.terms.size(); ++i)
                        s += (i ? "," : "") + vector_literal(n.terms[i]);
                    return s;
                } else if constexpr (std::is_same_v<T, seq::Interleave>) {
                    std::string s = "interleave";
                    bool unit = true;
                    for (auto b : n.blocks)
                        unit = unit && b == 1;
                    if (!unit) {
                        s += "[";
                        for (std::size_t i = 0; i < n.blocks.size(); ++i)
                            s += (i ? "," : "") + std::to_string(n.blocks[i]);
                        s += "]";
                    }
                    s += "(";
                    for (std::size_t i = 0; i < n.parts.size(); ++i)
                        s += (i ? ";" : "") + n.parts[i].to_string();
                    return s + ")";
                } else {
                    return "sub(" + std::to_string(n.step) + "," + std::to_string(n.offset) + "):" + n.parent->to_string();
                }
            },
            *node_);
    }

    static std::string vector_literal(const std::vector<Int>& v)
    {
        if (v.size() == 1)
            return v.front().str();
        std::string s = "(";
        for (std::size_t i = 0; i < v.size(); ++i)
            s += (i ? "," : "") + v[i].str();
        return s + ")";
    }

    static std::size_t total(const std::vector<std::size_t>& blocks)
    {
        std::size_t t = 0;
        for (auto b : blocks)
            t += b;
        return t;
    }

    static std::size_t block_start(const std::vector<std::size_t>& blocks, std::size_t i)
    {
        std::size_t t = 0;
        for (std::size_t j = 0; j < i; ++j)
            t += blocks[j];
        return t;
    }

private:
    explicit IntVecSeq(seq::Node node) : node_(std::make_shared<const seq::Node>(std::move(node)))
    {
        dimension_ = std::visit(
            [](const auto& n) -> std::size_t {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, seq::Explicit>)
                    return n.terms.front().size();
                else if constexpr (std::is_same_v<T, seq::Interleave>)
                    return n.parts.front().dimension();
                else if constexpr (std::is_same_v<T, seq::Subsequence>)
                    return n.parent->dimension();
                else
                    return n.pattern.size();
            },
            *node_);
        if (dimension_ == 0)
            throw Error(ErrorCode::rejected_input, "sequence dimension must be >= 1");
    }

    static std::string pattern_suffix(const std::vector<Int>& p)
    {
        if (p.size() == 1 && p.front() == 1)
            return "";
        if (p.size() == 1)
            return "@" + p.front().str();
        return "@" + vector_literal(p);
    }

    static std::vector<Int> scaled(const Int& s, const std::vector<Int>& pattern)
    {
        std::vector<Int> v(pattern.size());
        for (std::size_t i = 0; i < v.size(); ++i)
            v[i] = s * pattern[i];
        return v;
    }

    // Values of a leaf at the given (arbitrary-order) indices.
    std::vector<std::vector<Int>> leaf_terms(const std::vector<std::size_t>& indices) const
    {
        std::size_t max_index = 0;
        for (auto i : indices)
            max_index = std::max(max_index, i);
        std::vector<std::vector<Int>> out;
        out.reserve(indices.size());
        std::visit(
            [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, seq::Explicit>) {
                    for (auto i : indices) {
                        if (i >= n.terms.size())
                            throw Error(ErrorCode::bounded_sequence, "explicit sequence has only " +
                                                                         std::to_string(n.terms.size()) + " terms");
                        out.push_back(n.terms[i]);
                    }
                } else if constexpr (std::is_same_v<T, seq::Constant>) {
                    for (std::size_t i = 0; i < indices.size(); ++i)
                        out.push_back(n.pattern);
                } else if constexpr (std::is_same_v<T, seq::Geometric>) {
                    for (auto i : indices)
                        out.push_back(scaled(pow(n.base, static_cast<unsigned>(i)), n.pattern));
                } else if constexpr (std::is_same_v<T, seq::Factorial>) {
                    std::vector<Int> f(max_index + 1);
                    f[0] = 1;
                    for (std::size_t i = 1; i <= max_index; ++i)
                        f[i] = f[i - 1] * i;
                    for (auto i : indices)
                        out.push_back(scaled(f[i], n.pattern));
                } else if constexpr (std::is_same_v<T, seq::CFDenominators>) {
                    std::vector<Int> q(max_index + 1);
                    Int prev = 0, cur = 1;
                    q[0] = 1;
                    for (std::size_t i = 1; i <= max_index; ++i) {
                        Int next = n.cf.digit(i) * cur + prev;
                        prev = std::move(cur);
                        cur = std::move(next);
                        q[i] = cur;
                    }
                    for (auto i : indices)
                        out.push_back(scaled(q[i], n.pattern));
                }
            },
            *node_);
        return out;
    }

    std::shared_ptr<const seq::Node> node_;
    std::size_t dimension_ = 1;
};

inline std::vector<Int> eval_seq(const IntVecSeq& u, std::size_t n) { return u.eval(n); }

namespace detail {

inline std::string_view trim(std::string_view s, std::size_t& base)
{
    while (!s.empty() && s.front() == ' ') {
        s.remove_prefix(1);
        ++base;
    }
    while (!s.empty() && s.back() == ' ')
        s.remove_suffix(1);
    return s;
}

// Splits on `sep` at parenthesis depth 0; returns piece offsets.
inline std::vector<std::pair<std::size_t, std::size_t>> split_top(std::string_view s, char sep, std::size_t base)
{
    std::vector<std::pair<std::size_t, std::size_t>> out;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '(' || s[i] == '[')
            ++depth;
        else if (s[i] == ')' || s[i] == ']') {
            if (--depth < 0)
                throw ParseError("unbalanced ')'", base + i);
        } else if (s[i] == sep && depth == 0) {
            out.emplace_back(start, i - start);
            start = i + 1;
        }
    }
    if (depth != 0)
        throw ParseError("unbalanced '('", base + s.size());
    out.emplace_back(start, s.size() - start);
    return out;
}

// "5" or "(1,2,3)"
inline std::vector<Int> parse_int_vector(std::string_view s, std::size_t base)
{
    s = trim(s, base);
    if (s.empty())
        throw ParseError("expected an integer or integer vector", base);
    if (s.front() != '(')
        return {parse_int_or_throw(s, base)};
    if (s.back() != ')')
        throw ParseError("expected ')'", base + s.size());
    std::vector<Int> v;
    for (auto [off, len] : split_top(s.substr(1, s.size() - 2), ',', base + 1)) {
        std::size_t b = base + 1 + off;
        v.push_back(parse_int_or_throw(trim(s.substr(1 + off, len), b), b));
    }
    return v;
}

inline IntVecSeq parse_seq_at(std::string_view text, std::size_t base);

// Leaf with optional "@pattern".
inline std::pair<std::string_view, std::vector<Int>> split_pattern(std::string_view s, std::size_t base)
{
    int depth = 0;
    for (std::size_t i = s.size(); i-- > 0;) {
        if (s[i] == ')')
            ++depth;
        else if (s[i] == '(')
            --depth;
        else if (s[i] == '@' && depth == 0)
            return {s.substr(0, i), parse_int_vector(s.substr(i + 1), base + i + 1)};
    }
    return {s, {Int(1)}};
}

inline IntVecSeq parse_seq_at(std::string_view text, std::size_t base)
{
    text = trim(text, base);
    auto starts = [&](std::string_view p) { return text.substr(0, p.size()) == p; };

    if (starts("interleave")) {
        std::size_t pos = 10;
        std::vector<std::size_t> blocks;
        if (pos < text.size() && text[pos] == '[') {
            const std::size_t close = text.find(']', pos);
            if (close == text.npos)
                throw ParseError("expected ']'", base + pos);
            for (const Int& b : parse_int_vector("(" + std::string(text.substr(pos + 1, close - pos - 1)) + ")", base + pos)) {
                if (b < 1)
                    throw ParseError("block lengths must be positive", base + pos);
                blocks.push_back(b.convert_to<std::size_t>());
            }
            pos = close + 1;
        }
        if (pos >= text.size() || text[pos] != '(' || text.back() != ')')
            throw ParseError("expected interleave(...)", base + pos);
        const std::string_view inner = text.substr(pos + 1, text.size() - pos - 2);
        std::vector<IntVecSeq> parts;
        for (auto [off, len] : split_top(inner, ';', base + pos + 1))
            parts.push_back(parse_seq_at(inner.substr(off, len), base + pos + 1 + off));
        return IntVecSeq::interleave(std::move(parts), std::move(blocks));
    }
    if (starts("sub(")) {
        const std::size_t close = text.find(')');
        if (close == text.npos || close + 1 >= text.size() || text[close + 1] != ':')
            throw ParseError("expected sub(a,b):<sequence>", base);
        const auto ab = parse_int_vector(text.substr(3, close - 2), base + 3);
        if (ab.size() != 2 || ab[0] < 1 || ab[1] < 0)
            throw ParseError("sub needs step >= 1 and offset >= 0", base + 4);
        return IntVecSeq::subsequence(parse_seq_at(text.substr(close + 2), base + close + 2),
                                      ab[0].convert_to<std::size_t>(), ab[1].convert_to<std::size_t>());
    }
    if (starts("list:")) {
        std::vector<std::vector<Int>> terms;
        for (auto [off, len] : split_top(text.substr(5), ',', base + 5))
            terms.push_back(parse_int_vector(text.substr(5 + off, len), base + 5 + off));
        return IntVecSeq::explicit_list(std::move(terms));
    }
    if (starts("const:"))
        return IntVecSeq::constant(parse_int_vector(text.substr(6), base + 6));

    auto [head, pattern] = split_pattern(text, base);
    if (head.substr(0, 5) == "geom:") {
        std::size_t at = base + 5;
        const std::string_view digits = trim(head.substr(5), at);
        return IntVecSeq::geometric(parse_int_or_throw(digits, at), std::move(pattern));
    }
    if (head == "fact")
        return IntVecSeq::factorial(std::move(pattern));
    if (head.substr(0, 6) == "cfden:") {
        const CirclePoint alpha = parse_point(head.substr(6), base + 6);
        if (alpha.is_rational())
            throw ParseError("cfden needs a quadratic irrational", base + 6);
        return IntVecSeq::cf_denominators(alpha, std::move(pattern));
    }
    throw ParseError("unknown sequence generator '" + std::string(text) + "'", base);
}

} // namespace detail

inline IntVecSeq parse_seq(std::string_view text) { return detail::parse_seq_at(text, 0); }

} // namespace gclose

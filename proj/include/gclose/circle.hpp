#pragma once

// Exact points of the circle group T = R/Z.
//
// A point is stored as (a + b*sqrt(d))/c with c > 0. Rationals have b == 0 and
// d == 0; quadratic irrationals have b != 0 and d >= 2 squarefree. The stored
// representative always lies in [0, 1), so two points are equal in T exactly
// when their fields are identical.

#include "integer.hpp"

#include <cctype>
#include <compare>
#include <string>
#include <string_view>
#include <vector>

namespace gclose {

namespace detail {

// Sign of p + q*sqrt(d) for squarefree d >= 2 (or q == 0).
inline int sign_of_quadratic(const Int& p, const Int& q, const Int& d)
{
    const int sp = p.sign();
    const int sq = q.sign();
    if (sq == 0)
        return sp;
    if (sp == 0 || sp == sq)
        return sq;
    // opposite signs: compare p^2 against q^2 d
    const int c = (p * p).compare(q * q * d);
    return sp > 0 ? c : -c;
}

// floor((a + b*sqrt(d))/c) for c > 0, b != 0, d squarefree >= 2.
inline Int floor_quadratic(const Int& a, const Int& b, const Int& c, const Int& d)
{
    const Int s = isqrt(b * b * d);
    const Int lower = b > 0 ? Int(a + s) : Int(a - s - 1);
    return floor_div(lower, c);
}

inline unsigned bit_length(const Int& x) { return x == 0 ? 0U : static_cast<unsigned>(msb(abs(x))) + 1U; }

} // namespace detail

// Certified bounds on a real quantity; Exact means lower == upper is the value.
struct Enclosure {
    enum class Kind { exact, interval };

    Rational lower;
    Rational upper;
    Kind kind = Kind::exact;

    static Enclosure exact(const Rational& v) { return {v, v, Kind::exact}; }
    static Enclosure interval(const Rational& lo, const Rational& hi) { return {lo, hi, Kind::interval}; }

    bool is_exact() const { return kind == Kind::exact; }
    Rational width() const { return upper - lower; }
    bool contains(const Rational& v) const { return lower <= v && v <= upper; }
    bool intersects(const Enclosure& o) const { return lower <= o.upper && o.lower <= upper; }

    friend bool operator==(const Enclosure&, const Enclosure&) = default;
};

inline const Rational& default_norm_tolerance()
{
    static const Rational tol(Int(1), pow2(64));
    return tol;
}

class CirclePoint {
public:
    CirclePoint() : a_(0), b_(0), c_(1), d_(0) {}

    // raw_num / raw_den mod 1
    static CirclePoint from_rational(const Int& raw_num, const Int& raw_den)
    {
        if (raw_den == 0)
            throw Error(ErrorCode::zero_denominator, "zero denominator");
        return make(raw_num, 0, raw_den, 0);
    }

    static CirclePoint from_rational(const Rational& r) { return from_rational(numerator(r), denominator(r)); }

    // (a + b*sqrt(d))/c mod 1; d need not be squarefree, but must not be a perfect square.
    static CirclePoint from_quadratic(const Int& a, const Int& b, const Int& c, const Int& d)
    {
        if (c == 0)
            throw Error(ErrorCode::zero_denominator, "zero denominator");
        if (b == 0)
            return from_rational(a, c);
        if (d <= 0 || is_perfect_square(d))
            throw Error(ErrorCode::rejected_input, "sqrt(" + d.str() + ") is not a quadratic irrational");
        return make(a, b, c, d);
    }

    bool is_rational() const { return b_ == 0; }
    bool is_quadratic() const { return b_ != 0; }
    bool is_zero() const { return a_ == 0 && b_ == 0; }

    // Rational accessors (valid when is_rational()).
    const Int& num() const { return a_; }
    const Int& den() const { return c_; }
    Rational as_rational() const { return Rational(a_, c_); }

    const Int& a() const { return a_; }
    const Int& b() const { return b_; }
    const Int& c() const { return c_; }
    const Int& d() const { return d_; }

    friend bool operator==(const CirclePoint&, const CirclePoint&) = default;

    // Lexicographic order on the canonical fields; only used for deterministic containers.
    friend bool operator<(const CirclePoint& x, const CirclePoint& y)
    {
        if (x.d_ != y.d_)
            return x.d_ < y.d_;
        if (x.c_ != y.c_)
            return x.c_ < y.c_;
        if (x.b_ != y.b_)
            return x.b_ < y.b_;
        return x.a_ < y.a_;
    }

    // Exact sign of (representative - t).
    int compare_representative(const Rational& t) const
    {
        const Int P = numerator(t);
        const Int Q = denominator(t);
        return detail::sign_of_quadratic(a_ * Q - P * c_, b_ * Q, d_);
    }

    // Exact sign of (||x|| - t), where ||x|| = min(r, 1 - r).
    int compare_norm(const Rational& t) const
    {
        static const Rational half(1, 2);
        if (compare_representative(half) <= 0)
            return compare_representative(t);
        return -compare_representative(Rational(1) - t);
    }

    bool norm_le(const Rational& t) const { return compare_norm(t) <= 0; }
    bool norm_lt(const Rational& t) const { return compare_norm(t) < 0; }
    bool norm_ge(const Rational& t) const { return compare_norm(t) >= 0; }

    // Enclosure of the representative r in [0, 1) with width <= tol.
    Enclosure representative(const Rational& tol = default_norm_tolerance()) const
    {
        if (is_rational())
            return Enclosure::exact(as_rational());
        // |b|/c * 2^-k <= tol  <=>  2^k >= |b| / (c * tol)
        const Rational ratio = Rational(abs(b_)) / (Rational(c_) * tol);
        const Int need = floor(ratio) + 1;
        const unsigned k = detail::bit_length(need);
        const Int scale = pow2(k);
        const Int s = isqrt(d_ * scale * scale);
        Rational lo = Rational(a_ * scale + b_ * s, c_ * scale);
        Rational hi = Rational(a_ * scale + b_ * (s + 1), c_ * scale);
        if (lo > hi)
            std::swap(lo, hi);
        if (lo < 0)
            lo = 0;
        if (hi > 1)
            hi = 1;
        return Enclosure::interval(lo, hi);
    }

    double approx() const
    {
        const Enclosure e = representative(Rational(Int(1), pow2(60)));
        return static_cast<double>((e.lower + e.upper) / 2);
    }

    std::string to_string() const
    {
        if (is_rational())
            return a_.str() + "/" + c_.str();
        std::string s = "quad:(" + a_.str();
        s += b_ < 0 ? "-" : "+";
        s += abs(b_).str() + "*sqrt(" + d_.str() + "))/" + c_.str();
        return s;
    }

private:
    CirclePoint(Int a, Int b, Int c, Int d) : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {}

    static CirclePoint make(Int a, Int b, Int c, Int d)
    {
        if (b != 0) {
            const SquarefreeSplit split = squarefree_split(d);
            b *= split.square_root_part;
            d = split.squarefree_part;
            if (d == 1) {
                a += b;
                b = 0;
            }
        }
        if (b == 0)
            d = 0;
        if (c < 0) {
            a = -a;
            b = -b;
            c = -c;
        }
        const Int g = gcd(gcd(a, b), c);
        if (g > 1) {
            a /= g;
            b /= g;
            c /= g;
        }
        if (b == 0) {
            a = mod(a, c);
            if (a == 0)
                c = 1;
            return CirclePoint(a, 0, c, 0);
        }
        a -= detail::floor_quadratic(a, b, c, d) * c;
        return CirclePoint(a, b, c, d);
    }

    Int a_, b_, c_, d_;
};

inline CirclePoint normalize(const Int& raw_num, const Int& raw_den) { return CirclePoint::from_rational(raw_num, raw_den); }

inline CirclePoint add(const CirclePoint& x, const CirclePoint& y)
{
    if (x.is_quadratic() && y.is_quadratic() && x.d() != y.d())
        throw Error(ErrorCode::incompatible_fields,
                    "cannot add points from Q(sqrt(" + x.d().str() + ")) and Q(sqrt(" + y.d().str() + "))");
    const Int d = x.is_quadratic() ? x.d() : y.d();
    const Int a = x.a() * y.c() + y.a() * x.c();
    const Int b = x.b() * y.c() + y.b() * x.c();
    const Int c = x.c() * y.c();
    if (b == 0)
        return CirclePoint::from_rational(a, c);
    return CirclePoint::from_quadratic(a, b, c, d);
}

inline CirclePoint neg(const CirclePoint& x)
{
    if (x.is_rational())
        return CirclePoint::from_rational(-x.a(), x.c());
    return CirclePoint::from_quadratic(-x.a(), -x.b(), x.c(), x.d());
}

inline CirclePoint sub(const CirclePoint& x, const CirclePoint& y) { return add(x, neg(y)); }

inline CirclePoint int_mul(const Int& n, const CirclePoint& x)
{
    if (x.is_rational())
        return CirclePoint::from_rational(n * x.a(), x.c());
    if (n == 0)
        return CirclePoint();
    return CirclePoint::from_quadratic(n * x.a(), n * x.b(), x.c(), x.d());
}

// ||x||, the distance from x to 0 in T.
inline Enclosure norm(const CirclePoint& x, const Rational& tol = default_norm_tolerance())
{
    static const Rational half(1, 2);
    if (x.is_rational()) {
        const Rational r = x.as_rational();
        return Enclosure::exact(r <= half ? r : Rational(1) - r);
    }
    const Enclosure r = x.representative(tol);
    Enclosure out = x.compare_representative(half) < 0 ? r : Enclosure::interval(Rational(1) - r.upper, Rational(1) - r.lower);
    if (out.lower < 0)
        out.lower = 0;
    if (out.upper > half)
        out.upper = half;
    return out;
}

// Dot product <a, x> mod 1 of an integer vector with a vector of points.
inline CirclePoint pair(const std::vector<Int>& a, const std::vector<CirclePoint>& x)
{
    if (a.size() != x.size())
        throw Error(ErrorCode::dimension_mismatch,
                    "dimension mismatch: " + std::to_string(a.size()) + " vs " + std::to_string(x.size()));
    CirclePoint acc;
    for (std::size_t i = 0; i < a.size(); ++i)
        acc = add(acc, int_mul(a[i], x[i]));
    return acc;
}

// Literal syntax: "p/q", "p", or "quad:(a+b*sqrt(d))/c".
inline CirclePoint parse_point(std::string_view text, std::size_t base = 0)
{
    std::size_t pos = 0;
    auto fail = [&](const std::string& msg) -> ParseError { return ParseError(msg, base + pos); };
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) {
        text.remove_prefix(1);
        ++base;
    }
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
        text.remove_suffix(1);
    if (text.empty())
        throw fail("empty point literal");

    constexpr std::string_view prefix = "quad:";
    if (text.substr(0, prefix.size()) != prefix) {
        for (char ch : text)
            if (!(std::isdigit(static_cast<unsigned char>(ch)) || ch == '-' || ch == '+' || ch == '/'))
                throw fail("malformed point literal '" + std::string(text) + "'");
        return CirclePoint::from_rational(parse_rational(text, base));
    }

    pos = prefix.size();
    auto expect = [&](char ch) {
        if (pos >= text.size() || text[pos] != ch)
            throw fail(std::string("expected '") + ch + "'");
        ++pos;
    };
    auto read_int = [&](bool allow_sign) {
        const std::size_t start = pos;
        if (allow_sign && pos < text.size() && (text[pos] == '-' || text[pos] == '+'))
            ++pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
            ++pos;
        auto v = parse_int(text.substr(start, pos - start));
        if (!v) {
            pos = start;
            throw fail("expected an integer");
        }
        return *v;
    };

    expect('(');
    const Int a = read_int(true);
    if (pos >= text.size() || (text[pos] != '+' && text[pos] != '-'))
        throw fail("expected '+' or '-'");
    const bool negative = text[pos] == '-';
    ++pos;
    Int b = read_int(true);
    if (negative)
        b = -b;
    expect('*');
    if (text.substr(pos, 5) != "sqrt(")
        throw fail("expected 'sqrt('");
    pos += 5;
    const std::size_t d_pos = pos;
    const Int d = read_int(false);
    expect(')');
    expect(')');
    Int c = 1;
    if (pos < text.size()) {
        expect('/');
        const std::size_t c_pos = pos;
        c = read_int(true);
        if (c == 0) {
            pos = c_pos;
            throw fail("zero denominator");
        }
    }
    if (pos != text.size())
        throw fail("trailing characters");
    if (d <= 0 || is_perfect_square(d)) {
        pos = d_pos;
        throw fail("d = " + d.str() + " is a perfect square or nonpositive");
    }
    if (b == 0) {
        pos = d_pos;
        throw fail("coefficient of sqrt must be nonzero");
    }
    return CirclePoint::from_quadratic(a, b, c, d);
}

inline std::vector<CirclePoint> parse_point_vector(std::string_view text, std::size_t base = 0)
{
    std::vector<CirclePoint> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = text.find(',', start);
        const std::string_view piece = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
        out.push_back(parse_point(piece, base + start));
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return out;
}

inline std::string to_string(const std::vector<CirclePoint>& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            s += ",";
        s += v[i].to_string();
    }
    return s;
}

} // namespace gclose

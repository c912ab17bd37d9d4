#pragma once

// Arbitrary-precision integers and rationals, the error hierarchy, and the
// small number-theoretic helpers shared by every other header.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gclose {

// Expression templates off: values are stored and compared far more than they
// are chained, and `auto` locals must not capture temporaries.
using Int = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>, boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::rational_adaptor<boost::multiprecision::cpp_int_backend<>>,
                                               boost::multiprecision::et_off>;

enum class ErrorCode {
    parse,
    zero_denominator,
    incompatible_fields,
    dimension_mismatch,
    bounded_sequence,
    bounded_expansion,
    rejected_input,
    usage,
};

inline std::string_view error_code_name(ErrorCode c)
{
    switch (c) {
    case ErrorCode::parse: return "E_PARSE";
    case ErrorCode::zero_denominator: return "E_ZERO_DENOMINATOR";
    case ErrorCode::incompatible_fields: return "E_INCOMPATIBLE_FIELDS";
    case ErrorCode::dimension_mismatch: return "E_DIMENSION";
    case ErrorCode::bounded_sequence: return "E_BOUNDED_SEQUENCE";
    case ErrorCode::bounded_expansion: return "E_BOUNDED_EXPANSION";
    case ErrorCode::rejected_input: return "E_REJECTED_INPUT";
    case ErrorCode::usage: return "E_USAGE";
    }
    return "E_UNKNOWN";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position)
        : Error(ErrorCode::parse, what + " (at position " + std::to_string(position) + ")"),
          position_(position)
    {
    }
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

inline Int abs(const Int& x) { return x < 0 ? Int(-x) : x; }

inline Int gcd(const Int& a, const Int& b) { return boost::multiprecision::gcd(abs(a), abs(b)); }

inline Int lcm(const Int& a, const Int& b)
{
    if (a == 0 || b == 0)
        return 0;
    return abs(a / gcd(a, b) * b);
}

// Floor division and the matching nonnegative remainder (den > 0 not required).
inline Int floor_div(const Int& num, const Int& den)
{
    Int q = num / den;
    Int r = num - q * den;
    if (r != 0 && ((r < 0) != (den < 0)))
        --q;
    return q;
}

inline Int mod(const Int& a, const Int& m)
{
    Int r = a % m;
    if (r < 0)
        r += abs(m);
    return r;
}

inline Int isqrt(const Int& n)
{
    if (n < 0)
        throw Error(ErrorCode::rejected_input, "isqrt of a negative integer");
    return boost::multiprecision::sqrt(n);
}

inline bool is_perfect_square(const Int& n)
{
    if (n < 0)
        return false;
    Int s = isqrt(n);
    return s * s == n;
}

inline Int pow(const Int& base, unsigned exponent) { return boost::multiprecision::pow(base, exponent); }

inline Int pow2(unsigned exponent) { return Int(1) << exponent; }

// Splits n > 0 as square_part^2 * squarefree_part.
struct SquarefreeSplit {
    Int square_root_part;
    Int squarefree_part;
};

inline SquarefreeSplit squarefree_split(Int n)
{
    Int root = 1;
    Int rest = 1;
    for (Int p = 2; p * p <= n; ++p) {
        while (n % (p * p) == 0) {
            n /= p * p;
            root *= p;
        }
        if (n % p == 0) {
            n /= p;
            rest *= p;
        }
    }
    rest *= n;
    return {root, rest};
}

inline Rational make_rational(const Int& num, const Int& den)
{
    if (den == 0)
        throw Error(ErrorCode::zero_denominator, "zero denominator");
    return Rational(num, den);
}

inline Int numerator(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Int denominator(const Rational& r) { return boost::multiprecision::denominator(r); }

inline Int floor(const Rational& r) { return floor_div(numerator(r), denominator(r)); }

inline std::string to_string(const Int& x) { return x.str(); }

inline std::string to_string(const Rational& r)
{
    if (denominator(r) == 1)
        return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

inline std::optional<Int> parse_int(std::string_view text)
{
    if (text.empty())
        return std::nullopt;
    std::size_t i = 0;
    if (text[0] == '-' || text[0] == '+')
        i = 1;
    if (i == text.size())
        return std::nullopt;
    for (std::size_t j = i; j < text.size(); ++j)
        if (text[j] < '0' || text[j] > '9')
            return std::nullopt;
    Int value(std::string(text.substr(i)));
    return text[0] == '-' ? Int(-value) : value;
}

inline Int parse_int_or_throw(std::string_view text, std::size_t position = 0)
{
    auto v = parse_int(text);
    if (!v)
        throw ParseError("expected an integer, got '" + std::string(text) + "'", position);
    return *v;
}

// Accepts "p", "p/q" or "-p/q".
inline Rational parse_rational(std::string_view text, std::size_t position = 0)
{
    auto slash = text.find('/');
    if (slash == std::string_view::npos)
        return Rational(parse_int_or_throw(text, position));
    Int num = parse_int_or_throw(text.substr(0, slash), position);
    Int den = parse_int_or_throw(text.substr(slash + 1), position + slash + 1);
    if (den == 0)
        throw Error(ErrorCode::zero_denominator, "zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
}

inline std::uint64_t to_u64(const Int& x) { return x.convert_to<std::uint64_t>(); }

} // namespace gclose

#pragma once

#include "circle.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gclose {

// Outcome of a convergence decision u_n(x) -> 0.
//   exact_in / exact_out  decided, with a finitely checkable reason
//   certified_up_to       every tail norm up to the horizon is below tolerance
//   undecided             nothing is claimed
struct Verdict {
    enum class Status { exact_in, exact_out, certified_up_to, undecided };

    Status status = Status::undecided;
    std::string reason;

    // exact_in: the orbit (or its rational limit part) is 0 from this index on.
    std::optional<std::size_t> from_index;
    // exact_out: escape_value recurs at escape_index + j * period for all j >= 0.
    std::optional<std::size_t> escape_index;
    std::optional<std::size_t> period;
    std::optional<CirclePoint> escape_value;
    // exact_out without a period: a uniform lower bound on the norm.
    std::optional<Rational> escape_lower_bound;

    // certified_up_to / undecided: scan data.
    std::size_t horizon = 0;
    std::optional<Rational> worst_bound;
    std::vector<Enclosure> trace;

    bool is_exact() const { return status == Status::exact_in || status == Status::exact_out; }
    bool is_exact_in() const { return status == Status::exact_in; }
    bool is_exact_out() const { return status == Status::exact_out; }

    static Verdict exact_in(std::size_t from, std::string why)
    {
        Verdict v;
        v.status = Status::exact_in;
        v.from_index = from;
        v.reason = std::move(why);
        return v;
    }

    static Verdict exact_out(std::string why)
    {
        Verdict v;
        v.status = Status::exact_out;
        v.reason = std::move(why);
        return v;
    }

    friend bool operator==(const Verdict&, const Verdict&) = default;
};

inline std::string_view status_name(Verdict::Status s)
{
    switch (s) {
    case Verdict::Status::exact_in: return "exact_in";
    case Verdict::Status::exact_out: return "exact_out";
    case Verdict::Status::certified_up_to: return "certified_up_to";
    case Verdict::Status::undecided: return "undecided";
    }
    return "undecided";
}

inline std::optional<Verdict::Status> status_from_name(std::string_view s)
{
    if (s == "exact_in")
        return Verdict::Status::exact_in;
    if (s == "exact_out")
        return Verdict::Status::exact_out;
    if (s == "certified_up_to")
        return Verdict::Status::certified_up_to;
    if (s == "undecided")
        return Verdict::Status::undecided;
    return std::nullopt;
}

} // namespace gclose

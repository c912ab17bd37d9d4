#pragma once

// Finite-state models of residue orbits n -> <u_n, x> mod 1.
//
// For rational x every closed-form generator reduces to a deterministic
// machine on residues, so the orbit is eventually periodic and full-state
// cycle detection decides convergence exactly. For x = lambda*alpha + mu in
// the field of a continued-fraction generator alpha the machine tracks
// (p_n, q_n) residues; its output is the rational part lambda*p_n + mu*q_n,
// which differs from q_n*x by lambda*(q_n*alpha - p_n) -> 0.

#include "sequence.hpp"

#include <algorithm>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

namespace gclose::detail {

using OrbitState = std::vector<std::uint64_t>;

struct OrbitStateHash {
    std::size_t operator()(const OrbitState& s) const noexcept
    {
        std::size_t h = 0x9e3779b97f4a7c15ULL;
        for (auto v : s)
            h ^= std::hash<std::uint64_t>{}(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }
};

// A limit value of the orbit: num/den mod 1, or a fixed irrational point.
struct OrbitValue {
    std::uint64_t num = 0;
    std::uint64_t den = 1;
    std::optional<CirclePoint> irrational;

    bool is_zero() const { return !irrational && num == 0; }
    CirclePoint point() const { return irrational ? *irrational : CirclePoint::from_rational(Int(num), Int(den)); }
};

inline constexpr std::uint64_t max_orbit_modulus = std::uint64_t{1} << 62;

__extension__ using u128 = unsigned __int128;

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m)
{
    return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

inline std::uint64_t addmod(std::uint64_t a, std::uint64_t b, std::uint64_t m)
{
    return static_cast<std::uint64_t>((static_cast<u128>(a) + b) % m);
}

inline std::uint64_t residue(const Int& x, std::uint64_t m) { return to_u64(mod(x, Int(m))); }

class OrbitNode {
public:
    virtual ~OrbitNode() = default;
    virtual std::size_t width() const = 0;
    virtual void init(OrbitState& s, std::size_t off) const = 0;
    virtual void step(OrbitState& s, std::size_t off) const = 0;
    virtual OrbitValue output(const OrbitState& s, std::size_t off) const = 0;
    // True when outputs are only the rational part of the orbit and the true
    // values differ from them by a term tending to 0.
    virtual bool approximate() const { return false; }
};

// Canonical position inside a periodic expansion.
inline std::size_t cf_next_position(const CFExpansion& cf, std::size_t pos)
{
    ++pos;
    if (cf.period && pos >= cf.period->start + cf.period->length)
        pos = cf.period->start + (pos - cf.period->start) % cf.period->length;
    return pos;
}

// s_n * (A/M) for a scalar generator s_n.
class RationalLeaf final : public OrbitNode {
public:
    enum class Kind { geometric, factorial, constant, cf };

    RationalLeaf(Kind kind, std::uint64_t A, std::uint64_t M, std::uint64_t base, const CFExpansion* cf)
        : kind_(kind), A_(A), M_(M), base_(base), cf_(cf)
    {
    }

    std::size_t width() const override { return 3; }

    void init(OrbitState& s, std::size_t off) const override
    {
        switch (kind_) {
        case Kind::geometric: s[off] = 1 % M_; break;
        case Kind::factorial:
            s[off] = 0;
            s[off + 1] = 1 % M_;
            break;
        case Kind::constant: s[off] = 1 % M_; break;
        case Kind::cf:
            s[off] = 0;       // position
            s[off + 1] = 0;   // q_(n-1)
            s[off + 2] = 1 % M_; // q_n
            break;
        }
    }

    void step(OrbitState& s, std::size_t off) const override
    {
        switch (kind_) {
        case Kind::geometric: s[off] = mulmod(s[off], base_, M_); break;
        case Kind::factorial:
            s[off] = addmod(s[off], 1, M_);
            s[off + 1] = mulmod(s[off + 1], s[off], M_);
            break;
        case Kind::constant: break;
        case Kind::cf: {
            const std::size_t pos = cf_next_position(*cf_, s[off]);
            const std::uint64_t a = residue(cf_->digit(pos), M_);
            const std::uint64_t q = addmod(mulmod(a, s[off + 2], M_), s[off + 1], M_);
            s[off] = pos;
            s[off + 1] = s[off + 2];
            s[off + 2] = q;
            break;
        }
        }
    }

    OrbitValue output(const OrbitState& s, std::size_t off) const override
    {
        std::uint64_t scalar = 0;
        switch (kind_) {
        case Kind::geometric:
        case Kind::constant: scalar = s[off]; break;
        case Kind::factorial: scalar = s[off + 1]; break;
        case Kind::cf: scalar = s[off + 2]; break;
        }
        return {mulmod(scalar, A_, M_), M_, std::nullopt};
    }

private:
    Kind kind_;
    std::uint64_t A_, M_, base_;
    const CFExpansion* cf_;
};

// Constant sequence paired to an irrational point: never approaches 0.
class IrrationalConstantLeaf final : public OrbitNode {
public:
    explicit IrrationalConstantLeaf(CirclePoint z) : z_(std::move(z)) {}
    std::size_t width() const override { return 0; }
    void init(OrbitState&, std::size_t) const override {}
    void step(OrbitState&, std::size_t) const override {}
    OrbitValue output(const OrbitState&, std::size_t) const override { return {0, 1, z_}; }

private:
    CirclePoint z_;
};

// q_n * (lambda*alpha + mu) for the continued fraction of alpha; outputs
// (cp*p_n + cq*q_n mod M)/M.
class QuadraticCfLeaf final : public OrbitNode {
public:
    QuadraticCfLeaf(const CFExpansion* cf, std::uint64_t cp, std::uint64_t cq, std::uint64_t M)
        : cf_(cf), cp_(cp), cq_(cq), M_(M)
    {
    }

    std::size_t width() const override { return 5; }

    void init(OrbitState& s, std::size_t off) const override
    {
        s[off] = 0;
        s[off + 1] = 1 % M_;                        // p_(-1)
        s[off + 2] = residue(cf_->digit(0), M_);    // p_0
        s[off + 3] = 0;                             // q_(-1)
        s[off + 4] = 1 % M_;                        // q_0
    }

    void step(OrbitState& s, std::size_t off) const override
    {
        const std::size_t pos = cf_next_position(*cf_, s[off]);
        const std::uint64_t a = residue(cf_->digit(pos), M_);
        const std::uint64_t p = addmod(mulmod(a, s[off + 2], M_), s[off + 1], M_);
        const std::uint64_t q = addmod(mulmod(a, s[off + 4], M_), s[off + 3], M_);
        s[off] = pos;
        s[off + 1] = s[off + 2];
        s[off + 2] = p;
        s[off + 3] = s[off + 4];
        s[off + 4] = q;
    }

    OrbitValue output(const OrbitState& s, std::size_t off) const override
    {
        return {addmod(mulmod(cp_, s[off + 2], M_), mulmod(cq_, s[off + 4], M_), M_), M_, std::nullopt};
    }

    bool approximate() const override { return true; }

private:
    const CFExpansion* cf_;
    std::uint64_t cp_, cq_, M_;
};

class SubsequenceNode final : public OrbitNode {
public:
    SubsequenceNode(std::unique_ptr<OrbitNode> child, std::size_t step, std::size_t offset)
        : child_(std::move(child)), step_(step), offset_(offset)
    {
    }

    std::size_t width() const override { return child_->width(); }

    void init(OrbitState& s, std::size_t off) const override
    {
        child_->init(s, off);
        for (std::size_t i = 0; i < offset_; ++i)
            child_->step(s, off);
    }

    void step(OrbitState& s, std::size_t off) const override
    {
        for (std::size_t i = 0; i < step_; ++i)
            child_->step(s, off);
    }

    OrbitValue output(const OrbitState& s, std::size_t off) const override { return child_->output(s, off); }

    bool approximate() const override { return child_->approximate(); }

private:
    std::unique_ptr<OrbitNode> child_;
    std::size_t step_, offset_;
};

class InterleaveNode final : public OrbitNode {
public:
    InterleaveNode(std::vector<std::unique_ptr<OrbitNode>> children, std::vector<std::size_t> blocks)
        : children_(std::move(children)), blocks_(std::move(blocks))
    {
        std::size_t w = 1;
        for (const auto& c : children_) {
            offsets_.push_back(w);
            w += c->width();
        }
        width_ = w;
        cycle_ = IntVecSeq::total(blocks_);
    }

    std::size_t width() const override { return width_; }

    void init(OrbitState& s, std::size_t off) const override
    {
        s[off] = 0;
        for (std::size_t i = 0; i < children_.size(); ++i)
            children_[i]->init(s, off + offsets_[i]);
    }

    void step(OrbitState& s, std::size_t off) const override
    {
        const std::size_t i = current(s[off]);
        children_[i]->step(s, off + offsets_[i]);
        s[off] = (s[off] + 1) % cycle_;
    }

    OrbitValue output(const OrbitState& s, std::size_t off) const override
    {
        const std::size_t i = current(s[off]);
        return children_[i]->output(s, off + offsets_[i]);
    }

    bool approximate() const override
    {
        return std::any_of(children_.begin(), children_.end(), [](const auto& c) { return c->approximate(); });
    }

private:
    std::size_t current(std::uint64_t phase) const
    {
        std::size_t i = 0;
        while (phase >= blocks_[i]) {
            phase -= blocks_[i];
            ++i;
        }
        return i;
    }

    std::vector<std::unique_ptr<OrbitNode>> children_;
    std::vector<std::size_t> blocks_;
    std::vector<std::size_t> offsets_;
    std::size_t width_ = 1;
    std::size_t cycle_ = 1;
};

// Writes z = lambda*alpha + mu when z lies in Q + Q*alpha.
inline std::optional<std::pair<Rational, Rational>> decompose_in_field(const CirclePoint& z, const CirclePoint& alpha)
{
    if (z.is_rational())
        return std::make_pair(Rational(0), z.as_rational());
    if (z.d() != alpha.d())
        return std::nullopt;
    const Rational lambda = Rational(z.b(), z.c()) / Rational(alpha.b(), alpha.c());
    const Rational mu = Rational(z.a(), z.c()) - lambda * Rational(alpha.a(), alpha.c());
    return std::make_pair(lambda, mu);
}

inline std::unique_ptr<OrbitNode> make_cf_output_leaf(const CFExpansion* cf, const Rational& lambda, const Rational& mu)
{
    const Int M = lcm(denominator(lambda), denominator(mu));
    if (M > Int(max_orbit_modulus))
        return nullptr;
    const std::uint64_t m = to_u64(M);
    const std::uint64_t cp = residue(numerator(lambda) * (M / denominator(lambda)), m);
    const std::uint64_t cq = residue(numerator(mu) * (M / denominator(mu)), m);
    return std::make_unique<QuadraticCfLeaf>(cf, cp, cq, m);
}

// Builds the machine for <u_n, x>; nullptr when the pair is outside the exact ladder.
inline std::unique_ptr<OrbitNode> build_orbit(const IntVecSeq& u, const std::vector<CirclePoint>& x)
{
    const auto& node = u.node();
    if (const auto* il = std::get_if<seq::Interleave>(&node)) {
        std::vector<std::unique_ptr<OrbitNode>> children;
        for (const auto& part : il->parts) {
            auto c = build_orbit(part, x);
            if (!c)
                return nullptr;
            children.push_back(std::move(c));
        }
        return std::make_unique<InterleaveNode>(std::move(children), il->blocks);
    }
    if (const auto* sub = std::get_if<seq::Subsequence>(&node)) {
        auto c = build_orbit(*sub->parent, x);
        if (!c)
            return nullptr;
        return std::make_unique<SubsequenceNode>(std::move(c), sub->step, sub->offset);
    }
    if (std::holds_alternative<seq::Explicit>(node))
        return nullptr;

    const std::vector<Int>* pattern = nullptr;
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (requires { n.pattern; })
                pattern = &n.pattern;
            else
                (void)sizeof(T);
        },
        node);
    CirclePoint z;
    try {
        z = pair(*pattern, x);
    } catch (const Error&) {
        return nullptr;
    }

    if (const auto* cfd = std::get_if<seq::CFDenominators>(&node)) {
        if (z.is_quadratic()) {
            const auto parts = decompose_in_field(z, cfd->alpha);
            if (!parts)
                return nullptr;
            return make_cf_output_leaf(&cfd->cf, parts->first, parts->second);
        }
    }
    if (z.is_quadratic()) {
        if (std::holds_alternative<seq::Constant>(node))
            return std::make_unique<IrrationalConstantLeaf>(z);
        return nullptr;
    }
    if (z.den() > Int(max_orbit_modulus))
        return nullptr;
    const std::uint64_t A = to_u64(z.num());
    const std::uint64_t M = to_u64(z.den());
    if (const auto* g = std::get_if<seq::Geometric>(&node))
        return std::make_unique<RationalLeaf>(RationalLeaf::Kind::geometric, A, M, residue(g->base, M), nullptr);
    if (std::holds_alternative<seq::Factorial>(node))
        return std::make_unique<RationalLeaf>(RationalLeaf::Kind::factorial, A, M, 0, nullptr);
    if (std::holds_alternative<seq::Constant>(node))
        return std::make_unique<RationalLeaf>(RationalLeaf::Kind::constant, A, M, 0, nullptr);
    const auto& cfd = std::get<seq::CFDenominators>(node);
    return std::make_unique<RationalLeaf>(RationalLeaf::Kind::cf, A, M, 0, &cfd.cf);
}

// outputs[0 .. preperiod + period) with outputs[n + period] == outputs[n] for n >= preperiod.
struct OrbitCycle {
    std::size_t preperiod = 0;
    std::size_t period = 0;
    std::vector<OrbitValue> outputs;
    bool approximate = false;
};

inline std::optional<OrbitCycle> find_cycle(const OrbitNode& machine, std::size_t state_cap)
{
    OrbitState s(machine.width());
    machine.init(s, 0);
    std::unordered_map<OrbitState, std::size_t, OrbitStateHash> seen;
    OrbitCycle cycle;
    cycle.approximate = machine.approximate();
    for (std::size_t n = 0; n < state_cap; ++n) {
        auto [it, inserted] = seen.emplace(s, n);
        if (!inserted) {
            cycle.preperiod = it->second;
            cycle.period = n - it->second;
            return cycle;
        }
        cycle.outputs.push_back(machine.output(s, 0));
        machine.step(s, 0);
    }
    return std::nullopt;
}

} // namespace gclose::detail

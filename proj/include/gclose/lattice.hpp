#pragma once

// Integral LLL reduction (exact, no rationals in the inner loop): the
// Gram-Schmidt data is kept as the integers d_i and lambda_ij of the
// de Weger / Cohen formulation.

#include "integer.hpp"

#include <vector>

namespace gclose {

struct LllParameter {
    Int num = 3;
    Int den = 4;
};

namespace detail {

inline Int dot(const std::vector<Int>& x, const std::vector<Int>& y)
{
    Int s = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
        s += x[i] * y[i];
    return s;
}

// round(a / b) for b > 0, halves rounded up
inline Int round_div(const Int& a, const Int& b) { return floor_div(2 * a + b, 2 * b); }

} // namespace detail

// Reduces linearly independent rows in place.
inline void lll_reduce(std::vector<std::vector<Int>>& b, const LllParameter& delta = {})
{
    const std::size_t n = b.size();
    if (n < 2)
        return;
    // 1-based bookkeeping: d[0] = 1, d[i] for i = 1..n; lambda[k][j] for j < k.
    std::vector<Int> d(n + 1);
    std::vector<std::vector<Int>> lambda(n + 1, std::vector<Int>(n + 1));
    d[0] = 1;
    d[1] = detail::dot(b[0], b[0]);
    if (d[1] == 0)
        throw Error(ErrorCode::rejected_input, "LLL input rows are dependent");
    auto row = [&](std::size_t i) -> std::vector<Int>& { return b[i - 1]; };

    auto redi = [&](std::size_t k, std::size_t l) {
        if (abs(2 * lambda[k][l]) <= d[l])
            return;
        const Int q = detail::round_div(lambda[k][l], d[l]);
        auto& bk = row(k);
        const auto& bl = row(l);
        for (std::size_t t = 0; t < bk.size(); ++t)
            bk[t] -= q * bl[t];
        lambda[k][l] -= q * d[l];
        for (std::size_t i = 1; i < l; ++i)
            lambda[k][i] -= q * lambda[l][i];
    };

    std::size_t k = 2;
    std::size_t kmax = 1;
    auto swapi = [&](std::size_t kk) {
        std::swap(row(kk), row(kk - 1));
        for (std::size_t j = 1; j + 1 < kk; ++j)
            std::swap(lambda[kk][j], lambda[kk - 1][j]);
        const Int lam = lambda[kk][kk - 1];
        const Int B = (d[kk - 2] * d[kk] + lam * lam) / d[kk - 1];
        for (std::size_t i = kk + 1; i <= kmax; ++i) {
            const Int t = lambda[i][kk];
            lambda[i][kk] = (d[kk] * lambda[i][kk - 1] - lam * t) / d[kk - 1];
            lambda[i][kk - 1] = (B * t + lam * lambda[i][kk]) / d[kk];
        }
        d[kk - 1] = B;
    };

    while (k <= n) {
        if (k > kmax) {
            kmax = k;
            for (std::size_t j = 1; j <= k; ++j) {
                Int u = detail::dot(row(k), row(j));
                for (std::size_t i = 1; i < j; ++i)
                    u = (d[i] * u - lambda[k][i] * lambda[j][i]) / d[i - 1];
                if (j < k)
                    lambda[k][j] = u;
                else {
                    if (u == 0)
                        throw Error(ErrorCode::rejected_input, "LLL input rows are dependent");
                    d[k] = u;
                }
            }
        }
        redi(k, k - 1);
        // Lovasz: den*d_k*d_(k-2) < num*d_(k-1)^2 - den*lambda^2  ->  swap
        const Int& lam = lambda[k][k - 1];
        if (delta.den * d[k] * d[k - 2] < delta.num * d[k - 1] * d[k - 1] - delta.den * lam * lam) {
            swapi(k);
            if (k > 2)
                --k;
        } else {
            for (std::size_t l = k - 1; l-- > 1;)
                redi(k, l);
            ++k;
        }
    }
}

} // namespace gclose

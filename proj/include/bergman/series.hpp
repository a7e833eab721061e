#pragma once

#include "bergman/scalar.hpp"

#include <vector>

namespace bergman {

template <class C>
using Coeffs = std::vector<C>;

template <class C>
Coeffs<C> poly_mul(const Coeffs<C>& a, const Coeffs<C>& b)
{
    Coeffs<C> r(a.size() + b.size() - 1, C(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] += a[i] * b[j];
    return r;
}

template <class C>
Coeffs<C> poly_derivative(const Coeffs<C>& a)
{
    if (a.size() <= 1)
        return Coeffs<C>{C(0)};
    Coeffs<C> r(a.size() - 1);
    for (std::size_t i = 1; i < a.size(); ++i)
        r[i - 1] = a[i] * C(typename C::value_type(int(i)));
    return r;
}

template <class C>
Coeffs<C> poly_add(Coeffs<C> a, const Coeffs<C>& b)
{
    if (b.size() > a.size())
        a.resize(b.size(), C(0));
    for (std::size_t i = 0; i < b.size(); ++i)
        a[i] += b[i];
    return a;
}

template <class C>
Coeffs<C> poly_scale(Coeffs<C> a, const C& s)
{
    for (auto& c : a)
        c *= s;
    return a;
}

// (c + d v)^n expanded in v.
template <class C>
Coeffs<C> binomial_power(const C& c, const C& d, int n)
{
    Coeffs<C> r{C(1)};
    for (int i = 0; i < n; ++i)
        r = poly_mul(r, Coeffs<C>{c, d});
    return r;
}

template <class C, class X>
C horner(const Coeffs<C>& a, const X& x, std::size_t terms)
{
    terms = std::min(terms, a.size());
    C acc(0);
    for (std::size_t i = terms; i-- > 0;)
        acc = acc * x + a[i];
    return acc;
}

template <class C, class X>
C horner(const Coeffs<C>& a, const X& x)
{
    return horner(a, x, a.size());
}

// Taylor coefficients at 0 of prod_i P_i(v)^{e_i} for polynomials with P_i(0) != 0,
// principal branch at the origin. Uses S Q' = T Q with S = prod P_i.
template <class C>
Coeffs<C> power_product_series(const std::vector<std::pair<Coeffs<C>, typename C::value_type>>& factors,
                               std::size_t count)
{
    using T = typename C::value_type;
    Coeffs<C> S{C(1)};
    C q0(1);
    for (const auto& [p, e] : factors) {
        S = poly_mul(S, p);
        q0 *= cpow(p[0], e);
    }
    Coeffs<C> Tp{C(0)};
    for (std::size_t i = 0; i < factors.size(); ++i) {
        Coeffs<C> term = poly_scale(poly_derivative(factors[i].first), C(factors[i].second));
        for (std::size_t k = 0; k < factors.size(); ++k)
            if (k != i)
                term = poly_mul(term, factors[k].first);
        Tp = poly_add(Tp, term);
    }
    Coeffs<C> q(count, C(0));
    if (count == 0)
        return q;
    q[0] = q0;
    for (std::size_t m = 0; m + 1 < count; ++m) {
        C acc(0);
        for (std::size_t k = 0; k < Tp.size() && k <= m; ++k)
            acc += Tp[k] * q[m - k];
        for (std::size_t k = 1; k < S.size() && k <= m; ++k)
            acc -= S[k] * q[m - k + 1] * T(int(m - k + 1));
        q[m + 1] = acc / (S[0] * T(int(m + 1)));
    }
    return q;
}

} // namespace bergman

#ifndef IVHS_POLY_HPP
#define IVHS_POLY_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "prime_field.hpp"

// Dense univariate polynomial arithmetic over any field type providing the
// PrimeField-style element interface. Coefficients are stored low degree
// first; the zero polynomial is the empty vector.
namespace ivhs::upoly {

template <class F>
using Vec = std::vector<typename F::Elem>;

template <class F>
void trim(const F& f, Vec<F>& a)
{
    while (!a.empty() && f.is_zero(a.back()))
        a.pop_back();
}

template <class F>
int degree(const Vec<F>& a)
{
    return static_cast<int>(a.size()) - 1;
}

template <class F>
Vec<F> constant(const F& f, typename F::Elem c)
{
    if (f.is_zero(c))
        return {};
    return {std::move(c)};
}

// x + a
template <class F>
Vec<F> linear(const F& f, typename F::Elem a)
{
    return {std::move(a), f.one()};
}

template <class F>
Vec<F> x_power(const F& f, std::size_t k)
{
    Vec<F> r(k + 1, f.zero());
    r[k] = f.one();
    return r;
}

template <class F>
Vec<F> add(const F& f, const Vec<F>& a, const Vec<F>& b)
{
    Vec<F> r = a.size() >= b.size() ? a : b;
    const Vec<F>& s = a.size() >= b.size() ? b : a;
    for (std::size_t i = 0; i < s.size(); ++i)
        r[i] = f.add(r[i], s[i]);
    trim(f, r);
    return r;
}

template <class F>
Vec<F> sub(const F& f, const Vec<F>& a, const Vec<F>& b)
{
    Vec<F> r(std::max(a.size(), b.size()), f.zero());
    for (std::size_t i = 0; i < a.size(); ++i)
        r[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i)
        r[i] = f.sub(r[i], b[i]);
    trim(f, r);
    return r;
}

template <class F>
Vec<F> scale(const F& f, const Vec<F>& a, const typename F::Elem& c)
{
    Vec<F> r;
    r.reserve(a.size());
    for (const auto& x : a)
        r.push_back(f.mul(x, c));
    trim(f, r);
    return r;
}

template <class F>
Vec<F> mul(const F& f, const Vec<F>& a, const Vec<F>& b)
{
    if (a.empty() || b.empty())
        return {};
    Vec<F> r(a.size() + b.size() - 1, f.zero());
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (f.is_zero(a[i]))
            continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = f.add(r[i + j], f.mul(a[i], b[j]));
    }
    trim(f, r);
    return r;
}

// Quotient and remainder; b must be nonzero.
template <class F>
std::pair<Vec<F>, Vec<F>> divmod(const F& f, const Vec<F>& a, const Vec<F>& b)
{
    if (b.empty())
        throw Error(ErrorKind::Unsupported, "polynomial division by zero");
    Vec<F> r = a;
    trim(f, r);
    if (r.size() < b.size())
        return {Vec<F>{}, r};
    const auto lead_inv = f.inv(b.back());
    Vec<F> q(r.size() - b.size() + 1, f.zero());
    for (std::size_t i = r.size(); i-- >= b.size();) {
        if (f.is_zero(r[i]))
            continue;
        const auto c = f.mul(r[i], lead_inv);
        const std::size_t shift = i + 1 - b.size();
        q[shift] = c;
        for (std::size_t j = 0; j < b.size(); ++j)
            r[shift + j] = f.sub(r[shift + j], f.mul(c, b[j]));
    }
    trim(f, q);
    trim(f, r);
    return {std::move(q), std::move(r)};
}

template <class F>
Vec<F> rem(const F& f, const Vec<F>& a, const Vec<F>& b)
{
    return divmod(f, a, b).second;
}

template <class F>
Vec<F> quo(const F& f, const Vec<F>& a, const Vec<F>& b)
{
    return divmod(f, a, b).first;
}

template <class F>
Vec<F> monic(const F& f, const Vec<F>& a)
{
    if (a.empty())
        return {};
    return scale(f, a, f.inv(a.back()));
}

template <class F>
Vec<F> gcd(const F& f, Vec<F> a, Vec<F> b)
{
    trim(f, a);
    trim(f, b);
    while (!b.empty()) {
        Vec<F> r = rem(f, a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return monic(f, a);
}

// Returns s with s * a == 1 mod m, given gcd(a, m) = 1.
template <class F>
Vec<F> inverse_mod(const F& f, const Vec<F>& a, const Vec<F>& m)
{
    Vec<F> r0 = m, r1 = rem(f, a, m);
    Vec<F> s0, s1 = constant(f, f.one());
    while (!r1.empty()) {
        auto [q, r] = divmod(f, r0, r1);
        Vec<F> s = sub(f, s0, mul(f, q, s1));
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s);
    }
    if (r0.size() != 1)
        throw Error(ErrorKind::Unsupported, "polynomial not invertible modulo m");
    return rem(f, scale(f, s0, f.inv(r0[0])), m);
}

template <class F>
Vec<F> mulmod(const F& f, const Vec<F>& a, const Vec<F>& b, const Vec<F>& m)
{
    return rem(f, mul(f, a, b), m);
}

template <class F>
Vec<F> powmod(const F& f, Vec<F> base, u64 e, const Vec<F>& m)
{
    Vec<F> r = rem(f, constant(f, f.one()), m);
    base = rem(f, base, m);
    while (e) {
        if (e & 1)
            r = mulmod(f, r, base, m);
        e >>= 1;
        if (e)
            base = mulmod(f, base, base, m);
    }
    return r;
}

template <class F>
Vec<F> derivative(const F& f, const Vec<F>& a)
{
    if (a.size() <= 1)
        return {};
    Vec<F> r(a.size() - 1, f.zero());
    for (std::size_t i = 1; i < a.size(); ++i)
        r[i - 1] = f.mul(a[i], f.from_int(static_cast<std::int64_t>(i)));
    trim(f, r);
    return r;
}

template <class F>
typename F::Elem eval(const F& f, const Vec<F>& a, const typename F::Elem& x)
{
    auto acc = f.zero();
    for (std::size_t i = a.size(); i-- > 0;)
        acc = f.add(f.mul(acc, x), a[i]);
    return acc;
}

// Lagrange interpolation through (xs[i], ys[i]) with distinct xs.
template <class F>
Vec<F> interpolate(const F& f, const std::vector<typename F::Elem>& xs, const std::vector<typename F::Elem>& ys)
{
    const std::size_t n = xs.size();
    Vec<F> result;
    Vec<F> full = constant(f, f.one());
    for (const auto& x : xs)
        full = mul(f, full, linear(f, f.neg(x)));
    for (std::size_t i = 0; i < n; ++i) {
        if (f.is_zero(ys[i]))
            continue;
        Vec<F> basis = quo(f, full, linear(f, f.neg(xs[i])));
        auto denom = eval(f, basis, xs[i]);
        result = add(f, result, scale(f, basis, f.mul(ys[i], f.inv(denom))));
    }
    return result;
}

} // namespace ivhs::upoly

namespace ivhs {

// Univariate polynomial value type bundling coefficients with their field.
template <class F>
class UniPoly {
public:
    using Elem = typename F::Elem;

    explicit UniPoly(F field) : field_(std::move(field)) {}
    UniPoly(F field, std::vector<Elem> coeffs) : field_(std::move(field)), coeffs_(std::move(coeffs))
    {
        upoly::trim(field_, coeffs_);
    }

    const F& field() const noexcept { return field_; }
    const std::vector<Elem>& coeffs() const noexcept { return coeffs_; }
    int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const noexcept { return coeffs_.empty(); }
    Elem operator()(const Elem& x) const { return upoly::eval(field_, coeffs_, x); }

private:
    F field_;
    std::vector<Elem> coeffs_;
};

} // namespace ivhs

#endif

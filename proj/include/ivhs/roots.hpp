#ifndef IVHS_ROOTS_HPP
#define IVHS_ROOTS_HPP

#include <algorithm>
#include <numeric>
#include <utility>
#include <vector>

#include "ext_field.hpp"
#include "poly.hpp"

namespace ivhs {

namespace detail {

// The p-power map u -> u^p on F[x]/(g). Since char = p,
// (sum u_j x^j)^p = sum u_j^p x^(j p), so it suffices to know x^(j p) mod g.
template <class F>
class FrobeniusMod {
public:
    FrobeniusMod(const F& f, const upoly::Vec<F>& g) : f_(f), g_(g)
    {
        const int e = upoly::degree<F>(g);
        auto xp = upoly::powmod(f, upoly::x_power(f, 1), f.characteristic(), g);
        powers_.reserve(static_cast<std::size_t>(std::max(e, 0)));
        upoly::Vec<F> cur = upoly::rem(f, upoly::constant(f, f.one()), g);
        for (int j = 0; j < e; ++j) {
            powers_.push_back(cur);
            cur = upoly::mulmod(f, cur, xp, g);
        }
    }

    upoly::Vec<F> apply(const upoly::Vec<F>& u) const
    {
        upoly::Vec<F> r;
        for (std::size_t j = 0; j < u.size(); ++j) {
            if (f_.is_zero(u[j]))
                continue;
            r = upoly::add(f_, r, upoly::scale(f_, powers_[j], f_.frobenius(u[j])));
        }
        return r;
    }

    // x^p mod g
    upoly::Vec<F> x_p_value() const
    {
        if (powers_.size() > 1)
            return powers_[1];
        return upoly::powmod(f_, upoly::x_power(f_, 1), f_.characteristic(), g_);
    }

private:
    F f_;
    upoly::Vec<F> g_;
    std::vector<upoly::Vec<F>> powers_;
};

template <class F>
typename F::Elem pth_root(const F& f, typename F::Elem a)
{
    for (unsigned i = 1; i < f.degree(); ++i)
        a = f.frobenius(a);
    return a;
}

template <class F>
void split_linear(const F& f, const upoly::Vec<F>& h, Rng& rng, std::vector<typename F::Elem>& out)
{
    const int e = upoly::degree<F>(h);
    if (e <= 0)
        return;
    if (e == 1) {
        out.push_back(f.neg(f.mul(h[0], f.inv(h[1]))));
        return;
    }
    const u64 p = f.characteristic();
    const unsigned k = f.degree();
    FrobeniusMod<F> frob(f, h);
    for (;;) {
        auto a = f.random(rng);
        upoly::Vec<F> g;
        if (p != 2) {
            auto v = upoly::powmod(f, upoly::linear(f, a), (p - 1) / 2, h);
            auto w = v;
            auto cur = v;
            for (unsigned i = 1; i < k; ++i) {
                cur = frob.apply(cur);
                w = upoly::mulmod(f, w, cur, h);
            }
            g = upoly::gcd(f, h, upoly::sub(f, w, upoly::constant(f, f.one())));
        } else {
            // absolute trace of a*x
            auto t = upoly::rem(f, upoly::Vec<F>{f.zero(), a}, h);
            auto w = t;
            auto cur = t;
            for (unsigned i = 1; i < k; ++i) {
                cur = frob.apply(cur);
                w = upoly::add(f, w, cur);
            }
            g = upoly::gcd(f, h, w);
        }
        const int dg = upoly::degree<F>(g);
        if (dg > 0 && dg < e) {
            split_linear(f, g, rng, out);
            split_linear(f, upoly::quo(f, h, g), rng, out);
            return;
        }
    }
}

template <class F>
bool elem_less(const F& f, const typename F::Elem& a, const typename F::Elem& b)
{
    auto ca = f.coordinates(a);
    auto cb = f.coordinates(b);
    return std::lexicographical_compare(ca.rbegin(), ca.rend(), cb.rbegin(), cb.rend());
}

} // namespace detail

// Musser's squarefree decomposition, valid in characteristic p: returns
// pairs (g_i, m_i) with f = lc * prod g_i^m_i and each g_i squarefree, monic.
template <class F>
std::vector<std::pair<upoly::Vec<F>, unsigned>> squarefree_decomposition(const F& f, const upoly::Vec<F>& poly)
{
    std::vector<std::pair<upoly::Vec<F>, unsigned>> out;
    upoly::Vec<F> a = upoly::monic(f, poly);
    if (upoly::degree<F>(a) <= 0)
        return out;

    const u64 p = f.characteristic();
    auto pth_root_poly = [&](const upoly::Vec<F>& c) {
        upoly::Vec<F> r;
        for (std::size_t i = 0; i < c.size(); i += p)
            r.push_back(detail::pth_root(f, c[i]));
        upoly::trim(f, r);
        return r;
    };

    auto da = upoly::derivative(f, a);
    upoly::Vec<F> c;
    if (da.empty()) {
        c = a;
    } else {
        c = upoly::gcd(f, a, da);
        upoly::Vec<F> w = upoly::quo(f, a, c);
        unsigned i = 1;
        while (upoly::degree<F>(w) > 0) {
            auto y = upoly::gcd(f, w, c);
            auto z = upoly::quo(f, w, y);
            if (upoly::degree<F>(z) > 0)
                out.emplace_back(upoly::monic(f, z), i);
            w = std::move(y);
            c = upoly::quo(f, c, w);
            ++i;
        }
    }
    if (upoly::degree<F>(c) > 0) {
        for (auto& [g, m] : squarefree_decomposition(f, pth_root_poly(c)))
            out.emplace_back(std::move(g), static_cast<unsigned>(m * p));
    }
    return out;
}

// All roots of f in its coefficient field, with multiplicity, sorted by
// coordinates. Squarefree decomposition, gcd with x^q - x, then randomized
// equal-degree splitting driven by `seed`.
template <class F>
std::vector<typename F::Elem> find_roots(const F& f, const upoly::Vec<F>& poly, u64 seed)
{
    upoly::Vec<F> a = poly;
    upoly::trim(f, a);
    if (a.empty())
        throw Error(ErrorKind::Unsupported, "find_roots of the zero polynomial");
    Rng rng(seed);
    std::vector<typename F::Elem> roots;
    for (const auto& [g, mult] : squarefree_decomposition(f, a)) {
        detail::FrobeniusMod<F> frob(f, g);
        upoly::Vec<F> xq = frob.x_p_value();
        for (unsigned i = 1; i < f.degree(); ++i)
            xq = frob.apply(xq);
        auto h = upoly::gcd(f, g, upoly::sub(f, xq, upoly::x_power(f, 1)));
        std::vector<typename F::Elem> simple;
        detail::split_linear(f, h, rng, simple);
        for (const auto& r : simple)
            for (unsigned m = 0; m < mult; ++m)
                roots.push_back(r);
    }
    std::sort(roots.begin(), roots.end(), [&](const auto& x, const auto& y) { return detail::elem_less(f, x, y); });
    return roots;
}

template <class F>
std::vector<typename F::Elem> find_roots(const UniPoly<F>& f, u64 seed = 0)
{
    return find_roots(f.field(), f.coeffs(), seed);
}

// Roots in an extension of a polynomial with prime-field coefficients.
inline std::vector<ExtField::Elem> find_roots(const UniPoly<PrimeField>& f, const ExtField& ctx, u64 seed = 0)
{
    if (!(f.field() == ctx.base()))
        throw Error(ErrorKind::FieldMismatch, "polynomial is not over the extension's base field");
    upoly::Vec<ExtField> lifted;
    for (u64 c : f.coeffs())
        lifted.push_back(ctx.from_base(c));
    return find_roots(ctx, lifted, seed);
}

// Distinct-degree factorization of a squarefree monic polynomial over F_p:
// pairs (i, product of all irreducible factors of degree i).
inline std::vector<std::pair<unsigned, upoly::Vec<PrimeField>>> distinct_degree_factorization(
    const PrimeField& fp, const upoly::Vec<PrimeField>& poly)
{
    std::vector<std::pair<unsigned, upoly::Vec<PrimeField>>> out;
    upoly::Vec<PrimeField> rest = upoly::monic(fp, poly);
    const auto x = upoly::x_power(fp, 1);
    upoly::Vec<PrimeField> h = x;
    for (unsigned i = 1; upoly::degree<PrimeField>(rest) >= 2 * static_cast<int>(i); ++i) {
        h = upoly::powmod(fp, h, fp.characteristic(), rest);
        auto g = upoly::gcd(fp, rest, upoly::sub(fp, h, x));
        if (upoly::degree<PrimeField>(g) > 0) {
            out.emplace_back(i, g);
            rest = upoly::quo(fp, rest, g);
            h = upoly::rem(fp, h, rest);
        }
    }
    if (upoly::degree<PrimeField>(rest) > 0)
        out.emplace_back(static_cast<unsigned>(upoly::degree<PrimeField>(rest)), rest);
    return out;
}

// Smallest k such that f splits into linear factors over F_{p^k}; saturates
// at cap + 1 when the true value exceeds cap.
inline unsigned splitting_degree(const PrimeField& fp, const upoly::Vec<PrimeField>& poly, unsigned cap = 1u << 20)
{
    u64 k = 1;
    for (const auto& [g, m] : squarefree_decomposition(fp, poly)) {
        for (const auto& [deg, factor] : distinct_degree_factorization(fp, g)) {
            k = std::lcm(k, static_cast<u64>(deg));
            if (k > cap)
                return cap + 1;
        }
    }
    return static_cast<unsigned>(k);
}

} // namespace ivhs

#endif

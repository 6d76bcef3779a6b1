#ifndef IVHS_EXT_FIELD_HPP
#define IVHS_EXT_FIELD_HPP

#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "poly.hpp"
#include "prime_field.hpp"

namespace ivhs {

// Ben-Or: f of degree k is irreducible iff gcd(f, x^(p^i) - x) = 1 for all i <= k/2.
inline bool is_irreducible(const PrimeField& fp, const std::vector<u64>& f)
{
    std::vector<u64> g = f;
    upoly::trim(fp, g);
    const int k = upoly::degree<PrimeField>(g);
    if (k <= 0)
        return false;
    if (k == 1)
        return true;
    g = upoly::monic(fp, g);
    const upoly::Vec<PrimeField> x = upoly::x_power(fp, 1);
    upoly::Vec<PrimeField> h = upoly::rem(fp, x, g);
    for (int i = 1; i <= k / 2; ++i) {
        h = upoly::powmod(fp, h, fp.characteristic(), g);
        auto d = upoly::gcd(fp, g, upoly::sub(fp, h, x));
        if (d.size() > 1)
            return false;
    }
    return true;
}

class ExtField;
// F_{p^k} with a monic irreducible modulus drawn from the seeded generator.
// k = 1 yields the prime field viewed as a degree-one extension.
ExtField make_extension(const PrimeField& base, unsigned k, u64 rng_seed);

// F_{p^k} = F_p[t]/(m(t)) with m monic irreducible of degree k. Elements are
// coefficient vectors of length exactly k (canonical residues mod m).
class ExtField {
public:
    using Elem = std::vector<u64>;

    // modulus: monic, low degree first, length k + 1.
    ExtField(PrimeField base, std::vector<u64> modulus) : ExtField(base, std::move(modulus), true) {}

    // Degree-one "extension": F_p itself with element vectors of length 1.
    explicit ExtField(PrimeField base) : ExtField(base, std::vector<u64>{0, 1}) {}

    const PrimeField& base() const noexcept { return impl_->base; }
    u64 characteristic() const noexcept { return impl_->base.characteristic(); }
    unsigned degree() const noexcept { return impl_->k; }
    const std::vector<u64>& modulus() const noexcept { return impl_->modulus; }

    Elem zero() const { return Elem(impl_->k, 0); }
    Elem one() const
    {
        Elem r(impl_->k, 0);
        r[0] = 1;
        return r;
    }
    Elem from_int(std::int64_t v) const
    {
        Elem r(impl_->k, 0);
        r[0] = impl_->base.from_int(v);
        return r;
    }
    Elem from_base(u64 c) const
    {
        Elem r(impl_->k, 0);
        r[0] = impl_->base.from_base(c);
        return r;
    }
    // The generator t of the modulus.
    Elem generator() const
    {
        Elem r(impl_->k, 0);
        if (impl_->k > 1)
            r[1] = 1;
        else
            r[0] = impl_->base.neg(impl_->modulus[0]);
        return r;
    }

    bool is_zero(const Elem& a) const noexcept
    {
        for (u64 c : a)
            if (c != 0)
                return false;
        return true;
    }
    bool equal(const Elem& a, const Elem& b) const noexcept { return a == b; }

    Elem add(const Elem& a, const Elem& b) const
    {
        const PrimeField& fp = impl_->base;
        Elem r(impl_->k);
        for (unsigned i = 0; i < impl_->k; ++i)
            r[i] = fp.add(a[i], b[i]);
        return r;
    }
    Elem sub(const Elem& a, const Elem& b) const
    {
        const PrimeField& fp = impl_->base;
        Elem r(impl_->k);
        for (unsigned i = 0; i < impl_->k; ++i)
            r[i] = fp.sub(a[i], b[i]);
        return r;
    }
    Elem neg(const Elem& a) const
    {
        const PrimeField& fp = impl_->base;
        Elem r(impl_->k);
        for (unsigned i = 0; i < impl_->k; ++i)
            r[i] = fp.neg(a[i]);
        return r;
    }

    Elem mul(const Elem& a, const Elem& b) const
    {
        const PrimeField& fp = impl_->base;
        const unsigned k = impl_->k;
        if (k == 1)
            return Elem{fp.mul(a[0], b[0])};
        std::vector<u64> prod(2 * k - 1, 0);
        for (unsigned i = 0; i < k; ++i) {
            if (a[i] == 0)
                continue;
            fp.axpy(std::span<u64>(prod.data() + i, k), std::span<const u64>(b.data(), k), fp.neg(a[i]));
        }
        reduce(prod);
        return prod;
    }

    Elem pow(Elem a, u64 e) const
    {
        Elem r = one();
        while (e) {
            if (e & 1)
                r = mul(r, a);
            e >>= 1;
            if (e)
                a = mul(a, a);
        }
        return r;
    }

    Elem inv(const Elem& a) const
    {
        if (is_zero(a))
            throw Error(ErrorKind::Unsupported, "inverse of zero");
        const PrimeField& fp = impl_->base;
        if (impl_->k == 1)
            return Elem{fp.inv(a[0])};
        upoly::Vec<PrimeField> av(a.begin(), a.end());
        upoly::trim(fp, av);
        auto s = upoly::inverse_mod(fp, av, impl_->modulus);
        s.resize(impl_->k, 0);
        return s;
    }

    // a -> a^p, an F_p-linear map applied through its precomputed matrix.
    Elem frobenius(const Elem& a) const
    {
        const unsigned k = impl_->k;
        if (k == 1)
            return a;
        const PrimeField& fp = impl_->base;
        Elem r(k, 0);
        for (unsigned j = 0; j < k; ++j) {
            if (a[j] == 0)
                continue;
            fp.axpy(r, impl_->frob_cols[j], fp.neg(a[j]));
        }
        return r;
    }

    Elem random(Rng& rng) const
    {
        Elem r(impl_->k);
        for (auto& c : r)
            c = impl_->base.random(rng);
        return r;
    }

    std::vector<u64> coordinates(const Elem& a) const { return a; }
    Elem from_coordinates(std::span<const u64> c) const
    {
        if (c.size() != impl_->k)
            throw Error(ErrorKind::Parse, "extension element has wrong length");
        for (u64 x : c)
            if (x >= characteristic())
                throw Error(ErrorKind::Parse, "extension coefficient out of range");
        return Elem(c.begin(), c.end());
    }

    // The F_p value of a, when a lies in the prime subfield.
    std::optional<u64> base_value(const Elem& a) const
    {
        for (unsigned i = 1; i < impl_->k; ++i)
            if (a[i] != 0)
                return std::nullopt;
        return a[0];
    }

    void axpy(std::span<Elem> dst, std::span<const Elem> src, const Elem& f) const
    {
        if (is_zero(f))
            return;
        for (std::size_t j = 0; j < src.size(); ++j) {
            if (is_zero(src[j]))
                continue;
            dst[j] = sub(dst[j], mul(f, src[j]));
        }
    }

    void scale(std::span<Elem> v, const Elem& f) const
    {
        for (auto& x : v)
            x = mul(x, f);
    }

    std::string describe() const
    {
        return "F_" + std::to_string(characteristic()) + "^" + std::to_string(impl_->k);
    }

    friend bool operator==(const ExtField& a, const ExtField& b) noexcept
    {
        return a.impl_ == b.impl_ || (a.impl_->base == b.impl_->base && a.impl_->modulus == b.impl_->modulus);
    }

private:
    friend ExtField make_extension(const PrimeField&, unsigned, u64);

    ExtField(PrimeField base, std::vector<u64> modulus, bool check)
    {
        upoly::trim(base, modulus);
        if (modulus.size() < 2)
            throw Error(ErrorKind::Unsupported, "extension modulus must have degree >= 1");
        if (modulus.back() != 1)
            throw Error(ErrorKind::Unsupported, "extension modulus must be monic");
        if (check && !is_irreducible(base, modulus))
            throw Error(ErrorKind::CompositeModulus, "extension modulus is reducible");
        auto impl = std::make_shared<Impl>(Impl{base, static_cast<unsigned>(modulus.size() - 1), std::move(modulus), {}});
        build_frobenius(*impl);
        impl_ = std::move(impl);
    }

    struct Impl {
        PrimeField base;
        unsigned k;
        std::vector<u64> modulus;
        std::vector<std::vector<u64>> frob_cols; // column j = t^(j p) mod m
    };

    void reduce(std::vector<u64>& prod) const
    {
        const PrimeField& fp = impl_->base;
        const unsigned k = impl_->k;
        const auto& m = impl_->modulus;
        for (std::size_t i = prod.size(); i-- > k;) {
            const u64 c = prod[i];
            if (c == 0)
                continue;
            fp.axpy(std::span<u64>(prod.data() + (i - k), k), std::span<const u64>(m.data(), k), c);
            prod[i] = 0;
        }
        prod.resize(k);
    }

    static void build_frobenius(Impl& impl)
    {
        const PrimeField& fp = impl.base;
        const unsigned k = impl.k;
        impl.frob_cols.assign(k, std::vector<u64>(k, 0));
        if (k == 1) {
            impl.frob_cols[0][0] = 1;
            return;
        }
        upoly::Vec<PrimeField> tp = upoly::powmod(fp, upoly::x_power(fp, 1), fp.characteristic(), impl.modulus);
        upoly::Vec<PrimeField> cur = upoly::constant(fp, fp.one());
        for (unsigned j = 0; j < k; ++j) {
            for (std::size_t i = 0; i < cur.size(); ++i)
                impl.frob_cols[j][i] = cur[i];
            cur = upoly::mulmod(fp, cur, tp, impl.modulus);
        }
    }

    std::shared_ptr<const Impl> impl_;
};

inline ExtField make_extension(const PrimeField& base, unsigned k, u64 rng_seed)
{
    if (k == 0)
        throw Error(ErrorKind::Unsupported, "extension degree must be >= 1");
    if (k == 1)
        return ExtField(base);
    Rng rng(rng_seed);
    for (;;) {
        std::vector<u64> m(k + 1);
        for (unsigned i = 0; i < k; ++i)
            m[i] = base.random(rng);
        m[k] = 1;
        if (m[0] == 0)
            continue;
        if (is_irreducible(base, m))
            return ExtField(base, std::move(m), false);
    }
}

// Image of a prime-field element in any field type.
template <class F>
typename F::Elem embed(const F& field, u64 c)
{
    return field.from_base(c);
}

} // namespace ivhs

#endif

#ifndef IVHS_PRIME_FIELD_HPP
#define IVHS_PRIME_FIELD_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"
#include "random.hpp"

namespace ivhs {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

namespace detail {

inline u64 mulmod_u64(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

inline u64 powmod_u64(u64 a, u64 e, u64 m)
{
    u64 r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1)
            r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}

} // namespace detail

// Deterministic Miller-Rabin; the first twelve prime bases are exact below 2^64.
inline bool is_prime(u64 n)
{
    if (n < 2)
        return false;
    for (u64 q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % q == 0)
            return n == q;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        u64 x = detail::powmod_u64(a, d, n);
        if (x == 1 || x == n - 1)
            continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = detail::mulmod_u64(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite)
            return false;
    }
    return true;
}

// Uniform prime with exactly `bits` bits (top bit set).
inline u64 random_prime(Rng& rng, unsigned bits)
{
    if (bits < 3 || bits > 62)
        throw Error(ErrorKind::Unsupported, "prime size must be between 3 and 62 bits");
    const u64 lo = u64{1} << (bits - 1);
    for (;;) {
        u64 c = lo | uniform_below(rng, lo) | 1;
        if (is_prime(c))
            return c;
    }
}

// The prime field F_p, p < 2^62. Elements are their canonical residues.
class PrimeField {
public:
    using Elem = u64;

    explicit PrimeField(u64 p) : p_(p)
    {
        if (p < 2 || !is_prime(p))
            throw Error(ErrorKind::CompositeModulus, std::to_string(p) + " is not prime");
        if (p >= (u64{1} << 62))
            throw Error(ErrorKind::Unsupported, "characteristic must be below 2^62");
    }

    u64 characteristic() const noexcept { return p_; }
    unsigned degree() const noexcept { return 1; }

    Elem zero() const noexcept { return 0; }
    Elem one() const noexcept { return 1 % p_; }
    Elem from_int(std::int64_t v) const noexcept
    {
        if (v >= 0)
            return static_cast<u64>(v) % p_;
        u64 m = static_cast<u64>(-(v + 1)) % p_;
        return p_ - 1 - m;
    }
    Elem from_base(u64 c) const noexcept { return c % p_; }

    bool is_zero(Elem a) const noexcept { return a == 0; }
    bool equal(Elem a, Elem b) const noexcept { return a == b; }

    Elem add(Elem a, Elem b) const noexcept
    {
        u64 s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    Elem sub(Elem a, Elem b) const noexcept { return a >= b ? a - b : a + (p_ - b); }
    Elem neg(Elem a) const noexcept { return a == 0 ? 0 : p_ - a; }
    Elem mul(Elem a, Elem b) const noexcept { return detail::mulmod_u64(a, b, p_); }
    Elem pow(Elem a, u64 e) const noexcept { return detail::powmod_u64(a, e, p_); }

    Elem inv(Elem a) const
    {
        if (a == 0)
            throw Error(ErrorKind::Unsupported, "inverse of zero");
        // extended Euclid on signed 128-bit values
        __int128 t = 0, nt = 1, r = p_, nr = a;
        while (nr != 0) {
            __int128 q = r / nr;
            __int128 tmp = t - q * nt;
            t = nt;
            nt = tmp;
            tmp = r - q * nr;
            r = nr;
            nr = tmp;
        }
        if (t < 0)
            t += p_;
        return static_cast<u64>(t);
    }

    Elem frobenius(Elem a) const noexcept { return a; }

    Elem random(Rng& rng) const { return uniform_below(rng, p_); }

    std::vector<u64> coordinates(Elem a) const { return {a}; }
    Elem from_coordinates(std::span<const u64> c) const
    {
        if (c.size() != 1 || c[0] >= p_)
            throw Error(ErrorKind::Parse, "bad prime-field element encoding");
        return c[0];
    }
    std::optional<u64> base_value(Elem a) const noexcept { return a; }

    // dst[j] -= f * src[j]; Shoup multiplication with a precomputed quotient.
    void axpy(std::span<Elem> dst, std::span<const Elem> src, Elem f) const noexcept
    {
        if (f == 0)
            return;
        const u64 fq = static_cast<u64>((static_cast<u128>(f) << 64) / p_);
        const std::size_t n = src.size();
        for (std::size_t j = 0; j < n; ++j) {
            const u64 b = src[j];
            const u64 q = static_cast<u64>((static_cast<u128>(fq) * b) >> 64);
            u64 t = f * b - q * p_;
            if (t >= p_)
                t -= p_;
            const u64 a = dst[j];
            dst[j] = a >= t ? a - t : a + (p_ - t);
        }
    }

    void scale(std::span<Elem> v, Elem f) const noexcept
    {
        const u64 fq = static_cast<u64>((static_cast<u128>(f) << 64) / p_);
        for (auto& b : v) {
            const u64 q = static_cast<u64>((static_cast<u128>(fq) * b) >> 64);
            u64 t = f * b - q * p_;
            b = t >= p_ ? t - p_ : t;
        }
    }

    std::string describe() const { return "F_" + std::to_string(p_); }

    friend bool operator==(const PrimeField& a, const PrimeField& b) noexcept { return a.p_ == b.p_; }

private:
    u64 p_;
};

inline PrimeField make_prime_field(u64 p) { return PrimeField(p); }

} // namespace ivhs

#endif

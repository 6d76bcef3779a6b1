#ifndef IVHS_FIELD_HPP
#define IVHS_FIELD_HPP

#include <concepts>

#include "ext_field.hpp"
#include "poly.hpp"
#include "prime_field.hpp"
#include "roots.hpp"

namespace ivhs {

// What the linear-algebra and form layers require of a coefficient field.
template <class F>
concept FiniteField = requires(const F& f, const typename F::Elem& a, Rng& rng) {
    { f.zero() } -> std::convertible_to<typename F::Elem>;
    { f.one() } -> std::convertible_to<typename F::Elem>;
    { f.add(a, a) } -> std::convertible_to<typename F::Elem>;
    { f.sub(a, a) } -> std::convertible_to<typename F::Elem>;
    { f.mul(a, a) } -> std::convertible_to<typename F::Elem>;
    { f.neg(a) } -> std::convertible_to<typename F::Elem>;
    { f.inv(a) } -> std::convertible_to<typename F::Elem>;
    { f.is_zero(a) } -> std::convertible_to<bool>;
    { f.frobenius(a) } -> std::convertible_to<typename F::Elem>;
    { f.from_base(u64{}) } -> std::convertible_to<typename F::Elem>;
    { f.random(rng) } -> std::convertible_to<typename F::Elem>;
    { f.characteristic() } -> std::convertible_to<u64>;
    { f.degree() } -> std::convertible_to<unsigned>;
};

static_assert(FiniteField<PrimeField>);
static_assert(FiniteField<ExtField>);

} // namespace ivhs

#endif

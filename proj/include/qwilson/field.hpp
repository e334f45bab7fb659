#pragma once

#include <concepts>

#include "ratfun.hpp"
#include "rational.hpp"

namespace qwilson {

// The exact-field abstraction all series/coefficient/matrix code is generic
// over.  Models: Rational (the base field Q) and RatFun (the field Q(t) used
// for exact limit and leading-term extraction).  Equality is exact and
// decidable; there is no floating point anywhere in the core.
template <class F>
concept ExactField = requires(F a, F b) {
    { a + b } -> std::convertible_to<F>;
    { a - b } -> std::convertible_to<F>;
    { a * b } -> std::convertible_to<F>;
    { a / b } -> std::convertible_to<F>;
    { -a } -> std::convertible_to<F>;
    { a == b } -> std::convertible_to<bool>;
    { a.is_zero() } -> std::convertible_to<bool>;
    { a.inv() } -> std::convertible_to<F>;
    F(0);
    F(1);
    F(long{});
};

static_assert(ExactField<Rational>);
static_assert(ExactField<RatFun>);

// Integer power with negative exponents via the field inverse.
template <ExactField F>
F qw_pow(const F& base, long e) {
    if (e < 0) return qw_pow(base.inv(), -e);
    F acc(1);
    F b = base;
    long k = e;
    while (k > 0) {
        if (k & 1) acc = acc * b;
        b = b * b;
        k >>= 1;
    }
    return acc;
}

}  // namespace qwilson

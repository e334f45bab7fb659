#pragma once

#include <string>
#include <vector>

#include "errors.hpp"
#include "field.hpp"

namespace qwilson {

// q-Pochhammer symbol (b;q)_k = prod_{j=0}^{k-1} (1 - b q^j), (b;q)_0 = 1.
template <ExactField F>
F qpoch(const F& b, const F& q, long k) {
    if (k < 0) throw InvalidInput("qpoch needs k >= 0");
    F acc(1);
    F bq = b;
    for (long j = 0; j < k; ++j) {
        acc = acc * (F(1) - bq);
        bq = bq * q;
    }
    return acc;
}

template <ExactField F>
F qpoch_multi(const std::vector<F>& bs, const F& q, long k) {
    F acc(1);
    for (const F& b : bs) acc = acc * qpoch(b, q, k);
    return acc;
}

// A declared-terminating basic hypergeometric sum: the summation range is
// k = 0..nterms regardless of the parameter lists.
template <ExactField F>
struct PhiSpec {
    std::vector<F> upper;
    std::vector<F> lower;
    F q;
    F z;
    long nterms = 0;
};

// Terminating basic hypergeometric series
//   sum_{k=0}^{nterms} [prod (u;q)_k / (prod (l;q)_k * (q;q)_k)] z^k
// computed with multiplicative term updates.  A numerator zero at index k0
// short-circuits the summation (every later term vanishes); a lower-parameter
// factor may only vanish at an index the numerator has already killed --
// otherwise the parameter point is inadmissible and ZeroDenominatorTerm names
// the offending parameter.
template <ExactField F>
F phi(const PhiSpec<F>& spec) {
    if (spec.nterms < 0) throw InvalidInput("phi needs nterms >= 0");
    F total(1);
    F term(1);
    F qk(1);  // q^{k-1} while processing step k
    for (long k = 1; k <= spec.nterms; ++k) {
        for (const F& u : spec.upper) term = term * (F(1) - u * qk);
        if (term.is_zero()) break;
        for (const F& l : spec.lower) {
            const F factor = F(1) - l * qk;
            if (factor.is_zero()) throw ZeroDenominatorTerm(k, l.str());
            term = term / factor;
        }
        qk = qk * spec.q;  // now q^k
        const F qfactor = F(1) - qk;
        if (qfactor.is_zero()) throw ZeroDenominatorTerm(k, spec.q.str());
        term = term / qfactor * spec.z;
        total = total + term;
    }
    return total;
}

template <ExactField F>
F phi(std::vector<F> upper, std::vector<F> lower, const F& q, const F& z, long nterms) {
    return phi(PhiSpec<F>{std::move(upper), std::move(lower), q, z, nterms});
}

// Very-well-poised series
//   sum_k (a;q)_k (1 - a q^{2k})/(1 - a) prod_u [(u;q)_k / (a q / u;q)_k]
//         / (q;q)_k * z^k,
// the special +-q sqrt(a) upper pair folded into the (1 - a q^{2k})/(1 - a)
// factor so everything stays inside the rational field.
template <ExactField F>
F phi_vwp(const F& a, const std::vector<F>& rest_upper, const F& q, const F& z, long nterms) {
    if (nterms < 0) throw InvalidInput("phi_vwp needs nterms >= 0");
    const F one_minus_a = F(1) - a;
    if (one_minus_a.is_zero()) throw InvalidInput("very-well-poised series needs a != 1");
    F total(1);
    F term(1);  // running product without the (1 - a q^{2k})/(1 - a) factor
    F qk(1);    // q^{k-1} while processing step k
    for (long k = 1; k <= nterms; ++k) {
        term = term * (F(1) - a * qk);
        for (const F& u : rest_upper) term = term * (F(1) - u * qk);
        if (term.is_zero()) break;
        for (const F& u : rest_upper) {
            const F lower = a * q / u;
            const F factor = F(1) - lower * qk;
            if (factor.is_zero()) throw ZeroDenominatorTerm(k, lower.str());
            term = term / factor;
        }
        qk = qk * q;  // now q^k
        const F qfactor = F(1) - qk;
        if (qfactor.is_zero()) throw ZeroDenominatorTerm(k, q.str());
        term = term / qfactor * z;
        total = total + term * (F(1) - a * qk * qk) / one_minus_a;
    }
    return total;
}

}  // namespace qwilson

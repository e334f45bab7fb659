#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "field.hpp"
#include "params.hpp"
#include "qseries.hpp"

namespace qwilson {

// ---------------------------------------------------------------------------
// Spectral abscissa and the sigma combination
// ---------------------------------------------------------------------------

// lambda(u; c) = (1 - 1/u)(1 - c q u), the eigenvalue function evaluated at a
// general first argument (the identities need it at q^x, q^{-n-1}/a and
// b q^n / a, so the slot is not specialized to q^x).
template <ExactField F>
F lambda_(const F& u, const F& c, const F& q) {
    if (u.is_zero()) throw InvalidInput("lambda_: first argument must be nonzero");
    return (F(1) - u.inv()) * (F(1) - c * q * u);
}

// sigma(x) = 1 + e + d + f + (1 + 1/e + 1/d + 1/f) / x.
template <ExactField F>
F sigma(const F& x, const Params<F>& p) {
    if (x.is_zero()) throw InvalidInput("sigma: argument must be nonzero");
    return F(1) + p.e + p.d + p.f +
           x.inv() * (F(1) + p.e.inv() + p.d.inv() + p.f.inv());
}

namespace detail {

// Guard for a closed-form denominator factor: returns the value unchanged or
// reports which factor vanished at which index.
template <ExactField F>
F nonzero_factor(F v, const char* factor, long index) {
    if (v.is_zero()) throw DegenerateParameter(factor, index);
    return v;
}

// q-Pochhammer with per-factor vanishing detection, for denominators whose
// zero must be attributed to a series term rather than silently divided.
template <ExactField F>
F qpoch_denominator(const F& b, const F& q, long k, const std::string& label) {
    F acc(1);
    F bq = b;
    for (long j = 0; j < k; ++j) {
        const F factor = F(1) - bq;
        if (factor.is_zero()) throw ZeroDenominatorTerm(j + 1, label);
        acc = acc * factor;
        bq = bq * q;
    }
    return acc;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Three-term coefficients.  The (beta, gamma) slots make one set of formulas
// serve both sides: the recurrence (n-indexed) side uses (b, c), the
// difference (x-indexed) side uses (c, b).  The index m is the shift index.
// ---------------------------------------------------------------------------

template <ExactField F>
F Z_down(const Params<F>& p, const F& beta, long m) {
    const F qm1 = qw_pow(p.q, m + 1);
    const F num = (F(1) - beta * qm1) * (p.a - beta * qm1) * (p.d - qm1) * (p.e - qm1) *
                  (p.f - qm1);
    const F den = detail::nonzero_factor(F(1) - p.a * qm1, "1 - a q^{m+1}", m) *
                  detail::nonzero_factor(F(1) - beta * qw_pow(p.q, 2 * m + 2), "1 - beta q^{2m+2}", m) *
                  detail::nonzero_factor(F(1) - beta * qw_pow(p.q, 2 * m + 1), "1 - beta q^{2m+1}", m);
    return num / den;
}

template <ExactField F>
F Z_up(const Params<F>& p, const F& beta, long m) {
    // The numerator factor (1 - q^m) vanishes identically at m = 0, for every
    // parameter choice, so the coefficient is zero there as a rational function
    // and the denominator factor a - beta at m = 0 is removable.
    if (m == 0) return F(0);
    const F qm = qw_pow(p.q, m);
    const F num = p.q * (F(1) - qm) * (F(1) - p.a * qm) * (F(1) - p.d * beta * qm) *
                  (F(1) - p.e * beta * qm) * (F(1) - p.f * beta * qm);
    const F den = detail::nonzero_factor(p.a - beta * qm, "a - beta q^m", m) *
                  detail::nonzero_factor(F(1) - beta * qw_pow(p.q, 2 * m + 1), "1 - beta q^{2m+1}", m) *
                  detail::nonzero_factor(F(1) - beta * qw_pow(p.q, 2 * m), "1 - beta q^{2m}", m);
    return num / den;
}

// The scalar multiplying lambda itself in the contiguous relation.
template <ExactField F>
F a_scal(const Params<F>& p, const F& beta, long m) {
    if (m == 0) {
        // (1 - beta/a) / (a - beta q^0) == 1/a identically, so at m = 0 the
        // apparent pole at beta = a cancels; use the reduced form.
        const F num = p.q * (F(1) - p.a * p.d) * (F(1) - p.a * p.e) * (F(1) - p.a * p.f);
        const F den = p.a * detail::nonzero_factor(F(1) - p.a * p.q, "1 - a q^{m+1}", m);
        return num / den;
    }
    const F num = qw_pow(p.q, m + 1) * (F(1) - beta / p.a) * (F(1) - p.a * p.d) *
                  (F(1) - p.a * p.e) * (F(1) - p.a * p.f);
    const F den = detail::nonzero_factor(F(1) - p.a * qw_pow(p.q, m + 1), "1 - a q^{m+1}", m) *
                  detail::nonzero_factor(p.a - beta * qw_pow(p.q, m), "a - beta q^m", m);
    return num / den;
}

template <ExactField F>
F Z_diag(const Params<F>& p, const F& beta, long m) {
    return -(Z_down(p, beta, m) + Z_up(p, beta, m) + a_scal(p, beta, m));
}

template <ExactField F>
F X_down(const Params<F>& p, const F& beta, const F& gamma, long m, const F& rho = F(0)) {
    const F z = Z_down(p, beta, m);
    return z * lambda_(qw_pow(p.q, -m - 1) / p.a, gamma, p.q) + rho * z;
}

template <ExactField F>
F X_up(const Params<F>& p, const F& beta, const F& gamma, long m, const F& rho = F(0)) {
    const F z = Z_up(p, beta, m);
    return z * lambda_(beta * qw_pow(p.q, m) / p.a, gamma, p.q) + rho * z;
}

template <ExactField F>
F X_diag(const Params<F>& p, const F& beta, const F& gamma, long m, const F& rho = F(0)) {
    const F unshifted = -(Z_down(p, beta, m) * lambda_(qw_pow(p.q, -m - 1) / p.a, gamma, p.q) +
                          Z_up(p, beta, m) * lambda_(beta * qw_pow(p.q, m) / p.a, gamma, p.q));
    return unshifted + rho * Z_diag(p, beta, m);
}

// Barred coefficients (the renormalized family's three-term blocks).

template <ExactField F>
F Zbar_down(const Params<F>& p, const F& beta, const F& gamma, long m) {
    const F qm1 = qw_pow(p.q, m + 1);
    const F num = p.q * beta * (gamma - p.a * qw_pow(p.q, m)) * (F(1) - beta * qm1) *
                  (p.d - qm1) * (p.e - qm1) * (p.f - qm1);
    const F den = detail::nonzero_factor(F(1) - beta * qw_pow(p.q, 2 * m + 2), "1 - beta q^{2m+2}", m) *
                  detail::nonzero_factor(F(1) - beta * qw_pow(p.q, 2 * m + 1), "1 - beta q^{2m+1}", m) *
                  detail::nonzero_factor(p.a - beta * gamma * qw_pow(p.q, m + 2), "a - beta gamma q^{m+2}", m);
    return num / den;
}

template <ExactField F>
F Zbar_up(const Params<F>& p, const F& beta, const F& gamma, long m) {
    // Identically zero at m = 0 through the factor 1 - q^m; the denominator
    // factor gamma - a/q there is removable.
    if (m == 0) return F(0);
    const F qm = qw_pow(p.q, m);
    const F num = (p.a - beta * gamma * qw_pow(p.q, m + 1)) * (F(1) - qm) *
                  (F(1) - p.d * beta * qm) * (F(1) - p.e * beta * qm) * (F(1) - p.f * beta * qm);
    const F den = beta *
                  detail::nonzero_factor(F(1) - beta * qw_pow(p.q, 2 * m + 1), "1 - beta q^{2m+1}", m) *
                  detail::nonzero_factor(F(1) - beta * qw_pow(p.q, 2 * m), "1 - beta q^{2m}", m) *
                  detail::nonzero_factor(gamma - p.a * qw_pow(p.q, m - 1), "gamma - a q^{m-1}", m);
    return num / den;
}

template <ExactField F>
F b_scal(const Params<F>& p, const F& beta, const F& gamma, long m) {
    if (m == 0) {
        // (1 - gamma q/a) / (gamma - a q^{-1}) == -q/a identically, so at
        // m = 0 the apparent pole at gamma = a/q cancels; use the reduced form.
        const F num = -beta * gamma * (p.q - p.a * p.e * p.f) * (p.q - p.a * p.d * p.e) *
                      (p.q - p.a * p.d * p.f);
        const F den = p.a * detail::nonzero_factor(p.a - beta * gamma * p.q * p.q,
                                                   "a - beta gamma q^{m+2}", m);
        return num / den;
    }
    const F num = qw_pow(p.q, m - 1) * beta * gamma * (p.q - p.a * p.e * p.f) *
                  (p.q - p.a * p.d * p.e) * (p.q - p.a * p.d * p.f) * (F(1) - gamma * p.q / p.a);
    const F den = detail::nonzero_factor(gamma - p.a * qw_pow(p.q, m - 1), "gamma - a q^{m-1}", m) *
                  detail::nonzero_factor(p.a - beta * gamma * qw_pow(p.q, m + 2), "a - beta gamma q^{m+2}", m);
    return num / den;
}

template <ExactField F>
F Zbar_diag(const Params<F>& p, const F& beta, const F& gamma, long m) {
    return -(Zbar_down(p, beta, gamma, m) + Zbar_up(p, beta, gamma, m) + b_scal(p, beta, gamma, m));
}

template <ExactField F>
F Xbar_down(const Params<F>& p, const F& beta, const F& gamma, long m, const F& rho = F(0)) {
    const F z = Zbar_down(p, beta, gamma, m);
    return z * lambda_(beta * qw_pow(p.q, m + 1) / p.a, gamma, p.q) + rho * z;
}

template <ExactField F>
F Xbar_up(const Params<F>& p, const F& beta, const F& gamma, long m, const F& rho = F(0)) {
    const F z = Zbar_up(p, beta, gamma, m);
    return z * lambda_(qw_pow(p.q, -m) / p.a, gamma, p.q) + rho * z;
}

template <ExactField F>
F Xbar_diag(const Params<F>& p, const F& beta, const F& gamma, long m, const F& rho = F(0)) {
    const F unshifted =
        -(Zbar_down(p, beta, gamma, m) * lambda_(beta * qw_pow(p.q, m + 1) / p.a, gamma, p.q) +
          Zbar_up(p, beta, gamma, m) * lambda_(qw_pow(p.q, -m) / p.a, gamma, p.q));
    return unshifted + rho * Zbar_diag(p, beta, gamma, m);
}

// Eigenvalue-problem coefficients of the q-Racah family (a-free).

template <ExactField F>
F qracah_A(const Params<F>& p, long n) {
    const F qn1 = qw_pow(p.q, n + 1);
    const F num = (F(1) - p.b * qn1) * (F(1) - qn1 / p.d) * (F(1) - qn1 / p.e) * (F(1) - qn1 / p.f);
    const F den = detail::nonzero_factor(F(1) - p.b * qw_pow(p.q, 2 * n + 2), "1 - b q^{2n+2}", n) *
                  detail::nonzero_factor(F(1) - p.b * qw_pow(p.q, 2 * n + 1), "1 - b q^{2n+1}", n);
    return num / den;
}

template <ExactField F>
F qracah_C(const Params<F>& p, long n) {
    if (n == 0) return F(0);  // the factor 1 - q^n vanishes identically
    const F qn = qw_pow(p.q, n);
    const F num = p.c * p.q * (F(1) - qn) * (F(1) - p.d * p.b * qn) * (F(1) - p.e * p.b * qn) *
                  (F(1) - p.f * p.b * qn);
    const F den = detail::nonzero_factor(F(1) - p.b * qw_pow(p.q, 2 * n + 1), "1 - b q^{2n+1}", n) *
                  detail::nonzero_factor(F(1) - p.b * qw_pow(p.q, 2 * n), "1 - b q^{2n}", n);
    return num / den;
}

// ---------------------------------------------------------------------------
// Function families
// ---------------------------------------------------------------------------

enum class Family { W, Wbar, P, R, R1, R1bar, R2, R2bar, R3 };

inline constexpr std::array<Family, 9> all_families{
    Family::W, Family::Wbar, Family::P,     Family::R,  Family::R1,
    Family::R1bar, Family::R2, Family::R2bar, Family::R3};

inline std::string family_name(Family f) {
    switch (f) {
        case Family::W: return "W";
        case Family::Wbar: return "Wbar";
        case Family::P: return "P";
        case Family::R: return "R";
        case Family::R1: return "R1";
        case Family::R1bar: return "R1bar";
        case Family::R2: return "R2";
        case Family::R2bar: return "R2bar";
        case Family::R3: return "R3";
    }
    throw InvalidInput("unknown family");
}

inline Family family_from_string(const std::string& s) {
    for (Family f : all_families)
        if (family_name(f) == s) return f;
    throw InvalidInput("unknown family name: " + s);
}

namespace detail {

inline void require_indices(long n, long x) {
    if (n < 0 || x < 0)
        throw IndexOutOfRange("family indices must satisfy n >= 0 and x >= 0, got n=" +
                              std::to_string(n) + " x=" + std::to_string(x));
}

}  // namespace detail

// The very-well-poised form of the basic family W_n(x).
template <ExactField F>
F eval_W(const Params<F>& p, long n, long x) {
    detail::require_indices(n, x);
    const std::vector<F> rest{qw_pow(p.q, -n),     p.b * qw_pow(p.q, n + 1),
                              qw_pow(p.q, -x),     p.c * qw_pow(p.q, x + 1),
                              p.a * p.d,           p.a * p.e,
                              p.a * p.f};
    return phi_vwp(p.a, rest, p.q, p.q, n);
}

// The normalization factor mu_n(x) relating Wbar to W.
template <ExactField F>
F mu(const Params<F>& p, long n, long x) {
    detail::require_indices(n, x);
    const F num = qpoch(p.a * qw_pow(p.q, x + 1), p.q, n) *
                  qpoch(p.a * qw_pow(p.q, -x) / p.c, p.q, n) *
                  qpoch(p.b * p.q / p.a, p.q, n) *
                  qpoch(p.b * p.c * p.q * p.q / p.a, p.q, n);
    F den(1);
    const std::array<std::pair<F, const char*>, 4> lows{{
        {p.b * qw_pow(p.q, 1 - x) / p.a, "(b q^{1-x}/a; q)_n"},
        {p.b * p.c * qw_pow(p.q, x + 2) / p.a, "(b c q^{x+2}/a; q)_n"},
        {p.a / p.c, "(a/c; q)_n"},
        {p.a * p.q, "(a q; q)_n"},
    }};
    for (const auto& [base, label] : lows)
        den = den * detail::nonzero_factor(qpoch(base, p.q, n), label, n);
    return num / den;
}

template <ExactField F>
F eval_Wbar(const Params<F>& p, long n, long x) {
    return mu(p, n, x) * eval_W(p, n, x);
}

// The polynomial normalization P_n evaluated at the point x (a polynomial of
// degree n in lambda(q^x; c)).
template <ExactField F>
F eval_P(const Params<F>& p, long n, long x) {
    detail::require_indices(n, x);
    const F pref = qw_pow(p.c / p.a, n) * qw_pow(p.q, -(n * (n - 1)) / 2) *
                   qpoch(p.a * qw_pow(p.q, x + 1), p.q, n) *
                   qpoch(p.a * qw_pow(p.q, -x) / p.c, p.q, n);
    return pref * eval_W(p, n, x);
}

// tau_k(x), the coefficient-extraction ratio.
template <ExactField F>
F tau(const Params<F>& p, long k, long x) {
    detail::require_indices(k, x);
    const F num = qpoch(qw_pow(p.q, -x), p.q, k) * qpoch(p.c * qw_pow(p.q, x + 1), p.q, k);
    const F den = detail::nonzero_factor(qpoch(p.a * qw_pow(p.q, -x) / p.c, p.q, k),
                                         "(a q^{-x}/c; q)_k", k) *
                  detail::nonzero_factor(qpoch(p.a * qw_pow(p.q, x + 1), p.q, k),
                                         "(a q^{x+1}; q)_k", k);
    return num / den;
}

// q-Racah 4phi3 (a-free limit family).
template <ExactField F>
F eval_R(const Params<F>& p, long n, long x) {
    detail::require_indices(n, x);
    return phi<F>({qw_pow(p.q, -n), p.b * qw_pow(p.q, n + 1), qw_pow(p.q, -x),
                   p.c * qw_pow(p.q, x + 1)},
                  {p.q / p.d, p.q / p.e, p.q / p.f}, p.q, p.q, n);
}

template <ExactField F>
F eval_R1(const Params<F>& p, long n, long x) {
    detail::require_indices(n, x);
    const F num = qpoch(p.a * p.q, p.q, n) * qpoch(p.a * qw_pow(p.q, x - n) / p.b, p.q, n);
    const F den = detail::nonzero_factor(qpoch(p.a * qw_pow(p.q, x + 1), p.q, n),
                                         "(a q^{x+1}; q)_n", n) *
                  detail::nonzero_factor(qpoch(p.a * qw_pow(p.q, -n) / p.b, p.q, n),
                                         "(a q^{-n}/b; q)_n", n);
    return num / den *
           phi<F>({qw_pow(p.q, -n), p.b * qw_pow(p.q, n + 1), qw_pow(p.q, -x),
                   p.q / (p.a * p.d * p.e)},
                  {p.q / p.d, p.q / p.e, p.b * qw_pow(p.q, 1 - x) / p.a}, p.q, p.q, n);
}

template <ExactField F>
F eval_R1bar(const Params<F>& p, long n, long x) {
    detail::require_indices(n, x);
    return phi<F>({qw_pow(p.q, -n), p.b * qw_pow(p.q, n + 1), qw_pow(p.q, -x),
                   p.q / (p.a * p.d * p.e)},
                  {p.q / p.d, p.q / p.e, p.b * qw_pow(p.q, 1 - x) / p.a}, p.q, p.q, n);
}

template <ExactField F>
F eval_R2(const Params<F>& p, long n, long x) {
    detail::require_indices(n, x);
    const F num = qpoch(p.a * p.q, p.q, n) * qpoch(qw_pow(p.q, x + 1) / p.e, p.q, n);
    const F den = detail::nonzero_factor(qpoch(p.a * qw_pow(p.q, x + 1), p.q, n),
                                         "(a q^{x+1}; q)_n", n) *
                  detail::nonzero_factor(qpoch(p.q / p.e, p.q, n), "(q/e; q)_n", n);
    return num / den *
           phi<F>({qw_pow(p.q, -n), qw_pow(p.q, -x), p.a * p.e, p.q / (p.a * p.d * p.f)},
                  {p.q / p.d, p.q / p.f, p.e * qw_pow(p.q, -x - n)}, p.q, p.q, n);
}

template <ExactField F>
F eval_R2bar(const Params<F>& p, long n, long x) {
    detail::require_indices(n, x);
    const F c0 = (p.a * p.d * p.e * p.f).inv();
    const F num = qpoch(p.q * p.q * c0, p.q, n) * qpoch(qw_pow(p.q, x + 1) / p.e, p.q, n);
    const F den = detail::nonzero_factor(qpoch(qw_pow(p.q, x + 2) * c0, p.q, n),
                                         "(q^{x+2}/(a d e f); q)_n", n) *
                  detail::nonzero_factor(qpoch(p.q / p.e, p.q, n), "(q/e; q)_n", n);
    return num / den *
           phi<F>({qw_pow(p.q, -n), qw_pow(p.q, -x), p.a * p.e, p.q / (p.a * p.d * p.f)},
                  {p.q / p.d, p.q / p.f, p.e * qw_pow(p.q, -x - n)}, p.q, p.q, n);
}

template <ExactField F>
F eval_R3(const Params<F>& p, long n, long x) {
    detail::require_indices(n, x);
    const F num = qpoch(p.a * p.q, p.q, n) * qpoch(qw_pow(p.q, -n) / (p.b * p.d), p.q, n);
    const F den = detail::nonzero_factor(qpoch(p.a * qw_pow(p.q, -n) / p.b, p.q, n),
                                         "(a q^{-n}/b; q)_n", n) *
                  detail::nonzero_factor(qpoch(p.q / p.d, p.q, n), "(q/d; q)_n", n);
    return num / den *
           phi<F>({qw_pow(p.q, -n), p.b * qw_pow(p.q, n + 1), p.a / p.c, p.a * p.d},
                  {p.a * qw_pow(p.q, x + 1), p.a * qw_pow(p.q, -x) / p.c, p.b * p.d * p.q},
                  p.q, p.q, n);
}

template <ExactField F>
F eval_family(Family fam, const Params<F>& p, long n, long x) {
    switch (fam) {
        case Family::W: return eval_W(p, n, x);
        case Family::Wbar: return eval_Wbar(p, n, x);
        case Family::P: return eval_P(p, n, x);
        case Family::R: return eval_R(p, n, x);
        case Family::R1: return eval_R1(p, n, x);
        case Family::R1bar: return eval_R1bar(p, n, x);
        case Family::R2: return eval_R2(p, n, x);
        case Family::R2bar: return eval_R2bar(p, n, x);
        case Family::R3: return eval_R3(p, n, x);
    }
    throw InvalidInput("unknown family");
}

// ---------------------------------------------------------------------------
// Identity residuals
// ---------------------------------------------------------------------------

enum class Identity {
    GM,
    GM2,
    GEVP_rec_W,
    GEVP_rec_W_norm,
    GEVP_diff_W,
    GEVP_rec_Wbar,
    GEVP_diff_Wbar,
    ZZS,
    ZZS2,
    RII,
    EVP_qRacah,
    SYM_W,
    SYM_Wbar,
};

inline constexpr std::array<Identity, 13> all_identities{
    Identity::GM,          Identity::GM2,          Identity::GEVP_rec_W,
    Identity::GEVP_rec_W_norm, Identity::GEVP_diff_W, Identity::GEVP_rec_Wbar,
    Identity::GEVP_diff_Wbar,  Identity::ZZS,          Identity::ZZS2,
    Identity::RII,         Identity::EVP_qRacah,   Identity::SYM_W,
    Identity::SYM_Wbar};

inline std::string identity_name(Identity id) {
    switch (id) {
        case Identity::GM: return "GM";
        case Identity::GM2: return "GM2";
        case Identity::GEVP_rec_W: return "GEVP_rec_W";
        case Identity::GEVP_rec_W_norm: return "GEVP_rec_W_norm";
        case Identity::GEVP_diff_W: return "GEVP_diff_W";
        case Identity::GEVP_rec_Wbar: return "GEVP_rec_Wbar";
        case Identity::GEVP_diff_Wbar: return "GEVP_diff_Wbar";
        case Identity::ZZS: return "ZZS";
        case Identity::ZZS2: return "ZZS2";
        case Identity::RII: return "RII";
        case Identity::EVP_qRacah: return "EVP_qRacah";
        case Identity::SYM_W: return "SYM_W";
        case Identity::SYM_Wbar: return "SYM_Wbar";
    }
    throw InvalidInput("unknown identity");
}

inline Identity identity_from_string(const std::string& s) {
    for (Identity id : all_identities)
        if (identity_name(id) == s) return id;
    throw InvalidInput("unknown identity name: " + s);
}

namespace detail {

// down * g(m+1) + diag * g(m) + up * g(m-1) with the boundary convention:
// at m = 0 the up coefficient must vanish exactly, and only then is the
// index-(-1) term dropped.  A nonzero boundary coefficient is a logic error
// in the transcription, not a property of the parameter point.
template <ExactField F, class G>
F three_term(const F& down, const F& diag, const F& up, long m, G&& g) {
    F v = down * g(m + 1) + diag * g(m);
    if (m >= 1) {
        v = v + up * g(m - 1);
    } else if (!up.is_zero()) {
        throw Error("three-term boundary coefficient does not vanish at index 0");
    }
    return v;
}

}  // namespace detail

// Exact LHS - RHS of the named identity at the point (n, x); zero on the
// whole admissible range is the content of the verified statements.
template <ExactField F>
F residual(Identity id, long n, long x, const Params<F>& p) {
    detail::require_indices(n, x);
    const F& q = p.q;
    const F lamx = lambda_(qw_pow(q, x), p.c, q);
    const auto Wn = [&](long k) { return eval_W(p, k, x); };
    const auto Wx = [&](long k) { return eval_W(p, n, k); };
    const auto Wbn = [&](long k) { return eval_Wbar(p, k, x); };
    const auto Wbx = [&](long k) { return eval_Wbar(p, n, k); };

    switch (id) {
        case Identity::GM: {
            const F A = Z_down(p, p.b, n) * (lamx - lambda_(qw_pow(q, -n - 1) / p.a, p.c, q));
            const F B = Z_up(p, p.b, n) * (lamx - lambda_(p.b * qw_pow(q, n) / p.a, p.c, q));
            return detail::three_term(A, -(A + B + lamx * a_scal(p, p.b, n)), B, n, Wn);
        }
        case Identity::GM2: {
            const F A = Zbar_down(p, p.b, p.c, n) *
                        (lamx - lambda_(p.b * qw_pow(q, n + 1) / p.a, p.c, q));
            const F B = Zbar_up(p, p.b, p.c, n) * (lamx - lambda_(qw_pow(q, -n) / p.a, p.c, q));
            return detail::three_term(A, -(A + B + lamx * b_scal(p, p.b, p.c, n)), B, n, Wbn);
        }
        case Identity::GEVP_rec_W: {
            const F lhs = detail::three_term(X_down(p, p.b, p.c, n), X_diag(p, p.b, p.c, n),
                                             X_up(p, p.b, p.c, n), n, Wn);
            const F rhs = detail::three_term(Z_down(p, p.b, n), Z_diag(p, p.b, n),
                                             Z_up(p, p.b, n), n, Wn);
            return lhs - lamx * rhs;
        }
        case Identity::GEVP_rec_W_norm: {
            const F rho = -(F(1) + q * p.c);
            const F ev = -(qw_pow(q, -x) + p.c * qw_pow(q, x + 1));
            const F lhs = detail::three_term(X_down(p, p.b, p.c, n, rho),
                                             X_diag(p, p.b, p.c, n, rho),
                                             X_up(p, p.b, p.c, n, rho), n, Wn);
            const F rhs = detail::three_term(Z_down(p, p.b, n), Z_diag(p, p.b, n),
                                             Z_up(p, p.b, n), n, Wn);
            return lhs - ev * rhs;
        }
        case Identity::GEVP_diff_W: {
            const F ev = lambda_(qw_pow(q, n), p.b, q);
            const F lhs = detail::three_term(X_down(p, p.c, p.b, x), X_diag(p, p.c, p.b, x),
                                             X_up(p, p.c, p.b, x), x, Wx);
            const F rhs = detail::three_term(Z_down(p, p.c, x), Z_diag(p, p.c, x),
                                             Z_up(p, p.c, x), x, Wx);
            return lhs - ev * rhs;
        }
        case Identity::GEVP_rec_Wbar: {
            const F lhs = detail::three_term(Xbar_down(p, p.b, p.c, n), Xbar_diag(p, p.b, p.c, n),
                                             Xbar_up(p, p.b, p.c, n), n, Wbn);
            const F rhs = detail::three_term(Zbar_down(p, p.b, p.c, n), Zbar_diag(p, p.b, p.c, n),
                                             Zbar_up(p, p.b, p.c, n), n, Wbn);
            return lhs - lamx * rhs;
        }
        case Identity::GEVP_diff_Wbar: {
            const F ev = lambda_(qw_pow(q, n), p.b, q);
            const F lhs = detail::three_term(Xbar_down(p, p.c, p.b, x), Xbar_diag(p, p.c, p.b, x),
                                             Xbar_up(p, p.c, p.b, x), x, Wbx);
            const F rhs = detail::three_term(Zbar_down(p, p.c, p.b, x), Zbar_diag(p, p.c, p.b, x),
                                             Zbar_up(p, p.c, p.b, x), x, Wbx);
            return lhs - ev * rhs;
        }
        case Identity::ZZS: {
            const F lhs = detail::three_term(Z_down(p, p.b, n), Z_diag(p, p.b, n),
                                             Z_up(p, p.b, n), n, Wn);
            const F rhs = detail::three_term(Z_down(p, p.c, x), Z_diag(p, p.c, x),
                                             Z_up(p, p.c, x), x, Wx);
            return lhs - rhs;
        }
        case Identity::ZZS2: {
            const F lhs = detail::three_term(Zbar_down(p, p.b, p.c, n), Zbar_diag(p, p.b, p.c, n),
                                             Zbar_up(p, p.b, p.c, n), n, Wbn);
            const F rhs = detail::three_term(Zbar_down(p, p.c, p.b, x), Zbar_diag(p, p.c, p.b, x),
                                             Zbar_up(p, p.c, p.b, x), x, Wbx);
            return lhs - rhs;
        }
        case Identity::RII: {
            const F down = Z_down(p, p.b, n);
            const F mid = Z_diag(p, p.b, n) * lamx - X_diag(p, p.b, p.c, n);
            const F up = Z_up(p, p.b, n) * (lamx - lambda_(qw_pow(q, -n) / p.a, p.c, q)) *
                         (lamx - lambda_(p.b * qw_pow(q, n) / p.a, p.c, q));
            const auto Pn = [&](long k) { return eval_P(p, k, x); };
            return detail::three_term(down, mid, up, n, Pn);
        }
        case Identity::EVP_qRacah: {
            const F A = qracah_A(p, n);
            const F C = qracah_C(p, n);
            const auto Rn = [&](long k) { return eval_R(p, k, x); };
            return detail::three_term(A, -(A + C) + lamx, C, n, Rn);
        }
        case Identity::SYM_W:
            return eval_W(p, x, n) - eval_W(p.swap_bc(), n, x);
        case Identity::SYM_Wbar:
            return eval_Wbar(p, x, n) - eval_Wbar(p.swap_bc(), n, x);
    }
    throw InvalidInput("unknown identity");
}

// ---------------------------------------------------------------------------
// Scalar side identities (exercised as standalone checks)
// ---------------------------------------------------------------------------

// The four factorizations of eigenvalue differences used by the contiguous
// relations: which selects A, B, Abar, Bbar in that order.
template <ExactField F>
F brace_residual(int which, long n, long x, const Params<F>& p) {
    detail::require_indices(n, x);
    const F& q = p.q;
    const F lamx = lambda_(qw_pow(q, x), p.c, q);
    switch (which) {
        case 0:
            return (F(1) - p.a * qw_pow(q, x + n + 1)) * (p.c * qw_pow(q, -n) / p.a - qw_pow(q, -x)) -
                   (lamx - lambda_(qw_pow(q, -n - 1) / p.a, p.c, q));
        case 1:
            return (p.a * qw_pow(q, x) - p.b * qw_pow(q, n)) *
                       (qw_pow(q, -n - x) / p.b - p.c * q / p.a) -
                   (lamx - lambda_(p.b * qw_pow(q, n) / p.a, p.c, q));
        case 2:
            return (p.a * qw_pow(q, x) - p.b * qw_pow(q, n + 1)) *
                       (qw_pow(q, -n - x - 1) / p.b - p.c * q / p.a) -
                   (lamx - lambda_(p.b * qw_pow(q, n + 1) / p.a, p.c, q));
        case 3:
            return (F(1) - p.a * qw_pow(q, x + n)) * (p.c * qw_pow(q, -n + 1) / p.a - qw_pow(q, -x)) -
                   (lamx - lambda_(qw_pow(q, -n) / p.a, p.c, q));
        default:
            throw InvalidInput("brace_residual: which must be 0..3");
    }
}

// The affine eigenvalue shift: lambda(q^x; c) - (1 + qc) = -(q^{-x} + c q^{x+1}).
template <ExactField F>
F shift_identity_residual(long x, const Params<F>& p) {
    detail::require_indices(0, x);
    const F lamx = lambda_(qw_pow(p.q, x), p.c, p.q);
    return (lamx - (F(1) + p.q * p.c)) + (qw_pow(p.q, -x) + p.c * qw_pow(p.q, x + 1));
}

// Prefactor-ratio identity feeding the R_II normalization:
// (1 - a q^{x+n+1})(1 - a q^{n-x}/c) = (a q^n / c)(lambda(q^x;c) - lambda(q^{-n-1}/a;c)).
template <ExactField F>
F rii_ratio_residual(long n, long x, const Params<F>& p) {
    detail::require_indices(n, x);
    const F& q = p.q;
    const F lamx = lambda_(qw_pow(q, x), p.c, q);
    return (F(1) - p.a * qw_pow(q, x + n + 1)) * (F(1) - p.a * qw_pow(q, n - x) / p.c) -
           (p.a * qw_pow(q, n) / p.c) * (lamx - lambda_(qw_pow(q, -n - 1) / p.a, p.c, q));
}

// ---------------------------------------------------------------------------
// Watson transformation
// ---------------------------------------------------------------------------

// LHS 8phi7 minus prefactor * 4phi3 RHS; zero whenever both sides are
// admissible.  An independent identity with its own five parameters.
template <ExactField F>
F watson_residual(const F& a, const F& b, const F& c, const F& d, const F& e, long n, const F& q) {
    if (n < 0) throw IndexOutOfRange("watson_residual needs n >= 0");
    const F z = a * a * qw_pow(q, n + 2) / (b * c * d * e);
    const F lhs = phi_vwp<F>(a, {b, c, d, e, qw_pow(q, -n)}, q, z, n);
    const F pref = qpoch(a * q, q, n) * qpoch(a * q / (d * e), q, n) /
                   (detail::qpoch_denominator(a * q / d, q, n, "a q/d") *
                    detail::qpoch_denominator(a * q / e, q, n, "a q/e"));
    const F rhs = pref * phi<F>({a * q / (b * c), d, e, qw_pow(q, -n)},
                                {a * q / b, a * q / c, d * e * qw_pow(q, -n) / a}, q, q, n);
    return lhs - rhs;
}

// ---------------------------------------------------------------------------
// Polynomiality of P_n in the spectral abscissa
// ---------------------------------------------------------------------------

template <ExactField F>
struct DegreeProfile {
    long degree;
    F leading;
};

// Exact Newton divided differences of P_n against the abscissae
// lambda(q^x; c): returns the largest order with a nonzero divided
// difference and that value.  Generic contract: degree == n.
template <ExactField F>
DegreeProfile<F> p_degree_profile(long n, const Params<F>& p, const std::vector<long>& nodes) {
    if (n < 0) throw IndexOutOfRange("p_degree_profile needs n >= 0");
    if (static_cast<long>(nodes.size()) < n + 2)
        throw InvalidInput("p_degree_profile needs at least n + 2 nodes");
    std::vector<F> xs, table;
    xs.reserve(nodes.size());
    table.reserve(nodes.size());
    for (long node : nodes) {
        detail::require_indices(0, node);
        xs.push_back(lambda_(qw_pow(p.q, node), p.c, p.q));
        table.push_back(eval_P(p, n, node));
    }
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = i + 1; j < xs.size(); ++j)
            if (xs[i] == xs[j])
                throw DuplicateAbscissa("nodes " + std::to_string(nodes[i]) + " and " +
                                        std::to_string(nodes[j]) +
                                        " share the abscissa lambda(q^x; c)");
    long degree = 0;
    F leading = table[0];
    const std::size_t m = xs.size();
    for (std::size_t order = 1; order < m; ++order) {
        std::vector<F> next;
        next.reserve(m - order);
        bool any = false;
        for (std::size_t i = 0; i + order < m; ++i) {
            next.push_back((table[i + 1] - table[i]) / (xs[i + order] - xs[i]));
            if (!next.back().is_zero()) any = true;
        }
        table = std::move(next);
        if (any) {
            degree = static_cast<long>(order);
            leading = table[0];
        }
    }
    return DegreeProfile<F>{degree, leading};
}

// ---------------------------------------------------------------------------
// Limit gaps between W-side and reduced-family evaluations
// ---------------------------------------------------------------------------

enum class FamPair {
    W_R_a,         // a -> infinity, W -> R
    W_R1_c,        // c -> infinity, W -> R1
    Wbar_R1bar_c,  // c -> infinity, Wbar -> R1bar
    W_R2_c,        // c -> infinity with b = 1/(c d e f), W -> R2
    Wbar_R2bar_c,  // same curve, Wbar -> R2bar
    W_R3_e,        // e -> infinity, W -> R3
};

inline constexpr std::array<FamPair, 6> all_fam_pairs{
    FamPair::W_R_a,  FamPair::W_R1_c,      FamPair::Wbar_R1bar_c,
    FamPair::W_R2_c, FamPair::Wbar_R2bar_c, FamPair::W_R3_e};

inline std::string fam_pair_name(FamPair fp) {
    switch (fp) {
        case FamPair::W_R_a: return "W_R_a";
        case FamPair::W_R1_c: return "W_R1_c";
        case FamPair::Wbar_R1bar_c: return "Wbar_R1bar_c";
        case FamPair::W_R2_c: return "W_R2_c";
        case FamPair::Wbar_R2bar_c: return "Wbar_R2bar_c";
        case FamPair::W_R3_e: return "W_R3_e";
    }
    throw InvalidInput("unknown family pair");
}

inline FamPair fam_pair_from_string(const std::string& s) {
    for (FamPair fp : all_fam_pairs)
        if (fam_pair_name(fp) == s) return fp;
    throw InvalidInput("unknown family pair name: " + s);
}

// Instantiate the curve point for a family pair at parameter value t.  The
// constraint b c d e f = 1 is re-imposed by solving for the dependent slot,
// so every evaluated point is a valid Params.
inline Params<Rational> limit_curve_point(FamPair fp, const Params<Rational>& base,
                                          const Rational& t) {
    switch (fp) {
        case FamPair::W_R_a:
            // a = t; (b, c, d, e, f) all fixed, the constraint does not involve a.
            return Params<Rational>(base.q, t, base.b, base.c, base.d, base.e, base.f);
        case FamPair::W_R1_c:
        case FamPair::Wbar_R1bar_c:
            // c = t, f dependent.
            return Params<Rational>::with_dependent_f(base.q, base.a, base.b, t, base.d, base.e);
        case FamPair::W_R2_c:
        case FamPair::Wbar_R2bar_c: {
            // c = t with b = 1/(c d e f); f keeps its base value along the curve.
            const Rational b = (t * base.d * base.e * base.f).inv();
            return Params<Rational>(base.q, base.a, b, t, base.d, base.e, base.f);
        }
        case FamPair::W_R3_e:
            // e = t, f dependent.
            return Params<Rational>::with_dependent_f(base.q, base.a, base.b, base.c, base.d, t);
    }
    throw InvalidInput("unknown family pair");
}

// Exact |W-side(t) - limit-side| at one curve point.  The limit side is the
// closed-form reduced family at the surviving base parameters.
inline Rational limit_gap(FamPair fp, long n, long x, const Params<Rational>& base,
                          const Rational& t) {
    const Params<Rational> pt = limit_curve_point(fp, base, t);
    switch (fp) {
        case FamPair::W_R_a: return (eval_W(pt, n, x) - eval_R(base, n, x)).abs();
        case FamPair::W_R1_c: return (eval_W(pt, n, x) - eval_R1(base, n, x)).abs();
        case FamPair::Wbar_R1bar_c: return (eval_Wbar(pt, n, x) - eval_R1bar(base, n, x)).abs();
        case FamPair::W_R2_c: return (eval_W(pt, n, x) - eval_R2(base, n, x)).abs();
        case FamPair::Wbar_R2bar_c: return (eval_Wbar(pt, n, x) - eval_R2bar(base, n, x)).abs();
        case FamPair::W_R3_e: return (eval_W(pt, n, x) - eval_R3(base, n, x)).abs();
    }
    throw InvalidInput("unknown family pair");
}

// The exact limit-side value (used for relative-tolerance reporting).
inline Rational limit_side_value(FamPair fp, long n, long x, const Params<Rational>& base) {
    switch (fp) {
        case FamPair::W_R_a: return eval_R(base, n, x);
        case FamPair::W_R1_c: return eval_R1(base, n, x);
        case FamPair::Wbar_R1bar_c: return eval_R1bar(base, n, x);
        case FamPair::W_R2_c: return eval_R2(base, n, x);
        case FamPair::Wbar_R2bar_c: return eval_R2bar(base, n, x);
        case FamPair::W_R3_e: return eval_R3(base, n, x);
    }
    throw InvalidInput("unknown family pair");
}

}  // namespace qwilson

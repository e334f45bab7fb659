#pragma once

#include <qwilson/bandmatrix.hpp>
#include <qwilson/ratfun.hpp>
#include <qwilson/wilson.hpp>

#include <algorithm>
#include <array>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qwilson {

// ---------------------------------------------------------------------------
// q-deformed brackets
// ---------------------------------------------------------------------------

// (AB - q BA) / (1 - q)
template <ExactField F>
BandMatrix<F> q_comm(const BandMatrix<F>& a, const BandMatrix<F>& b, const F& q) {
    const F one(1);
    if ((one - q).is_zero()) throw InvalidInput("q-commutator needs q != 1");
    return (band_mul(a, b) - q * band_mul(b, a)).scaled((one - q).inv());
}

// AB + BA
template <ExactField F>
BandMatrix<F> anti_comm(const BandMatrix<F>& a, const BandMatrix<F>& b) {
    return band_mul(a, b) + band_mul(b, a);
}

// (1 - q^x) / (1 - q) = 1 + q + ... + q^{x-1} for nonnegative integer x.
template <ExactField F>
F q_number(long x, const F& q) {
    const F one(1);
    if ((one - q).is_zero()) throw InvalidInput("q-number needs q != 1");
    return (one - qw_pow(q, x)) / (one - q);
}

// ---------------------------------------------------------------------------
// Matrix builders
// ---------------------------------------------------------------------------

// The recurrence side acts on the degree index n with family parameter slots
// (b, c); the difference side acts on the argument index x with the two slots
// exchanged.
enum class Side { recurrence, difference };

// Diagonal companion matrix V.  Two normalizations are in use: the `lambda`
// variant has entries lambda(q^m; beta), which vanish at m = 0; the `shifted`
// variant subtracts the constant (1 + q beta), giving -(q^{-m} + beta q^{m+1}).
// The algebra relations below close with the shifted variant only; the lambda
// variant is the default for standalone construction.
enum class VKind { lambda, shifted };

template <ExactField F>
BandMatrix<F> mat_Z(const Params<F>& p, const F& beta, long size) {
    BandMatrix<F> m(size, 1, 1);
    for (long j = 0; j < size; ++j) {
        m.set(j, j, Z_diag(p, beta, j));
        if (j + 1 < size) m.set(j + 1, j, Z_down(p, beta, j));
        if (j >= 1) m.set(j - 1, j, Z_up(p, beta, j));
    }
    return m;
}

template <ExactField F>
BandMatrix<F> mat_X(const Params<F>& p, const F& beta, const F& gamma, long size,
                    const F& rho = F(0)) {
    BandMatrix<F> m(size, 1, 1);
    for (long j = 0; j < size; ++j) {
        m.set(j, j, X_diag(p, beta, gamma, j, rho));
        if (j + 1 < size) m.set(j + 1, j, X_down(p, beta, gamma, j, rho));
        if (j >= 1) m.set(j - 1, j, X_up(p, beta, gamma, j, rho));
    }
    return m;
}

template <ExactField F>
BandMatrix<F> mat_Zbar(const Params<F>& p, const F& beta, const F& gamma, long size) {
    BandMatrix<F> m(size, 1, 1);
    for (long j = 0; j < size; ++j) {
        m.set(j, j, Zbar_diag(p, beta, gamma, j));
        if (j + 1 < size) m.set(j + 1, j, Zbar_down(p, beta, gamma, j));
        if (j >= 1) m.set(j - 1, j, Zbar_up(p, beta, gamma, j));
    }
    return m;
}

template <ExactField F>
BandMatrix<F> mat_Xbar(const Params<F>& p, const F& beta, const F& gamma, long size,
                       const F& rho = F(0)) {
    BandMatrix<F> m(size, 1, 1);
    for (long j = 0; j < size; ++j) {
        m.set(j, j, Xbar_diag(p, beta, gamma, j, rho));
        if (j + 1 < size) m.set(j + 1, j, Xbar_down(p, beta, gamma, j, rho));
        if (j >= 1) m.set(j - 1, j, Xbar_up(p, beta, gamma, j, rho));
    }
    return m;
}

template <ExactField F>
BandMatrix<F> mat_V(const F& q, const F& beta, long size, VKind kind = VKind::lambda) {
    BandMatrix<F> m(size, 0, 0);
    for (long j = 0; j < size; ++j) {
        if (kind == VKind::lambda) {
            m.set(j, j, lambda_(qw_pow(q, j), beta, q));
        } else {
            m.set(j, j, -(qw_pow(q, -j) + beta * qw_pow(q, j + 1)));
        }
    }
    return m;
}

namespace detail {

template <ExactField F>
std::pair<F, F> side_slots(const Params<F>& p, Side s) {
    return s == Side::recurrence ? std::pair<F, F>{p.b, p.c} : std::pair<F, F>{p.c, p.b};
}

}  // namespace detail

template <ExactField F>
BandMatrix<F> mat_Z(const Params<F>& p, long size, Side s) {
    return mat_Z(p, detail::side_slots(p, s).first, size);
}

template <ExactField F>
BandMatrix<F> mat_X(const Params<F>& p, long size, Side s, const F& rho) {
    const auto [beta, gamma] = detail::side_slots(p, s);
    return mat_X(p, beta, gamma, size, rho);
}

// Default shift: rho = -(1 + q gamma), the normalization under which the
// eigenvalue of the difference equation takes the form -(q^{-x} + c q^{x+1}).
template <ExactField F>
BandMatrix<F> mat_X(const Params<F>& p, long size, Side s) {
    const auto [beta, gamma] = detail::side_slots(p, s);
    return mat_X(p, beta, gamma, size, -(F(1) + p.q * gamma));
}

template <ExactField F>
BandMatrix<F> mat_Zbar(const Params<F>& p, long size, Side s) {
    const auto [beta, gamma] = detail::side_slots(p, s);
    return mat_Zbar(p, beta, gamma, size);
}

template <ExactField F>
BandMatrix<F> mat_Xbar(const Params<F>& p, long size, Side s, const F& rho) {
    const auto [beta, gamma] = detail::side_slots(p, s);
    return mat_Xbar(p, beta, gamma, size, rho);
}

template <ExactField F>
BandMatrix<F> mat_Xbar(const Params<F>& p, long size, Side s) {
    const auto [beta, gamma] = detail::side_slots(p, s);
    return mat_Xbar(p, beta, gamma, size, -(F(1) + p.q * gamma));
}

template <ExactField F>
BandMatrix<F> mat_V(const Params<F>& p, long size, Side s, VKind kind = VKind::lambda) {
    return mat_V(p.q, detail::side_slots(p, s).first, size, kind);
}

// ---------------------------------------------------------------------------
// Structure constants
// ---------------------------------------------------------------------------

template <ExactField F>
struct WilsonConstants {
    F c1, c2, c3, c4, c5, c6, c7;
    F d1, d2, d3;
    F e1, e2, e3, e4, e5, e6, e7, e8, e9, e10;
};

// The closed form of e10 contains a product whose middle factor admits two
// readings: `bc` pairs (1-b) with (1-c), `bb` pairs (1-b) with itself.  The
// residual suite closes only under the `bc` reading, which is therefore the
// default; `bb` is kept so the failing reading stays reproducible.
enum class E10Variant { bc, bb };

template <ExactField F>
WilsonConstants<F> wilson_constants(const Params<F>& p, E10Variant variant = E10Variant::bc) {
    const F one(1);
    const F& q = p.q;
    const F& a = p.a;
    const F& b = p.b;
    const F& c = p.c;
    const F qq = one + q;
    const F sq2 = (one - q * q) * (one - q * q);
    const F sb = sigma(b, p);
    const F sc = sigma(c, p);
    const F sbc = sigma(b * c, p);

    WilsonConstants<F> k;
    k.c1 = -(a / (b * c) + q / a);
    k.c2 = -q * sb;
    k.c3 = qq * qq / (b * c) - k.c1 * k.c1;
    k.c4 = q * qq / b * sc - k.c1 * k.c2;
    k.c5 = (q + q.inv()) * qq * qq * c;
    const F core = (one - b) * (one - c) - b * c * sbc - b * c * (one + q.inv()) * k.c1;
    k.c6 = qq * q_number(3, q) / b * core - c * sq2 / q * k.c1;
    k.c7 = -qq * qq * c * k.c1 * k.c1 - q_number(4, q) / b * core * k.c1 -
           q * q * sigma(-b * q, p) * sigma(-b / q, p) + qq * qq * q * (one + c / b) * sbc -
           ((b * c).inv() + one) * q * qq * qq * (one + c / b) - sq2 / b;

    k.d1 = k.c3;
    k.d2 = qq / c;
    k.d3 = q * sc * k.c1 + q * k.d2 * sb;

    k.e1 = -qq / b;
    k.e2 = k.c2;
    k.e3 = b * qq * qq;
    k.e4 = qq * qq * qq - k.c1 * q * ((b - one) * (c - one) - b * c * sbc);
    k.e5 = b * c * qq * k.d3;
    k.e6 = q_number(3, q) / q * k.e1;
    k.e7 = k.c2;
    k.e8 = k.e4 + qq * qq * qq * (one - q) * (one - q) / q;
    k.e9 = k.c7 + c * sq2 / q * k.c3;
    const F second = variant == E10Variant::bc ? one - c : one - b;
    k.e10 = q * q / b * (qq * sc + k.c1 * b * sb) *
                (b * c * sbc - (one - b) * second + b * c * k.c1 * (one + q.inv())) +
            sq2 * c / q * k.d3;

#ifdef QWILSON_FAULT_INJECT
    // Deliberately broken build used to prove that the checkers can fail:
    // shifting one structure constant must surface as nonzero residuals.
    k.c2 = k.c2 + one;
#endif
    return k;
}

template <ExactField F>
struct MetaConstants {
    // f3 is part of the constant family but appears in none of the closed
    // relations below; it is retained so the family stays complete.
    F f1, f2, f3, f4, f5, f6, f7;
};

template <ExactField F>
MetaConstants<F> meta_constants(const F& q, const F& a, const F& b, const F& d, const F& e) {
    const F one(1);
    MetaConstants<F> k;
    k.f1 = -d * e;
    k.f2 = -q / a;
    k.f3 = one + b * q - a * (one + q);
    k.f4 = (one + q) * a;
    k.f5 = a * d * e * (one + q) - q * (b * e * d + e + d + one);
    k.f6 = b / a * (one + q);
    k.f7 = q * b * (one + q) / (a * a) - q / a * (b * e * d + e * b + b * d + one);
    return k;
}

template <ExactField F>
MetaConstants<F> meta_constants(const Params<F>& p) {
    return meta_constants(p.q, p.a, p.b, p.d, p.e);
}

// ---------------------------------------------------------------------------
// Wilson rational algebra relations
// ---------------------------------------------------------------------------

// plain: (X + rho Z, Z, V); barred: (Xbar + rho Zbar, Zbar, V), with
// rho = -(1 + q c) in both cases.  Both triplets satisfy the same relations
// with the same constants; the only structural difference is the weight
// attachment in the VZ relation (see below).
enum class TripletKind { plain, barred };

enum class WilsonRelation { XZ_1, XZ_2, VZ, XV_1, XV_2 };

inline constexpr std::array<WilsonRelation, 5> all_wilson_relations = {
    WilsonRelation::XZ_1, WilsonRelation::XZ_2, WilsonRelation::VZ, WilsonRelation::XV_1,
    WilsonRelation::XV_2};

inline const char* wilson_relation_name(WilsonRelation r) {
    switch (r) {
        case WilsonRelation::XZ_1: return "XZ_1";
        case WilsonRelation::XZ_2: return "XZ_2";
        case WilsonRelation::VZ: return "VZ";
        case WilsonRelation::XV_1: return "XV_1";
        case WilsonRelation::XV_2: return "XV_2";
    }
    throw InvalidInput("unknown relation");
}

inline WilsonRelation wilson_relation_from_string(const std::string& s) {
    for (WilsonRelation r : all_wilson_relations)
        if (s == wilson_relation_name(r)) return r;
    throw InvalidInput("unknown relation name: " + s);
}

namespace detail {

template <ExactField F>
struct Triplet {
    BandMatrix<F> X;  // shifted: X + rho Z
    BandMatrix<F> Z;
    BandMatrix<F> V;  // shifted diagonal
};

template <ExactField F>
Triplet<F> build_triplet(TripletKind t, const Params<F>& p, long size) {
    const F rho = -(F(1) + p.q * p.c);
    if (t == TripletKind::plain)
        return Triplet<F>{mat_X(p, p.b, p.c, size, rho), mat_Z(p, p.b, size),
                          mat_V(p.q, p.b, size, VKind::shifted)};
    return Triplet<F>{mat_Xbar(p, p.b, p.c, size, rho), mat_Zbar(p, p.b, p.c, size),
                      mat_V(p.q, p.b, size, VKind::shifted)};
}

// Residual of one relation for a prebuilt triplet and constant set.
template <ExactField F>
BandMatrix<F> triplet_relation_residual(WilsonRelation r, TripletKind t, const Triplet<F>& g,
                                        const WilsonConstants<F>& k, const Params<F>& p) {
    const F& q = p.q;
    const BandMatrix<F>& X = g.X;
    const BandMatrix<F>& Z = g.Z;
    const BandMatrix<F>& V = g.V;
    switch (r) {
        case WilsonRelation::XZ_1:
            return q_comm(Z, q_comm(X, Z, q), q) -
                   (k.c1 * anti_comm(X, Z) + k.c2 * band_mul(Z, Z) + k.c3 * X + k.c4 * Z);
        case WilsonRelation::XZ_2:
            return q_comm(X, q_comm(Z, X, q), q) -
                   (k.c1 * band_mul(X, X) + k.c2 * anti_comm(X, Z) + k.c4 * X +
                    k.c5 * band_mul(band_mul(Z, Z), Z) + k.c6 * band_mul(Z, Z) + k.c7 * Z);
        case WilsonRelation::VZ: {
            // The two q-commutators carry the weights q/a and a/(bc).  For the
            // barred triplet the weights attach as written here; for the plain
            // triplet the relation closes only with the two weights exchanged.
            const F w_vz = t == TripletKind::barred ? p.a / (p.b * p.c) : q / p.a;
            const F w_zv = t == TripletKind::barred ? q / p.a : p.a / (p.b * p.c);
            return w_vz * q_comm(V, Z, q) + w_zv * q_comm(Z, V, q) -
                   (k.d1 * V + k.d2 * X + k.d3 * BandMatrix<F>::identity(X.size()));
        }
        case WilsonRelation::XV_1:
            return q_comm(V, q_comm(X, V, q), q) -
                   (k.e1 * band_mul(band_mul(V, V), V) + k.e2 * band_mul(V, V) + k.e3 * X +
                    k.e4 * V + k.e5 * BandMatrix<F>::identity(X.size()));
        case WilsonRelation::XV_2:
            return q_comm(X, q_comm(V, X, q), q) -
                   (k.e6 * band_mul(band_mul(V, X), V) + k.e7 * anti_comm(V, X) + k.e8 * X +
                    k.e9 * V + k.e10 * BandMatrix<F>::identity(X.size()));
    }
    throw InvalidInput("unknown relation");
}

}  // namespace detail

template <ExactField F>
BandMatrix<F> wilson_relation_residual(WilsonRelation r, TripletKind t, const Params<F>& p,
                                       long size, E10Variant variant = E10Variant::bc) {
    const auto g = detail::build_triplet(t, p, size);
    const auto k = wilson_constants(p, variant);
    return detail::triplet_relation_residual(r, t, g, k, p);
}

// ---------------------------------------------------------------------------
// Operator form of the generalized eigenvalue problems
// ---------------------------------------------------------------------------

// Residual of (X^T - lambda(q^x; c) Z^T) w where w_n = W_n(x) (plain) or
// Wbar_n(x) (barred), with the unshifted X.  In closure mode (f = q^{N+1},
// size = N+1) the couplings beyond the last row vanish and the residual is
// exactly zero in every entry.
template <ExactField F>
std::vector<F> gevp_operator_residual(const Params<F>& p, long size, long x, TripletKind t) {
    const F rho(0);
    const BandMatrix<F> X = t == TripletKind::plain ? mat_X(p, p.b, p.c, size, rho)
                                                    : mat_Xbar(p, p.b, p.c, size, rho);
    const BandMatrix<F> Z =
        t == TripletKind::plain ? mat_Z(p, p.b, size) : mat_Zbar(p, p.b, p.c, size);
    std::vector<F> w;
    w.reserve(static_cast<std::size_t>(size));
    for (long n = 0; n < size; ++n)
        w.push_back(t == TripletKind::plain ? eval_W(p, n, x) : eval_Wbar(p, n, x));
    const F lam = lambda_(qw_pow(p.q, x), p.c, p.q);
    const std::vector<F> xw = band_apply(X.transpose(), w);
    const std::vector<F> zw = band_apply(Z.transpose(), w);
    std::vector<F> r;
    r.reserve(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) r.push_back(xw[i] - lam * zw[i]);
    return r;
}

// ---------------------------------------------------------------------------
// Leading parts over Q(t)
// ---------------------------------------------------------------------------

struct LeadingPart {
    long power;                  // overall degree p at t -> infinity
    BandMatrix<Rational> coeff;  // entrywise limit of M(t) / t^p
};

inline std::optional<long> degree_at_infinity(const BandMatrix<RatFun>& m) {
    std::optional<long> best;
    for (long i = 0; i < m.size(); ++i)
        for (long j = m.col_begin(i); j < m.col_end(i); ++j)
            if (!m.at(i, j).is_zero()) {
                const long p = m.at(i, j).leading_at_infinity().power;
                if (!best || p > *best) best = p;
            }
    return best;
}

inline LeadingPart leading_matrix(const BandMatrix<RatFun>& m) {
    const auto p = degree_at_infinity(m);
    if (!p) throw ZeroMatrix();
    BandMatrix<Rational> m0(m.size(), m.lower(), m.upper());
    for (long i = 0; i < m.size(); ++i)
        for (long j = m.col_begin(i); j < m.col_end(i); ++j) {
            const RatFun& v = m.at(i, j);
            if (v.is_zero()) continue;
            const auto l = v.leading_at_infinity();
            if (l.power == *p) m0.set(i, j, l.coeff);
        }
    return LeadingPart{*p, std::move(m0)};
}

// ---------------------------------------------------------------------------
// Meta q-Racah structure
// ---------------------------------------------------------------------------

// Leading-order generators on the curve c = t (with f = 1/(b t d e) and the
// diagonal shift rho = -(1 + q t)).  For the plain triplet the closed
// relations hold for the transposed leading parts; for the barred triplet the
// same relations hold untransposed — the two orientations are what
// distinguishes the triplets at leading order.  In both cases the leading
// part of the shifted X carries an extra factor 1/q and Z is used as is.
enum class MetaTriplet { plain, barred };

struct MetaGenerators {
    BandMatrix<Rational> X;
    BandMatrix<Rational> Z;
    BandMatrix<Rational> V;
    long x_power;  // degree stripped from X(t)
    long z_power;  // degree stripped from Z(t)
};

inline MetaGenerators meta_generators(const Rational& q, const Rational& a, const Rational& b,
                                      const Rational& d, const Rational& e, long size,
                                      MetaTriplet which, bool transpose) {
    const RatFun t = RatFun::t();
    const auto pc =
        Params<RatFun>::with_dependent_f(RatFun(q), RatFun(a), RatFun(b), t, RatFun(d), RatFun(e));
    const RatFun rho = -(RatFun(1) + RatFun(q) * t);
    const BandMatrix<RatFun> xt = which == MetaTriplet::plain
                                      ? mat_X(pc, pc.b, pc.c, size, rho)
                                      : mat_Xbar(pc, pc.b, pc.c, size, rho);
    const BandMatrix<RatFun> zt =
        which == MetaTriplet::plain ? mat_Z(pc, pc.b, size) : mat_Zbar(pc, pc.b, pc.c, size);
    const LeadingPart lx = leading_matrix(xt);
    const LeadingPart lz = leading_matrix(zt);
    BandMatrix<Rational> x0 = transpose ? lx.coeff.transpose() : lx.coeff;
    BandMatrix<Rational> z0 = transpose ? lz.coeff.transpose() : lz.coeff;
    return MetaGenerators{x0.scaled(q.inv()), std::move(z0),
                          mat_V(q, b, size, VKind::shifted), lx.power, lz.power};
}

inline MetaGenerators meta_generators(const Rational& q, const Rational& a, const Rational& b,
                                      const Rational& d, const Rational& e, long size,
                                      MetaTriplet which) {
    return meta_generators(q, a, b, d, e, size, which, which == MetaTriplet::plain);
}

enum class MetaRelation { XZ, ZV, VX };

inline constexpr std::array<MetaRelation, 3> all_meta_relations = {
    MetaRelation::XZ, MetaRelation::ZV, MetaRelation::VX};

inline const char* meta_relation_name(MetaRelation r, MetaTriplet t) {
    switch (r) {
        case MetaRelation::XZ: return t == MetaTriplet::plain ? "META_1" : "META_BAR_1";
        case MetaRelation::ZV: return t == MetaTriplet::plain ? "META_2" : "META_BAR_2";
        case MetaRelation::VX: return t == MetaTriplet::plain ? "META_3" : "META_BAR_3";
    }
    throw InvalidInput("unknown relation");
}

inline BandMatrix<Rational> meta_relation_residual(MetaRelation r, const MetaGenerators& g,
                                                   const MetaConstants<Rational>& k,
                                                   const Rational& q) {
    const auto eye = BandMatrix<Rational>::identity(g.X.size());
    switch (r) {
        case MetaRelation::XZ: return q_comm(g.X, g.Z, q) - (k.f1 * g.Z + k.f2 * g.X);
        case MetaRelation::ZV:
            return q_comm(g.Z, g.V, q) - (k.f2 * g.V + k.f4 * g.X + k.f5 * eye);
        case MetaRelation::VX:
            return q_comm(g.V, g.X, q) - (k.f1 * g.V + k.f6 * g.Z + k.f7 * eye);
    }
    throw InvalidInput("unknown relation");
}

// ---------------------------------------------------------------------------
// Vanishing profile along the curve e = t, f = 1/(b c d t)
// ---------------------------------------------------------------------------

struct SlotDegree {
    const char* constant;
    long degree;      // degree at infinity of (constant x generator word)
    bool subleading;  // strictly below the maximal degree of its relation
};

struct RelationDegreeTable {
    WilsonRelation relation;
    long lhs_degree;
    long max_degree;  // over the bracket side and every constant slot
    std::vector<SlotDegree> slots;
};

struct ConstantVerdict {
    const char* constant;
    long curve_degree;  // degree at infinity of the bare constant on the curve
    bool vanishes;      // subleading in every relation in which it appears
};

struct VanishingProfile {
    std::vector<RelationDegreeTable> relations;
    std::vector<ConstantVerdict> constants;
    std::vector<std::string> vanishing;  // computed: names with vanishes = true
    // The tabulated vanishing set this suite is asked to confirm, plus the one
    // extra name that tabulation lists ("c10") which does not correspond to
    // any constant of the family.  The computed profile is reported verbatim
    // and compared against the tabulation; see the acceptance report for the
    // discrepancy analysis.
    std::vector<std::string> stated;
    std::string unresolved_entry;
    bool matches_stated;
};

inline VanishingProfile vanishing_profile(const Rational& q, const Rational& a, const Rational& b,
                                          const Rational& c, const Rational& d, long size = 6) {
    const RatFun t = RatFun::t();
    const auto pc =
        Params<RatFun>::with_dependent_f(RatFun(q), RatFun(a), RatFun(b), RatFun(c), RatFun(d), t);
    const auto k = wilson_constants(pc);
    const RatFun qt(q);
    const RatFun rho = -(RatFun(1) + qt * RatFun(c));
    const BandMatrix<RatFun> X = mat_X(pc, pc.b, pc.c, size, rho);
    const BandMatrix<RatFun> Z = mat_Z(pc, pc.b, size);
    const BandMatrix<RatFun> V = mat_V(qt, pc.b, size, VKind::shifted);
    const BandMatrix<RatFun> eye = BandMatrix<RatFun>::identity(size);

    const auto deg = [](const BandMatrix<RatFun>& m) {
        const auto p = degree_at_infinity(m);
        // A vanished word cannot dominate; report it as very subleading.
        return p ? *p : std::numeric_limits<long>::min();
    };

    using Term = std::pair<const char*, BandMatrix<RatFun>>;
    struct Rel {
        WilsonRelation relation;
        BandMatrix<RatFun> lhs;
        std::vector<Term> terms;
    };

    const BandMatrix<RatFun> zz = band_mul(Z, Z);
    const BandMatrix<RatFun> vv = band_mul(V, V);
    std::vector<Rel> rels;
    {
        std::vector<Term> terms;
        terms.emplace_back("c1", k.c1 * anti_comm(X, Z));
        terms.emplace_back("c2", k.c2 * zz);
        terms.emplace_back("c3", k.c3 * X);
        terms.emplace_back("c4", k.c4 * Z);
        rels.push_back(Rel{WilsonRelation::XZ_1, q_comm(Z, q_comm(X, Z, qt), qt),
                           std::move(terms)});
    }
    {
        std::vector<Term> terms;
        terms.emplace_back("c1", k.c1 * band_mul(X, X));
        terms.emplace_back("c2", k.c2 * anti_comm(X, Z));
        terms.emplace_back("c4", k.c4 * X);
        terms.emplace_back("c5", k.c5 * band_mul(zz, Z));
        terms.emplace_back("c6", k.c6 * zz);
        terms.emplace_back("c7", k.c7 * Z);
        rels.push_back(Rel{WilsonRelation::XZ_2, q_comm(X, q_comm(Z, X, qt), qt),
                           std::move(terms)});
    }
    {
        std::vector<Term> terms;
        terms.emplace_back("d1", k.d1 * V);
        terms.emplace_back("d2", k.d2 * X);
        terms.emplace_back("d3", k.d3 * eye);
        rels.push_back(Rel{WilsonRelation::VZ,
                           (qt / pc.a) * q_comm(V, Z, qt) +
                               (pc.a / (pc.b * pc.c)) * q_comm(Z, V, qt),
                           std::move(terms)});
    }
    {
        std::vector<Term> terms;
        terms.emplace_back("e1", k.e1 * band_mul(vv, V));
        terms.emplace_back("e2", k.e2 * vv);
        terms.emplace_back("e3", k.e3 * X);
        terms.emplace_back("e4", k.e4 * V);
        terms.emplace_back("e5", k.e5 * eye);
        rels.push_back(Rel{WilsonRelation::XV_1, q_comm(V, q_comm(X, V, qt), qt),
                           std::move(terms)});
    }
    {
        std::vector<Term> terms;
        terms.emplace_back("e6", k.e6 * band_mul(band_mul(V, X), V));
        terms.emplace_back("e7", k.e7 * anti_comm(V, X));
        terms.emplace_back("e8", k.e8 * X);
        terms.emplace_back("e9", k.e9 * V);
        terms.emplace_back("e10", k.e10 * eye);
        rels.push_back(Rel{WilsonRelation::XV_2, q_comm(X, q_comm(V, X, qt), qt),
                           std::move(terms)});
    }

    VanishingProfile out;
    const std::vector<std::pair<const char*, const RatFun*>> named = {
        {"c1", &k.c1}, {"c2", &k.c2}, {"c3", &k.c3}, {"c4", &k.c4}, {"c5", &k.c5},
        {"c6", &k.c6}, {"c7", &k.c7}, {"d1", &k.d1}, {"d2", &k.d2}, {"d3", &k.d3},
        {"e1", &k.e1}, {"e2", &k.e2}, {"e3", &k.e3}, {"e4", &k.e4}, {"e5", &k.e5},
        {"e6", &k.e6}, {"e7", &k.e7}, {"e8", &k.e8}, {"e9", &k.e9}, {"e10", &k.e10}};

    std::vector<std::pair<std::string, bool>> verdicts;  // name -> vanishes so far
    for (const Rel& rel : rels) {
        RelationDegreeTable table;
        table.relation = rel.relation;
        table.lhs_degree = deg(rel.lhs);
        long dmax = table.lhs_degree;
        std::vector<long> degrees;
        degrees.reserve(rel.terms.size());
        for (const Term& term : rel.terms) {
            degrees.push_back(deg(term.second));
            dmax = std::max(dmax, degrees.back());
        }
        table.max_degree = dmax;
        for (std::size_t i = 0; i < rel.terms.size(); ++i) {
            const bool sub = degrees[i] < dmax;
            table.slots.push_back(SlotDegree{rel.terms[i].first, degrees[i], sub});
            bool found = false;
            for (auto& v : verdicts)
                if (v.first == rel.terms[i].first) {
                    v.second = v.second && sub;
                    found = true;
                }
            if (!found) verdicts.emplace_back(rel.terms[i].first, sub);
        }
        out.relations.push_back(std::move(table));
    }

    for (const auto& [name, value] : named) {
        bool vanishes = false;
        for (const auto& v : verdicts)
            if (v.first == name) vanishes = v.second;
        const long cd = value->is_zero() ? std::numeric_limits<long>::min()
                                         : value->leading_at_infinity().power;
        out.constants.push_back(ConstantVerdict{name, cd, vanishes});
        if (vanishes) out.vanishing.emplace_back(name);
    }

    out.stated = {"c2", "c4", "c5", "d2", "e1", "e7"};
    out.unresolved_entry = "c10";
    auto sorted = [](std::vector<std::string> v) {
        std::sort(v.begin(), v.end());
        return v;
    };
    out.matches_stated = sorted(out.vanishing) == sorted(out.stated);
    return out;
}

// ---------------------------------------------------------------------------
// Degree profile along the curve a = t
// ---------------------------------------------------------------------------

// As a is sent to infinity the off-diagonal entries of Z are suppressed by
// exactly one power relative to its diagonal, while all entries of X stay at
// one common degree; and W degenerates to the terminating limit family R from
// both directions (a = t and a = 1/t), the gap having strictly negative
// degree in t.
struct ScalingProfile {
    long z_diag_min, z_diag_max;
    long z_off_min, z_off_max;
    long x_min, x_max;
    std::optional<long> gap_up_degree;    // degree of W(a = t) - R, absent if zero
    std::optional<long> gap_down_degree;  // degree of W(a = 1/t) - R, absent if zero
};

inline ScalingProfile a_scaling_profile(const Rational& q, const Rational& b, const Rational& c,
                                        const Rational& d, const Rational& e, long size, long n,
                                        long x) {
    const RatFun t = RatFun::t();
    const auto up =
        Params<RatFun>::with_dependent_f(RatFun(q), t, RatFun(b), RatFun(c), RatFun(d), RatFun(e));
    const auto down = Params<RatFun>::with_dependent_f(RatFun(q), t.inv(), RatFun(b), RatFun(c),
                                                       RatFun(d), RatFun(e));
    const BandMatrix<RatFun> Z = mat_Z(up, up.b, size);
    const BandMatrix<RatFun> X = mat_X(up, up.b, up.c, size, RatFun(0));

    ScalingProfile out{};
    bool first_diag = true, first_off = true, first_x = true;
    const auto fold = [](bool& first, long& lo, long& hi, long v) {
        if (first) {
            lo = hi = v;
            first = false;
        } else {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    };
    for (long i = 0; i < size; ++i)
        for (long j = Z.col_begin(i); j < Z.col_end(i); ++j) {
            if (!Z.at(i, j).is_zero()) {
                const long p = Z.at(i, j).leading_at_infinity().power;
                if (i == j)
                    fold(first_diag, out.z_diag_min, out.z_diag_max, p);
                else
                    fold(first_off, out.z_off_min, out.z_off_max, p);
            }
            if (!X.at(i, j).is_zero())
                fold(first_x, out.x_min, out.x_max, X.at(i, j).leading_at_infinity().power);
        }
    if (first_diag || first_off || first_x)
        throw ZeroMatrix("degree profile needs nonzero diagonal and off-diagonal entries");

    const RatFun gap_up = eval_W(up, n, x) - eval_R(up, n, x);
    const RatFun gap_down = eval_W(down, n, x) - eval_R(down, n, x);
    if (!gap_up.is_zero()) out.gap_up_degree = gap_up.leading_at_infinity().power;
    if (!gap_down.is_zero()) out.gap_down_degree = gap_down.leading_at_infinity().power;
    return out;
}

}  // namespace qwilson

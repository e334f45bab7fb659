#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace qwilson {

// Univariate polynomial over Rational in the formal variable t.
// Coefficients are stored lowest degree first; the representation of zero is
// the empty vector and a nonzero polynomial always has a nonzero leading
// coefficient.
class Poly {
public:
    Poly() = default;
    Poly(long n) { if (n != 0) c_.emplace_back(n); }
    Poly(const Rational& constant) {
        if (!constant.is_zero()) c_.push_back(constant);
    }
    Poly(std::initializer_list<Rational> low_to_high) : c_(low_to_high) { trim(); }
    explicit Poly(std::vector<Rational> low_to_high) : c_(std::move(low_to_high)) { trim(); }

    static Poly t() { return monomial(1, Rational(1)); }
    static Poly monomial(long degree, const Rational& coeff) {
        Poly p;
        if (coeff.is_zero()) return p;
        p.c_.assign(static_cast<std::size_t>(degree) + 1, Rational(0));
        p.c_.back() = coeff;
        return p;
    }

    bool is_zero() const { return c_.empty(); }
    // Degree of the zero polynomial is -1 by convention.
    long degree() const { return static_cast<long>(c_.size()) - 1; }

    Rational coeff(long i) const {
        if (i < 0 || i >= static_cast<long>(c_.size())) return Rational(0);
        return c_[static_cast<std::size_t>(i)];
    }
    Rational leading() const { return is_zero() ? Rational(0) : c_.back(); }

    Rational eval(const Rational& t0) const {
        Rational acc(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t0 + *it;
        return acc;
    }

    Poly operator-() const {
        Poly r(*this);
        for (auto& x : r.c_) x = -x;
        return r;
    }

    friend Poly operator+(const Poly& p, const Poly& q) {
        Poly r;
        r.c_.resize(std::max(p.c_.size(), q.c_.size()), Rational(0));
        for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = p.coeff(static_cast<long>(i)) + q.coeff(static_cast<long>(i));
        r.trim();
        return r;
    }
    friend Poly operator-(const Poly& p, const Poly& q) { return p + (-q); }
    friend Poly operator*(const Poly& p, const Poly& q) {
        if (p.is_zero() || q.is_zero()) return Poly();
        Poly r;
        r.c_.assign(p.c_.size() + q.c_.size() - 1, Rational(0));
        for (std::size_t i = 0; i < p.c_.size(); ++i) {
            if (p.c_[i].is_zero()) continue;
            for (std::size_t j = 0; j < q.c_.size(); ++j) r.c_[i + j] += p.c_[i] * q.c_[j];
        }
        r.trim();
        return r;
    }
    friend Poly operator*(const Rational& s, const Poly& p) {
        if (s.is_zero()) return Poly();
        Poly r(p);
        for (auto& x : r.c_) x *= s;
        return r;
    }

    friend bool operator==(const Poly& p, const Poly& q) { return p.c_ == q.c_; }
    friend bool operator!=(const Poly& p, const Poly& q) { return !(p == q); }

    Poly monic() const {
        if (is_zero()) return Poly();
        return leading().inv() * *this;
    }

    std::string str(const std::string& var = "t") const {
        if (is_zero()) return "0";
        std::string out;
        for (long i = degree(); i >= 0; --i) {
            const Rational ci = coeff(i);
            if (ci.is_zero()) continue;
            const Rational mag = ci.abs();
            if (out.empty()) {
                if (ci.sign() < 0) out += "-";
            } else {
                out += ci.sign() < 0 ? " - " : " + ";
            }
            const bool unit = mag == Rational(1);
            if (i == 0) {
                out += mag.str();
            } else {
                if (!unit) out += mag.str() + "*";
                out += var;
                if (i > 1) out += "^" + std::to_string(i);
            }
        }
        return out;
    }

private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }
    std::vector<Rational> c_;
};

// Euclidean division: p = quot * d + rem with deg(rem) < deg(d).
struct PolyDivMod {
    Poly quot, rem;
};

inline PolyDivMod poly_divmod(const Poly& p, const Poly& d) {
    if (d.is_zero()) throw DivisionByZero("polynomial division by zero");
    PolyDivMod out;
    out.rem = p;
    if (p.degree() < d.degree()) return out;
    std::vector<Rational> q(static_cast<std::size_t>(p.degree() - d.degree()) + 1, Rational(0));
    Poly rem = p;
    const Rational dl = d.leading();
    while (!rem.is_zero() && rem.degree() >= d.degree()) {
        const long shift = rem.degree() - d.degree();
        const Rational factor = rem.leading() / dl;
        q[static_cast<std::size_t>(shift)] = factor;
        rem = rem - Poly::monomial(shift, factor) * d;
    }
    out.quot = Poly(std::move(q));
    out.rem = rem;
    return out;
}

// Monic greatest common divisor via the Euclidean algorithm.
inline Poly poly_gcd(const Poly& p, const Poly& q) {
    if (p.is_zero() && q.is_zero()) throw InvalidInput("gcd of two zero polynomials");
    Poly a = p, b = q;
    while (!b.is_zero()) {
        Poly r = poly_divmod(a, b).rem;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

inline std::ostream& operator<<(std::ostream& os, const Poly& p) { return os << p.str(); }

}  // namespace qwilson

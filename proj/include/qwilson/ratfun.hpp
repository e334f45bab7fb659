#pragma once

#include <ostream>
#include <string>
#include <utility>

#include "errors.hpp"
#include "poly.hpp"
#include "rational.hpp"

namespace qwilson {

// Rational function in Q(t), always kept in canonical form: gcd(num, den) = 1
// and den monic (zero is 0/1).  Normalizing after every operation keeps the
// degrees small when length-3 matrix words are formed over Q(t).
class RatFun {
public:
    RatFun() : num_(), den_(Poly(1)) {}
    RatFun(long n) : num_(Poly(n)), den_(Poly(1)) {}
    RatFun(const Rational& constant) : num_(Poly(constant)), den_(Poly(1)) {}
    explicit RatFun(Poly num) : num_(std::move(num)), den_(Poly(1)) {}
    RatFun(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
        if (den_.is_zero()) throw DivisionByZero("rational function with zero denominator");
        normalize();
    }

    static RatFun t() { return RatFun(Poly::t()); }

    bool is_zero() const { return num_.is_zero(); }
    bool is_constant() const { return num_.degree() <= 0 && den_.degree() == 0; }

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }

    RatFun operator-() const { return RatFun(already_normal{}, -num_, den_); }

    friend RatFun operator+(const RatFun& f, const RatFun& g) {
        return RatFun(f.num_ * g.den_ + g.num_ * f.den_, f.den_ * g.den_);
    }
    friend RatFun operator-(const RatFun& f, const RatFun& g) {
        return RatFun(f.num_ * g.den_ - g.num_ * f.den_, f.den_ * g.den_);
    }
    friend RatFun operator*(const RatFun& f, const RatFun& g) {
        return RatFun(f.num_ * g.num_, f.den_ * g.den_);
    }
    friend RatFun operator/(const RatFun& f, const RatFun& g) {
        if (g.is_zero()) throw DivisionByZero("division by the zero function");
        return RatFun(f.num_ * g.den_, f.den_ * g.num_);
    }

    RatFun& operator+=(const RatFun& g) { return *this = *this + g; }
    RatFun& operator-=(const RatFun& g) { return *this = *this - g; }
    RatFun& operator*=(const RatFun& g) { return *this = *this * g; }
    RatFun& operator/=(const RatFun& g) { return *this = *this / g; }

    friend bool operator==(const RatFun& f, const RatFun& g) {
        return f.num_ == g.num_ && f.den_ == g.den_;  // canonical forms compare directly
    }
    friend bool operator!=(const RatFun& f, const RatFun& g) { return !(f == g); }

    RatFun inv() const {
        if (is_zero()) throw DivisionByZero("inverse of the zero function");
        return RatFun(den_, num_);
    }

    // Behaviour as t -> infinity: f(t) ~ coeff * t^power with coeff != 0.
    struct Leading {
        long power;
        Rational coeff;
    };
    Leading leading_at_infinity() const {
        if (is_zero()) throw ZeroFunction();
        return Leading{num_.degree() - den_.degree(), num_.leading() / den_.leading()};
    }

    Rational eval(const Rational& t0) const {
        const Rational d = den_.eval(t0);
        if (d.is_zero()) throw PoleAtPoint("pole at t = " + t0.str());
        return num_.eval(t0) / d;
    }

    std::string str(const std::string& var = "t") const {
        if (den_ == Poly(1)) return num_.str(var);
        return "(" + num_.str(var) + ")/(" + den_.str(var) + ")";
    }

private:
    struct already_normal {};
    RatFun(already_normal, Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {}

    void normalize() {
        if (num_.is_zero()) {
            den_ = Poly(1);
            return;
        }
        const Poly g = poly_gcd(num_, den_);
        if (g.degree() > 0) {
            num_ = poly_divmod(num_, g).quot;
            den_ = poly_divmod(den_, g).quot;
        }
        const Rational lead = den_.leading();
        if (lead != Rational(1)) {
            const Rational s = lead.inv();
            num_ = s * num_;
            den_ = s * den_;
        }
    }

    Poly num_, den_;
};

inline std::ostream& operator<<(std::ostream& os, const RatFun& f) { return os << f.str(); }

}  // namespace qwilson

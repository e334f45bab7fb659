#pragma once

#include <gmpxx.h>

#include <ostream>
#include <string>
#include <utility>

#include "errors.hpp"

namespace qwilson {

// Arbitrary-precision exact rational number.  Thin wrapper around GMP's
// mpq_class that enforces the canonical form (denominator > 0, gcd removed,
// zero is 0/1), turns division by zero into an exception instead of a trap,
// and fixes the textual format to "p" / "p/q" in base 10.
class Rational {
public:
    Rational() : v_(0) {}
    Rational(long n) : v_(static_cast<signed long>(n)) {}
    Rational(long num, long den) {
        if (den == 0) throw DivisionByZero("rational with zero denominator");
        v_ = mpq_class(num, den);
        v_.canonicalize();
    }
    explicit Rational(mpq_class v) : v_(std::move(v)) {
        if (sgn(v_.get_den()) == 0) throw DivisionByZero("rational with zero denominator");
        v_.canonicalize();
    }

    // Accepts "p" or "p/q" (optional sign, base 10).
    static Rational parse(const std::string& text) {
        if (text.empty()) throw InvalidInput("empty rational literal");
        mpq_class v;
        if (v.set_str(text, 10) != 0)
            throw InvalidInput("malformed rational literal: '" + text + "'");
        if (sgn(v.get_den()) == 0) throw DivisionByZero("rational literal '" + text + "'");
        v.canonicalize();
        return Rational(raw_tag{}, std::move(v));
    }

    bool is_zero() const { return sgn(v_) == 0; }
    int sign() const { return sgn(v_); }

    Rational operator-() const { return Rational(raw_tag{}, mpq_class(-v_)); }

    friend Rational operator+(const Rational& x, const Rational& y) {
        return Rational(raw_tag{}, mpq_class(x.v_ + y.v_));
    }
    friend Rational operator-(const Rational& x, const Rational& y) {
        return Rational(raw_tag{}, mpq_class(x.v_ - y.v_));
    }
    friend Rational operator*(const Rational& x, const Rational& y) {
        return Rational(raw_tag{}, mpq_class(x.v_ * y.v_));
    }
    friend Rational operator/(const Rational& x, const Rational& y) {
        if (y.is_zero()) throw DivisionByZero();
        return Rational(raw_tag{}, mpq_class(x.v_ / y.v_));
    }

    Rational& operator+=(const Rational& y) { v_ += y.v_; return *this; }
    Rational& operator-=(const Rational& y) { v_ -= y.v_; return *this; }
    Rational& operator*=(const Rational& y) { v_ *= y.v_; return *this; }
    Rational& operator/=(const Rational& y) {
        if (y.is_zero()) throw DivisionByZero();
        v_ /= y.v_;
        return *this;
    }

    friend bool operator==(const Rational& x, const Rational& y) { return x.v_ == y.v_; }
    friend bool operator!=(const Rational& x, const Rational& y) { return x.v_ != y.v_; }
    friend bool operator<(const Rational& x, const Rational& y) { return x.v_ < y.v_; }
    friend bool operator<=(const Rational& x, const Rational& y) { return x.v_ <= y.v_; }
    friend bool operator>(const Rational& x, const Rational& y) { return x.v_ > y.v_; }
    friend bool operator>=(const Rational& x, const Rational& y) { return x.v_ >= y.v_; }

    Rational inv() const {
        if (is_zero()) throw DivisionByZero("inverse of zero");
        return Rational(raw_tag{}, mpq_class(1 / v_));
    }
    Rational abs() const { return Rational(raw_tag{}, mpq_class(::abs(v_))); }

    std::string str() const {
        if (v_.get_den() == 1) return v_.get_num().get_str();
        return v_.get_num().get_str() + "/" + v_.get_den().get_str();
    }
    // Decimal approximation, used only for human-readable failure witnesses.
    double approx() const { return v_.get_d(); }

    const mpq_class& raw() const { return v_; }

private:
    struct raw_tag {};
    Rational(raw_tag, mpq_class v) : v_(std::move(v)) {}  // already canonical
    mpq_class v_;
};

inline std::ostream& operator<<(std::ostream& os, const Rational& x) { return os << x.str(); }

}  // namespace qwilson

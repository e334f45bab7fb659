#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <qwilson/field.hpp>
#include <qwilson/poly.hpp>
#include <qwilson/ratfun.hpp>
#include <qwilson/rational.hpp>

#include <random>

using namespace qwilson;

namespace {

Rational rat(long n, long d = 1) { return Rational(n, d); }

// Small-height random rationals for the algebraic property checks.
struct RatGen {
    std::mt19937_64 rng;
    explicit RatGen(unsigned long seed) : rng(seed) {}
    Rational next() {
        std::uniform_int_distribution<long> num(-20, 20);
        std::uniform_int_distribution<long> den(1, 20);
        return Rational(num(rng), den(rng));
    }
    Rational next_nonzero() {
        for (;;) {
            Rational r = next();
            if (!r.is_zero()) return r;
        }
    }
};

}  // namespace

TEST_CASE("rational arithmetic basics") {
    CHECK(rat(1, 2) + rat(1, 3) == rat(5, 6));
    CHECK(rat(1, 2) - rat(1, 2) == rat(0));
    CHECK(rat(2, 3) * rat(3, 2) == rat(1));
    CHECK(rat(7, 4) / rat(7, 4) == rat(1));
    CHECK((-rat(3, 5)).str() == "-3/5");
    CHECK(rat(-6, -4) == rat(3, 2));
    CHECK(rat(4, 2).str() == "2");
}

TEST_CASE("rational division by zero throws") {
    CHECK_THROWS_AS(rat(1) / rat(0), DivisionByZero);
    CHECK_THROWS_AS(rat(0).inv(), DivisionByZero);
    CHECK_THROWS_AS(Rational(1, 0), DivisionByZero);
}

TEST_CASE("rational parse and print round-trip") {
    CHECK(Rational::parse("5/6") == rat(5, 6));
    CHECK(Rational::parse("-12") == rat(-12));
    CHECK(Rational::parse("-3/9") == rat(-1, 3));
    CHECK(Rational::parse("7/1").str() == "7");
    CHECK_THROWS_AS(Rational::parse(""), InvalidInput);
    CHECK_THROWS_AS(Rational::parse("x/y"), InvalidInput);
    CHECK_THROWS_AS(Rational::parse("1/0"), DivisionByZero);
    for (const char* lit : {"0", "-7", "22/7", "-355/113"}) {
        CHECK(Rational::parse(lit).str() == lit);
    }
}

TEST_CASE("rational ordering") {
    CHECK(rat(1, 3) < rat(1, 2));
    CHECK(rat(-1, 2) < rat(0));
    CHECK(rat(5, 7) >= rat(5, 7));
    CHECK(rat(-2).abs() == rat(2));
    CHECK(rat(3, 4).sign() == 1);
    CHECK(rat(-3, 4).sign() == -1);
    CHECK(rat(0).sign() == 0);
}

TEST_CASE("field axioms hold for random rationals") {
    RatGen gen(20240817);
    for (int i = 0; i < 200; ++i) {
        const Rational a = gen.next(), b = gen.next(), c = gen.next();
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a + b == b + a);
        CHECK(a * b == b * a);
        CHECK(a * (b + c) == a * b + a * c);
        const Rational x = gen.next_nonzero();
        CHECK(x * x.inv() == rat(1));
    }
}

TEST_CASE("polynomial arithmetic and evaluation") {
    const Poly p{rat(-1), rat(0), rat(1)};  // t^2 - 1
    const Poly d{rat(-1), rat(1)};          // t - 1
    CHECK(p.degree() == 2);
    CHECK(d.degree() == 1);
    CHECK(Poly().degree() == -1);
    CHECK(p.eval(rat(3)) == rat(8));
    CHECK((p + (-p)).is_zero());
    CHECK(p * Poly(1) == p);

    const auto dm = poly_divmod(p, d);
    CHECK(dm.quot == Poly{rat(1), rat(1)});  // t + 1
    CHECK(dm.rem.is_zero());
    CHECK_THROWS_AS(poly_divmod(p, Poly()), DivisionByZero);
}

TEST_CASE("polynomial gcd") {
    const Poly p{rat(-1), rat(0), rat(1)};  // t^2 - 1
    const Poly d{rat(-1), rat(1)};          // t - 1
    CHECK(poly_gcd(p, d) == d);
    CHECK(poly_gcd(p, Poly(1)) == Poly(1));
    // gcd with zero returns the other argument made monic
    CHECK(poly_gcd(rat(2) * p, Poly()) == p.monic());
    CHECK_THROWS_AS(poly_gcd(Poly(), Poly()), InvalidInput);

    // divides both inputs exactly, on random products
    RatGen gen(7);
    for (int i = 0; i < 20; ++i) {
        const Poly g{gen.next(), gen.next_nonzero()};
        const Poly a = g * Poly{gen.next(), gen.next(), gen.next_nonzero()};
        const Poly b = g * Poly{gen.next(), gen.next_nonzero()};
        const Poly h = poly_gcd(a, b);
        CHECK(poly_divmod(a, h).rem.is_zero());
        CHECK(poly_divmod(b, h).rem.is_zero());
        CHECK(poly_divmod(h, g.monic()).rem.is_zero());  // g | gcd
    }
}

TEST_CASE("polynomial printing") {
    CHECK(Poly{rat(3), rat(0), rat(5)}.str() == "5*t^2 + 3");
    CHECK(Poly{rat(0), rat(-1, 2)}.str() == "-1/2*t");
    CHECK(Poly{rat(1), rat(1)}.str() == "t + 1");
    CHECK(Poly().str() == "0");
}

TEST_CASE("rational function normalization is canonical") {
    const Poly t2m1{rat(-1), rat(0), rat(1)};
    const Poly tm1{rat(-1), rat(1)};
    const RatFun f(t2m1, tm1);
    CHECK(f == RatFun(Poly{rat(1), rat(1)}));  // (t^2-1)/(t-1) = t+1
    // two constructions of the same function compare equal
    const RatFun g(rat(3) * t2m1, rat(3) * tm1);
    CHECK(f == g);
    // denominator is monic after every operation
    const RatFun h = RatFun(Poly{rat(1)}, Poly{rat(0), rat(2)});  // 1/(2t)
    CHECK(h.den() == Poly::t());
    CHECK(h.num() == Poly(rat(1, 2)));
    CHECK_THROWS_AS(RatFun(t2m1, Poly()), DivisionByZero);
}

TEST_CASE("rational function arithmetic") {
    const RatFun t = RatFun::t();
    const RatFun f = RatFun(1) / t;           // 1/t
    const RatFun g = t + RatFun(1);           // t+1
    CHECK(f * t == RatFun(1));
    CHECK((g - g).is_zero());
    CHECK(f + f == RatFun(2) / t);
    CHECK_THROWS_AS(g / RatFun(0), DivisionByZero);
    CHECK(g.inv() * g == RatFun(1));
    // subtraction that cancels the leading term renormalizes
    const RatFun x = (t * t + RatFun(1)) / t - t;  // -> 1/t
    CHECK(x == f);
}

TEST_CASE("leading behaviour at infinity") {
    const RatFun t = RatFun::t();
    const RatFun f = (RatFun(3) * t * t + t) / (t + RatFun(1));
    auto l = f.leading_at_infinity();
    CHECK(l.power == 1);
    CHECK(l.coeff == rat(3));

    l = RatFun(rat(5)).leading_at_infinity();
    CHECK(l.power == 0);
    CHECK(l.coeff == rat(5));

    l = (RatFun(1) / t).leading_at_infinity();
    CHECK(l.power == -1);
    CHECK(l.coeff == rat(1));

    CHECK_THROWS_AS(RatFun(0).leading_at_infinity(), ZeroFunction);
}

TEST_CASE("leading behaviour is multiplicative") {
    const RatFun t = RatFun::t();
    const RatFun f = (t * t - RatFun(1)) / (RatFun(2) * t + RatFun(3));
    const RatFun g = RatFun(rat(7)) / (t * t * t);
    const auto lf = f.leading_at_infinity();
    const auto lg = g.leading_at_infinity();
    const auto lfg = (f * g).leading_at_infinity();
    CHECK(lfg.power == lf.power + lg.power);
    CHECK(lfg.coeff == lf.coeff * lg.coeff);
}

TEST_CASE("rational function evaluation") {
    const Poly t2m1{rat(-1), rat(0), rat(1)};
    const Poly tm1{rat(-1), rat(1)};
    const RatFun f(t2m1, tm1);  // normalizes to t+1, so t0 = 1 is fine
    CHECK(f.eval(rat(2)) == rat(3));
    CHECK(f.eval(rat(1)) == rat(2));

    const RatFun g = RatFun(1) / (RatFun::t() - RatFun(1));
    CHECK_THROWS_AS(g.eval(rat(1)), PoleAtPoint);
    CHECK(g.eval(rat(3)) == rat(1, 2));

    // evaluation commutes with arithmetic where defined
    const RatFun h = RatFun(rat(2)) * RatFun::t();
    CHECK((g + h).eval(rat(3)) == g.eval(rat(3)) + h.eval(rat(3)));
    CHECK((g * h).eval(rat(3)) == g.eval(rat(3)) * h.eval(rat(3)));
}

TEST_CASE("qw_pow on both fields") {
    CHECK(qw_pow(rat(1, 2), 3) == rat(1, 8));
    CHECK(qw_pow(rat(1, 2), -2) == rat(4));
    CHECK(qw_pow(rat(5), 0) == rat(1));
    const RatFun t = RatFun::t();
    CHECK(qw_pow(t, 3) == t * t * t);
    CHECK(qw_pow(t, -1) == RatFun(1) / t);
    CHECK_THROWS_AS(qw_pow(rat(0), -1), DivisionByZero);
}
